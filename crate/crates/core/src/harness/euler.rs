//! Forward-Euler error split into a temporal `O(h_t)` and a spatial
//! `O(h_x²)` part.

use super::{error_cjx, grid_norm, observed_order, SchemeChoice, Stepper};
use crate::error::{Error, Result};
use crate::problems::{make_problem, ProblemId, TestProblem};
use crate::schemes::{build, SchemeKind, SemiDiscreteSystem};
use crate::timestep::{equispaced_checkpoints, Trajectory};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sweep {
    /// Fixed fine `n`, varying `h_t`; error against an rk54 reference at the same `n`.
    Temporal,
    /// Fixed small `h_t`, varying `n`; error against the exact solution.
    Spatial,
    /// Every `(h_t, n)` pair; error against the exact solution.
    Grid,
}

impl Sweep {
    pub fn token(self) -> &'static str {
        match self {
            Sweep::Temporal => "temporal",
            Sweep::Spatial => "spatial",
            Sweep::Grid => "grid",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerRecord {
    pub problem: String,
    pub scheme: String,
    pub sweep: Sweep,
    pub n: usize,
    pub h_x: f64,
    pub h_t: f64,
    pub error: f64,
    pub observed_order: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerSplitConfig {
    pub problem: ProblemId,
    pub scheme: SchemeChoice,
    pub n_fixed: usize,
    pub h_values: Vec<f64>,
    pub spatial_n: Vec<usize>,
    pub spatial_h_t: f64,
    pub t0: f64,
    pub horizon: f64,
    pub checkpoints: usize,
    pub eval_points: usize,
    pub reference: Stepper,
}

impl EulerSplitConfig {
    /// FE collocation at `n = 512`, `h_t ∈ {1/50, …, 1/400}`, spatial sweep
    /// `n ∈ {16, 32, 64}` at `h_t = 1e-4`.
    pub fn new(problem: ProblemId) -> Self {
        EulerSplitConfig {
            problem,
            scheme: SchemeChoice::new(SchemeKind::FeCollocation, None)
                .expect("default variant is valid"),
            n_fixed: 512,
            h_values: vec![0.02, 0.01, 0.005, 0.0025],
            spatial_n: vec![16, 32, 64],
            spatial_h_t: 1e-4,
            t0: 0.0,
            horizon: 1.0,
            checkpoints: 51,
            eval_points: 2048,
            reference: Stepper::rk54(1e-10, 1e-12),
        }
    }
}

/// `e ≈ a h_t + b h_x²`, fitted in relative least squares.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwoTermFit {
    pub a: f64,
    pub b: f64,
    pub max_relative_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EulerStudy {
    pub records: Vec<EulerRecord>,
    /// Error of the rk54 reference at `n_fixed` against the exact solution.
    pub spatial_floor: f64,
    pub temporal_order: Option<f64>,
    pub spatial_order: Option<f64>,
    pub fit: Option<TwoTermFit>,
}

/// Least-squares slope of `log y` against `log x`.
fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    let pts: Vec<(f64, f64)> = xs
        .iter()
        .zip(ys)
        .filter(|(&x, &y)| x > 0.0 && y > 0.0)
        .map(|(&x, &y)| (x.ln(), y.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(sxy / sxx)
}

/// Relative least squares for `e_i ≈ a s_i + b r_i`.
pub fn two_term_fit(s: &[f64], r: &[f64], e: &[f64]) -> Option<TwoTermFit> {
    let (mut m11, mut m12, mut m22, mut v1, mut v2) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for ((&si, &ri), &ei) in s.iter().zip(r).zip(e) {
        let (p, q) = (si / ei, ri / ei);
        m11 += p * p;
        m12 += p * q;
        m22 += q * q;
        v1 += p;
        v2 += q;
    }
    let det = m11 * m22 - m12 * m12;
    if det == 0.0 || !det.is_finite() {
        return None;
    }
    let a = (v1 * m22 - v2 * m12) / det;
    let b = (m11 * v2 - m12 * v1) / det;
    let max_relative_residual = s
        .iter()
        .zip(r)
        .zip(e)
        .map(|((&si, &ri), &ei)| ((a * si + b * ri) / ei - 1.0).abs())
        .fold(0.0, f64::max);
    Some(TwoTermFit {
        a,
        b,
        max_relative_residual,
    })
}

fn trajectory_distance(
    sys: &SemiDiscreteSystem,
    a: &Trajectory,
    b: &Trajectory,
    xs: &[f64],
) -> Result<f64> {
    let mut worst = 0.0f64;
    for (p, q) in a.states.iter().zip(&b.states) {
        let diff: Vec<f64> = p.iter().zip(q).map(|(x, y)| x - y).collect();
        worst = worst.max(grid_norm(sys, &sys.reconstruct_on(&diff, xs)?));
    }
    Ok(worst)
}

fn validate(cfg: &EulerSplitConfig) -> Result<()> {
    if cfg.h_values.len() < 2 || cfg.h_values.iter().any(|h| !(h.is_finite() && *h > 0.0)) {
        return Err(Error::InvalidArgument(
            "need at least two positive Euler step sizes".into(),
        ));
    }
    if cfg.checkpoints < 2 {
        return Err(Error::InvalidArgument("need at least 2 checkpoints".into()));
    }
    Ok(())
}

/// Temporal sweep at `n_fixed`, spatial sweep at `spatial_h_t`, and the
/// two-term fit over the `h_values × spatial_n` grid.
///
/// Fails with [`Error::Precondition`] when the spatial error at `n_fixed`
/// is not below a tenth of the coarsest temporal error.
pub fn euler_split_study(cfg: &EulerSplitConfig) -> Result<EulerStudy> {
    validate(cfg)?;
    let problem = make_problem(cfg.problem)?.with_window(cfg.t0, cfg.horizon)?;
    let times = equispaced_checkpoints(cfg.t0, cfg.horizon, cfg.checkpoints);
    let xs = problem.interval().sample_points(cfg.eval_points);
    let mut records = Vec::new();

    let sys = build(&problem, cfg.n_fixed, cfg.scheme.spec_for(cfg.n_fixed))?;
    let reference = cfg.reference.integrate(&sys, cfg.t0, cfg.horizon, &times)?;
    let spatial_floor = error_cjx(&sys, &reference, cfg.eval_points)?;
    let temporal: Vec<f64> = cfg
        .h_values
        .iter()
        .map(|&h| {
            let traj = Stepper::Euler { step: h }.integrate(&sys, cfg.t0, cfg.horizon, &times)?;
            trajectory_distance(&sys, &traj, &reference, &xs)
        })
        .collect::<Result<_>>()?;
    let coarsest = temporal.iter().cloned().fold(0.0, f64::max);
    if spatial_floor.is_nan() || spatial_floor >= 0.1 * coarsest {
        return Err(Error::Precondition(format!(
            "spatial error {spatial_floor:.3e} at n = {} is not below 0.1 x the coarsest temporal error {coarsest:.3e}",
            cfg.n_fixed
        )));
    }
    for (i, (&h, &e)) in cfg.h_values.iter().zip(&temporal).enumerate() {
        records.push(record(&problem, &sys, Sweep::Temporal, h, e, if i == 0 {
            None
        } else {
            step_order(temporal[i - 1], e, cfg.h_values[i - 1], h)
        }));
    }
    let temporal_order = loglog_slope(&cfg.h_values, &temporal);

    let mut spatial = Vec::new();
    let mut h_xs = Vec::new();
    for (i, &n) in cfg.spatial_n.iter().enumerate() {
        let sys = build(&problem, n, cfg.scheme.spec_for(n))?;
        let traj = Stepper::Euler {
            step: cfg.spatial_h_t,
        }
        .integrate(&sys, cfg.t0, cfg.horizon, &times)?;
        let e = error_cjx(&sys, &traj, cfg.eval_points)?;
        let order = (i > 0).then(|| observed_order(spatial[i - 1], e, cfg.spatial_n[i - 1], n)).flatten();
        records.push(record(&problem, &sys, Sweep::Spatial, cfg.spatial_h_t, e, order));
        spatial.push(e);
        h_xs.push(sys.h_x());
    }
    let spatial_order = loglog_slope(&h_xs, &spatial);

    let (mut s, mut r, mut e) = (Vec::new(), Vec::new(), Vec::new());
    for &n in &cfg.spatial_n {
        let sys = build(&problem, n, cfg.scheme.spec_for(n))?;
        for &h in &cfg.h_values {
            let traj = Stepper::Euler { step: h }.integrate(&sys, cfg.t0, cfg.horizon, &times)?;
            let err = error_cjx(&sys, &traj, cfg.eval_points)?;
            records.push(record(&problem, &sys, Sweep::Grid, h, err, None));
            s.push(h);
            r.push(sys.h_x() * sys.h_x());
            e.push(err);
        }
    }
    let fit = two_term_fit(&s, &r, &e);

    Ok(EulerStudy {
        records,
        spatial_floor,
        temporal_order,
        spatial_order,
        fit,
    })
}

fn step_order(e1: f64, e2: f64, h1: f64, h2: f64) -> Option<f64> {
    (e1 > 0.0 && e2 > 0.0 && h1 > h2).then(|| (e1 / e2).ln() / (h1 / h2).ln())
}

fn record(
    problem: &TestProblem,
    sys: &SemiDiscreteSystem,
    sweep: Sweep,
    h_t: f64,
    error: f64,
    observed_order: Option<f64>,
) -> EulerRecord {
    EulerRecord {
        problem: problem.name().to_string(),
        scheme: sys.label(),
        sweep,
        n: sys.n(),
        h_x: sys.h_x(),
        h_t,
        error,
        observed_order,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_term_fit_recovers_exact_model() {
        let s = [0.02, 0.01, 0.02, 0.01];
        let r = [1e-2, 1e-2, 2.5e-3, 2.5e-3];
        let e: Vec<f64> = s.iter().zip(&r).map(|(a, b)| 0.3 * a + 2.0 * b).collect();
        let fit = two_term_fit(&s, &r, &e).unwrap();
        assert!((fit.a - 0.3).abs() < 1e-12);
        assert!((fit.b - 2.0).abs() < 1e-12);
        assert!(fit.max_relative_residual < 1e-12);
    }

    #[test]
    fn slope() {
        let xs = [1.0, 2.0, 4.0];
        let ys = [3.0, 12.0, 48.0];
        assert!((loglog_slope(&xs, &ys).unwrap() - 2.0).abs() < 1e-12);
    }
}
