//! Error measurement, convergence studies and result emission.

mod checks;
mod csv_io;
mod euler;
mod parse;
mod sandwich;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

pub use checks::{run_suite, CheckOutcome, Suite, SuiteReport};
pub use csv_io::{
    emit_csv, emit_euler_csv, read_csv, write_csv, write_euler_csv, CONVERGENCE_HEADER,
    EULER_HEADER,
};
pub use euler::{euler_split_study, EulerRecord, EulerSplitConfig, EulerStudy, Sweep, TwoTermFit};
pub use parse::{parse_f64_list, parse_n_values, parse_problems};
pub use sandwich::{sandwich_check, SandwichConfig, SandwichOutcome, SandwichVerdict};

use crate::error::{Error, Result};
use crate::problems::{make_problem, ProblemId, TestProblem};
use crate::schemes::{
    build, ChebQuadrature, DftPath, GalerkinVariant, SchemeKind, SchemeSpec, SemiDiscreteSystem,
};
use crate::timestep::{
    equispaced_checkpoints, euler_integrate, rk54_integrate, OdeSystem, Rk54Options, Trajectory,
};

/// Quadrature or variant selector accepted on the command line.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Trapezium,
    ClenshawCurtis,
    Lumped,
    Gauss2,
    Reference,
    Direct,
}

impl Variant {
    pub fn token(self) -> &'static str {
        match self {
            Variant::Trapezium => "trapezium",
            Variant::ClenshawCurtis => "cc",
            Variant::Lumped => "lumped",
            Variant::Gauss2 => "gauss2",
            Variant::Reference => "reference",
            Variant::Direct => "direct",
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "trapezium" | "trapezoidal" => Ok(Variant::Trapezium),
            "cc" | "clenshaw-curtis" => Ok(Variant::ClenshawCurtis),
            "lumped" => Ok(Variant::Lumped),
            "gauss2" => Ok(Variant::Gauss2),
            "reference" => Ok(Variant::Reference),
            "direct" => Ok(Variant::Direct),
            other => Err(Error::Parse(format!("unknown quadrature/variant '{other}'"))),
        }
    }
}

/// A scheme family with its quadrature/variant, resolved per `n` into a
/// [`SchemeSpec`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchemeChoice {
    kind: SchemeKind,
    variant: Variant,
}

impl SchemeChoice {
    /// `variant = None` picks the family default: trapezium for FE
    /// collocation and spectral Galerkin, Clenshaw–Curtis for Chebyshev
    /// collocation, gauss2 for FE Galerkin.
    pub fn new(kind: SchemeKind, variant: Option<Variant>) -> Result<Self> {
        use SchemeKind::*;
        use Variant::*;
        let default = match kind {
            FeCollocation | SpectralGalerkin => Trapezium,
            ChebCollocation => ClenshawCurtis,
            FeGalerkin => Gauss2,
        };
        let variant = variant.unwrap_or(default);
        let allowed = match kind {
            FeCollocation => matches!(variant, Trapezium | Reference),
            ChebCollocation => matches!(variant, Trapezium | ClenshawCurtis | Reference),
            FeGalerkin => matches!(variant, Lumped | Gauss2),
            SpectralGalerkin => matches!(variant, Trapezium | Direct),
        };
        if !allowed {
            return Err(Error::InvalidArgument(format!(
                "variant '{variant}' does not apply to scheme {kind}"
            )));
        }
        Ok(SchemeChoice { kind, variant })
    }

    pub fn kind(&self) -> SchemeKind {
        self.kind
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Chebyshev trapezium uses `m = n` quadrature intervals.
    pub fn spec_for(&self, n: usize) -> SchemeSpec {
        match (self.kind, self.variant) {
            (SchemeKind::FeCollocation, Variant::Reference) => {
                SchemeSpec::FeCollocationReference { refine: 8 }
            }
            (SchemeKind::FeCollocation, _) => SchemeSpec::FeCollocation,
            (SchemeKind::ChebCollocation, Variant::Trapezium) => {
                SchemeSpec::ChebCollocation(ChebQuadrature::Trapezium { m: n })
            }
            (SchemeKind::ChebCollocation, Variant::Reference) => {
                SchemeSpec::ChebCollocation(ChebQuadrature::Reference)
            }
            (SchemeKind::ChebCollocation, _) => {
                SchemeSpec::ChebCollocation(ChebQuadrature::ClenshawCurtis)
            }
            (SchemeKind::FeGalerkin, Variant::Lumped) => {
                SchemeSpec::FeGalerkin(GalerkinVariant::Lumped)
            }
            (SchemeKind::FeGalerkin, _) => SchemeSpec::FeGalerkin(GalerkinVariant::Gauss2),
            (SchemeKind::SpectralGalerkin, Variant::Direct) => {
                SchemeSpec::SpectralGalerkin(DftPath::Direct)
            }
            (SchemeKind::SpectralGalerkin, _) => SchemeSpec::SpectralGalerkin(DftPath::Fft),
        }
    }
}

/// Time integrator used by a study.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Stepper {
    Rk54(Rk54Options),
    Euler { step: f64 },
}

impl Default for Stepper {
    fn default() -> Self {
        Stepper::Rk54(Rk54Options::default())
    }
}

impl Stepper {
    pub fn rk54(rtol: f64, atol: f64) -> Self {
        Stepper::Rk54(Rk54Options::new(rtol, atol))
    }

    /// Same integrator with tolerances divided by `factor`; Euler is unchanged.
    pub fn tightened(&self, factor: f64) -> Self {
        match *self {
            Stepper::Rk54(o) => Stepper::Rk54(Rk54Options {
                rtol: o.rtol / factor,
                atol: o.atol / factor,
                ..o
            }),
            other => other,
        }
    }

    pub fn integrate(
        &self,
        sys: &impl OdeSystem,
        t0: f64,
        horizon: f64,
        checkpoints: &[f64],
    ) -> Result<Trajectory> {
        match *self {
            Stepper::Rk54(o) => rk54_integrate(sys, t0, horizon, o, checkpoints),
            Stepper::Euler { step } => euler_integrate(sys, t0, horizon, step, checkpoints),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyConfig {
    pub problems: Vec<ProblemId>,
    pub scheme: SchemeChoice,
    pub n_values: Vec<usize>,
    pub t0: f64,
    pub horizon: f64,
    pub stepper: Stepper,
    pub eval_points: usize,
    pub checkpoints: usize,
}

impl StudyConfig {
    /// Window `[0, 1]`, rk54(1e-6, 1e-9), 2048 evaluation points, 51 checkpoints.
    pub fn new(problems: Vec<ProblemId>, scheme: SchemeChoice, n_values: Vec<usize>) -> Self {
        StudyConfig {
            problems,
            scheme,
            n_values,
            t0: 0.0,
            horizon: 1.0,
            stepper: Stepper::default(),
            eval_points: 2048,
            checkpoints: 51,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_values.iter().any(|&n| n < 2) {
            return Err(Error::InvalidArgument("every n must be >= 2".into()));
        }
        if self.n_values.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidArgument(
                "n values must be strictly increasing".into(),
            ));
        }
        if let Some(&n_max) = self.n_values.last() {
            if self.eval_points < 4 * n_max {
                return Err(Error::InvalidArgument(format!(
                    "eval_points = {} must be at least 4 * max(n) = {}",
                    self.eval_points,
                    4 * n_max
                )));
            }
        }
        if self.checkpoints < 2 {
            return Err(Error::InvalidArgument("need at least 2 checkpoints".into()));
        }
        if !(self.t0.is_finite() && self.horizon.is_finite() && self.horizon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "invalid time window t0 = {}, T = {}",
                self.t0, self.horizon
            )));
        }
        Ok(())
    }

    pub fn checkpoint_times(&self) -> Vec<f64> {
        equispaced_checkpoints(self.t0, self.horizon, self.checkpoints)
    }

    pub fn problem(&self, id: ProblemId) -> Result<TestProblem> {
        make_problem(id)?.with_window(self.t0, self.horizon)
    }
}

/// One row of a convergence table.
#[derive(Clone, Debug, PartialEq)]
pub struct ConvergenceRecord {
    pub problem: String,
    pub scheme: String,
    pub variant: String,
    pub n: usize,
    pub h_x: f64,
    pub error: f64,
    pub observed_order: Option<f64>,
    pub beta_n: f64,
    pub wall_time_s: f64,
}

/// Uses the L² norm for Galerkin schemes and the sup-norm otherwise.
fn uses_l2(sys: &SemiDiscreteSystem) -> bool {
    sys.kind().is_galerkin()
}

/// Norm of `values` on the equispaced evaluation grid of `sys`'s domain.
fn grid_norm(sys: &SemiDiscreteSystem, values: &[f64]) -> f64 {
    if !uses_l2(sys) {
        return values.iter().fold(0.0, |m, v| m.max(v.abs()));
    }
    let interval = sys.problem().interval();
    let count = values.len();
    let sum = if interval.is_periodic() {
        let h = interval.length() / count as f64;
        h * values.iter().map(|v| v * v).sum::<f64>()
    } else {
        let h = interval.length() / (count - 1) as f64;
        let inner: f64 = values.iter().map(|v| v * v).sum();
        h * (inner - 0.5 * (values[0].powi(2) + values[count - 1].powi(2)))
    };
    sum.sqrt()
}

/// `max_k ‖reconstruct(a(t_k)) − u_*(·, t_k)‖` over the trajectory's
/// checkpoints, the spatial norm taken on `eval_points` equispaced points.
pub fn error_cjx(sys: &SemiDiscreteSystem, traj: &Trajectory, eval_points: usize) -> Result<f64> {
    let problem = sys.problem();
    let xs = problem.interval().sample_points(eval_points);
    let mut worst = 0.0f64;
    for (&t, state) in traj.checkpoints.iter().zip(&traj.states) {
        let approx = sys.reconstruct_on(state, &xs)?;
        let diff: Vec<f64> = approx
            .iter()
            .zip(&xs)
            .map(|(u, &x)| u - problem.exact(x, t))
            .collect();
        worst = worst.max(grid_norm(sys, &diff));
    }
    Ok(worst)
}

/// `max_k ‖u_*(·, t_k) − P_n u_*(·, t_k)‖` with the scheme's own projector.
pub fn projector_error(sys: &SemiDiscreteSystem, times: &[f64], eval_points: usize) -> Result<f64> {
    let problem = sys.problem();
    let xs = problem.interval().sample_points(eval_points);
    let mut worst = 0.0f64;
    for &t in times {
        let a = sys.project(|x| problem.exact(x, t));
        let approx = sys.reconstruct_on(&a, &xs)?;
        let diff: Vec<f64> = approx
            .iter()
            .zip(&xs)
            .map(|(u, &x)| u - problem.exact(x, t))
            .collect();
        worst = worst.max(grid_norm(sys, &diff));
    }
    Ok(worst)
}

/// `log(e1/e2) / log(n2/n1)`; `None` unless both errors are positive and `n2 > n1`.
pub fn observed_order(e1: f64, e2: f64, n1: usize, n2: usize) -> Option<f64> {
    if !(e1 > 0.0 && e2 > 0.0) || n2 <= n1 {
        return None;
    }
    Some((e1 / e2).ln() / (n2 as f64 / n1 as f64).ln())
}

/// Least-squares slope of `-log e` against `log n` over the points with
/// `e > threshold`; `None` with fewer than two such points.
pub fn fitted_order(ns: &[usize], errors: &[f64], threshold: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = ns
        .iter()
        .zip(errors)
        .filter(|(_, &e)| e > threshold && e > 0.0)
        .map(|(&n, &e)| ((n as f64).ln(), e.ln()))
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Some(-sxy / sxx)
}

/// Builds, integrates and measures one `(problem, n)` cell.
pub fn run_cell(cfg: &StudyConfig, problem: &TestProblem, n: usize) -> Result<ConvergenceRecord> {
    let start = Instant::now();
    let sys = build(problem, n, cfg.scheme.spec_for(n))?;
    let traj = cfg
        .stepper
        .integrate(&sys, cfg.t0, cfg.horizon, &cfg.checkpoint_times())
        .map_err(|e| e.context(format!("integrating {} n={n} on {}", sys.label(), problem.name())))?;
    let wall_time_s = start.elapsed().as_secs_f64();
    let error = error_cjx(&sys, &traj, cfg.eval_points)?;
    Ok(ConvergenceRecord {
        problem: problem.name().to_string(),
        scheme: sys.kind().token().to_string(),
        variant: sys.spec().variant().to_string(),
        n,
        h_x: sys.h_x(),
        error,
        observed_order: None,
        beta_n: sys.diagnostics().beta_n,
        wall_time_s,
    })
}

/// All `(problem, n)` cells in parallel; records come back problem-major,
/// `n`-minor, with observed orders between consecutive `n`.
pub fn run_study(cfg: &StudyConfig) -> Result<Vec<ConvergenceRecord>> {
    cfg.validate()?;
    let problems = cfg
        .problems
        .iter()
        .map(|&id| cfg.problem(id))
        .collect::<Result<Vec<_>>>()?;
    let cells: Vec<(usize, usize)> = (0..problems.len())
        .flat_map(|p| cfg.n_values.iter().map(move |&n| (p, n)))
        .collect();
    let mut records = cells
        .par_iter()
        .map(|&(p, n)| run_cell(cfg, &problems[p], n))
        .collect::<Result<Vec<_>>>()?;
    for chunk in records.chunks_mut(cfg.n_values.len().max(1)) {
        for i in 1..chunk.len() {
            chunk[i].observed_order =
                observed_order(chunk[i - 1].error, chunk[i].error, chunk[i - 1].n, chunk[i].n);
        }
    }
    Ok(records)
}

/// Temporal floor for one problem: the finest-`n` cell is re-integrated with
/// tolerances divided by 100; the floor is the larger of that tight error and
/// its change from the study tolerance.
pub fn estimate_floor(cfg: &StudyConfig, id: ProblemId, error_at_n_max: f64) -> Result<f64> {
    let Some(&n_max) = cfg.n_values.last() else {
        return Ok(0.0);
    };
    let tight = StudyConfig {
        stepper: cfg.stepper.tightened(100.0),
        ..cfg.clone()
    };
    let problem = cfg.problem(id)?;
    let e_tight = run_cell(&tight, &problem, n_max)?.error;
    Ok(e_tight.max((error_at_n_max - e_tight).abs()))
}

/// Fitted order per problem over the errors above ten times the floor.
#[derive(Clone, Debug, PartialEq)]
pub struct OrderSummary {
    pub problem: String,
    pub floor: f64,
    pub order: Option<f64>,
    pub points_used: usize,
}

pub fn summarize_orders(cfg: &StudyConfig, records: &[ConvergenceRecord]) -> Result<Vec<OrderSummary>> {
    let per = cfg.n_values.len();
    if per == 0 {
        return Ok(Vec::new());
    }
    cfg.problems
        .par_iter()
        .zip(records.par_chunks(per))
        .map(|(&id, rows)| {
            let errors: Vec<f64> = rows.iter().map(|r| r.error).collect();
            let floor = estimate_floor(cfg, id, *errors.last().unwrap_or(&0.0))?;
            let threshold = 10.0 * floor;
            Ok(OrderSummary {
                problem: id.to_string(),
                floor,
                order: fitted_order(&cfg.n_values, &errors, threshold),
                points_used: errors.iter().filter(|&&e| e > threshold).count(),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn observed_order_examples() {
        assert!((observed_order(1e-2, 2.5e-3, 32, 64).unwrap() - 2.0).abs() < 1e-12);
        assert_eq!(observed_order(1e-3, 1e-3, 16, 32), Some(0.0));
        assert!((observed_order(1e-3, 1e-6, 16, 32).unwrap() - 9.965_784_284_662_087).abs() < 1e-12);
        assert_eq!(observed_order(0.0, 1e-3, 16, 32), None);
        assert_eq!(observed_order(1e-3, 1e-4, 32, 16), None);
    }

    #[test]
    fn fitted_order_ignores_points_below_threshold() {
        let ns = [16, 32, 64, 128];
        let errs = [1.0 / 256.0, 1.0 / 1024.0, 1.0 / 4096.0, 1e-4];
        let p = fitted_order(&ns, &errs, 2e-4).unwrap();
        assert!((p - 2.0).abs() < 1e-12);
        assert_eq!(fitted_order(&ns, &errs, 1.0), None);
    }

    #[test]
    fn scheme_choice_defaults_and_rejections() {
        let c = SchemeChoice::new(SchemeKind::ChebCollocation, None).unwrap();
        assert_eq!(c.variant(), Variant::ClenshawCurtis);
        assert_eq!(
            SchemeChoice::new(SchemeKind::ChebCollocation, Some(Variant::Trapezium))
                .unwrap()
                .spec_for(24),
            SchemeSpec::ChebCollocation(ChebQuadrature::Trapezium { m: 24 })
        );
        assert!(SchemeChoice::new(SchemeKind::FeGalerkin, Some(Variant::ClenshawCurtis)).is_err());
        assert!(SchemeChoice::new(SchemeKind::SpectralGalerkin, Some(Variant::Lumped)).is_err());
    }

    #[test]
    fn config_validation() {
        let c = SchemeChoice::new(SchemeKind::FeCollocation, None).unwrap();
        let mut cfg = StudyConfig::new(vec![ProblemId::P1], c, vec![16, 32]);
        assert!(cfg.validate().is_ok());
        cfg.n_values = vec![32, 16];
        assert!(cfg.validate().is_err());
        cfg.n_values = vec![1024];
        assert!(cfg.validate().is_err());
        cfg.n_values = vec![1, 4];
        assert!(cfg.validate().is_err());
    }
}
