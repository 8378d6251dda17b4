//! Fixed-step forward Euler and adaptive Dormand–Prince 5(4) integrators.
//!
//! Both record the state exactly at the requested checkpoints: Euler requires
//! checkpoints on its step lattice, the adaptive scheme clips steps to land on
//! them. Neither interpolates.

use crate::error::{Error, Result};

/// An autonomous-or-not ODE `y' = F(t, y)` with a designated initial state.
pub trait OdeSystem: Sync {
    fn dim(&self) -> usize;
    fn initial_state(&self) -> &[f64];
    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]);
}

/// Wraps a closure as an [`OdeSystem`].
pub struct FnSystem<F> {
    initial: Vec<f64>,
    f: F,
}

impl<F> FnSystem<F>
where
    F: Fn(f64, &[f64], &mut [f64]) + Sync,
{
    pub fn new(initial: Vec<f64>, f: F) -> Self {
        FnSystem { initial, f }
    }
}

impl<F> OdeSystem for FnSystem<F>
where
    F: Fn(f64, &[f64], &mut [f64]) + Sync,
{
    fn dim(&self) -> usize {
        self.initial.len()
    }

    fn initial_state(&self) -> &[f64] {
        &self.initial
    }

    fn rhs(&self, t: f64, y: &[f64], dydt: &mut [f64]) {
        (self.f)(t, y, dydt)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StepStats {
    pub steps_accepted: usize,
    pub steps_rejected: usize,
    pub rhs_evals: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Trajectory {
    pub checkpoints: Vec<f64>,
    pub states: Vec<Vec<f64>>,
    pub stats: StepStats,
}

impl Trajectory {
    pub fn final_state(&self) -> &[f64] {
        self.states.last().map(Vec::as_slice).unwrap_or(&[])
    }
}

/// `count` equispaced checkpoints covering `[t0, t0 + horizon]`.
pub fn equispaced_checkpoints(t0: f64, horizon: f64, count: usize) -> Vec<f64> {
    match count {
        0 => Vec::new(),
        1 => vec![t0 + horizon],
        _ => (0..count)
            .map(|k| t0 + horizon * k as f64 / (count - 1) as f64)
            .collect(),
    }
}

/// Validates checkpoints and prepends `t0` when missing.
fn normalize_checkpoints(t0: f64, horizon: f64, checkpoints: &[f64]) -> Result<Vec<f64>> {
    let end = t0 + horizon;
    let slack = 1e-12 * (t0.abs() + horizon.abs()).max(1.0);
    let mut out = Vec::with_capacity(checkpoints.len() + 1);
    out.push(t0);
    for (i, &c) in checkpoints.iter().enumerate() {
        if !(c >= t0 && c <= end + slack) {
            return Err(Error::InvalidArgument(format!(
                "checkpoint {c} outside the window [{t0}, {end}]"
            )));
        }
        if i == 0 && c == t0 {
            continue;
        }
        if out.last().is_some_and(|&prev| c <= prev) {
            return Err(Error::InvalidArgument(
                "checkpoints must be strictly increasing".into(),
            ));
        }
        out.push(c);
    }
    Ok(out)
}

fn check_dim(sys: &impl OdeSystem) -> Result<()> {
    if sys.initial_state().len() != sys.dim() {
        return Err(Error::LengthMismatch {
            expected: sys.dim(),
            got: sys.initial_state().len(),
        });
    }
    Ok(())
}

/// `U_{k+1} = U_k + h F(t_k, U_k)` with `t_k = t0 + k h`.
pub fn euler_integrate(
    sys: &impl OdeSystem,
    t0: f64,
    horizon: f64,
    step: f64,
    checkpoints: &[f64],
) -> Result<Trajectory> {
    check_dim(sys)?;
    if !(step > 0.0 && step.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "Euler step must be positive, got {step}"
        )));
    }
    let checkpoints = normalize_checkpoints(t0, horizon, checkpoints)?;
    let mut targets = Vec::with_capacity(checkpoints.len());
    for &c in &checkpoints {
        let k = (c - t0) / step;
        let rounded = k.round();
        if (k - rounded).abs() > 1e-9 * rounded.max(1.0) {
            return Err(Error::OffLattice {
                checkpoint: c,
                t0,
                step,
            });
        }
        targets.push(rounded as usize);
    }

    let dim = sys.dim();
    let mut y = sys.initial_state().to_vec();
    let mut dydt = vec![0.0; dim];
    let mut states = Vec::with_capacity(targets.len());
    let mut stats = StepStats::default();
    let mut k = 0usize;
    for &target in &targets {
        while k < target {
            let t = t0 + k as f64 * step;
            sys.rhs(t, &y, &mut dydt);
            stats.rhs_evals += 1;
            if dydt.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { t });
            }
            y.iter_mut().zip(&dydt).for_each(|(yi, fi)| *yi += step * fi);
            k += 1;
            stats.steps_accepted += 1;
        }
        states.push(y.clone());
    }
    Ok(Trajectory {
        checkpoints,
        states,
        stats,
    })
}

/// Dormand–Prince 5(4) coefficients.
mod tableau {
    pub const C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
    pub const A: [[f64; 6]; 7] = [
        [0.0; 6],
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [
            19372.0 / 6561.0,
            -25360.0 / 2187.0,
            64448.0 / 6561.0,
            -212.0 / 729.0,
            0.0,
            0.0,
        ],
        [
            9017.0 / 3168.0,
            -355.0 / 33.0,
            46732.0 / 5247.0,
            49.0 / 176.0,
            -5103.0 / 18656.0,
            0.0,
        ],
        [
            35.0 / 384.0,
            0.0,
            500.0 / 1113.0,
            125.0 / 192.0,
            -2187.0 / 6784.0,
            11.0 / 84.0,
        ],
    ];
    /// Fifth-order weights (the last row of `A`, zero on the seventh stage).
    pub const B: [f64; 7] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
        0.0,
    ];
    /// Embedded fourth-order weights.
    pub const B_HAT: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];
}

/// Result of one Dormand–Prince step.
#[derive(Clone, Debug, PartialEq)]
pub struct StepResult {
    /// Fifth-order solution.
    pub y: Vec<f64>,
    /// Difference between the fifth- and fourth-order solutions.
    pub error: Vec<f64>,
}

/// One Dormand–Prince 5(4) step of size `h` from `(t, y)`. Costs seven
/// right-hand-side evaluations.
pub fn dopri_step(sys: &impl OdeSystem, t: f64, y: &[f64], h: f64) -> StepResult {
    let dim = y.len();
    let mut k = vec![vec![0.0; dim]; 7];
    let mut stage = vec![0.0; dim];
    sys.rhs(t, y, &mut k[0]);
    for s in 1..7 {
        for i in 0..dim {
            let mut acc = 0.0;
            for (j, kj) in k.iter().enumerate().take(s) {
                acc += tableau::A[s][j] * kj[i];
            }
            stage[i] = y[i] + h * acc;
        }
        let (_, rest) = k.split_at_mut(s);
        sys.rhs(t + tableau::C[s] * h, &stage, &mut rest[0]);
    }
    // stage holds the fifth-order solution: row 7 of A equals B
    let mut error = vec![0.0; dim];
    for (i, e) in error.iter_mut().enumerate() {
        let mut acc = 0.0;
        for (s, ks) in k.iter().enumerate() {
            acc += (tableau::B[s] - tableau::B_HAT[s]) * ks[i];
        }
        *e = h * acc;
    }
    StepResult { y: stage, error }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rk54Options {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for Rk54Options {
    fn default() -> Self {
        Rk54Options {
            rtol: 1e-6,
            atol: 1e-9,
            max_steps: 5_000_000,
        }
    }
}

impl Rk54Options {
    pub fn new(rtol: f64, atol: f64) -> Self {
        Rk54Options {
            rtol,
            atol,
            ..Default::default()
        }
    }
}

/// Adaptive Dormand–Prince 5(4) with per-step error control.
///
/// Error norm `max_i |e_i| / (atol + rtol max(|y_i|, |ŷ_i|))`; a step is
/// accepted when it is at most one and the next step is scaled by
/// `min(5, max(0.2, 0.9 err^{-1/5}))`. The initial step is
/// `min(T/100, 0.1 (atol / max(‖F(t0, y0)‖∞, 1e-12))^{1/5})`.
/// The first-same-as-last stage is not reused, so
/// `rhs_evals = 1 + 7 (steps_accepted + steps_rejected)`.
pub fn rk54_integrate(
    sys: &impl OdeSystem,
    t0: f64,
    horizon: f64,
    opts: Rk54Options,
    checkpoints: &[f64],
) -> Result<Trajectory> {
    check_dim(sys)?;
    if !(opts.rtol > 0.0 && opts.atol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "tolerances must be positive, got rtol = {}, atol = {}",
            opts.rtol, opts.atol
        )));
    }
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "integration horizon must be positive, got {horizon}"
        )));
    }
    let checkpoints = normalize_checkpoints(t0, horizon, checkpoints)?;
    let dim = sys.dim();
    let mut y = sys.initial_state().to_vec();
    let mut stats = StepStats::default();

    let mut f0 = vec![0.0; dim];
    sys.rhs(t0, &y, &mut f0);
    stats.rhs_evals += 1;
    if f0.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite { t: t0 });
    }
    let f0_norm = f0.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let mut h = (horizon / 100.0).min(0.1 * (opts.atol / f0_norm.max(1e-12)).powf(0.2));
    let h_min = 1e-14 * horizon;

    let mut states = Vec::with_capacity(checkpoints.len());
    states.push(y.clone());
    let mut t = t0;
    for &target in &checkpoints[1..] {
        while t < target {
            if stats.steps_accepted + stats.steps_rejected >= opts.max_steps {
                return Err(Error::TooManySteps(opts.max_steps));
            }
            let landing = t + h >= target - 1e-12 * target.abs().max(1.0);
            let h_try = if landing { target - t } else { h };
            let step = dopri_step(sys, t, &y, h_try);
            stats.rhs_evals += 7;
            if step.y.iter().chain(&step.error).any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { t });
            }
            let err = step
                .error
                .iter()
                .zip(&y)
                .zip(&step.y)
                .map(|((e, old), new)| e.abs() / (opts.atol + opts.rtol * old.abs().max(new.abs())))
                .fold(0.0f64, f64::max);
            if err <= 1.0 {
                stats.steps_accepted += 1;
                t = if landing { target } else { t + h_try };
                y = step.y;
                let factor = if err == 0.0 {
                    5.0
                } else {
                    (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                };
                h = if landing {
                    h.max(h_try * factor)
                } else {
                    h_try * factor
                };
            } else {
                stats.steps_rejected += 1;
                h = h_try * (0.9 * err.powf(-0.2)).clamp(0.2, 1.0);
                if h < h_min {
                    return Err(Error::StepUnderflow {
                        t,
                        h,
                        rejected: stats.steps_rejected,
                    });
                }
            }
        }
        states.push(y.clone());
    }
    Ok(Trajectory {
        checkpoints,
        states,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn decay() -> FnSystem<impl Fn(f64, &[f64], &mut [f64]) + Sync> {
        FnSystem::new(vec![1.0], |_t, y: &[f64], d: &mut [f64]| d[0] = -y[0])
    }

    #[test]
    fn euler_single_step() {
        let tr = euler_integrate(&decay(), 0.0, 0.1, 0.1, &[0.0, 0.1]).unwrap();
        assert!((tr.states[1][0] - 0.9).abs() < 1e-16);
        assert_eq!(tr.stats.steps_accepted, 1);
    }

    #[test]
    fn euler_first_order() {
        let errs: Vec<f64> = [1e-2, 5e-3, 2.5e-3, 1.25e-3]
            .iter()
            .map(|&h| {
                let tr = euler_integrate(&decay(), 0.0, 1.0, h, &[1.0]).unwrap();
                (tr.final_state()[0] - (-1.0f64).exp()).abs()
            })
            .collect();
        for w in errs.windows(2) {
            let order = (w[0] / w[1]).log2();
            assert!((0.95..=1.05).contains(&order), "order {order}");
        }
    }

    #[test]
    fn euler_zero_field_is_stationary() {
        let sys = FnSystem::new(vec![0.3, -2.0], |_t, _y: &[f64], d: &mut [f64]| d.fill(0.0));
        let cps = equispaced_checkpoints(0.0, 1.0, 11);
        let tr = euler_integrate(&sys, 0.0, 1.0, 0.05, &cps).unwrap();
        assert!(tr.states.iter().all(|s| s == &vec![0.3, -2.0]));
    }

    #[test]
    fn euler_rejects_off_lattice_checkpoint() {
        let err = euler_integrate(&decay(), 0.0, 1.0, 0.1, &[0.0, 0.25]).unwrap_err();
        assert!(matches!(err, Error::OffLattice { .. }));
        assert!(err.to_string().contains("0.25"));
    }

    #[test]
    fn rk54_scalar_decay() {
        let tr = rk54_integrate(&decay(), 0.0, 1.0, Rk54Options::new(1e-8, 1e-10), &[1.0]).unwrap();
        assert!((tr.final_state()[0] - (-1.0f64).exp()).abs() <= 1e-7);
        assert_eq!(tr.states[0], vec![1.0]);
        assert_eq!(tr.checkpoints, vec![0.0, 1.0]);
        assert_eq!(
            tr.stats.rhs_evals,
            1 + 7 * (tr.stats.steps_accepted + tr.stats.steps_rejected)
        );
    }

    #[test]
    fn rk54_tolerance_proportionality() {
        for rtol in [1e-4, 1e-6, 1e-8] {
            let tr = rk54_integrate(&decay(), 0.0, 1.0, Rk54Options::new(rtol, rtol * 1e-3), &[1.0])
                .unwrap();
            let exact = (-1.0f64).exp();
            assert!((tr.final_state()[0] - exact).abs() < 50.0 * rtol * exact);
        }
    }

    #[test]
    fn rk54_zero_field_one_step_per_gap() {
        let sys = FnSystem::new(vec![2.0], |_t, _y: &[f64], d: &mut [f64]| d[0] = 0.0);
        // initial step is T/100, so checkpoints every T/100 leave one step per gap
        let cps = equispaced_checkpoints(0.0, 1.0, 101);
        let tr = rk54_integrate(&sys, 0.0, 1.0, Rk54Options::default(), &cps).unwrap();
        assert_eq!(tr.stats.steps_accepted, 100);
        assert_eq!(tr.stats.steps_rejected, 0);
        assert!(tr.states.iter().all(|s| s[0] == 2.0));
        assert_eq!(tr.checkpoints, cps);
    }

    #[test]
    fn fifth_order_weights_integrate_quartic_exactly() {
        let sys = FnSystem::new(vec![0.0], |t, _y: &[f64], d: &mut [f64]| d[0] = 5.0 * t.powi(4));
        let step = dopri_step(&sys, 0.0, &[0.0], 0.3);
        let exact = 0.3f64.powi(5);
        assert!((step.y[0] - exact).abs() <= step.error[0].abs().max(1e-17));
        assert!((step.y[0] - exact).abs() < 1e-17);
    }

    #[test]
    fn rk54_reports_non_finite_rhs() {
        let sys = FnSystem::new(vec![1.0], |t, _y: &[f64], d: &mut [f64]| {
            d[0] = if t > 0.5 { f64::NAN } else { 1.0 }
        });
        let err = rk54_integrate(&sys, 0.0, 1.0, Rk54Options::default(), &[1.0]).unwrap_err();
        assert!(matches!(err, Error::NonFinite { .. }));
    }

    #[test]
    fn rk54_step_underflow() {
        // finite-time blow-up of y' = y² from y(0) = 1 at t = 1
        let sys = FnSystem::new(vec![1.0], |_t, y: &[f64], d: &mut [f64]| d[0] = y[0] * y[0]);
        let err = rk54_integrate(&sys, 0.0, 2.0, Rk54Options::new(1e-8, 1e-10), &[2.0]).unwrap_err();
        assert!(matches!(
            err,
            Error::StepUnderflow { .. } | Error::NonFinite { .. }
        ));
    }

    #[test]
    fn checkpoints_validated() {
        assert!(rk54_integrate(&decay(), 0.0, 1.0, Rk54Options::default(), &[0.5, 0.2]).is_err());
        assert!(rk54_integrate(&decay(), 0.0, 1.0, Rk54Options::default(), &[1.5]).is_err());
        assert!(rk54_integrate(&decay(), 0.0, 1.0, Rk54Options::new(0.0, 1e-9), &[1.0]).is_err());
    }

    #[test]
    fn integrators_are_deterministic() {
        let sys = FnSystem::new(vec![0.2, 0.7], |t, y: &[f64], d: &mut [f64]| {
            d[0] = -y[0] + (3.0 * t).sin() * y[1];
            d[1] = -0.5 * y[1] * y[0];
        });
        let cps = equispaced_checkpoints(0.0, 2.0, 21);
        let a = rk54_integrate(&sys, 0.0, 2.0, Rk54Options::default(), &cps).unwrap();
        let b = rk54_integrate(&sys, 0.0, 2.0, Rk54Options::default(), &cps).unwrap();
        assert_eq!(a, b);
        assert!(a.stats.steps_accepted + a.stats.steps_rejected >= cps.len() - 1);
    }
}
