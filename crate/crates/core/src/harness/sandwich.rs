//! Empirical check of the two-sided bound
//! `‖u − P_n u‖ / (1 + β_n) ≤ ‖u − u_n‖ ≤ e^{β_n} ‖u − P_n u‖`.

use super::{error_cjx, grid_norm, projector_error, Stepper};
use crate::error::Result;
use crate::problems::TestProblem;
use crate::schemes::{build, SchemeSpec};
use crate::timestep::equispaced_checkpoints;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SandwichConfig {
    pub checkpoints: usize,
    pub eval_points: usize,
    pub stepper: Stepper,
    /// Additive slack on both bounds, absorbing temporal error.
    pub slack: f64,
}

impl Default for SandwichConfig {
    fn default() -> Self {
        SandwichConfig {
            checkpoints: 51,
            eval_points: 2048,
            stepper: Stepper::rk54(1e-10, 1e-12),
            slack: 0.1,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SandwichVerdict {
    Pass,
    Fail,
    /// Projector error within ten times the temporal floor.
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SandwichOutcome {
    pub label: String,
    pub n: usize,
    pub scheme_error: f64,
    pub projector_error: f64,
    pub temporal_floor: f64,
    pub beta_n: f64,
    pub ratio: f64,
    pub lower: f64,
    pub upper: f64,
    pub verdict: SandwichVerdict,
}

impl SandwichOutcome {
    pub fn pass(&self) -> bool {
        self.verdict == SandwichVerdict::Pass
    }
}

/// Runs the bound check for `spec` at size `n` on `problem`'s window.
///
/// The bound concerns the projection scheme with exact integrals, so the
/// integral term is evaluated with the scheme's reference quadrature
/// (see [`SchemeSpec::reference`]); the projector itself is unchanged.
pub fn sandwich_check(
    problem: &TestProblem,
    spec: SchemeSpec,
    n: usize,
    cfg: &SandwichConfig,
) -> Result<SandwichOutcome> {
    let sys = build(problem, n, spec.reference())?;
    let (t0, horizon) = (problem.t0(), problem.horizon());
    let times = equispaced_checkpoints(t0, horizon, cfg.checkpoints);
    let traj = cfg.stepper.integrate(&sys, t0, horizon, &times)?;
    let tight = cfg.stepper.tightened(100.0).integrate(&sys, t0, horizon, &times)?;

    let xs = problem.interval().sample_points(cfg.eval_points);
    let mut temporal_floor = 0.0f64;
    for (a, b) in traj.states.iter().zip(&tight.states) {
        let diff: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        let values = sys.reconstruct_on(&diff, &xs)?;
        temporal_floor = temporal_floor.max(grid_norm(&sys, &values));
    }

    let scheme_error = error_cjx(&sys, &traj, cfg.eval_points)?;
    let projector_error = projector_error(&sys, &traj.checkpoints, cfg.eval_points)?;
    let beta_n = sys.diagnostics().beta_n;
    let ratio = scheme_error / projector_error;
    let lower = 1.0 / (1.0 + beta_n) - cfg.slack;
    let upper = beta_n.exp() + cfg.slack;
    let verdict = if projector_error.is_nan() || projector_error <= 10.0 * temporal_floor {
        SandwichVerdict::Inconclusive
    } else if ratio >= lower && ratio <= upper {
        SandwichVerdict::Pass
    } else {
        SandwichVerdict::Fail
    };
    Ok(SandwichOutcome {
        label: sys.label(),
        n,
        scheme_error,
        projector_error,
        temporal_floor,
        beta_n,
        ratio,
        lower,
        upper,
        verdict,
    })
}
