//! Manufactured-solution test problems.
//!
//! Every problem shares the firing rate `f` and the profile `q(x)` (`x²` on
//! `[-1, 1]`, `cos²x` on the ring). With `g = D e^{-γt - q(x)}` the exact
//! solution is `u_* = f⁻¹(g)`, the kernel is `w(x, y) = e^{-q(x) + q(y)} ζ(y)`,
//! and `∫ w(x, y) f(u_*(y, t)) dy = ζ₀ g(x, t)`, so the forcing
//! `ξ = ∂_t u_* + u_* - ζ₀ g` makes `u_*` an exact solution.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::model::{FiringRate, Interval, Kernel};
use crate::quadrature::{clenshaw_curtis, trapezium_rule, QuadratureRule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProblemId {
    P1,
    P2,
    P3,
    P4,
    P5,
    P6,
    P7p,
    P8p,
    P9p,
    P10p,
}

impl ProblemId {
    pub const ALL: [ProblemId; 10] = [
        ProblemId::P1,
        ProblemId::P2,
        ProblemId::P3,
        ProblemId::P4,
        ProblemId::P5,
        ProblemId::P6,
        ProblemId::P7p,
        ProblemId::P8p,
        ProblemId::P9p,
        ProblemId::P10p,
    ];

    pub const COMPACT: [ProblemId; 6] = [
        ProblemId::P1,
        ProblemId::P2,
        ProblemId::P3,
        ProblemId::P4,
        ProblemId::P5,
        ProblemId::P6,
    ];

    pub const PERIODIC: [ProblemId; 4] = [
        ProblemId::P7p,
        ProblemId::P8p,
        ProblemId::P9p,
        ProblemId::P10p,
    ];

    pub fn is_periodic(self) -> bool {
        matches!(
            self,
            ProblemId::P7p | ProblemId::P8p | ProblemId::P9p | ProblemId::P10p
        )
    }

    /// `ζ` has a kink (`|y|³`, `|cos³ y|`) and needs a finer reference rule.
    pub fn has_kink(self) -> bool {
        matches!(self, ProblemId::P6 | ProblemId::P9p)
    }

    pub fn zeta(self) -> fn(f64) -> f64 {
        match self {
            ProblemId::P1 => |y| y.exp() * y.cos(),
            ProblemId::P2 => |y| y.powi(20),
            ProblemId::P3 => |y| 1.0 / (1.0 + 16.0 * y * y),
            ProblemId::P4 => |y| (-y * y).exp(),
            ProblemId::P5 => |y| (-y).exp(),
            ProblemId::P6 => |y| y.abs().powi(3),
            ProblemId::P7p => |y| y.cos().powi(2),
            ProblemId::P8p => |y| 1.0 / (1.0 + 16.0 * y.cos().powi(2)),
            ProblemId::P9p => |y| y.cos().powi(3).abs(),
            ProblemId::P10p => |y| y.cos().powi(20),
        }
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ProblemId::P1 => "P1",
            ProblemId::P2 => "P2",
            ProblemId::P3 => "P3",
            ProblemId::P4 => "P4",
            ProblemId::P5 => "P5",
            ProblemId::P6 => "P6",
            ProblemId::P7p => "P7p",
            ProblemId::P8p => "P8p",
            ProblemId::P9p => "P9p",
            ProblemId::P10p => "P10p",
        };
        f.write_str(s)
    }
}

impl FromStr for ProblemId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let token = s.trim();
        ProblemId::ALL
            .into_iter()
            .find(|id| id.to_string().eq_ignore_ascii_case(token))
            .ok_or_else(|| Error::Parse(format!("unknown problem id '{token}'")))
    }
}

/// Spatial profile `q` entering kernel, forcing and exact solution.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Profile {
    /// `q(x) = x²`
    Gaussian,
    /// `q(x) = cos² x`
    Periodic,
}

impl Profile {
    pub fn eval(self, x: f64) -> f64 {
        match self {
            Profile::Gaussian => x * x,
            Profile::Periodic => x.cos().powi(2),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemParams {
    pub amplitude: f64,
    pub decay: f64,
    pub gain: f64,
    pub threshold: f64,
}

impl Default for ProblemParams {
    /// Shared parameters of every tabulated problem.
    fn default() -> Self {
        ProblemParams {
            amplitude: 0.8,
            decay: 0.5,
            gain: 5.0,
            threshold: 0.3,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dynamics {
    /// Forced so that `u_*` is exact.
    Manufactured,
    /// Zero kernel, zero forcing: `u(x, t) = u_*(x, t0) e^{-(t - t0)}`.
    FreeDecay,
}

#[derive(Clone, Debug)]
pub struct TestProblem {
    name: String,
    id: Option<ProblemId>,
    interval: Interval,
    profile: Profile,
    params: ProblemParams,
    firing: FiringRate,
    zeta: fn(f64) -> f64,
    zeta0: f64,
    kernel: Kernel,
    dynamics: Dynamics,
    t0: f64,
    horizon: f64,
}

/// One of the ten tabulated problems on the default window `t ∈ [0, 1]`.
pub fn make_problem(id: ProblemId) -> Result<TestProblem> {
    let interval = if id.is_periodic() {
        Interval::ring()
    } else {
        Interval::symmetric_unit()
    };
    let profile = if id.is_periodic() {
        Profile::Periodic
    } else {
        Profile::Gaussian
    };
    let zeta0 = zeta_integral(id)?;
    TestProblem::build(
        id.to_string(),
        Some(id),
        interval,
        profile,
        id.zeta(),
        zeta0,
        Dynamics::Manufactured,
    )
}

/// Reference value of `∫_Ω ζ`, cross-checked against doubled resolution.
pub fn zeta_integral(id: ProblemId) -> Result<f64> {
    let zeta = id.zeta();
    let (coarse, fine) = if id.is_periodic() {
        (
            trapezium_rule(Interval::ring(), 8192)?.apply(zeta),
            trapezium_rule(Interval::ring(), 16384)?.apply(zeta),
        )
    } else {
        (
            clenshaw_curtis(4096)?.apply(zeta),
            clenshaw_curtis(8192)?.apply(zeta),
        )
    };
    if (coarse - fine).abs() > 1e-11 * fine.abs().max(f64::MIN_POSITIVE) {
        return Err(Error::QuadratureCrossCheck {
            problem: id.to_string(),
            coarse,
            fine,
        });
    }
    Ok(fine)
}

impl TestProblem {
    fn build(
        name: String,
        id: Option<ProblemId>,
        interval: Interval,
        profile: Profile,
        zeta: fn(f64) -> f64,
        zeta0: f64,
        dynamics: Dynamics,
    ) -> Result<Self> {
        let params = ProblemParams::default();
        let firing = FiringRate::new(params.gain, params.threshold)?;
        let kernel = Kernel::separable(
            move |x| (-profile.eval(x)).exp(),
            move |y| profile.eval(y).exp() * zeta(y),
        )
        .with_eval(move |x, y| (-profile.eval(x) + profile.eval(y)).exp() * zeta(y));
        Ok(TestProblem {
            name,
            id,
            interval,
            profile,
            params,
            firing,
            zeta,
            zeta0,
            kernel,
            dynamics,
            t0: 0.0,
            horizon: 1.0,
        })
    }

    /// Zero-kernel problem forced so that `u_*` stays exact (`ξ = ∂_t u_* + u_*`).
    pub fn decay_manufactured(periodic: bool) -> Result<Self> {
        let (interval, profile) = Self::domain(periodic);
        TestProblem::build(
            "decay".into(),
            None,
            interval,
            profile,
            |_| 0.0,
            0.0,
            Dynamics::Manufactured,
        )
    }

    /// Zero kernel and zero forcing: every scheme reduces to `a' = -a`.
    pub fn free_decay(periodic: bool) -> Result<Self> {
        let (interval, profile) = Self::domain(periodic);
        TestProblem::build(
            "free-decay".into(),
            None,
            interval,
            profile,
            |_| 0.0,
            0.0,
            Dynamics::FreeDecay,
        )
    }

    fn domain(periodic: bool) -> (Interval, Profile) {
        if periodic {
            (Interval::ring(), Profile::Periodic)
        } else {
            (Interval::symmetric_unit(), Profile::Gaussian)
        }
    }

    /// Sets the time window `J = [t0, t0 + horizon]`.
    pub fn with_window(mut self, t0: f64, horizon: f64) -> Result<Self> {
        if !(t0.is_finite() && horizon.is_finite() && horizon > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "time window needs finite t0 and T > 0, got t0 = {t0}, T = {horizon}"
            )));
        }
        self.t0 = t0;
        self.horizon = horizon;
        Ok(self)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn id(&self) -> Option<ProblemId> {
        self.id
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn is_periodic(&self) -> bool {
        self.interval.is_periodic()
    }

    pub fn profile(&self) -> Profile {
        self.profile
    }

    pub fn params(&self) -> ProblemParams {
        self.params
    }

    pub fn firing(&self) -> &FiringRate {
        &self.firing
    }

    pub fn kernel(&self) -> &Kernel {
        &self.kernel
    }

    pub fn zeta(&self, y: f64) -> f64 {
        (self.zeta)(y)
    }

    pub fn zeta0(&self) -> f64 {
        self.zeta0
    }

    pub fn dynamics(&self) -> Dynamics {
        self.dynamics
    }

    pub fn t0(&self) -> f64 {
        self.t0
    }

    pub fn horizon(&self) -> f64 {
        self.horizon
    }

    pub fn has_kink(&self) -> bool {
        self.id.is_some_and(ProblemId::has_kink)
    }

    /// `g = D e^{-γt - q(x)}`, the firing rate of the manufactured solution.
    pub fn activity(&self, x: f64, t: f64) -> f64 {
        self.params.amplitude * (-self.params.decay * t - self.profile.eval(x)).exp()
    }

    fn manufactured(&self, x: f64, t: f64) -> f64 {
        let g = self.activity(x, t);
        self.params.threshold + ((1.0 - g) / g).ln() / self.params.gain
    }

    pub fn exact(&self, x: f64, t: f64) -> f64 {
        match self.dynamics {
            Dynamics::Manufactured => self.manufactured(x, t),
            Dynamics::FreeDecay => self.manufactured(x, self.t0) * (-(t - self.t0)).exp(),
        }
    }

    pub fn initial(&self, x: f64) -> f64 {
        self.exact(x, self.t0)
    }

    /// `∂_t u_*`; for the manufactured solution `γ / (k (1 - g))`.
    pub fn exact_time_derivative(&self, x: f64, t: f64) -> f64 {
        match self.dynamics {
            Dynamics::Manufactured => {
                let g = self.activity(x, t);
                self.params.decay / (self.params.gain * (1.0 - g))
            }
            Dynamics::FreeDecay => -self.exact(x, t),
        }
    }

    /// External input `ξ(x, t)`.
    pub fn forcing(&self, x: f64, t: f64) -> f64 {
        match self.dynamics {
            Dynamics::Manufactured => {
                self.exact_time_derivative(x, t) + self.manufactured(x, t)
                    - self.zeta0 * self.activity(x, t)
            }
            Dynamics::FreeDecay => 0.0,
        }
    }

    /// `∂_t u_* + u_* - ∫ w(x, y) f(u_*(y, t)) dy - ξ`, the integral taken with `rule`.
    pub fn continuum_residual(&self, x: f64, t: f64, rule: &QuadratureRule) -> f64 {
        let integral = rule.apply(|y| self.kernel.eval(x, y) * self.firing.eval(self.exact(y, t)));
        self.exact_time_derivative(x, t) + self.exact(x, t) - integral - self.forcing(x, t)
    }

    /// High-resolution rule for residual checks: Clenshaw–Curtis 2048 or
    /// periodic trapezium 4096, doubled for kinked `ζ`.
    pub fn reference_rule(&self) -> Result<QuadratureRule> {
        let scale = if self.has_kink() { 2 } else { 1 };
        if self.is_periodic() {
            trapezium_rule(self.interval, 4096 * scale)
        } else {
            clenshaw_curtis(2048 * scale)?.mapped(self.interval.a(), self.interval.b())
        }
    }
}

pub fn continuum_residual(problem: &TestProblem, x: f64, t: f64, rule: &QuadratureRule) -> f64 {
    problem.continuum_residual(x, t, rule)
}

pub fn exact_time_derivative(problem: &TestProblem, x: f64, t: f64) -> f64 {
    problem.exact_time_derivative(x, t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn p(id: ProblemId) -> TestProblem {
        make_problem(id).unwrap()
    }

    #[test]
    fn ids_parse_case_insensitively() {
        assert_eq!("p7P".parse::<ProblemId>().unwrap(), ProblemId::P7p);
        assert_eq!(" P10p ".parse::<ProblemId>().unwrap(), ProblemId::P10p);
        assert!("P11".parse::<ProblemId>().is_err());
        assert!("".parse::<ProblemId>().is_err());
        for id in ProblemId::ALL {
            assert_eq!(id.to_string().parse::<ProblemId>().unwrap(), id);
        }
    }

    #[test]
    fn tabulated_parameters() {
        let prob = p(ProblemId::P1);
        let params = prob.params();
        assert_eq!(params.amplitude, 0.8);
        assert_eq!(params.decay, 0.5);
        assert_eq!(params.gain, 5.0);
        assert_eq!(params.threshold, 0.3);
        assert_eq!(prob.firing().gain(), 5.0);
    }

    #[test]
    fn exact_at_origin() {
        // f⁻¹(0.8) = θ + (1/k) log(0.2/0.8)
        let expected = 0.3 + 0.25f64.ln() / 5.0;
        assert!((p(ProblemId::P1).exact(0.0, 0.0) - expected).abs() < 1e-16);
    }

    #[test]
    fn firing_of_exact_is_activity() {
        let prob = p(ProblemId::P3);
        for &(x, t) in &[(0.0, 0.0), (0.7, 0.3), (-1.0, 1.0)] {
            let g = prob.activity(x, t);
            assert!((prob.firing().eval(prob.exact(x, t)) - g).abs() < 1e-15);
        }
    }

    #[test]
    fn zeta_integrals() {
        assert!((zeta_integral(ProblemId::P2).unwrap() - 2.0 / 21.0).abs() < 1e-14);
        assert!((zeta_integral(ProblemId::P4).unwrap() - 1.493_648_265_624_854_1).abs() < 1e-14);
        assert!((zeta_integral(ProblemId::P7p).unwrap() - PI).abs() < 1e-13);
        assert!((zeta_integral(ProblemId::P9p).unwrap() - 8.0 / 3.0).abs() < 1e-12);
        assert!((zeta_integral(ProblemId::P6).unwrap() - 0.5).abs() < 1e-13);
    }

    #[test]
    fn time_derivative_matches_finite_difference() {
        let prob = p(ProblemId::P1);
        let eps = 1e-5;
        let fd = (prob.exact(0.3, 0.5 + eps) - prob.exact(0.3, 0.5 - eps)) / (2.0 * eps);
        assert!((prob.exact_time_derivative(0.3, 0.5) - fd).abs() < 1e-7);
    }

    #[test]
    fn time_derivative_limit() {
        let prob = p(ProblemId::P1);
        let limit = 0.5 / 5.0;
        assert!((prob.exact_time_derivative(0.0, 80.0) - limit).abs() < 1e-15);
    }

    #[test]
    fn residual_at_sample_points() {
        let p1 = p(ProblemId::P1);
        let cc = clenshaw_curtis(2048).unwrap();
        assert!(p1.continuum_residual(0.0, 0.0, &cc).abs() <= 1e-9);
        let p7 = p(ProblemId::P7p);
        let tr = trapezium_rule(Interval::ring(), 4096).unwrap();
        assert!(p7.continuum_residual(1.0, 0.25, &tr).abs() <= 1e-10);
        let decay = TestProblem::free_decay(false).unwrap();
        assert_eq!(decay.continuum_residual(0.2, 0.4, &cc), 0.0);
    }

    #[test]
    fn initial_equals_exact_at_t0() {
        let prob = p(ProblemId::P5).with_window(0.25, 1.0).unwrap();
        for k in 0..11 {
            let x = -1.0 + 0.2 * k as f64;
            assert_eq!(prob.initial(x), prob.exact(x, 0.25));
        }
    }

    #[test]
    fn activity_stays_in_unit_interval() {
        for id in ProblemId::ALL {
            let prob = p(id);
            let lower = 0.8 * (-0.5f64 * 4.0 - 1.0).exp();
            for i in 0..=40 {
                let x = prob.interval().a() + prob.interval().length() * i as f64 / 40.0;
                for j in 0..=8 {
                    let g = prob.activity(x, 0.5 * j as f64);
                    assert!(g >= lower * (1.0 - 1e-14) && g <= 0.8);
                }
            }
        }
    }

    #[test]
    fn kernel_spot_values() {
        let p1 = p(ProblemId::P1);
        assert_eq!(p1.kernel().eval(0.0, 0.0), 1.0);
        assert!((p1.kernel().eval(1.0, 0.0) - (-1.0f64).exp()).abs() < 1e-16);
        assert!((p(ProblemId::P7p).kernel().eval(0.0, 0.0) - 1.0).abs() < 1e-16);
    }

    #[test]
    fn window_validation() {
        assert!(p(ProblemId::P1).with_window(0.0, 0.0).is_err());
        assert!(p(ProblemId::P1).with_window(f64::NAN, 1.0).is_err());
    }
}
