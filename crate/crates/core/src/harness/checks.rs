//! Property suites runnable from the command line.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use rayon::prelude::*;

use super::sandwich::{sandwich_check, SandwichConfig, SandwichVerdict};
use crate::error::{Error, Result};
use crate::model::{ChebyshevGrid, Interval, UniformGrid};
use crate::problems::{make_problem, ProblemId};
use crate::projection::{dft_backward, dft_forward, ChebyshevBasis, FourierBasis, TentBasis};
use crate::quadrature::{
    clenshaw_curtis, clenshaw_curtis_direct, composite_gauss_2, gauss_legendre_2, trapezium_rule,
};
use crate::schemes::{ChebQuadrature, SchemeSpec};
use crate::timestep::{euler_integrate, rk54_integrate, FnSystem, Rk54Options};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Suite {
    Quadrature,
    Projection,
    Timestep,
    Residual,
    Sandwich,
    /// Quadrature, projection and timestep together.
    Unit,
}

impl Suite {
    pub const ALL: [Suite; 6] = [
        Suite::Quadrature,
        Suite::Projection,
        Suite::Timestep,
        Suite::Residual,
        Suite::Sandwich,
        Suite::Unit,
    ];

    pub fn token(self) -> &'static str {
        match self {
            Suite::Quadrature => "quadrature",
            Suite::Projection => "projection",
            Suite::Timestep => "timestep",
            Suite::Residual => "residual",
            Suite::Sandwich => "sandwich",
            Suite::Unit => "unit",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.token())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let token = s.trim();
        Suite::ALL
            .into_iter()
            .find(|k| k.token().eq_ignore_ascii_case(token))
            .ok_or_else(|| Error::Parse(format!("unknown suite '{token}'")))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckOutcome {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteReport {
    pub suite: Suite,
    pub checks: Vec<CheckOutcome>,
}

impl SuiteReport {
    pub fn pass(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckOutcome> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

fn check(name: impl Into<String>, value: f64, tol: f64) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        pass: value <= tol,
        detail: format!("{value:.3e} <= {tol:.0e}"),
    }
}

fn failed(name: impl Into<String>, err: Error) -> CheckOutcome {
    CheckOutcome {
        name: name.into(),
        pass: false,
        detail: err.to_string(),
    }
}

fn guard(name: &str, body: impl FnOnce() -> Result<CheckOutcome>) -> CheckOutcome {
    body().unwrap_or_else(|e| failed(name, e))
}

pub fn run_suite(suite: Suite) -> SuiteReport {
    let checks = match suite {
        Suite::Quadrature => quadrature_checks(),
        Suite::Projection => projection_checks(),
        Suite::Timestep => timestep_checks(),
        Suite::Residual => residual_checks(),
        Suite::Sandwich => sandwich_checks(),
        Suite::Unit => {
            let mut all = quadrature_checks();
            all.extend(projection_checks());
            all.extend(timestep_checks());
            all
        }
    };
    SuiteReport { suite, checks }
}

fn quadrature_checks() -> Vec<CheckOutcome> {
    let unit = Interval::symmetric_unit();
    let mut out = Vec::new();
    out.push(guard("trapezium exact on affine", || {
        let r = trapezium_rule(unit, 7)?;
        Ok(check("trapezium exact on affine", (r.apply(|x| 3.0 * x + 2.0) - 4.0).abs(), 1e-14))
    }));
    out.push(guard("periodic trapezium exact on trig polynomials", || {
        let r = trapezium_rule(Interval::ring(), 16)?;
        let worst = (1..8)
            .map(|j| r.apply(|x| (j as f64 * x).cos() + (j as f64 * x).sin()).abs())
            .fold(0.0, f64::max);
        let constant = (r.apply(|_| 1.0) - 2.0 * PI).abs();
        Ok(check("periodic trapezium exact on trig polynomials", worst.max(constant), 1e-13))
    }));
    for n in [2usize, 8, 16, 33] {
        out.push(guard("clenshaw-curtis polynomial exactness", || {
            let r = clenshaw_curtis(n)?;
            let worst = (0..=n)
                .map(|d| {
                    let exact = if d % 2 == 1 { 0.0 } else { 2.0 / (d as f64 + 1.0) };
                    (r.apply(|x| x.powi(d as i32)) - exact).abs()
                })
                .fold(0.0, f64::max);
            Ok(check(format!("clenshaw-curtis n={n} exact to degree n"), worst, 1e-13))
        }));
    }
    out.push(guard("clenshaw-curtis fft vs direct", || {
        let worst = [4usize, 17, 64, 255]
            .iter()
            .map(|&n| {
                let a = clenshaw_curtis(n)?;
                let b = clenshaw_curtis_direct(n)?;
                Ok(a.weights()
                    .iter()
                    .zip(b.weights())
                    .map(|(x, y)| (x - y).abs())
                    .fold(0.0, f64::max))
            })
            .collect::<Result<Vec<f64>>>()?
            .into_iter()
            .fold(0.0, f64::max);
        Ok(check("clenshaw-curtis fft weights equal direct weights", worst, 1e-14))
    }));
    out.push(guard("clenshaw-curtis weights positive", || {
        let r = clenshaw_curtis(128)?;
        let min = r.weights().iter().cloned().fold(f64::INFINITY, f64::min);
        Ok(CheckOutcome {
            name: "clenshaw-curtis weights positive".into(),
            pass: min > 0.0,
            detail: format!("min weight {min:.3e}"),
        })
    }));
    out.push(guard("gauss-2 exact on cubics", || {
        let r = gauss_legendre_2();
        let g = composite_gauss_2(&UniformGrid::new(unit, 5)?)?;
        let cubic = |x: f64| x * x * x - 2.0 * x * x + 0.5;
        let exact = -4.0 / 3.0 + 1.0;
        let e = (r.apply(cubic) - exact).abs().max((g.apply(cubic) - exact).abs());
        Ok(check("gauss-2 exact on cubics", e, 1e-14))
    }));
    out.push(guard("trapezium second order", || {
        let f = |x: f64| x.exp();
        let exact = 1f64.exp() - (-1f64).exp();
        let e1 = (trapezium_rule(unit, 32)?.apply(f) - exact).abs();
        let e2 = (trapezium_rule(unit, 64)?.apply(f) - exact).abs();
        Ok(check("trapezium second order", ((e1 / e2).log2() - 2.0).abs(), 0.02))
    }));
    out
}

fn projection_checks() -> Vec<CheckOutcome> {
    let unit = Interval::symmetric_unit();
    let mut out = Vec::new();
    out.push(guard("tent partition of unity", || {
        let basis = TentBasis::new(UniformGrid::new(unit, 9)?)?;
        let mut worst = 0.0f64;
        for k in 0..=200 {
            let x = -1.0 + 2.0 * k as f64 / 200.0;
            let mut sum = 0.0;
            for i in 0..basis.dim() {
                sum += basis.eval(i, x)?;
            }
            worst = worst.max((sum - 1.0).abs());
        }
        Ok(check("tent partition of unity", worst, 1e-14))
    }));
    out.push(guard("tent interpolation idempotent", || {
        let basis = TentBasis::new(UniformGrid::new(unit, 12)?)?;
        let values: Vec<f64> = basis.grid().nodes().iter().map(|x| x.sin()).collect();
        let again = basis
            .grid()
            .nodes()
            .iter()
            .map(|&x| basis.interpolate(&values, x))
            .collect::<Result<Vec<_>>>()?;
        let e = values.iter().zip(&again).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok(check("tent interpolation idempotent", e, 1e-15))
    }));
    out.push(guard("chebyshev reproduces polynomials", || {
        let basis = ChebyshevBasis::new(ChebyshevGrid::new(10)?);
        let p = |x: f64| 1.0 - 3.0 * x + x.powi(4) - 0.5 * x.powi(10);
        let values: Vec<f64> = basis.grid().nodes().iter().map(|&x| p(x)).collect();
        let mut worst = 0.0f64;
        for k in 0..=97 {
            let x = -1.0 + 2.0 * k as f64 / 97.0;
            worst = worst.max((basis.interpolate(&values, x)? - p(x)).abs());
        }
        Ok(check("chebyshev reproduces degree-n polynomials", worst, 1e-12))
    }));
    out.push(guard("chebyshev interpolation idempotent", || {
        let basis = ChebyshevBasis::new(ChebyshevGrid::new(16)?);
        let values: Vec<f64> = basis.grid().nodes().iter().map(|x| (3.0 * x).cos()).collect();
        let again = basis
            .grid()
            .nodes()
            .iter()
            .map(|&x| basis.interpolate(&values, x))
            .collect::<Result<Vec<_>>>()?;
        let e = values.iter().zip(&again).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        Ok(check("chebyshev interpolation idempotent", e, 1e-15))
    }));
    let signal = |m: usize| -> Vec<Complex64> {
        (0..m)
            .map(|l| {
                let x = l as f64;
                Complex64::new((0.37 * x).sin() + 0.1 * x, (1.3 * x).cos())
            })
            .collect()
    };
    out.push(guard("dft round trip", || {
        let mut worst = 0.0f64;
        for m in [1usize, 3, 9, 33, 129, 1025] {
            let v = signal(m);
            let back = dft_backward(&dft_forward(&v)?)?;
            worst = worst.max(v.iter().zip(&back).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
        }
        Ok(check("dft round trip", worst, 1e-12))
    }));
    out.push(guard("dft parseval", || {
        let v = signal(65);
        let c = dft_forward(&v)?;
        let lhs: f64 = v.iter().map(|z| z.norm_sqr()).sum::<f64>() / 65.0;
        let rhs: f64 = c.iter().map(|z| z.norm_sqr()).sum();
        Ok(check("dft parseval", (lhs - rhs).abs() / lhs, 1e-13))
    }));
    out.push(guard("fourier projection idempotent", || {
        let basis = FourierBasis::new(6);
        let x = basis.sample_points();
        let v: Vec<Complex64> = x
            .iter()
            .map(|&x| Complex64::new(1.0 + (2.0 * x).cos() - 0.3 * (5.0 * x).sin(), 0.0))
            .collect();
        let c = dft_forward(&v)?;
        let again = dft_forward(&dft_backward(&c)?)?;
        let e = c.iter().zip(&again).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        // the trig polynomial is reproduced mode by mode
        let mode2 = (c[6 + 2].re - 0.5).abs();
        Ok(check("fourier projection idempotent", e.max(mode2), 1e-14))
    }));
    out
}

fn timestep_checks() -> Vec<CheckOutcome> {
    let decay = || FnSystem::new(vec![1.0], |_t, y: &[f64], d: &mut [f64]| d[0] = -y[0]);
    let exact = (-1.0f64).exp();
    let mut out = Vec::new();
    out.push(guard("euler first order", || {
        let err = |h: f64| -> Result<f64> {
            let tr = euler_integrate(&decay(), 0.0, 1.0, h, &[1.0])?;
            Ok((tr.final_state()[0] - exact).abs())
        };
        let order = (err(0.01)? / err(0.005)?).log2();
        Ok(check("euler first order on y' = -y", (order - 1.0).abs(), 0.02))
    }));
    out.push(guard("euler decay factor", || {
        let tr = euler_integrate(&decay(), 0.0, 1.0, 0.1, &[1.0])?;
        Ok(check("euler reproduces (1 - h)^k", (tr.final_state()[0] - 0.9f64.powi(10)).abs(), 1e-15))
    }));
    out.push(guard("rk54 decay accuracy", || {
        let tr = rk54_integrate(&decay(), 0.0, 1.0, Rk54Options::new(1e-10, 1e-12), &[1.0])?;
        Ok(check("rk54 on y' = -y", (tr.final_state()[0] - exact).abs(), 1e-9))
    }));
    out.push(guard("rk54 forced oscillator", || {
        let sys = FnSystem::new(vec![0.0, 1.0], |_t, y: &[f64], d: &mut [f64]| {
            d[0] = y[1];
            d[1] = -y[0];
        });
        let tr = rk54_integrate(&sys, 0.0, 2.0 * PI, Rk54Options::new(1e-9, 1e-12), &[PI, 2.0 * PI])?;
        let e = (tr.states[1][0] - 0.0).abs().max((tr.states[1][1] + 1.0).abs());
        let f = (tr.states[2][0]).abs().max((tr.states[2][1] - 1.0).abs());
        Ok(check("rk54 harmonic oscillator", e.max(f), 1e-7))
    }));
    out.push(guard("rk54 tolerance proportionality", || {
        let err = |rtol: f64| -> Result<f64> {
            let sys = FnSystem::new(vec![1.0], |t: f64, y: &[f64], d: &mut [f64]| d[0] = -2.0 * t * y[0]);
            let tr = rk54_integrate(&sys, 0.0, 3.0, Rk54Options::new(rtol, rtol * 1e-3), &[3.0])?;
            Ok((tr.final_state()[0] - (-9.0f64).exp()).abs())
        };
        let coarse = err(1e-5)?;
        let fine = err(1e-9)?;
        Ok(CheckOutcome {
            name: "rk54 error shrinks with tolerance".into(),
            pass: fine < coarse && fine < 1e-8,
            detail: format!("{coarse:.3e} -> {fine:.3e}"),
        })
    }));
    out
}

/// Every problem on a 21 × 11 grid of `(x, t)` over `Ω × [0, 1]`.
fn residual_checks() -> Vec<CheckOutcome> {
    ProblemId::ALL
        .par_iter()
        .map(|&id| {
            let name = format!("{id} continuum residual");
            guard(&name, || {
                let p = make_problem(id)?;
                let rule = p.reference_rule()?;
                let xs = Interval::new(p.interval().a(), p.interval().b(), false)?.sample_points(21);
                let mut worst = 0.0f64;
                for &x in &xs {
                    for k in 0..=10 {
                        let t = k as f64 / 10.0;
                        worst = worst.max(p.continuum_residual(x, t, &rule).abs());
                    }
                }
                Ok(check(name.clone(), worst, 1e-8))
            })
        })
        .collect()
}

/// P1–P6, FE and Chebyshev collocation, `n ∈ {16, 32, 64}`.
fn sandwich_checks() -> Vec<CheckOutcome> {
    let cases: Vec<(ProblemId, SchemeSpec, usize)> = ProblemId::COMPACT
        .iter()
        .flat_map(|&id| {
            [
                SchemeSpec::FeCollocation,
                SchemeSpec::ChebCollocation(ChebQuadrature::ClenshawCurtis),
            ]
            .into_iter()
            .flat_map(move |spec| [16usize, 32, 64].into_iter().map(move |n| (id, spec, n)))
        })
        .collect();
    let cfg = SandwichConfig::default();
    cases
        .par_iter()
        .map(|&(id, spec, n)| {
            let name = format!("{id} {} n={n} sandwich", spec.kind());
            guard(&name, || {
                let p = make_problem(id)?;
                let o = sandwich_check(&p, spec, n, &cfg)?;
                Ok(CheckOutcome {
                    name: name.clone(),
                    pass: o.verdict != SandwichVerdict::Fail,
                    detail: format!(
                        "{:?}: ratio {:.4} in [{:.4}, {:.4}], projector error {:.3e}, temporal floor {:.3e}",
                        o.verdict, o.ratio, o.lower, o.upper, o.projector_error, o.temporal_floor
                    ),
                })
            })
        })
        .collect()
}
