//! Fixed node/weight quadrature rules: composite trapezium, Clenshaw–Curtis
//! and two-point Gauss–Legendre.

use std::f64::consts::PI;

use num_complex::Complex64;
use rustfft::FftPlanner;

use crate::error::{Error, Result};
use crate::model::{chebyshev_points, Interval, UniformGrid};

#[derive(Clone, Debug, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
    interval: Interval,
}

impl QuadratureRule {
    pub fn new(nodes: Vec<f64>, weights: Vec<f64>, interval: Interval) -> Result<Self> {
        if nodes.len() != weights.len() {
            return Err(Error::LengthMismatch {
                expected: nodes.len(),
                got: weights.len(),
            });
        }
        if let Some(&x) = nodes.iter().find(|&&x| !interval.contains(x)) {
            return Err(Error::OutOfInterval {
                x,
                a: interval.a(),
                b: interval.b(),
            });
        }
        Ok(QuadratureRule {
            nodes,
            weights,
            interval,
        })
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// `Σ_j w_j g(z_j)`.
    pub fn apply(&self, integrand: impl Fn(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| w * integrand(z))
            .sum()
    }

    /// Maps a rule on `[-1, 1]` affinely onto `[lo, hi]`, scaling weights by the Jacobian.
    pub fn mapped(&self, lo: f64, hi: f64) -> Result<QuadratureRule> {
        let interval = Interval::new(lo, hi, false)?;
        let (a, b) = (self.interval.a(), self.interval.b());
        let jac = (hi - lo) / (b - a);
        let nodes = self
            .nodes
            .iter()
            .map(|&z| (lo + (z - a) * jac).clamp(lo, hi))
            .collect();
        let weights = self.weights.iter().map(|w| w * jac).collect();
        QuadratureRule::new(nodes, weights, interval)
    }
}

/// Composite trapezium rule on `n` elements.
///
/// Compact intervals: `n + 1` nodes with weights `h/2, h, …, h, h/2`.
/// Periodic intervals: `n` nodes, all weights `h`.
pub fn trapezium_rule(interval: Interval, n: usize) -> Result<QuadratureRule> {
    let grid = UniformGrid::new(interval, n)?;
    let h = grid.h();
    let mut weights = vec![h; grid.nodes().len()];
    if !interval.is_periodic() {
        weights[0] = 0.5 * h;
        weights[n] = 0.5 * h;
    }
    QuadratureRule::new(grid.nodes().to_vec(), weights, interval)
}

/// Clenshaw–Curtis rule on `[-1, 1]` with nodes `cos(iπ/n)`.
///
/// The weights are the type-I cosine transform of the Chebyshev moments
/// `∫T_j = 2/(1 - j²)` (even `j`), evaluated with one FFT of length `2n`.
pub fn clenshaw_curtis(n: usize) -> Result<QuadratureRule> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Clenshaw–Curtis needs n >= 2, got {n}"
        )));
    }
    let len = 2 * n;
    let mut buf: Vec<Complex64> = (0..len)
        .map(|l| {
            let j = if l <= n { l } else { len - l };
            Complex64::new(chebyshev_moment(j), 0.0)
        })
        .collect();
    FftPlanner::new().plan_fft_forward(len).process(&mut buf);
    let weights = (0..=n)
        .map(|k| {
            let edge = if k == 0 || k == n { 0.5 } else { 1.0 };
            edge * buf[k].re / n as f64
        })
        .collect();
    QuadratureRule::new(chebyshev_points(n), weights, Interval::symmetric_unit())
}

/// Clenshaw–Curtis weights by the explicit O(n²) cosine sum.
pub fn clenshaw_curtis_direct(n: usize) -> Result<QuadratureRule> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "Clenshaw–Curtis needs n >= 2, got {n}"
        )));
    }
    let nf = n as f64;
    let mut weights = vec![0.0; n + 1];
    let edge = if n.is_multiple_of(2) {
        1.0 / (nf * nf - 1.0)
    } else {
        1.0 / (nf * nf)
    };
    weights[0] = edge;
    weights[n] = edge;
    for (i, w) in weights.iter_mut().enumerate().take(n).skip(1) {
        let theta = i as f64 * PI / nf;
        let mut v = 1.0;
        for k in 1..=(n - 1) / 2 {
            let kf = k as f64;
            v -= 2.0 * (2.0 * kf * theta).cos() / (4.0 * kf * kf - 1.0);
        }
        if n.is_multiple_of(2) {
            v -= (nf * theta).cos() / (nf * nf - 1.0);
        }
        *w = 2.0 * v / nf;
    }
    QuadratureRule::new(chebyshev_points(n), weights, Interval::symmetric_unit())
}

fn chebyshev_moment(j: usize) -> f64 {
    if j % 2 == 1 {
        0.0
    } else {
        let jf = j as f64;
        2.0 / (1.0 - jf * jf)
    }
}

/// Two-point Gauss–Legendre rule on the reference element `[-1, 1]`.
pub fn gauss_legendre_2() -> QuadratureRule {
    let z = 1.0 / 3f64.sqrt();
    QuadratureRule {
        nodes: vec![-z, z],
        weights: vec![1.0, 1.0],
        interval: Interval::symmetric_unit(),
    }
}

/// Two-point Gauss on every element of `grid`, nodes ordered left to right.
pub fn composite_gauss_2(grid: &UniformGrid) -> Result<QuadratureRule> {
    let reference = gauss_legendre_2();
    let x = grid.nodes();
    let mut nodes = Vec::with_capacity(2 * grid.n());
    let mut weights = Vec::with_capacity(2 * grid.n());
    for e in 0..grid.n() {
        let (lo, hi) = (x[e], if e + 1 < x.len() { x[e + 1] } else { grid.interval().b() });
        let half = 0.5 * (hi - lo);
        for (&z, &nu) in reference.nodes.iter().zip(&reference.weights) {
            nodes.push(lo + (1.0 + z) * half);
            weights.push(half * nu);
        }
    }
    QuadratureRule::new(nodes, weights, grid.interval())
}
