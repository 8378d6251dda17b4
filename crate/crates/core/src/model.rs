//! Spatial domains, grids, the sigmoidal firing rate and synaptic kernels.

use std::f64::consts::PI;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// A one-dimensional spatial domain.
///
/// Periodic intervals stand for the ring obtained by identifying `a` with `b`
/// and are represented by the half-open `[a, b)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Interval {
    a: f64,
    b: f64,
    periodic: bool,
}

impl Interval {
    pub fn new(a: f64, b: f64, periodic: bool) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(Error::InvalidArgument(format!(
                "interval endpoints must satisfy a < b, got [{a}, {b}]"
            )));
        }
        Ok(Interval { a, b, periodic })
    }

    /// The compact interval `[-1, 1]`.
    pub fn symmetric_unit() -> Self {
        Interval {
            a: -1.0,
            b: 1.0,
            periodic: false,
        }
    }

    /// The ring of circumference `2π`, parametrised by `[0, 2π)`.
    pub fn ring() -> Self {
        Interval {
            a: 0.0,
            b: 2.0 * PI,
            periodic: true,
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn b(&self) -> f64 {
        self.b
    }

    pub fn is_periodic(&self) -> bool {
        self.periodic
    }

    pub fn length(&self) -> f64 {
        self.b - self.a
    }

    pub fn contains(&self, x: f64) -> bool {
        x >= self.a && x <= self.b
    }

    /// `count` equispaced points. Compact intervals include both endpoints,
    /// periodic ones omit `b`.
    pub fn sample_points(&self, count: usize) -> Vec<f64> {
        if count == 0 {
            return Vec::new();
        }
        if self.periodic {
            let h = self.length() / count as f64;
            (0..count).map(|i| h.mul_add(i as f64, self.a)).collect()
        } else if count == 1 {
            vec![self.a]
        } else {
            let h = self.length() / (count - 1) as f64;
            let mut pts: Vec<f64> = (0..count).map(|i| h.mul_add(i as f64, self.a)).collect();
            pts[count - 1] = self.b;
            pts
        }
    }
}

/// Equispaced nodes `a + i h`, `h = (b - a)/n`.
///
/// A compact interval carries `n + 1` nodes, a periodic one `n`.
#[derive(Clone, Debug, PartialEq)]
pub struct UniformGrid {
    interval: Interval,
    n: usize,
    h: f64,
    nodes: Vec<f64>,
}

impl UniformGrid {
    pub fn new(interval: Interval, n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("grid needs n >= 1 elements".into()));
        }
        let h = interval.length() / n as f64;
        let count = if interval.is_periodic() { n } else { n + 1 };
        let mut nodes: Vec<f64> = (0..count)
            .map(|i| h.mul_add(i as f64, interval.a()))
            .collect();
        if !interval.is_periodic() {
            nodes[n] = interval.b();
        }
        Ok(UniformGrid {
            interval,
            n,
            h,
            nodes,
        })
    }

    pub fn interval(&self) -> Interval {
        self.interval
    }

    /// Number of elements.
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// Chebyshev points of the second kind, `x_i = cos(iπ/n)`, ordered from 1 down to -1.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevGrid {
    n: usize,
    nodes: Vec<f64>,
}

impl ChebyshevGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument(
                "Chebyshev grid needs degree n >= 1".into(),
            ));
        }
        Ok(ChebyshevGrid {
            n,
            nodes: chebyshev_points(n),
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }
}

/// `cos(iπ/n)` for `i = 0..=n`, with exact endpoints, an exact zero for even
/// `n` and the antisymmetry `x_{n-i} = -x_i` enforced.
pub(crate) fn chebyshev_points(n: usize) -> Vec<f64> {
    let mut nodes = vec![0.0; n + 1];
    // sin form is symmetric about the centre in floating point
    for (i, node) in nodes.iter_mut().enumerate() {
        let m = n as f64 - 2.0 * i as f64;
        *node = (PI * m / (2.0 * n as f64)).sin();
    }
    nodes[0] = 1.0;
    nodes[n] = -1.0;
    nodes
}

/// Logistic firing rate `f(u) = 1/(1 + exp(k (u - θ)))`, decreasing in `u`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FiringRate {
    k: f64,
    theta: f64,
}

impl FiringRate {
    pub fn new(k: f64, theta: f64) -> Result<Self> {
        if !(k.is_finite() && k > 0.0 && theta.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "firing rate needs gain k > 0 and finite threshold, got k = {k}, θ = {theta}"
            )));
        }
        Ok(FiringRate { k, theta })
    }

    pub fn gain(&self) -> f64 {
        self.k
    }

    pub fn threshold(&self) -> f64 {
        self.theta
    }

    pub fn eval(&self, u: f64) -> f64 {
        let z = self.k * (u - self.theta);
        if z >= 0.0 {
            let e = (-z).exp();
            e / (1.0 + e)
        } else {
            1.0 / (1.0 + z.exp())
        }
    }

    /// `f'(u) = -k e^z / (1 + e^z)^2`, `z = k (u - θ)`.
    pub fn derivative(&self, u: f64) -> f64 {
        let z = self.k * (u - self.theta);
        let e = (-z.abs()).exp();
        -self.k * e / ((1.0 + e) * (1.0 + e))
    }

    /// Inverse of [`FiringRate::eval`] on `(0, 1)`: `θ + (1/k) log((1 - r)/r)`.
    pub fn inverse(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain {
                what: "firing rate value",
                value: r,
                domain: "(0, 1)",
            });
        }
        Ok(self.theta + ((1.0 - r) / r).ln() / self.k)
    }

    /// `sup |f| = 1`.
    pub fn sup_norm(&self) -> f64 {
        1.0
    }

    /// `sup |f'| = k/4`, attained at `u = θ`.
    pub fn derivative_sup_norm(&self) -> f64 {
        0.25 * self.k
    }
}

type Bivariate = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;
type Univariate = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Product factors of a separable kernel, `w(x, y) = left(x) * right(y)`.
#[derive(Clone)]
pub struct Separable {
    pub left: Univariate,
    pub right: Univariate,
}

/// Synaptic weight `w(x, y)`, the connection strength from `y` to `x`.
#[derive(Clone)]
pub struct Kernel {
    eval: Bivariate,
    separable: Option<Separable>,
}

impl Kernel {
    pub fn new(eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        Kernel {
            eval: Arc::new(eval),
            separable: None,
        }
    }

    pub fn separable(
        left: impl Fn(f64) -> f64 + Send + Sync + 'static,
        right: impl Fn(f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        let left: Univariate = Arc::new(left);
        let right: Univariate = Arc::new(right);
        let (l, r) = (left.clone(), right.clone());
        Kernel {
            eval: Arc::new(move |x, y| l(x) * r(y)),
            separable: Some(Separable { left, right }),
        }
    }

    /// Replaces the evaluation closure while keeping the declared factors.
    pub fn with_eval(mut self, eval: impl Fn(f64, f64) -> f64 + Send + Sync + 'static) -> Self {
        self.eval = Arc::new(eval);
        self
    }

    pub fn zero() -> Self {
        Kernel::separable(|_| 0.0, |_| 0.0)
    }

    pub fn eval(&self, x: f64, y: f64) -> f64 {
        (self.eval)(x, y)
    }

    pub fn factors(&self) -> Option<&Separable> {
        self.separable.as_ref()
    }
}

impl fmt::Debug for Kernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Kernel")
            .field("separable", &self.separable.is_some())
            .finish_non_exhaustive()
    }
}
