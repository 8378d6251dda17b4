//! Finite-element Galerkin with hat functions: lumped-mass trapezium and
//! consistent-mass two-point Gauss variants.

use super::nodal::{dot, row_sum_norm, NodalCollocation};
use crate::error::Result;
use crate::model::UniformGrid;
use crate::problems::TestProblem;
use crate::quadrature::{composite_gauss_2, gauss_legendre_2};

/// Mass matrix lumped onto the trapezium weights `ρ_i`.
#[derive(Clone, Debug)]
pub(crate) struct LumpedGalerkin {
    pub(crate) nodal: NodalCollocation,
    pub(crate) rho: Vec<f64>,
}

impl LumpedGalerkin {
    /// `ρ_i a_i' = -ρ_i a_i + ρ_i (Σ_j W_ij f(a_j) + ξ(x_i, t))`.
    pub(crate) fn rhs(&self, t: f64, a: &[f64], out: &mut [f64]) {
        self.nodal.field(t, a, out);
        for ((o, &rho), &ai) in out.iter_mut().zip(&self.rho).zip(a) {
            let load = rho * *o;
            *o = load / rho - ai;
        }
    }
}

/// Symmetric tridiagonal matrix stored by diagonals.
#[derive(Clone, Debug, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    /// `off[i]` couples rows `i` and `i + 1`.
    pub off: Vec<f64>,
}

impl Tridiagonal {
    /// Consistent mass matrix `⟨ℓ_i, ℓ_j⟩` of hat functions on a uniform mesh.
    pub fn hat_mass(n: usize, h: f64) -> Self {
        let mut diag = vec![2.0 * h / 3.0; n + 1];
        diag[0] = h / 3.0;
        diag[n] = h / 3.0;
        Tridiagonal {
            diag,
            off: vec![h / 6.0; n],
        }
    }

    pub fn mul(&self, x: &[f64]) -> Vec<f64> {
        let n = self.diag.len();
        (0..n)
            .map(|i| {
                let mut v = self.diag[i] * x[i];
                if i > 0 {
                    v += self.off[i - 1] * x[i - 1];
                }
                if i + 1 < n {
                    v += self.off[i] * x[i + 1];
                }
                v
            })
            .collect()
    }

    /// Thomas algorithm; overwrites `rhs` with the solution.
    pub fn solve_in_place(&self, rhs: &mut [f64]) {
        let n = self.diag.len();
        let mut c = vec![0.0; n];
        let mut denom = self.diag[0];
        if n > 1 {
            c[0] = self.off[0] / denom;
        }
        rhs[0] /= denom;
        for i in 1..n {
            denom = self.diag[i] - self.off[i - 1] * c[i - 1];
            if i + 1 < n {
                c[i] = self.off[i] / denom;
            }
            rhs[i] = (rhs[i] - self.off[i - 1] * rhs[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= c[i] * rhs[i + 1];
        }
    }
}

/// Consistent-mass Galerkin with per-element two-point Gauss quadrature for
/// both the outer inner products and the inner kernel integral.
#[derive(Clone, Debug)]
pub(crate) struct Gauss2Galerkin {
    pub(crate) problem: TestProblem,
    pub(crate) elements: usize,
    pub(crate) mass: Tridiagonal,
    /// Physical Gauss points, two per element, left to right.
    pub(crate) points: Vec<f64>,
    /// Jacobian-scaled Gauss weights `(h/2) ν_q`, per point.
    pub(crate) point_weights: Vec<f64>,
    /// `φ_-(z_q)`, `φ_+(z_q)` for the two reference points.
    pub(crate) phi: [(f64, f64); 2],
    /// `w(X_p, X_r) (h/2) ν_r`, `2n × 2n`, row-major.
    pub(crate) inner: Vec<f64>,
}

impl Gauss2Galerkin {
    pub(crate) fn new(problem: &TestProblem, grid: &UniformGrid) -> Result<Self> {
        let rule = composite_gauss_2(grid)?;
        let reference = gauss_legendre_2();
        let z = reference.nodes();
        let phi = [
            (0.5 * (1.0 - z[0]), 0.5 * (1.0 + z[0])),
            (0.5 * (1.0 - z[1]), 0.5 * (1.0 + z[1])),
        ];
        let kernel = problem.kernel();
        let inner = rule
            .nodes()
            .iter()
            .flat_map(|&x| {
                rule.nodes()
                    .iter()
                    .zip(rule.weights())
                    .map(move |(&y, &w)| kernel.eval(x, y) * w)
            })
            .collect();
        Ok(Gauss2Galerkin {
            problem: problem.clone(),
            elements: grid.n(),
            mass: Tridiagonal::hat_mass(grid.n(), grid.h()),
            points: rule.nodes().to_vec(),
            point_weights: rule.weights().to_vec(),
            phi,
            inner,
        })
    }

    /// `⟨ℓ_i, v⟩` by two-point Gauss per element, `v` given at the Gauss points.
    fn load(&self, v: &[f64]) -> Vec<f64> {
        let mut load = vec![0.0; self.elements + 1];
        for e in 0..self.elements {
            for q in 0..2 {
                let p = 2 * e + q;
                let wv = self.point_weights[p] * v[p];
                load[e] += self.phi[q].0 * wv;
                load[e + 1] += self.phi[q].1 * wv;
            }
        }
        load
    }

    /// L² projection of `u` onto the hat functions.
    pub(crate) fn project(&self, u: impl Fn(f64) -> f64) -> Vec<f64> {
        let v: Vec<f64> = self.points.iter().map(|&x| u(x)).collect();
        let mut a = self.load(&v);
        self.mass.solve_in_place(&mut a);
        a
    }

    pub(crate) fn rhs(&self, t: f64, a: &[f64], out: &mut [f64]) {
        let q = self.points.len();
        let firing = self.problem.firing();
        let fired: Vec<f64> = (0..q)
            .map(|p| {
                let (e, k) = (p / 2, p % 2);
                firing.eval(a[e] * self.phi[k].0 + a[e + 1] * self.phi[k].1)
            })
            .collect();
        let v: Vec<f64> = self
            .points
            .iter()
            .enumerate()
            .map(|(p, &x)| self.problem.forcing(x, t) + dot(&self.inner[p * q..(p + 1) * q], &fired))
            .collect();
        let mut load = self.load(&v);
        self.mass.solve_in_place(&mut load);
        for ((o, l), ai) in out.iter_mut().zip(&load).zip(a) {
            *o = l - ai;
        }
    }

    pub(crate) fn weight_infnorm(&self) -> f64 {
        row_sum_norm(&self.inner, self.points.len())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hat_mass_small_mesh() {
        // exact ∫ℓ_iℓ_j on [-1, 1] with h = 0.5
        let m = Tridiagonal::hat_mass(4, 0.5);
        let h = 0.5;
        assert_eq!(m.diag, vec![h / 3.0, 2.0 * h / 3.0, 2.0 * h / 3.0, 2.0 * h / 3.0, h / 3.0]);
        assert_eq!(m.off, vec![h / 6.0; 4]);
    }

    #[test]
    fn thomas_solves_mass_system() {
        let m = Tridiagonal::hat_mass(6, 1.0 / 3.0);
        let x: Vec<f64> = (0..7).map(|i| (i as f64 * 0.7).sin() + 0.1).collect();
        let mut b = m.mul(&x);
        m.solve_in_place(&mut b);
        for (a, e) in b.iter().zip(&x) {
            assert!((a - e).abs() < 1e-13);
        }
    }
}
