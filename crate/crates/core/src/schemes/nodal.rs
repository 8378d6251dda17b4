//! Collocation at nodes with a separate quadrature rule for the integral term.

use crate::error::Result;
use crate::problems::TestProblem;
use crate::projection::{ChebyshevBasis, TentBasis};
use crate::quadrature::QuadratureRule;

/// How quadrature-node values of the approximant are obtained from the state.
#[derive(Clone, Debug)]
pub(crate) enum Sampler {
    /// Quadrature nodes coincide with the collocation nodes.
    Identity,
    /// Piecewise-linear: `(element, local coordinate)` per quadrature node.
    Linear(Vec<(usize, f64)>),
    /// Dense interpolation matrix, `rows × dim`, row-major.
    Dense { rows: usize, matrix: Vec<f64> },
}

impl Sampler {
    fn sample(&self, a: &[f64], out: &mut Vec<f64>) {
        out.clear();
        match self {
            Sampler::Identity => out.extend_from_slice(a),
            Sampler::Linear(loc) => {
                out.extend(loc.iter().map(|&(e, s)| {
                    if s == 0.0 {
                        a[e]
                    } else {
                        (1.0 - s) * a[e] + s * a[e + 1]
                    }
                }));
            }
            Sampler::Dense { rows, matrix } => {
                let dim = a.len();
                out.extend((0..*rows).map(|r| dot(&matrix[r * dim..(r + 1) * dim], a)));
            }
        }
    }

    pub(crate) fn tent(basis: &TentBasis, points: &[f64]) -> Result<Sampler> {
        let loc = points
            .iter()
            .map(|&z| basis.locate(z))
            .collect::<Result<Vec<_>>>()?;
        Ok(Sampler::Linear(loc))
    }

    pub(crate) fn chebyshev(basis: &ChebyshevBasis, reference_points: &[f64]) -> Sampler {
        let matrix: Vec<f64> = reference_points
            .iter()
            .flat_map(|&z| basis.cardinal_row(z))
            .collect();
        Sampler::Dense {
            rows: reference_points.len(),
            matrix,
        }
    }
}

#[inline]
pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `a_i' = -a_i + Σ_j w(x_i, z_j) ρ_j f(u(z_j)) + ξ(x_i, t)`.
#[derive(Clone, Debug)]
pub(crate) struct NodalCollocation {
    pub(crate) problem: TestProblem,
    pub(crate) nodes: Vec<f64>,
    /// `dim × q`, row-major, `W_ij = w(x_i, z_j) ρ_j`.
    pub(crate) weights: Vec<f64>,
    pub(crate) quad_len: usize,
    pub(crate) sampler: Sampler,
}

impl NodalCollocation {
    pub(crate) fn new(
        problem: &TestProblem,
        nodes: Vec<f64>,
        rule: &QuadratureRule,
        sampler: Sampler,
    ) -> Self {
        let kernel = problem.kernel();
        let weights = nodes
            .iter()
            .flat_map(|&x| {
                rule.nodes()
                    .iter()
                    .zip(rule.weights())
                    .map(move |(&z, &rho)| kernel.eval(x, z) * rho)
            })
            .collect();
        NodalCollocation {
            problem: problem.clone(),
            nodes,
            weights,
            quad_len: rule.len(),
            sampler,
        }
    }

    /// `Σ_j W_ij f(u(z_j)) + ξ(x_i, t)` into `out`.
    pub(crate) fn field(&self, t: f64, a: &[f64], out: &mut [f64]) {
        let mut samples = Vec::with_capacity(self.quad_len);
        self.sampler.sample(a, &mut samples);
        let firing = self.problem.firing();
        samples.iter_mut().for_each(|u| *u = firing.eval(*u));
        for (i, (o, &x)) in out.iter_mut().zip(&self.nodes).enumerate() {
            let row = &self.weights[i * self.quad_len..(i + 1) * self.quad_len];
            *o = dot(row, &samples) + self.problem.forcing(x, t);
        }
    }

    pub(crate) fn rhs(&self, t: f64, a: &[f64], out: &mut [f64]) {
        self.field(t, a, out);
        out.iter_mut().zip(a).for_each(|(o, ai)| *o -= ai);
    }

    pub(crate) fn weight_infnorm(&self) -> f64 {
        row_sum_norm(&self.weights, self.quad_len)
    }
}

pub(crate) fn row_sum_norm(matrix: &[f64], cols: usize) -> f64 {
    if cols == 0 {
        return 0.0;
    }
    matrix
        .chunks(cols)
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}
