use crate::error::{Error, Result};
use crate::model::ChebyshevGrid;

/// Lagrange basis at Chebyshev points, evaluated in barycentric form.
#[derive(Clone, Debug, PartialEq)]
pub struct ChebyshevBasis {
    grid: ChebyshevGrid,
    weights: Vec<f64>,
}

impl ChebyshevBasis {
    pub fn new(grid: ChebyshevGrid) -> Self {
        let n = grid.n();
        let weights = (0..=n)
            .map(|i| {
                let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
                if i == 0 || i == n {
                    0.5 * sign
                } else {
                    sign
                }
            })
            .collect();
        ChebyshevBasis { grid, weights }
    }

    pub fn grid(&self) -> &ChebyshevGrid {
        &self.grid
    }

    pub fn barycentric_weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn dim(&self) -> usize {
        self.grid.n() + 1
    }

    /// Second-form barycentric interpolation of nodal `values` at `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> Result<f64> {
        if values.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: values.len(),
            });
        }
        let mut num = 0.0;
        let mut den = 0.0;
        for ((&xi, &wi), &vi) in self.grid.nodes().iter().zip(&self.weights).zip(values) {
            let d = x - xi;
            if d == 0.0 {
                return Ok(vi);
            }
            let t = wi / d;
            num += t * vi;
            den += t;
        }
        Ok(num / den)
    }

    /// Row of cardinal-function values `ℓ_j(x)`, `j = 0..=n`.
    pub fn cardinal_row(&self, x: f64) -> Vec<f64> {
        let nodes = self.grid.nodes();
        if let Some(k) = nodes.iter().position(|&xi| xi == x) {
            let mut row = vec![0.0; nodes.len()];
            row[k] = 1.0;
            return row;
        }
        let mut row: Vec<f64> = nodes
            .iter()
            .zip(&self.weights)
            .map(|(&xi, &wi)| wi / (x - xi))
            .collect();
        let den: f64 = row.iter().sum();
        row.iter_mut().for_each(|r| *r /= den);
        row
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn basis(n: usize) -> ChebyshevBasis {
        ChebyshevBasis::new(ChebyshevGrid::new(n).unwrap())
    }

    fn probe(k: usize) -> f64 {
        -1.0 + 2.0 * ((k as f64 * 0.754_877_666_246_692_7 + 0.1) % 1.0)
    }

    #[test]
    fn weights_follow_second_kind_pattern() {
        assert_eq!(
            basis(4).barycentric_weights(),
            &[0.5, -1.0, 1.0, -1.0, 0.5]
        );
    }

    #[test]
    fn reproduces_nodal_values() {
        let b = basis(7);
        let vals: Vec<f64> = (0..8).map(|i| (i as f64).sin()).collect();
        for (i, &x) in b.grid().nodes().iter().enumerate() {
            assert_eq!(b.interpolate(&vals, x).unwrap(), vals[i]);
        }
    }

    #[test]
    fn reproduces_cubic() {
        let b = basis(5);
        let p = |x: f64| x.powi(3) - 2.0 * x;
        let vals: Vec<f64> = b.grid().nodes().iter().map(|&x| p(x)).collect();
        for k in 0..100 {
            let x = probe(k);
            assert!((b.interpolate(&vals, x).unwrap() - p(x)).abs() <= 1e-13);
        }
    }

    #[test]
    fn abs_value_error_decreases() {
        let max_err = |n: usize| {
            let b = basis(n);
            let vals: Vec<f64> = b.grid().nodes().iter().map(|x| x.abs()).collect();
            (0..=4001)
                .map(|k| -1.0 + 2.0 * k as f64 / 4001.0)
                .map(|x| (b.interpolate(&vals, x).unwrap() - x.abs()).abs())
                .fold(0.0, f64::max)
        };
        let (e32, e64) = (max_err(32), max_err(64));
        assert!(e64 < e32);
        assert!(e64 < 0.05);
    }

    #[test]
    fn cardinal_row_matches_interpolation() {
        let b = basis(9);
        let vals: Vec<f64> = b.grid().nodes().iter().map(|x| (3.0 * x).cos()).collect();
        for k in 0..20 {
            let x = probe(k);
            let row = b.cardinal_row(x);
            let via_row: f64 = row.iter().zip(&vals).map(|(l, v)| l * v).sum();
            assert!((via_row - b.interpolate(&vals, x).unwrap()).abs() < 1e-13);
        }
        let at_node = b.cardinal_row(b.grid().nodes()[3]);
        assert_eq!(at_node[3], 1.0);
        assert_eq!(at_node.iter().sum::<f64>(), 1.0);
    }
}
