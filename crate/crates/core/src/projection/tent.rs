use crate::error::{Error, Result};
use crate::model::UniformGrid;

/// Piecewise-linear hat functions on a compact uniform grid.
#[derive(Clone, Debug, PartialEq)]
pub struct TentBasis {
    grid: UniformGrid,
}

impl TentBasis {
    pub fn new(grid: UniformGrid) -> Result<Self> {
        if grid.interval().is_periodic() {
            return Err(Error::InvalidArgument(
                "tent basis is defined on compact intervals only".into(),
            ));
        }
        Ok(TentBasis { grid })
    }

    pub fn grid(&self) -> &UniformGrid {
        &self.grid
    }

    pub fn dim(&self) -> usize {
        self.grid.n() + 1
    }

    /// `ℓ_i(x)`; the end functions are truncated to a single element.
    pub fn eval(&self, i: usize, x: f64) -> Result<f64> {
        let n = self.grid.n();
        if i > n {
            return Err(Error::IndexOutOfRange { index: i, max: n });
        }
        let xi = self.grid.nodes()[i];
        let h = self.grid.h();
        let val = if i > 0 && x >= self.grid.nodes()[i - 1] && x <= xi {
            (x - self.grid.nodes()[i - 1]) / h
        } else if i < n && x >= xi && x <= self.grid.nodes()[i + 1] {
            (self.grid.nodes()[i + 1] - x) / h
        } else {
            0.0
        };
        Ok(val)
    }

    /// Element index and local coordinate `s ∈ [0, 1]` containing `x`.
    pub fn locate(&self, x: f64) -> Result<(usize, f64)> {
        let interval = self.grid.interval();
        if !interval.contains(x) {
            return Err(Error::OutOfInterval {
                x,
                a: interval.a(),
                b: interval.b(),
            });
        }
        let n = self.grid.n();
        let e = (((x - interval.a()) / self.grid.h()).floor() as usize).min(n - 1);
        let s = (x - self.grid.nodes()[e]) / self.grid.h();
        Ok((e, s.clamp(0.0, 1.0)))
    }

    /// The continuous piecewise-linear interpolant of nodal `values` at `x`.
    pub fn interpolate(&self, values: &[f64], x: f64) -> Result<f64> {
        if values.len() != self.dim() {
            return Err(Error::LengthMismatch {
                expected: self.dim(),
                got: values.len(),
            });
        }
        let (e, s) = self.locate(x)?;
        if s == 0.0 {
            return Ok(values[e]);
        }
        if s == 1.0 {
            return Ok(values[e + 1]);
        }
        Ok((1.0 - s) * values[e] + s * values[e + 1])
    }
}
