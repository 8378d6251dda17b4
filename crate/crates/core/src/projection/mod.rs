//! Bases and interpolation operators for the three projector families.

mod chebyshev;
mod fourier;
mod tent;

pub use chebyshev::ChebyshevBasis;
pub use fourier::{
    dft_backward, dft_backward_direct, dft_forward, dft_forward_direct, fourier_reconstruct, Dft,
    FourierBasis,
};
pub use tent::TentBasis;

use crate::error::Result;

/// `ℓ_i(x)` for the tent basis.
pub fn tent_eval(basis: &TentBasis, i: usize, x: f64) -> Result<f64> {
    basis.eval(i, x)
}

pub fn piecewise_linear_interp(values: &[f64], basis: &TentBasis, x: f64) -> Result<f64> {
    basis.interpolate(values, x)
}

pub fn barycentric_interp(values: &[f64], basis: &ChebyshevBasis, x: f64) -> Result<f64> {
    basis.interpolate(values, x)
}
