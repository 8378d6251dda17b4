//! Fourier spectral Galerkin on the ring with pseudospectral right-hand side.

use num_complex::Complex64;

use super::nodal::{dot, row_sum_norm};
use crate::error::Result;
use crate::problems::TestProblem;
use crate::projection::{dft_backward_direct, dft_forward_direct, Dft, FourierBasis};

/// Which transform evaluates `F` and `F⁻¹` in the right-hand side.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DftPath {
    #[default]
    Fft,
    Direct,
}

/// `a' = -a + F[ξ + h_x W f(F⁻¹ a)]` over interleaved `(re, im)` storage.
#[derive(Clone, Debug)]
pub(crate) struct SpectralGalerkin {
    pub(crate) problem: TestProblem,
    pub(crate) basis: FourierBasis,
    pub(crate) dft: Dft,
    pub(crate) path: DftPath,
    pub(crate) points: Vec<f64>,
    /// `h_x w(x_l, x_j)`, `m × m`, row-major.
    pub(crate) weights: Vec<f64>,
}

impl SpectralGalerkin {
    pub(crate) fn new(problem: &TestProblem, n: usize, path: DftPath) -> Result<Self> {
        let basis = FourierBasis::new(n);
        let m = basis.dim();
        let dft = Dft::new(m)?;
        let points = basis.sample_points();
        let h = problem.interval().length() / m as f64;
        let kernel = problem.kernel();
        let weights = points
            .iter()
            .flat_map(|&x| points.iter().map(move |&y| h * kernel.eval(x, y)))
            .collect();
        Ok(SpectralGalerkin {
            problem: problem.clone(),
            basis,
            dft,
            path,
            points,
            weights,
        })
    }

    pub(crate) fn dim(&self) -> usize {
        2 * self.basis.dim()
    }

    fn forward(&self, buf: &mut Vec<Complex64>) {
        match self.path {
            DftPath::Fft => self.dft.forward_in_place(buf).expect("length fixed at build"),
            DftPath::Direct => *buf = dft_forward_direct(buf).expect("length fixed at build"),
        }
    }

    fn backward(&self, buf: &mut Vec<Complex64>) {
        match self.path {
            DftPath::Fft => self.dft.backward_in_place(buf).expect("length fixed at build"),
            DftPath::Direct => *buf = dft_backward_direct(buf).expect("length fixed at build"),
        }
    }

    /// Coefficients of the trigonometric interpolant of `u` at the sample points.
    pub(crate) fn project(&self, u: impl Fn(f64) -> f64) -> Vec<f64> {
        let mut buf: Vec<Complex64> = self
            .points
            .iter()
            .map(|&x| Complex64::new(u(x), 0.0))
            .collect();
        self.forward(&mut buf);
        interleave(&buf)
    }

    pub(crate) fn rhs(&self, t: f64, a: &[f64], out: &mut [f64]) {
        let m = self.basis.dim();
        let mut buf = deinterleave(a);
        self.backward(&mut buf);
        let firing = self.problem.firing();
        let fired: Vec<f64> = buf.iter().map(|c| firing.eval(c.re)).collect();
        for (l, (slot, &x)) in buf.iter_mut().zip(&self.points).enumerate() {
            let v = self.problem.forcing(x, t) + dot(&self.weights[l * m..(l + 1) * m], &fired);
            *slot = Complex64::new(v, 0.0);
        }
        self.forward(&mut buf);
        for (j, c) in buf.iter().enumerate() {
            out[2 * j] = c.re - a[2 * j];
            out[2 * j + 1] = c.im - a[2 * j + 1];
        }
    }

    pub(crate) fn weight_infnorm(&self) -> f64 {
        row_sum_norm(&self.weights, self.basis.dim())
    }
}

pub(crate) fn interleave(c: &[Complex64]) -> Vec<f64> {
    c.iter().flat_map(|z| [z.re, z.im]).collect()
}

pub(crate) fn deinterleave(a: &[f64]) -> Vec<Complex64> {
    a.chunks_exact(2)
        .map(|p| Complex64::new(p[0], p[1]))
        .collect()
}
