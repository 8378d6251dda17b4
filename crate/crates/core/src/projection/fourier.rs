use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};

use crate::error::{Error, Result};

/// Complex exponentials `e^{ijx}`, `j = -n..=n`, on `[0, 2π)`.
///
/// Coefficient arrays are stored centred: index `j + n` holds mode `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FourierBasis {
    n: usize,
}

impl FourierBasis {
    pub fn new(n: usize) -> Self {
        FourierBasis { n }
    }

    pub fn max_mode(&self) -> usize {
        self.n
    }

    /// `s(n) = 2n + 1`.
    pub fn dim(&self) -> usize {
        2 * self.n + 1
    }

    pub fn modes(&self) -> impl Iterator<Item = i64> {
        let n = self.n as i64;
        -n..=n
    }

    /// Sample points `x_l = 2πl/m`.
    pub fn sample_points(&self) -> Vec<f64> {
        let m = self.dim();
        (0..m).map(|l| 2.0 * PI * l as f64 / m as f64).collect()
    }
}

/// Planned forward/backward transforms for a fixed odd length `m = 2n + 1`.
///
/// The forward transform carries the `1/m` factor so coefficients
/// approximate `(1/2π) ∫ v e^{-ijx} dx`.
#[derive(Clone)]
pub struct Dft {
    m: usize,
    forward: Arc<dyn Fft<f64>>,
    backward: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for Dft {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Dft").field("m", &self.m).finish()
    }
}

impl Dft {
    pub fn new(m: usize) -> Result<Self> {
        check_odd(m)?;
        let mut planner = FftPlanner::new();
        Ok(Dft {
            m,
            forward: planner.plan_fft_forward(m),
            backward: planner.plan_fft_inverse(m),
        })
    }

    pub fn len(&self) -> usize {
        self.m
    }

    pub fn is_empty(&self) -> bool {
        self.m == 0
    }

    /// Samples → centred coefficients, in place.
    pub fn forward_in_place(&self, buf: &mut [Complex64]) -> Result<()> {
        self.check_len(buf.len())?;
        self.forward.process(buf);
        let scale = 1.0 / self.m as f64;
        buf.iter_mut().for_each(|c| *c *= scale);
        // FFT order 0, 1, …, n, -n, …, -1  →  centred -n..=n
        buf.rotate_right(self.m / 2);
        Ok(())
    }

    /// Centred coefficients → samples, in place.
    pub fn backward_in_place(&self, buf: &mut [Complex64]) -> Result<()> {
        self.check_len(buf.len())?;
        buf.rotate_left(self.m / 2);
        self.backward.process(buf);
        Ok(())
    }

    pub fn forward(&self, samples: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut buf = samples.to_vec();
        self.forward_in_place(&mut buf)?;
        Ok(buf)
    }

    pub fn backward(&self, coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
        let mut buf = coeffs.to_vec();
        self.backward_in_place(&mut buf)?;
        Ok(buf)
    }

    fn check_len(&self, got: usize) -> Result<()> {
        if got != self.m {
            return Err(Error::LengthMismatch {
                expected: self.m,
                got,
            });
        }
        Ok(())
    }
}

fn check_odd(m: usize) -> Result<()> {
    if m.is_multiple_of(2) {
        return Err(Error::EvenLength(m));
    }
    Ok(())
}

/// `c_j = (1/m) Σ_l v_l e^{-ij x_l}`, `j = -n..=n`, via FFT.
pub fn dft_forward(samples: &[Complex64]) -> Result<Vec<Complex64>> {
    Dft::new(samples.len())?.forward(samples)
}

/// `v_l = Σ_j c_j e^{ij x_l}`, via FFT.
pub fn dft_backward(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    Dft::new(coeffs.len())?.backward(coeffs)
}

/// O(m²) forward transform by explicit summation.
pub fn dft_forward_direct(samples: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = samples.len();
    check_odd(m)?;
    let n = (m / 2) as i64;
    let scale = 1.0 / m as f64;
    Ok((-n..=n)
        .map(|j| {
            samples
                .iter()
                .enumerate()
                .map(|(l, &v)| v * phase(-j, l, m))
                .sum::<Complex64>()
                * scale
        })
        .collect())
}

/// O(m²) backward transform by explicit summation.
pub fn dft_backward_direct(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let m = coeffs.len();
    check_odd(m)?;
    let n = (m / 2) as i64;
    Ok((0..m)
        .map(|l| {
            coeffs
                .iter()
                .zip(-n..=n)
                .map(|(&c, j)| c * phase(j, l, m))
                .sum()
        })
        .collect())
}

/// `e^{i j x_l}` with the exponent reduced modulo `m` for accuracy.
fn phase(j: i64, l: usize, m: usize) -> Complex64 {
    let r = (j * l as i64).rem_euclid(m as i64);
    Complex64::from_polar(1.0, 2.0 * PI * r as f64 / m as f64)
}

/// `Re Σ_j c_j e^{ijx}` for centred coefficients.
pub fn fourier_reconstruct(coeffs: &[Complex64], x: f64) -> f64 {
    let n = (coeffs.len() / 2) as i64;
    coeffs
        .iter()
        .zip(-n..=n)
        .map(|(c, j)| {
            let (s, co) = (j as f64 * x).sin_cos();
            c.re * co - c.im * s
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(v: &[f64]) -> Vec<Complex64> {
        v.iter().map(|&x| Complex64::new(x, 0.0)).collect()
    }

    fn pseudo_random(count: usize, seed: u64) -> Vec<Complex64> {
        let mut s = seed;
        let mut next = move || {
            s = s.wrapping_mul(6_364_136_223_846_793_005).wrapping_add(1_442_695_040_888_963_407);
            ((s >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        (0..count).map(|_| Complex64::new(next(), next())).collect()
    }

    #[test]
    fn constant_samples_have_only_mean_mode() {
        let c = dft_forward(&real(&[1.0; 7])).unwrap();
        for (k, ck) in c.iter().enumerate() {
            let expected = if k == 3 { 1.0 } else { 0.0 };
            assert!((ck - Complex64::new(expected, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn cosine_splits_into_two_halves() {
        let basis = FourierBasis::new(2);
        let samples: Vec<f64> = basis.sample_points().iter().map(|x| x.cos()).collect();
        let c = dft_forward(&real(&samples)).unwrap();
        let expected = [0.0, 0.5, 0.0, 0.5, 0.0];
        for (ck, e) in c.iter().zip(expected) {
            assert!((ck - Complex64::new(e, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn fft_matches_direct_sum() {
        let v = pseudo_random(9, 7);
        let fast = dft_forward(&v).unwrap();
        let slow = dft_forward_direct(&v).unwrap();
        for (a, b) in fast.iter().zip(&slow) {
            assert!((a - b).norm() < 1e-13);
        }
        let back = dft_backward(&fast).unwrap();
        let back_slow = dft_backward_direct(&slow).unwrap();
        for ((a, b), c) in back.iter().zip(&back_slow).zip(&v) {
            assert!((a - c).norm() < 1e-13);
            assert!((b - c).norm() < 1e-13);
        }
    }

    #[test]
    fn even_length_rejected() {
        assert!(matches!(dft_forward(&[Complex64::default(); 8]), Err(Error::EvenLength(8))));
        assert!(dft_backward_direct(&[Complex64::default(); 2]).is_err());
    }

    #[test]
    fn reconstruct_recovers_samples_and_bandlimited_signals() {
        let basis = FourierBasis::new(3);
        let xs = basis.sample_points();
        let samples: Vec<f64> = xs.iter().map(|x| (2.0 * x).sin() + 0.25 * x.cos()).collect();
        let c = dft_forward(&real(&samples)).unwrap();
        for (x, v) in xs.iter().zip(&samples) {
            assert!((fourier_reconstruct(&c, *x) - v).abs() < 1e-12);
        }
        for k in 0..50 {
            let x = 0.37 * k as f64 - 3.0;
            let exact = (2.0 * x).sin() + 0.25 * x.cos();
            assert!((fourier_reconstruct(&c, x) - exact).abs() < 1e-12);
        }
    }

    #[test]
    fn reconstruct_matches_direct_sum() {
        let c = pseudo_random(9, 99);
        for k in 0..20 {
            let x = 0.3 * k as f64;
            let direct: Complex64 = c
                .iter()
                .zip(-4i64..=4)
                .map(|(cj, j)| cj * Complex64::from_polar(1.0, j as f64 * x))
                .sum();
            assert!((fourier_reconstruct(&c, x) - direct.re).abs() < 1e-13);
        }
    }
}
