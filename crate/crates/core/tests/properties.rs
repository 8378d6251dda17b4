use num_complex::Complex64;
use proptest::prelude::*;

use nfield::model::{FiringRate, Interval, UniformGrid};
use nfield::projection::{dft_backward, dft_forward, TentBasis};
use nfield::quadrature::clenshaw_curtis;

proptest! {
    #[test]
    fn firing_inverse_round_trip(r in 1e-6f64..(1.0 - 1e-6)) {
        let f = FiringRate::new(5.0, 0.3).unwrap();
        let u = f.inverse(r).unwrap();
        prop_assert!((f.eval(u) - r).abs() < 1e-12);
    }

    #[test]
    fn firing_bounded_and_decreasing(u in -50.0f64..50.0, du in 1e-3f64..1.0) {
        let f = FiringRate::new(5.0, 0.3).unwrap();
        let (a, b) = (f.eval(u), f.eval(u + du));
        prop_assert!((0.0..=1.0).contains(&a));
        prop_assert!(b <= a);
        prop_assert!(f.derivative(u).abs() <= f.derivative_sup_norm() + 1e-15);
    }

    #[test]
    fn tent_partition_of_unity(n in 2usize..64, s in 0.0f64..=1.0) {
        let basis = TentBasis::new(UniformGrid::new(Interval::symmetric_unit(), n).unwrap()).unwrap();
        let x = -1.0 + 2.0 * s;
        let sum: f64 = (0..basis.dim()).map(|i| basis.eval(i, x).unwrap()).sum();
        prop_assert!((sum - 1.0).abs() < 1e-13);
    }

    #[test]
    fn dft_round_trip(values in prop::collection::vec(-10.0f64..10.0, 1..40)) {
        let mut v: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, -0.5 * x)).collect();
        if v.len().is_multiple_of(2) {
            v.pop();
        }
        let back = dft_backward(&dft_forward(&v).unwrap()).unwrap();
        for (a, b) in v.iter().zip(&back) {
            prop_assert!((a - b).norm() < 1e-11);
        }
    }

    #[test]
    fn clenshaw_curtis_exact_on_random_polynomials(
        coeffs in prop::collection::vec(-3.0f64..3.0, 1..12)
    ) {
        let degree = coeffs.len() - 1;
        let rule = clenshaw_curtis(degree.max(2)).unwrap();
        let p = |x: f64| coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c);
        let exact: f64 = coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| k % 2 == 0)
            .map(|(k, c)| 2.0 * c / (k as f64 + 1.0))
            .sum();
        prop_assert!((rule.apply(p) - exact).abs() < 1e-12);
    }
}
