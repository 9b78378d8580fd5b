use num_complex::Complex64;
use proptest::prelude::*;
use range_enclosure::pseudo::epsilon0;
use range_enclosure::{
    contains, quartic_coeffs, sample_numerical_range, sigma_min_t, solve_quartic, ComplexPoint, Error, ExtReal,
    MatrixPair, OmegaBox, ProblemParams,
};

#[test]
fn t_at_i_for_swapped_diagonals() {
    let params = ProblemParams::new(1.0, 1.0).unwrap();
    let pair = MatrixPair::new(vec![0.0, 1.0], vec![1.0, 0.0]).unwrap();
    // T(i) = A + 1 + B/3
    let s = sigma_min_t(&pair, Complex64::new(0.0, 1.0), &params).unwrap();
    assert!((s - 4.0 / 3.0).abs() < 1e-15, "{s}");
}

#[test]
fn one_dimensional_samples_are_the_quartic_roots() {
    let params = ProblemParams::new(2.0, 1.5).unwrap();
    let pair = MatrixPair::new(vec![0.7], vec![1.3]).unwrap();
    let pts = sample_numerical_range(&pair, 3, 5, &params).unwrap();
    let roots = solve_quartic(&quartic_coeffs(0.7, 1.3, &params)).unwrap().roots;
    assert_eq!(pts.len(), 12);
    for chunk in pts.chunks(4) {
        assert_eq!(chunk, &roots[..]);
    }
}

#[test]
fn sampling_is_reproducible() {
    let params = ProblemParams::new(6.0, 4.0).unwrap();
    let b = OmegaBox::finite(-3.0, 2.0, 0.0, 5.0).unwrap();
    let pair = MatrixPair::diagonal(&b, 12, 9).unwrap();
    let x = sample_numerical_range(&pair, 3000, 42, &params).unwrap();
    let y = sample_numerical_range(&pair, 3000, 42, &params).unwrap();
    let z = sample_numerical_range(&pair, 3000, 43, &params).unwrap();
    assert_eq!(x, y);
    assert_ne!(x, z);
}

#[test]
fn pole_is_rejected() {
    let params = ProblemParams::new(4.0, 4.0).unwrap();
    let pair = MatrixPair::new(vec![0.0, 1.0], vec![1.0, 2.0]).unwrap();
    let err = sigma_min_t(&pair, Complex64::new(0.0, -2.0), &params).unwrap_err();
    assert!(matches!(err, Error::PoleEvaluation { .. }));
}

#[test]
fn sigma_vanishes_at_sampled_points() {
    let params = ProblemParams::new(1.0, 0.7).unwrap();
    let pair = MatrixPair::new(vec![-1.0, 2.0, 0.5], vec![0.5, 6.0, 1.0]).unwrap();
    // Diagonal entries are eigenvector samples: their roots are eigenvalues of T.
    let roots = solve_quartic(&quartic_coeffs(2.0, 6.0, &params)).unwrap();
    for r in roots.finite() {
        let mut prev = f64::INFINITY;
        for k in 1..8 {
            let h = 10f64.powi(-k);
            let s = sigma_min_t(&pair, r + Complex64::new(h, h), &params).unwrap();
            assert!(s < prev);
            prev = s;
        }
        assert!(prev < 1e-5, "{prev}");
    }
}

fn config() -> impl Strategy<Value = (f64, f64, f64, f64, f64, f64)> {
    (0.0..5.0f64, 0.2..5.0f64, -5.0..3.0f64, 0.0..5.0f64, 0.0..4.0f64, 0.1..5.0f64)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn samples_lie_in_the_enclosure((c, d, alo, aw, blo, bw) in config(), seed in 0u64..1000) {
        let params = ProblemParams::new(c, d).unwrap();
        let b = OmegaBox::finite(alo, alo + aw, blo, blo + bw).unwrap();
        let pair = MatrixPair::diagonal(&b, 6, seed).unwrap();
        for p in sample_numerical_range(&pair, 500, seed, &params).unwrap() {
            prop_assert!(contains(p, &b, &params).inside, "{p:?}");
        }
    }

    #[test]
    fn sigma_dominates_eps0((c, d, alo, aw, blo, bw) in config(), seed in 0u64..1000, re in -4.0..4.0f64, im in -4.0..4.0f64) {
        let params = ProblemParams::new(c, d).unwrap();
        let b = OmegaBox::finite(alo, alo + aw, blo, blo + bw).unwrap();
        let pair = MatrixPair::diagonal(&b, 10, seed).unwrap();
        let w = Complex64::new(re, im);
        if let (Ok(s), Ok(e)) = (sigma_min_t(&pair, w, &params), epsilon0(w, &b, &params)) {
            prop_assert!(s >= e.value - 1e-10 * (1.0 + s), "{s} < {}", e.value);
        }
    }
}

#[test]
fn unbounded_alpha_is_truncated() {
    let params = ProblemParams::new(6.0, 4.0).unwrap();
    let b =
        OmegaBox::new(ExtReal::Finite(1.0), ExtReal::PosInfinity, ExtReal::Finite(0.0), ExtReal::Finite(11.0)).unwrap();
    let pair = MatrixPair::diagonal(&b, 6, 3).unwrap();
    assert_eq!(pair.a[1], 1e6);
    for p in sample_numerical_range(&pair, 2000, 1, &params).unwrap() {
        assert!(matches!(p, ComplexPoint::Finite(_)));
        assert!(contains(p, &b, &params).inside, "{p:?}");
    }
}
