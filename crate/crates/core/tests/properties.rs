use num_complex::Complex64;
use proptest::prelude::*;
use serde_json::json;

use henkin_core::cantor::{fourier_coeff, DEFAULT_EPS};
use henkin_core::compression::compression_norm;
use henkin_core::counterexample::{moment_d4, PushforwardMeasure};
use henkin_core::disc_kernel::KernelSequence;
use henkin_core::exact::{
    da_inner, da_norm_sq, extension_norm_check, isometry_check, monomial_norm_sq, ExactComplex, ExactRational,
    MultiIndex, Polynomial,
};
use henkin_core::oracle::kernel_expansion_norms;
use henkin_core::report::{CheckResult, Report};

fn rational() -> impl Strategy<Value = ExactRational> {
    (-40i64..=40, 1i64..=9).prop_map(|(p, q)| ExactRational::new(p, q))
}

fn complex() -> impl Strategy<Value = ExactComplex> {
    (rational(), rational()).prop_map(|(re, im)| ExactComplex::new(re, im))
}

fn multi_index(d: usize, max: u32) -> impl Strategy<Value = MultiIndex> {
    prop::collection::vec(0..=max, d).prop_map(MultiIndex::new)
}

fn polynomial(d: usize) -> impl Strategy<Value = Polynomial> {
    prop::collection::vec((multi_index(d, 4), complex()), 0..8)
        .prop_map(move |terms| Polynomial::from_terms(d, terms).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn inner_product_is_hermitian(p in polynomial(3), q in polynomial(3)) {
        let pq = da_inner(&p, &q).unwrap();
        let qp = da_inner(&q, &p).unwrap();
        prop_assert_eq!(pq, qp.conj());
    }

    #[test]
    fn norm_is_positive_definite(p in polynomial(2)) {
        let n = da_norm_sq(&p);
        prop_assert_eq!(n.is_zero(), p.is_zero());
        prop_assert!(n.is_zero() || n.is_positive());
    }

    #[test]
    fn monomial_norm_in_unit_interval(alpha in multi_index(4, 6)) {
        let n = monomial_norm_sq(&alpha);
        prop_assert!(n.is_positive());
        prop_assert!(n <= ExactRational::one());
        let ones = alpha.entries().iter().filter(|&&a| a > 0).count();
        prop_assert_eq!(n == ExactRational::one(), ones <= 1);
    }

    #[test]
    fn monomial_norm_matches_kernel_expansion(alpha in multi_index(3, 3)) {
        let table = kernel_expansion_norms(3, 9);
        prop_assert_eq!(&table[&alpha], &monomial_norm_sq(&alpha));
    }

    #[test]
    fn padding_keeps_norm(alpha in multi_index(2, 8), extra in 0usize..3) {
        prop_assert!(extension_norm_check(&alpha, 2 + extra).unwrap());
    }

    #[test]
    fn isometry_on_random_lists(coeffs in prop::collection::vec(complex(), 1..12), d4 in any::<bool>()) {
        let d = if d4 { 4 } else { 2 };
        let seq = KernelSequence::exact(d, 12).unwrap();
        let rep = isometry_check(&coeffs, &seq).unwrap();
        prop_assert!(rep.equal);
    }

    #[test]
    fn fourier_coefficients_bounded(n in -100_000i64..100_000) {
        let s = fourier_coeff(n, DEFAULT_EPS);
        prop_assert!(s.norm() <= 1.0 + 1e-12);
        prop_assert!((s - fourier_coeff(-n, DEFAULT_EPS).conj()).norm() <= 2.0 * DEFAULT_EPS);
    }

    #[test]
    fn d4_moments_bounded(alpha in multi_index(4, 5)) {
        let m = moment_d4(&alpha).unwrap();
        prop_assert!(m <= ExactRational::one());
        prop_assert!(!(m < ExactRational::zero()));
        let exact = PushforwardMeasure::d4().moment(&alpha).unwrap().to_complex64();
        prop_assert!((exact - Complex64::new(m.to_f64(), 0.0)).norm() == 0.0);
    }

    #[test]
    fn report_round_trip(names in prop::collection::vec("[a-z_]{1,12}", 0..6), seed in any::<u64>(), flags in prop::collection::vec(any::<bool>(), 6)) {
        let results = names
            .iter()
            .zip(&flags)
            .map(|(n, &p)| CheckResult::new(n.clone(), p, json!({"value": 0.125, "n": n})))
            .collect();
        let r = Report::new("demo", Some("D4".into()), json!({"maxdeg": 24}), Some(seed), results);
        let back: Report = serde_json::from_str(&r.to_json()).unwrap();
        prop_assert_eq!(back, r);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn compression_is_rotation_invariant(p in polynomial(2), theta in 0.0f64..1.0) {
        // rational points on the unit circle: ((1−t²) + 2ti)/(1+t²)
        let t = ExactRational::new((theta * 64.0) as i64, 64);
        let den = (ExactRational::one() + &t * &t).recip();
        let lambda = ExactComplex::new(
            (ExactRational::one() - &t * &t) * &den,
            (ExactRational::from_integer(2) * &t) * &den,
        );
        let a = compression_norm(&p, 2);
        let b = compression_norm(&p.dilate(&lambda), 2);
        prop_assert!((a - b).abs() <= 1e-9 * a.max(1.0));
    }

    #[test]
    fn compression_nondecreasing(p in polynomial(2)) {
        let norms: Vec<f64> = [1u32, 2, 4].iter().map(|&n| compression_norm(&p, n)).collect();
        prop_assert!(norms.windows(2).all(|w| w[1] >= w[0] - 1e-9 * w[0].max(1.0)));
    }
}
