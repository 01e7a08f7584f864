//! Property tests for the algebraic invariants that hold at round-off scale.

use proptest::prelude::*;
use qcurv_core::channels::{c_sign, PauliString};
use qcurv_core::matcore::*;
use qcurv_core::sample::*;

fn small_complex_matrix(d: usize) -> impl Strategy<Value = CMatrix> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), d * d).prop_map(move |entries| {
        CMatrix::from_fn(d, d, |i, j| {
            let (re, im) = entries[i * d + j];
            Complex64::new(re, im)
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn kron_mixed_product_identity(
        a in small_complex_matrix(2),
        b in small_complex_matrix(3),
        c in small_complex_matrix(2),
        d in small_complex_matrix(3),
    ) {
        let lhs = kron(&a, &b) * kron(&c, &d);
        let rhs = kron(&(&a * &c), &(&b * &d));
        prop_assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn partial_trace_is_trace_compatible(m in small_complex_matrix(6)) {
        let t1 = partial_trace(&m, &[2, 3], &[0]).unwrap();
        let t2 = partial_trace(&m, &[2, 3], &[1]).unwrap();
        let full = trace(&m);
        prop_assert!((trace(&t1) - full).norm() < 1e-12);
        prop_assert!((trace(&t2) - full).norm() < 1e-12);
    }

    #[test]
    fn c_sign_matches_dense_commutation(xa in 0u32..4, za in 0u32..4, xb in 0u32..4, zb in 0u32..4) {
        let a = PauliString::from_bits(2, xa, za).unwrap();
        let b = PauliString::from_bits(2, xb, zb).unwrap();
        let (ad, bd) = (a.dense(), b.dense());
        match c_sign(&a, &b).unwrap() {
            0 => prop_assert!(max_abs(&(&ad * &bd - &bd * &ad)) < 1e-14),
            _ => prop_assert!(max_abs(&(&ad * &bd + &bd * &ad)) < 1e-14),
        }
    }

    #[test]
    fn seminorm_homogeneity(scale in 0.01f64..10.0) {
        let mut rng = rng_from_seed(42);
        let x = random_hermitian(&mut rng, 2);
        let spec = qcurv_core::metrics::SemiNormSpec::commutator_max(vec![
            qcurv_core::channels::pauli::pauli_matrix(3),
        ]).unwrap();
        let a = qcurv_core::metrics::seminorm_eval(&spec, &(&x * cr(scale))).unwrap();
        let b = qcurv_core::metrics::seminorm_eval(&spec, &x).unwrap();
        prop_assert!((a - scale * b).abs() <= 1e-9 * b.max(1.0) * scale.max(1.0));
    }
}
