use super::*;
use crate::sample::*;

fn sigma_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}
fn sigma_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

#[test]
fn op_norm_identity_and_pauli() {
    assert!((op_norm(&identity(4)).unwrap() - 1.0).abs() < 1e-12);
    assert!((op_norm(&sigma_x()).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn op_norm_matches_svd_oracle() {
    let mut rng = rng_from_seed(11);
    for _ in 0..10 {
        let m = ginibre(&mut rng, 8, 8);
        let svd_max = m
            .clone()
            .svd(false, false)
            .singular_values
            .iter()
            .fold(0.0f64, |a, &x| a.max(x));
        let got = op_norm(&m).unwrap();
        assert!(
            (got - svd_max).abs() <= 1e-10 * svd_max,
            "op_norm {got} vs svd {svd_max}"
        );
    }
}

#[test]
fn op_norm_empty_is_error() {
    assert!(op_norm(&zeros(0, 0)).is_err());
}

#[test]
fn herm_eig_pauli_z() {
    let (vals, _) = herm_eig(&sigma_z()).unwrap();
    assert!((vals[0] + 1.0).abs() < 1e-14 && (vals[1] - 1.0).abs() < 1e-14);
    let (vals, _) = herm_eig(&(identity(2) * cr(0.5))).unwrap();
    assert!((vals[0] - 0.5).abs() < 1e-14 && (vals[1] - 0.5).abs() < 1e-14);
}

#[test]
fn herm_eig_trace_identity_and_residuals() {
    let mut rng = rng_from_seed(3);
    let m = random_hermitian(&mut rng, 6);
    let (vals, u) = herm_eig(&m).unwrap();
    let tr = trace(&m).re;
    assert!((tr - vals.iter().sum::<f64>()).abs() < 1e-12 * tr.abs().max(1.0));
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(6, vals.iter().map(|&x| cr(x))));
    let scale = op_norm(&m).unwrap();
    assert!(max_abs(&(&u * diag * u.adjoint() - &m)) <= 1e-10 * scale);
    assert!(max_abs(&(u.adjoint() * &u - identity(6))) <= 1e-10);
    assert!(vals.windows(2).all(|w| w[0] <= w[1]));
}

#[test]
fn herm_eig_rejects_non_hermitian() {
    let mut rng = rng_from_seed(4);
    let m = ginibre(&mut rng, 3, 3);
    assert!(herm_eig(&m).is_err());
}

#[test]
fn mat_exp_zero_and_euler() {
    assert!(max_abs(&(mat_exp(&zeros(3, 3)).unwrap() - identity(3))) < 1e-14);
    let e = mat_exp(&(sigma_x() * Complex64::new(0.0, std::f64::consts::FRAC_PI_2))).unwrap();
    assert!(max_abs(&(e - sigma_x() * I)) < 1e-13);
}

#[test]
fn mat_exp_matches_squaring_oracle() {
    let mut rng = rng_from_seed(5);
    let g = ginibre(&mut rng, 9, 9) * cr(0.5);
    let direct = mat_exp(&g).unwrap();
    let mut tiny = mat_exp(&(&g * cr(1.0 / 1024.0))).unwrap();
    for _ in 0..10 {
        tiny = &tiny * &tiny;
    }
    assert!(max_abs(&(direct - tiny)) < 1e-8);
}

#[test]
fn mat_exp_skew_hermitian_is_unitary() {
    let mut rng = rng_from_seed(6);
    let h = random_hermitian(&mut rng, 7);
    let u = mat_exp(&(h * I)).unwrap();
    assert!(max_abs(&(&u * u.adjoint() - identity(7))) < 1e-10);
}

#[test]
fn partial_trace_factorizes() {
    let z = kron(&sigma_x(), &sigma_z());
    let t = partial_trace(&z, &[2, 2], &[0]).unwrap();
    assert!(max_abs(&t) < 1e-14, "Tr(σz)·σx should vanish");

    let mut rng = rng_from_seed(7);
    let a = ginibre(&mut rng, 3, 3);
    let b = ginibre(&mut rng, 4, 4);
    let t = partial_trace(&kron(&a, &b), &[3, 4], &[0]).unwrap();
    assert!(max_abs(&(t - &a * trace(&b))) < 1e-12);
    let t = partial_trace(&kron(&a, &b), &[3, 4], &[1]).unwrap();
    assert!(max_abs(&(t - &b * trace(&a))) < 1e-12);
}

#[test]
fn partial_trace_of_state_is_state() {
    let mut rng = rng_from_seed(8);
    let rho = random_state(&mut rng, 4);
    let red = partial_trace(rho.matrix(), &[2, 2], &[0]).unwrap();
    let red = DensityState::new(red).expect("reduced state is a state");
    let evs = herm_eigvals(red.matrix()).unwrap();
    assert!(evs.iter().all(|&x| x >= -1e-10));
}

#[test]
fn partial_trace_dims_mismatch_errors() {
    assert!(partial_trace(&identity(6), &[2, 2], &[0]).is_err());
}

#[test]
fn pinv_on_support_examples() {
    let m = CMatrix::from_diagonal(&CVector::from_vec(vec![cr(2.0), ZERO]));
    let p = pinv_on_support(&m, PINV_EPS_DEFAULT).unwrap();
    assert!((p[(0, 0)].re - 0.5).abs() < 1e-14 && p[(1, 1)].norm() < 1e-14);
    let p = pinv_on_support(&identity(3), PINV_EPS_DEFAULT).unwrap();
    assert!(max_abs(&(p - identity(3))) < 1e-14);
}

#[test]
fn pinv_on_support_low_rank() {
    let mut rng = rng_from_seed(9);
    let g = ginibre(&mut rng, 5, 3);
    let m = &g * g.adjoint();
    let p = pinv_on_support(&m, PINV_EPS_DEFAULT).unwrap();
    let scale = op_norm(&m).unwrap();
    assert!(max_abs(&(&m * &p * &m - &m)) <= 1e-9 * scale);
    let rank = herm_eigvals(&p)
        .unwrap()
        .iter()
        .filter(|&&x| x > 1e-8)
        .count();
    assert_eq!(rank, 3);
}

#[test]
fn pinv_rejects_indefinite() {
    assert!(pinv_on_support(&sigma_z(), PINV_EPS_DEFAULT).is_err());
}

#[test]
fn kron_mixed_product() {
    let mut rng = rng_from_seed(10);
    let (a, b, c, d) = (
        ginibre(&mut rng, 2, 2),
        ginibre(&mut rng, 3, 3),
        ginibre(&mut rng, 2, 2),
        ginibre(&mut rng, 3, 3),
    );
    let lhs = kron(&a, &b) * kron(&c, &d);
    let rhs = kron(&(&a * &c), &(&b * &d));
    assert!(max_abs(&(lhs - rhs)) < 1e-12 * (max_abs(&a) * max_abs(&b)).max(1.0) * 10.0);
}

#[test]
fn vectorization_convention_full_basis() {
    let mut rng = rng_from_seed(12);
    let a = ginibre(&mut rng, 3, 3);
    let b = ginibre(&mut rng, 3, 3);
    let s = SuperOp::from_left_right(&a, &b).unwrap();
    for i in 0..3 {
        for j in 0..3 {
            let mut e = zeros(3, 3);
            e[(i, j)] = ONE;
            let direct = &a * &e * &b;
            let via = s.apply(&e);
            assert!(max_abs(&(direct - via)) < 1e-12);
        }
    }
}

#[test]
fn superop_choi_round_trip() {
    let mut rng = rng_from_seed(13);
    let s = SuperOp::new(3, ginibre(&mut rng, 9, 9)).unwrap();
    let j = choi_of_superop(&s);
    let back = superop_from_choi(&j, 3).unwrap();
    assert!(max_abs(&(back.matrix() - s.matrix())) < 1e-14);
}

#[test]
fn embed_matches_kron_on_edges() {
    let mut rng = rng_from_seed(14);
    let y = ginibre(&mut rng, 2, 2);
    let got = embed(&y, &[2, 3], &[0]).unwrap();
    assert!(max_abs(&(got - kron(&y, &identity(3)))) < 1e-14);
    let got = embed(&y, &[3, 2], &[1]).unwrap();
    assert!(max_abs(&(got - kron(&identity(3), &y))) < 1e-14);
    // middle factor
    let got = embed(&kron(&y, &y), &[2, 3, 2], &[0, 2]).unwrap();
    let mut expect = zeros(12, 12);
    for k in 0..3 {
        let mut e = zeros(3, 3);
        e[(k, k)] = ONE;
        expect += kron(&kron(&y, &e), &y);
    }
    assert!(max_abs(&(got - expect)) < 1e-14);
}

#[test]
fn density_state_validation() {
    assert!(DensityState::new(identity(2)).is_err()); // trace 2
    let ok = DensityState::new(identity(2) * cr(0.5)).unwrap();
    assert_eq!(ok.dim(), 2);
    assert!(DensityState::new(sigma_z()).is_err()); // negative eigenvalue
}
