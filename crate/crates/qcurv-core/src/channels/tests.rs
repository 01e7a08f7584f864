use super::*;
use crate::matcore::*;
use crate::sample::*;

fn depolarizing_spec(p: f64) -> PauliChannelSpec {
    PauliChannelSpec::new(vec![
        (PauliString::parse("I").unwrap(), 1.0 - p),
        (PauliString::parse("X").unwrap(), p / 3.0),
        (PauliString::parse("Y").unwrap(), p / 3.0),
        (PauliString::parse("Z").unwrap(), p / 3.0),
    ])
    .unwrap()
}

#[test]
fn kraus_identity_is_identity_channel() {
    let ch = channel_from_kraus(vec![identity(3)]).unwrap();
    let mut rng = rng_from_seed(0);
    let x = random_hermitian(&mut rng, 3);
    assert!(max_abs(&(ch.apply(&x) - &x)) < 1e-12);
}

#[test]
fn dephasing_choi_eigenvalues() {
    let p = 0.3f64;
    let sz = pauli::pauli_matrix(3);
    let ch = channel_from_kraus(vec![
        identity(2) * cr((1.0 - p).sqrt()),
        sz * cr(p.sqrt()),
    ])
    .unwrap();
    let mut evs = herm_eigvals(&ch.choi()).unwrap();
    evs.reverse();
    assert!((evs[0] - 2.0 * (1.0 - p)).abs() < 1e-12);
    assert!((evs[1] - 2.0 * p).abs() < 1e-12);
    assert!(evs[2].abs() < 1e-12 && evs[3].abs() < 1e-12);
}

#[test]
fn random_dilation_is_cptp() {
    let mut rng = rng_from_seed(1);
    for _ in 0..5 {
        let ch = channel_from_kraus(random_kraus_set(&mut rng, 3, 4)).unwrap();
        assert!(ch.is_cptp(1e-9));
    }
}

#[test]
fn kraus_completeness_violation_errors() {
    assert!(channel_from_kraus(vec![identity(2) * cr(0.9)]).is_err());
}

#[test]
fn pauli_identity_spec_is_identity() {
    let spec = PauliChannelSpec::new(vec![(PauliString::parse("II").unwrap(), 1.0)]).unwrap();
    let ch = pauli_channel(&spec).unwrap();
    let mut rng = rng_from_seed(2);
    let x = random_hermitian(&mut rng, 4);
    assert!(max_abs(&(ch.apply(&x) - &x)) < 1e-12);
}

#[test]
fn pauli_spec_requires_identity_string() {
    let r = PauliChannelSpec::new(vec![
        (PauliString::parse("X").unwrap(), 0.5),
        (PauliString::parse("Z").unwrap(), 0.5),
    ]);
    assert!(r.is_err());
}

#[test]
fn depolarizing_eigenvalue_on_sigma_x() {
    let spec = depolarizing_spec(0.25);
    let ch = pauli_channel(&spec).unwrap();
    let sx = pauli::pauli_matrix(1);
    let out = ch.apply(&sx);
    // dense-superop oracle: P(σ₁) = (1 − 4p/3) σ₁ = (2/3) σ₁
    assert!(max_abs(&(out - &sx * cr(2.0 / 3.0))) < 1e-12);
    assert!((spec.eigenvalue_on(&PauliString::parse("X").unwrap()).unwrap() - 2.0 / 3.0).abs() < 1e-15);
}

#[test]
fn two_qubit_signed_eigenvalue() {
    let spec = PauliChannelSpec::new(vec![
        (PauliString::parse("II").unwrap(), 0.7),
        (PauliString::parse("XI").unwrap(), 0.2),
        (PauliString::parse("ZZ").unwrap(), 0.1),
    ])
    .unwrap();
    let zi = PauliString::parse("ZI").unwrap();
    // sign-count oracle: 0.7 − 0.2 + 0.1
    assert!((spec.eigenvalue_on(&zi).unwrap() - 0.6).abs() < 1e-15);
    let ch = pauli_channel(&spec).unwrap();
    let out = ch.apply(&zi.dense());
    assert!(max_abs(&(out - zi.dense() * cr(0.6))) < 1e-12);
}

#[test]
fn symbolic_eigenvalues_match_dense_superop() {
    let mut rng = rng_from_seed(3);
    for _ in 0..5 {
        let spec = random_pauli_spec(&mut rng, 3, 6);
        let ch = pauli_channel(&spec).unwrap();
        let mut worst = 0.0f64;
        for (g, mu) in spec.eigenvalues() {
            let gd = g.dense();
            let out = ch.apply(&gd);
            let dense_mu = hs_inner(&gd, &out).re / gd.nrows() as f64 / {
                // ⟨σ,σ⟩ = d for normalized pauli strings
                1.0
            };
            worst = worst.max((dense_mu - mu).abs());
        }
        assert!(worst <= 1e-12, "max eigenvalue mismatch {worst}");
    }
}

pub fn random_pauli_spec(rng: &mut impl rand::Rng, n: usize, max_terms: usize) -> PauliChannelSpec {
    use rand::Rng;
    let all = all_strings(n);
    let k = rng.gen_range(2..=max_terms.min(all.len()));
    let mut chosen = vec![PauliString::identity(n)];
    while chosen.len() < k {
        let idx = rng.gen_range(0..all.len());
        if !chosen.contains(&all[idx]) {
            chosen.push(all[idx]);
        }
    }
    let mut w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.05..1.0)).collect();
    let s: f64 = w.iter().sum();
    for x in &mut w {
        *x /= s;
    }
    PauliChannelSpec::new(chosen.into_iter().zip(w).collect()).unwrap()
}

#[test]
fn c_sign_examples() {
    let x = PauliString::parse("X").unwrap();
    let y = PauliString::parse("Y").unwrap();
    assert_eq!(c_sign(&x, &x).unwrap(), 0);
    assert_eq!(c_sign(&x, &y).unwrap(), 1);
    let xy = PauliString::parse("XY").unwrap();
    let yx = PauliString::parse("YX").unwrap();
    assert_eq!(c_sign(&xy, &yx).unwrap(), 0);
    // dense 4×4 product oracle
    let (a, b) = (xy.dense(), yx.dense());
    assert!(max_abs(&(&a * &b - &b * &a)) < 1e-14);
    // length mismatch
    assert!(c_sign(&x, &xy).is_err());
}

#[test]
fn c_sign_matches_dense_commutation() {
    let mut rng = rng_from_seed(4);
    for _ in 0..30 {
        use rand::Rng;
        let n = 2;
        let all = all_strings(n);
        let a = all[rng.gen_range(0..all.len())];
        let b = all[rng.gen_range(0..all.len())];
        let (ad, bd) = (a.dense(), b.dense());
        let comm = max_abs(&(&ad * &bd - &bd * &ad));
        let anti = max_abs(&(&ad * &bd + &bd * &ad));
        match c_sign(&a, &b).unwrap() {
            0 => assert!(comm < 1e-14),
            _ => assert!(anti < 1e-14),
        }
    }
}

#[test]
fn conditional_expectation_trivial_group() {
    let spec = PauliChannelSpec::new(vec![(PauliString::parse("I").unwrap(), 1.0)]).unwrap();
    let e = pauli_conditional_expectation(&spec);
    let mut rng = rng_from_seed(5);
    let x = random_hermitian(&mut rng, 2);
    assert!(max_abs(&(e.apply(&x) - &x)) < 1e-13);
}

#[test]
fn conditional_expectation_full_group_is_trace_average() {
    let spec = PauliChannelSpec::new(vec![
        (PauliString::parse("I").unwrap(), 0.25),
        (PauliString::parse("X").unwrap(), 0.25),
        (PauliString::parse("Y").unwrap(), 0.25),
        (PauliString::parse("Z").unwrap(), 0.25),
    ])
    .unwrap();
    let e = pauli_conditional_expectation(&spec);
    let mut rng = rng_from_seed(6);
    let x = random_hermitian(&mut rng, 2);
    let expect = identity(2) * (trace(&x) * cr(0.5));
    assert!(max_abs(&(e.apply(&x) - expect)) < 1e-13);
}

#[test]
fn powers_converge_to_expectation_geometrically() {
    let spec = depolarizing_spec(0.25);
    let ch = pauli_channel(&spec).unwrap();
    let e = pauli_conditional_expectation(&spec);
    let mut pk = ch.superop().clone();
    let mut prev = f64::NAN;
    for _ in 0..6 {
        let diff = SuperOp::new(2, pk.matrix() - e.channel().superop().matrix()).unwrap();
        let norm = op_norm(diff.matrix()).unwrap();
        if prev.is_finite() {
            assert!((norm / prev - 2.0 / 3.0).abs() < 1e-9, "ratio {}", norm / prev);
        }
        prev = norm;
        pk = pk.compose(ch.superop()).unwrap();
    }
}

#[test]
fn gibbs_state_examples() {
    // β = 0 → maximally mixed
    let mut rng = rng_from_seed(7);
    let h = random_hermitian(&mut rng, 5);
    let g = gibbs_state(&h, 0.0).unwrap();
    assert!(max_abs(&(g.matrix() - identity(5) * cr(0.2))) < 1e-12);
    // H = σ₃, β = 1 → diag(e⁻¹, e)/(e⁻¹+e)
    let g = gibbs_state(&pauli::pauli_matrix(3), 1.0).unwrap();
    let z = (-1.0f64).exp() + 1.0f64.exp();
    assert!((g.matrix()[(0, 0)].re - (-1.0f64).exp() / z).abs() < 1e-14);
    assert!((g.matrix()[(1, 1)].re - 1.0f64.exp() / z).abs() < 1e-14);
    // large β stays finite thanks to the spectral shift
    let g = gibbs_state(&pauli::pauli_matrix(3), 5000.0).unwrap();
    assert!((trace(g.matrix()).re - 1.0).abs() < 1e-12);
}

#[test]
fn gibbs_state_commutes_with_hamiltonian() {
    let spec = HamiltonianSpec::ising_chain(3, 1.0, 0.0);
    let h = spec.full_matrix().unwrap();
    let g = gibbs_state(&h, 0.1).unwrap();
    assert!(max_abs(&commutator(&h, g.matrix())) < 1e-12);
    let evs = herm_eigvals(g.matrix()).unwrap();
    assert!(evs[0] > 0.0 && (trace(g.matrix()).re - 1.0).abs() < 1e-12);
}

#[test]
fn heat_bath_at_infinite_temperature_is_partial_trace() {
    let spec = HamiltonianSpec::ising_chain(2, 1.0, 0.0);
    let gen = heat_bath_generator(&spec, 0.0).unwrap();
    let local = gen.local().unwrap();
    let mut rng = rng_from_seed(8);
    let x = random_hermitian(&mut rng, 4);
    for site in &local.sites {
        let tau = ConditionalExpectation::site_replacement(&[2, 2], site.site).unwrap();
        assert!(max_abs(&(site.psi.apply(&x) - tau.apply(&x))) < 1e-12);
    }
}

#[test]
fn heat_bath_single_site_fixes_gibbs() {
    let sz = pauli::pauli_matrix(3);
    let spec = HamiltonianSpec {
        n_sites: 1,
        site_dim: 2,
        terms: vec![(vec![0], sz.clone())],
    };
    let gen = heat_bath_generator(&spec, 1.0).unwrap();
    let omega = gibbs_state(&sz, 1.0).unwrap();
    let psi = &gen.local().unwrap().sites[0].psi;
    let out = psi.adjoint().apply(omega.matrix());
    assert!(max_abs(&(out - omega.matrix())) < 1e-12);
}

#[test]
fn heat_bath_generator_fixes_gibbs_under_evolution() {
    let spec = HamiltonianSpec::ising_chain(3, 1.0, 0.0);
    let beta = 0.1;
    let gen = heat_bath_generator(&spec, beta).unwrap();
    let omega = gibbs_state(&spec.full_matrix().unwrap(), beta).unwrap();
    let ch = semigroup_channel(&gen, 1.0).unwrap();
    let out = ch.apply_pre(omega.matrix());
    assert!(max_abs(&(out - omega.matrix())) < 1e-9);
}

#[test]
fn heat_bath_psi_structure() {
    // Ψ_v maps into operators trivial on v, is GNS-symmetric w.r.t. ω, fixes
    // ω, and is exactly idempotent at β = 0. (At β > 0 it is not a projection:
    // already for H = σ₃⊗σ₃ it scales off-diagonal v^c observables by
    // sech(β); only the β = 0 limit τ_v is idempotent.)
    let spec = HamiltonianSpec::ising_chain(3, 1.0, 0.0);
    let beta = 0.1;
    let gen = heat_bath_generator(&spec, beta).unwrap();
    let omega = gibbs_state(&spec.full_matrix().unwrap(), beta).unwrap();
    let mut rng = rng_from_seed(9);
    for site in &gen.local().unwrap().sites {
        // range condition ∂_v Ψ_v = 0, i.e. τ_v ∘ Ψ_v = Ψ_v
        let tau = ConditionalExpectation::site_replacement(&[2, 2, 2], site.site).unwrap();
        let tp = tau.channel().superop().compose(&site.psi).unwrap();
        assert!(max_abs(&(tp.matrix() - site.psi.matrix())) < 1e-10);
        // KMS symmetry ⟨Ψ(x), y⟩_{KMS} = ⟨x, Ψ(y)⟩_{KMS} on random pairs
        // (the Petz heat-bath map is the KMS adjoint of the partial trace;
        // GNS symmetry holds for the fixed-point expectation, not for Ψ_v)
        let wh = {
            let (vals, u) = herm_eig(omega.matrix()).unwrap();
            let dg = CMatrix::from_diagonal(&CVector::from_iterator(
                8,
                vals.iter().map(|&v| cr(v.max(0.0).sqrt())),
            ));
            &u * dg * u.adjoint()
        };
        let (x, y) = (random_hermitian(&mut rng, 8), random_hermitian(&mut rng, 8));
        let lhs = trace(&(&wh * site.psi.apply(&x).adjoint() * &wh * &y)).re;
        let rhs = trace(&(&wh * x.adjoint() * &wh * site.psi.apply(&y))).re;
        assert!((lhs - rhs).abs() < 1e-9, "KMS defect {:.3e}", (lhs - rhs).abs());
        // fixes ω in the Schrödinger picture
        let fixed = site.psi.adjoint().apply(omega.matrix());
        assert!(max_abs(&(fixed - omega.matrix())) < 1e-10);
    }
    let sech = 1.0 / (beta.cosh());
    let _ = sech; // see heat_bath_at_infinite_temperature_is_partial_trace for β = 0
}

#[test]
fn heat_bath_psi_idempotence_defect_is_quadratic_in_beta() {
    // 2-site single-term chain: the predicted scaling factor on I⊗E01 under
    // Ψ_1 is sech(β), so ‖Ψ² − Ψ‖ ≈ sech(β)(1 − sech(β)).
    let spec = HamiltonianSpec::ising_chain(2, 1.0, 0.0);
    for &beta in &[0.1f64, 0.2] {
        let gen = heat_bath_generator(&spec, beta).unwrap();
        let psi = &gen.local().unwrap().sites[0].psi;
        let mut e01 = zeros(2, 2);
        e01[(0, 1)] = ONE;
        let x = kron(&identity(2), &e01);
        let out = psi.apply(&x);
        let pred = 1.0 / beta.cosh();
        assert!(max_abs(&(out - &x * cr(pred))) < 1e-12, "beta {beta}");
    }
}

#[test]
fn heat_bath_rejects_noncommuting_terms() {
    let sx = pauli::pauli_matrix(1);
    let sz = pauli::pauli_matrix(3);
    let spec = HamiltonianSpec {
        n_sites: 2,
        site_dim: 2,
        terms: vec![
            (vec![0, 1], kron(&sz, &sz) * cr(0.5)),
            (vec![0], sx * cr(0.5)),
        ],
    };
    assert!(heat_bath_generator(&spec, 0.3).is_err());
}

#[test]
fn semigroup_channel_basics() {
    let spec = HamiltonianSpec::ising_chain(2, 1.0, 0.0);
    let gen = heat_bath_generator(&spec, 0.2).unwrap();
    // t = 0 → identity
    let ch0 = semigroup_channel(&gen, 0.0).unwrap();
    assert!(max_abs(&(ch0.superop().matrix() - SuperOp::identity(4).matrix())) < 1e-12);
    // t < 0 rejected
    assert!(semigroup_channel(&gen, -0.5).is_err());
    // Choi PSD at several times
    for &t in &[0.1, 1.0, 10.0] {
        let ch = semigroup_channel(&gen, t).unwrap();
        assert!(ch.is_cptp(1e-9), "t = {t}");
    }
    // semigroup law on a random pair
    let (s, t) = (0.37, 1.21);
    let a = semigroup_channel(&gen, s).unwrap();
    let b = semigroup_channel(&gen, t).unwrap();
    let ab = a.compose(&b).unwrap();
    let direct = semigroup_channel(&gen, s + t).unwrap();
    assert!(max_abs(&(ab.superop().matrix() - direct.superop().matrix())) < 1e-9);
}

#[test]
fn depolarizing_semigroup_closed_form() {
    // L = E − id with E the trace average: e^{tL} = e^{−t}·id + (1−e^{−t})·E.
    let d = 2;
    let e = ConditionalExpectation::trace_average(d);
    let l = SuperOp::new(
        d,
        e.channel().superop().matrix() - SuperOp::identity(d).matrix(),
    )
    .unwrap();
    let gen = GeneratorSpec::new(l, None).unwrap();
    let t = 0.8;
    let ch = semigroup_channel(&gen, t).unwrap();
    let expect = SuperOp::identity(d).matrix() * cr((-t).exp())
        + e.channel().superop().matrix() * cr(1.0 - (-t).exp());
    assert!(max_abs(&(ch.superop().matrix() - expect)) < 1e-12);
}

#[test]
fn fixed_point_identity_channel() {
    let ch = Channel::identity_channel(2);
    let omega = DensityState::maximally_mixed(2);
    let e = fixed_point_expectation(&ch, FixedPointMode::Generic { omega: &omega }).unwrap();
    let mut rng = rng_from_seed(10);
    let x = random_hermitian(&mut rng, 2);
    assert!(max_abs(&(e.apply(&x) - &x)) < 1e-10);
}

#[test]
fn fixed_point_depolarizing_is_state_average() {
    let spec = depolarizing_spec(0.25);
    let ch = pauli_channel(&spec).unwrap();
    let omega = DensityState::maximally_mixed(2);
    let e = fixed_point_expectation(&ch, FixedPointMode::Generic { omega: &omega }).unwrap();
    let mut rng = rng_from_seed(11);
    let x = random_hermitian(&mut rng, 2);
    let expect = identity(2) * (trace(&(omega.matrix() * &x)));
    assert!(max_abs(&(e.apply(&x) - expect)) < 1e-10);
}

#[test]
fn fixed_point_pauli_matches_eigenspace_projector() {
    let spec = PauliChannelSpec::new(vec![
        (PauliString::parse("II").unwrap(), 0.6),
        (PauliString::parse("XX").unwrap(), 0.4),
    ])
    .unwrap();
    let ch = pauli_channel(&spec).unwrap();
    let e_group = pauli_conditional_expectation(&spec);
    let omega = DensityState::maximally_mixed(4);
    let e_spec = fixed_point_expectation(&ch, FixedPointMode::Generic { omega: &omega }).unwrap();
    assert!(
        max_abs(&(e_group.channel().superop().matrix() - e_spec.channel().superop().matrix()))
            < 1e-10
    );
}

#[test]
fn fixed_point_generic_rejects_non_symmetric() {
    // amplitude damping is not GNS-symmetric w.r.t. the maximally mixed state
    let g = 0.4f64;
    let k0 = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, cr((1.0 - g).sqrt())]);
    let k1 = CMatrix::from_row_slice(2, 2, &[ZERO, cr(g.sqrt()), ZERO, ZERO]);
    // Heisenberg Kraus: P(x) = Σ K† x K with the *pre-adjoint* Kraus set
    let amp = SuperOp::of_map(2, |x| {
        k0.adjoint() * x * &k0 + k1.adjoint() * x * &k1
    });
    let ch = Channel::from_heisenberg(amp).unwrap();
    let omega = DensityState::maximally_mixed(2);
    let r = fixed_point_expectation(&ch, FixedPointMode::Generic { omega: &omega });
    assert!(matches!(r, Err(crate::error::Error::UnsupportedStructure(_))));
}

#[test]
fn site_replacement_expectation_is_idempotent() {
    let e = ConditionalExpectation::site_replacement(&[2, 2], 1).unwrap();
    let mut rng = rng_from_seed(12);
    let x = random_hermitian(&mut rng, 4);
    let once = e.apply(&x);
    let twice = e.apply(&once);
    assert!(max_abs(&(twice - &once)) < 1e-12);
    // Tr₂ structure: result is y ⊗ 1/2
    let y = partial_trace(&once, &[2, 2], &[0]).unwrap();
    assert!(max_abs(&(kron(&y, &identity(2)) * cr(0.5) - once)) < 1e-12);
}
