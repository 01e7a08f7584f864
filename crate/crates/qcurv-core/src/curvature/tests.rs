use super::*;
use crate::channels::pauli::pauli_matrix;
use crate::channels::*;
use crate::matcore::*;
use crate::metrics::*;
use crate::optim::psd_gap;
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

fn qubit_sigma_ds() -> DerivationStructure {
    let c = cr(1.0 / (2.0 * 2.0f64.sqrt()));
    DerivationStructure::symmetric(
        vec![
            pauli_matrix(1) * c,
            pauli_matrix(2) * c,
            pauli_matrix(3) * c,
        ],
        MeanKind::Logarithmic,
    )
    .unwrap()
}

fn depolarizing_generator() -> GeneratorSpec {
    let e = ConditionalExpectation::trace_average(2);
    GeneratorSpec::new(
        crate::matcore::SuperOp::new(
            2,
            e.channel().superop().matrix() - crate::matcore::SuperOp::identity(2).matrix(),
        )
        .unwrap(),
        None,
    )
    .unwrap()
}

#[test]
fn identity_channel_has_factor_one() {
    let ch = Channel::identity_channel(2);
    let spec = SemiNormSpec::commutator_max(vec![pauli_matrix(3)]).unwrap();
    let mut rng = rng_from_seed(0);
    let rep = lipschitz_factor(&ch, &spec, &SearchBudget::default(), &mut rng).unwrap();
    assert!((rep.lower_bound_factor - 1.0).abs() < 1e-7, "{}", rep.lower_bound_factor);
    assert!(rep.witness_seminorm >= 1.0 - 1e-6 && rep.witness_seminorm <= 1.0 + 1e-9);
}

#[test]
fn depolarizing_structural_factor() {
    let pspec = depolarizing_spec(0.25);
    let rep = pauli_lipschitz_factor(&pspec).unwrap();
    // structural bound 1 − 2·min λ = 1 − 2/12 = 5/6; best Pauli witness 2/3
    assert!((rep.upper_bound_factor - 5.0 / 6.0).abs() < 1e-12);
    assert!((rep.lower_bound_factor - 2.0 / 3.0).abs() < 1e-12);
    assert!(rep.certified);
    assert!(rep.lower_bound_factor <= rep.upper_bound_factor + 1e-7);
    // the witness achieves its advertised factor
    let spec = pauli_seminorm(&pspec).unwrap();
    let ch = pauli_channel(&pspec).unwrap();
    let w = rep.witness.as_ref().unwrap();
    let lw = seminorm_eval(&spec, w).unwrap();
    let lpw = seminorm_eval(&spec, &ch.apply(w)).unwrap();
    assert!((lw - 1.0).abs() < 1e-9 && (lpw - rep.lower_bound_factor).abs() < 1e-9);
}

#[test]
fn random_pauli_witness_below_structural_bound() {
    let mut rng = rng_from_seed(1);
    for _ in 0..6 {
        let pspec = crate::channels::tests::random_pauli_spec(&mut rng, 2, 8);
        let rep = pauli_lipschitz_factor(&pspec).unwrap();
        assert!(
            rep.lower_bound_factor <= rep.upper_bound_factor + 1e-9,
            "witness {} vs structural {}",
            rep.lower_bound_factor,
            rep.upper_bound_factor
        );
        // the witness search cannot beat the structural bound either
        let spec = pauli_seminorm(&pspec).unwrap();
        let ch = pauli_channel(&pspec).unwrap();
        let (found, _) =
            witness_search(&ch, &spec, &SearchBudget { restarts: 6, iters: 5 }, &mut rng).unwrap();
        assert!(found <= rep.upper_bound_factor + 1e-7);
    }
}

#[test]
fn kernel_violation_reported() {
    // Hadamard conjugation moves σ₃ (in ker L for L = ‖[σ₃,·]‖) to σ₁
    let h = CMatrix::from_row_slice(2, 2, &[ONE, ONE, ONE, -ONE]) * cr(1.0 / 2.0f64.sqrt());
    let ch = Channel::unitary(&h).unwrap();
    let spec = SemiNormSpec::commutator_max(vec![pauli_matrix(3)]).unwrap();
    let mut rng = rng_from_seed(2);
    let rep = lipschitz_factor(&ch, &spec, &SearchBudget::default(), &mut rng).unwrap();
    assert!(rep.kernel_violation.is_some());
    assert!(rep.kappa == f64::NEG_INFINITY);
}

#[test]
fn ge_identity_channel() {
    let ch = Channel::identity_channel(2);
    let ds = qubit_sigma_ds();
    let mut rng = rng_from_seed(3);
    let states: Vec<_> = (0..3).map(|_| random_state(&mut rng, 2)).collect();
    let rep = verify_ge(&ch, &ds, &states, (-0.5, 1.0), None).unwrap();
    assert!(rep.kappa_star.abs() < 1e-5, "κ* = {}", rep.kappa_star);
    for s in &rep.per_sample {
        assert!(s.margin_at_star >= -GE_MARGIN_TOL);
        assert!(s.margin_above < 0.0, "margin just above κ* must fail");
    }
}

#[test]
fn ge_depolarizing_semigroup_consistency() {
    let gen = depolarizing_generator();
    let t = 0.6;
    let ch = semigroup_channel(&gen, t).unwrap();
    let ds = qubit_sigma_ds();
    let mut rng = rng_from_seed(4);
    let states: Vec<_> = (0..4).map(|_| random_state(&mut rng, 2)).collect();
    let rep = verify_ge(&ch, &ds, &states, (-0.5, 1.0), None).unwrap();
    assert!(rep.kappa_star > 0.0);
    // direct quadratic-form evaluation on random observables at κ*, on the
    // sampled states the bisection certified
    for rho in &states {
        for _ in 0..3 {
            let x = random_hermitian(&mut rng, 2);
            let (lhs, rhs) = ge_direct_check(&ch, &ds, rho, &x, rep.kappa_star).unwrap();
            assert!(lhs <= rhs + 1e-6 * rhs.abs().max(1.0), "{lhs} vs {rhs}");
        }
    }
    // Lemma direction: P M_{P†ρ}⁺ P† ⪯ (1−κ)² M_ρ⁺
    let kappa = rep.kappa_star;
    for _ in 0..3 {
        let rho = random_state(&mut rng, 2);
        let m_rho = metric_tensor_superop(&rho, &ds).unwrap();
        let moved = DensityState::new(hermitize(&ch.apply_pre(rho.matrix()))).unwrap();
        let m_moved = metric_tensor_superop(&moved, &ds).unwrap();
        let s = ch.superop().matrix();
        let lhs = s * pinv_on_support(&m_moved, PINV_EPS_DEFAULT).unwrap() * s.adjoint();
        let rhs = pinv_on_support(&m_rho, PINV_EPS_DEFAULT).unwrap()
            * cr((1.0 - kappa) * (1.0 - kappa));
        let margin = psd_gap(&hermitize(&lhs), &hermitize(&rhs)).unwrap();
        assert!(margin >= -1e-8, "lemma direction margin {margin}");
    }
}

#[test]
fn intertwining_identity_and_pauli() {
    let ch = Channel::identity_channel(2);
    let ds = qubit_sigma_ds();
    let hat = HatMap::scaled_diagonal(&ch, 1.0, ds.len());
    let mut rng = rng_from_seed(5);
    let states = sample_states_for(2, 3, &mut rng);
    let rep = verify_intertwining(&ch, &ds, &hat, &states).unwrap();
    assert!(rep.residual < 1e-12);
    assert!(rep.c_left <= 1.0 + 1e-8 && rep.c_right <= 1.0 + 1e-8);

    let pspec = depolarizing_spec(0.25);
    let ch = pauli_channel(&pspec).unwrap();
    let (pds, phat) = pauli_hat_map(&pspec).unwrap();
    let states = sample_states_for(2, 3, &mut rng);
    let rep = verify_intertwining(&ch, &pds, &phat, &states).unwrap();
    assert!(rep.residual < 1e-12, "pauli intertwining residual {}", rep.residual);
    assert!(rep.c_left.is_finite());
}

#[test]
fn spectral_gap_examples() {
    let omega = DensityState::maximally_mixed(2);
    let e = ConditionalExpectation::trace_average(2);
    // identity channel against the trace average: nothing decays
    let gap = spectral_gap(&Channel::identity_channel(2), &omega, &e).unwrap();
    assert!(gap.abs() < 1e-10);
    // depolarizing p = 0.25: gap = 1 − 2/3 = 1/3
    let ch = pauli_channel(&depolarizing_spec(0.25)).unwrap();
    let gap = spectral_gap(&ch, &omega, &e).unwrap();
    assert!((gap - 1.0 / 3.0).abs() < 1e-10, "gap {gap}");
}

#[test]
fn spectral_gap_random_pauli_matches_mu() {
    let mut rng = rng_from_seed(6);
    for _ in 0..5 {
        let pspec = crate::channels::tests::random_pauli_spec(&mut rng, 2, 6);
        let ch = pauli_channel(&pspec).unwrap();
        let omega = DensityState::maximally_mixed(4);
        let e = pauli_conditional_expectation(&pspec);
        let gap = spectral_gap(&ch, &omega, &e).unwrap();
        let fixed = pspec.fixed_strings();
        let mut mu_max = 0.0f64;
        for (g, mu) in pspec.eigenvalues() {
            if !fixed.contains(&g) {
                mu_max = mu_max.max(mu.abs());
            }
        }
        assert!((gap - (1.0 - mu_max)).abs() < 1e-10, "gap {gap} vs 1−{mu_max}");
    }
}

#[test]
fn spectral_gap_dominates_structural_kappa() {
    // §4.2 certificate on Pauli instances: gap ≥ κ
    let mut rng = rng_from_seed(7);
    for _ in 0..8 {
        let pspec = crate::channels::tests::random_pauli_spec(&mut rng, 2, 7);
        let ch = pauli_channel(&pspec).unwrap();
        let omega = DensityState::maximally_mixed(4);
        let e = pauli_conditional_expectation(&pspec);
        let gap = spectral_gap(&ch, &omega, &e).unwrap();
        let kappa = 2.0 * pspec.min_weight();
        assert!(gap >= kappa - 1e-9, "gap {gap} < κ {kappa}");
    }
}

#[test]
fn poincare_constant_bounds_random_search() {
    let omega = DensityState::maximally_mixed(2);
    let e = ConditionalExpectation::trace_average(2);
    let spec = SemiNormSpec::operator_norm(2);
    let c = poincare_2inf_constant(&spec, &omega, &e).unwrap().unwrap();
    // random-search lower bound ≤ lifted-SDP upper bound
    let mut rng = rng_from_seed(8);
    let (g_half, _) = gns_weights(&omega).unwrap();
    let gw = g_half.adjoint() * &g_half;
    let mut best = 0.0f64;
    for _ in 0..200 {
        let x = random_hermitian(&mut rng, 2);
        let n = op_norm(&x).unwrap();
        if n < 1e-12 {
            continue;
        }
        let y = (&x - e.apply(&x)) * cr(1.0 / n);
        let v = vec_mat(&y);
        best = best.max((v.adjoint() * &gw * &v)[(0, 0)].re.sqrt());
    }
    assert!(best <= c + 1e-7, "search {best} vs sdp {c}");
    assert!(c >= 1.0 - 1e-7, "σ₃ already achieves 1");
}

#[test]
fn poincare_unbounded_detected() {
    // ker L = diagonals, E = trace average: kernel escapes the fixed algebra
    let omega = DensityState::maximally_mixed(2);
    let e = ConditionalExpectation::trace_average(2);
    let spec = SemiNormSpec::commutator_max(vec![pauli_matrix(3)]).unwrap();
    assert!(poincare_2inf_constant(&spec, &omega, &e).unwrap().is_none());
}

#[test]
fn tc_inequality_two_qubit_site_replacement() {
    let dims = [2usize, 2];
    let es = vec![
        ConditionalExpectation::site_replacement(&dims, 0).unwrap(),
        ConditionalExpectation::site_replacement(&dims, 1).unwrap(),
    ];
    let spec = SemiNormSpec::oscillator(vec![2, 2]).unwrap();
    let mut rng = rng_from_seed(9);
    let c = measure_tc_constant(&es, &spec, 4, &mut rng).unwrap();
    // the averaged channel contracts the oscillator norm by 1/2
    let kappa = 0.5;
    let budget = SearchBudget { restarts: 6, iters: 5 };
    for _ in 0..4 {
        let rho = random_state(&mut rng, 4);
        let rep = tc_inequality_check(&es, &spec, kappa, c.max(1.0), &rho, &budget, &mut rng).unwrap();
        assert!(!rep.vacuous);
        assert!(rep.premise_ok, "premise factor {}", rep.premise_factor);
        assert!(rep.slack >= -1e-7, "slack {}", rep.slack);
    }
    // invariant state: 0 ≤ 0
    let rep = tc_inequality_check(
        &es,
        &spec,
        kappa,
        c.max(1.0),
        &DensityState::maximally_mixed(4),
        &budget,
        &mut rng,
    )
    .unwrap();
    assert!(rep.lhs.abs() < 1e-7 && rep.slack >= -1e-9);
}

#[test]
fn ti_inequality_qubit_depolarizing() {
    let c = cr(1.0 / (2.0 * 2.0f64.sqrt()));
    let sigma = DensityState::maximally_mixed(2);
    let ds = DerivationStructure::new(
        vec![pauli_matrix(1) * c, pauli_matrix(2) * c, pauli_matrix(3) * c],
        vec![0.0, 0.0, 0.0],
        MeanKind::WeightedExponential,
        Some(sigma),
    )
    .unwrap();
    let gen = depolarizing_generator();
    let mut rng = rng_from_seed(10);
    for _ in 0..5 {
        let rho = random_state(&mut rng, 2);
        let rep = ti_inequality_check(&ds, &gen, 1.0, 1.0, &rho, &[0.25, 1.0, 2.0], &mut rng).unwrap();
        assert!(rep.dirichlet_identity_defect < 1e-10, "dirichlet defect {}", rep.dirichlet_identity_defect);
        assert!(rep.slack >= 0.0, "TI slack {}", rep.slack);
        for (t, ratio) in &rep.premise {
            assert!(*ratio <= 1.0 + 1e-7, "premise at t={t}: {ratio}");
        }
    }
}

#[test]
fn local_ti_three_site_ising() {
    let h = HamiltonianSpec::ising_chain(3, 1.0, 0.0);
    let beta = 0.1;
    let gen = heat_bath_generator(&h, beta).unwrap();
    let sigma = gibbs_state(&h.full_matrix().unwrap(), beta).unwrap();
    let mut rng = rng_from_seed(11);
    let rho = random_state(&mut rng, 8);
    // the heat-bath edge gaps at β = 0.1 sit near 5e-3 (sech-type
    // eigenvalues of Ψ_v close to 1); assume a modest uniform bound
    let rep = local_ti_check(&gen, &sigma, 1.1, 0.5, 4e-3, &rho, &[0.5, 1.0], &mut rng).unwrap();
    assert!(rep.lambda_min >= 4e-3);
    assert!(rep.slack >= 0.0, "local TI slack {}", rep.slack);
    for e in &rep.per_edge {
        assert!(e.c_e.is_finite() && e.diamond.is_finite());
    }
}

#[test]
fn local_ti_infinite_temperature_constants() {
    let h = HamiltonianSpec::ising_chain(2, 1.0, 0.0);
    let gen = heat_bath_generator(&h, 0.0).unwrap();
    let sigma = DensityState::maximally_mixed(4);
    let mut rng = rng_from_seed(12);
    let rho = random_state(&mut rng, 4);
    let rep = local_ti_check(&gen, &sigma, 1.1, 0.9, 0.9, &rho, &[1.0], &mut rng).unwrap();
    for e in &rep.per_edge {
        // Bohr frequencies all vanish at β = 0, so C_e = 4·max_j ‖v_j‖
        assert!(e.c_e > 0.0);
        assert!((e.c_e - e.c_e_halfweight).abs() < 1e-9, "ω = 0 ⇒ both forms agree");
    }
}

#[test]
fn jump_diameter_examples() {
    let pspec = depolarizing_spec(0.25);
    let ch = pauli_channel(&pspec).unwrap();
    let spec = pauli_seminorm(&pspec).unwrap();
    let kappa = 2.0 * pspec.min_weight();
    let mut rng = rng_from_seed(13);
    let rho = random_state(&mut rng, 2);
    // ρ₁ = ρ₂: 0 ≤ 2J/κ
    let rep = jump_diameter_bound(&spec, &ch, &rho, &rho, kappa).unwrap();
    assert!(rep.distance.abs() < 1e-9 && rep.slack >= -1e-9);
    // random pair
    for _ in 0..3 {
        let r1 = random_state(&mut rng, 2);
        let r2 = random_state(&mut rng, 2);
        let rep = jump_diameter_bound(&spec, &ch, &r1, &r2, kappa).unwrap();
        assert!(rep.slack >= -1e-7, "slack {}", rep.slack);
    }
    assert!(jump_diameter_bound(&spec, &ch, &rho, &rho, 0.0).is_err());
}

#[test]
fn pauli_mixing_chain_depolarizing() {
    let pspec = depolarizing_spec(0.25);
    let mut rng = rng_from_seed(14);
    let rho = random_state(&mut rng, 2);
    let rows = pauli_mixing_rows(&pspec, &rho, 12).unwrap();
    for r in &rows {
        assert!(
            r.measured <= r.bound_stated + 1e-6,
            "step {}: {} vs {}",
            r.step,
            r.measured,
            r.bound_stated
        );
        assert!(r.bound_derived >= r.bound_stated);
    }
    // monotone decay of the bound column
    for w in rows.windows(2) {
        assert!(w[1].bound_stated <= w[0].bound_stated + 1e-12);
    }
}

#[test]
fn composition_and_superposition_factor_arithmetic() {
    let mut rng = rng_from_seed(15);
    for _ in 0..5 {
        let s1 = crate::channels::tests::random_pauli_spec(&mut rng, 1, 4);
        let s2 = crate::channels::tests::random_pauli_spec(&mut rng, 1, 4);
        let (c1, c2) = (pauli_channel(&s1).unwrap(), pauli_channel(&s2).unwrap());
        let spec = SemiNormSpec::commutator_max(vec![
            pauli_matrix(1),
            pauli_matrix(2),
            pauli_matrix(3),
        ])
        .unwrap();
        let budget = SearchBudget { restarts: 10, iters: 8 };
        let (f1, _) = witness_search(&c1, &spec, &budget, &mut rng).unwrap();
        let (f2, _) = witness_search(&c2, &spec, &budget, &mut rng).unwrap();
        let (fc, _) =
            witness_search(&c1.compose(&c2).unwrap(), &spec, &budget, &mut rng).unwrap();
        // full-support single-qubit commutator family: the searches are
        // exact up to solver tolerance, so composition multiplies
        assert!(fc <= f1 * f2 + 1e-7, "composition {fc} vs {f1}·{f2}");
        let lam = 0.3;
        let (fm, _) = witness_search(&c1.mix(&c2, lam).unwrap(), &spec, &budget, &mut rng).unwrap();
        assert!(
            fm <= lam * f1 + (1.0 - lam) * f2 + 1e-7,
            "superposition {fm} vs {}",
            lam * f1 + (1.0 - lam) * f2
        );
    }
}

#[test]
fn tensorization_two_depolarizing_qubits() {
    let mut rng = rng_from_seed(16);
    let pspec = depolarizing_spec(0.25);
    let ch = pauli_channel(&pspec).unwrap();
    let spec = SemiNormSpec::commutator_max(vec![
        pauli_matrix(1),
        pauli_matrix(2),
        pauli_matrix(3),
    ])
    .unwrap();
    let rep = tensorization_check(
        &[spec.clone(), spec],
        &[ch.clone(), ch],
        &[0.5, 0.5],
        4,
        &mut rng,
    )
    .unwrap();
    assert!(
        rep.slack >= 0.0,
        "combined {} vs bound {}",
        rep.combined_factor,
        rep.bound
    );
    for f in &rep.complete_factors {
        assert!(*f <= 1.0 + 1e-9);
    }
}

#[test]
fn tensorization_identity_factors_trivial() {
    let mut rng = rng_from_seed(17);
    let ch = Channel::identity_channel(2);
    let spec = SemiNormSpec::commutator_max(vec![pauli_matrix(3)]).unwrap();
    let rep = tensorization_check(&[spec.clone(), spec], &[ch.clone(), ch], &[0.5, 0.5], 3, &mut rng)
        .unwrap();
    // κᵢ = 0: the bound degenerates to factor ≤ 1
    assert!((rep.bound - 1.0).abs() < 1e-7);
    assert!(rep.combined_factor <= 1.0 + 1e-7);
}

#[test]
fn transfer_klein_four_uniform_is_depolarizing() {
    let g = GroupSpec::klein_four();
    let rep: Vec<CMatrix> = (0..4)
        .map(|i| {
            let (x, z) = (i & 1, (i >> 1) & 1);
            PauliString::from_bits(1, x as u32, z as u32).unwrap().dense()
        })
        .collect();
    let kernel = vec![1.0; 4];
    let mut rng = rng_from_seed(18);
    let (ch, report) =
        transfer_finite_group(&g, &kernel, &rep, &[1, 2, 3], &[1.0, 1.0, 1.0], 40, &mut rng)
            .unwrap();
    // fully depolarizing: P(x) = Tr(x)/2·1
    let x = random_hermitian(&mut rng, 2);
    let expect = identity(2) * (trace(&x) * cr(0.5));
    assert!(max_abs(&(ch.apply(&x) - expect)) < 1e-12);
    assert!(report.quantum_factor_p1 <= 1.0 - report.classical_factor + 1.0 + 1e-7);
    // classical factor of the uniform kernel is 0 (K averages everything)
    assert!(report.classical_factor < 1e-6, "classical {}", report.classical_factor);
    assert!(report.quantum_factor_pinf <= report.classical_factor + 1e-6);
}

#[test]
fn transfer_identity_kernel_is_identity() {
    let g = GroupSpec::klein_four();
    let rep: Vec<CMatrix> = (0..4)
        .map(|i| {
            let (x, z) = (i & 1, (i >> 1) & 1);
            PauliString::from_bits(1, x as u32, z as u32).unwrap().dense()
        })
        .collect();
    let mut kernel = vec![0.0; 4];
    kernel[0] = 4.0;
    let mut rng = rng_from_seed(19);
    let (ch, report) =
        transfer_finite_group(&g, &kernel, &rep, &[1, 2, 3], &[1.0, 1.0, 1.0], 20, &mut rng)
            .unwrap();
    let x = random_hermitian(&mut rng, 2);
    assert!(max_abs(&(ch.apply(&x) - &x)) < 1e-12);
    assert!((report.classical_factor - 1.0).abs() < 1e-7, "κ = 0 for the identity kernel");
}

#[test]
fn transfer_pauli_group_recovers_pauli_channel() {
    let mut rng = rng_from_seed(20);
    let pspec = crate::channels::tests::random_pauli_spec(&mut rng, 1, 4);
    let g = GroupSpec::pauli_group(1);
    let rep: Vec<CMatrix> = (0..4)
        .map(|i| {
            PauliString::from_bits(1, (i & 1) as u32, ((i >> 1) & 1) as u32)
                .unwrap()
                .dense()
        })
        .collect();
    let mut kernel = vec![0.0; 4];
    for (s, w) in pspec.terms() {
        let idx = {
            let dense = s.dense();
            (0..4)
                .find(|&i| max_abs(&(&rep[i] - &dense)) < 1e-12)
                .expect("string in rep")
        };
        kernel[idx] = w * 4.0;
    }
    let (ch, _) = transfer_finite_group(&g, &kernel, &rep, &[1, 2, 3], &[1.0, 1.0, 1.0], 5, &mut rng)
        .unwrap();
    let direct = pauli_channel(&pspec).unwrap();
    assert!(
        max_abs(&(ch.superop().matrix() - direct.superop().matrix())) < 1e-12,
        "transferred channel must equal the pauli channel"
    );
}

#[test]
fn gibbs_certificate_infinite_temperature() {
    let h = HamiltonianSpec::ising_chain(2, 1.0, 0.0);
    let mut rng = rng_from_seed(21);
    let cert = gibbs_contraction_certificate(&h, 0.0, &[0.3, 1.0], 6, &mut rng).unwrap();
    assert!(cert.kappa_beta < 1e-6, "κ(0) = {}", cert.kappa_beta);
    assert!(cert.applicable);
    for row in &cert.decay_rows {
        assert!(row.worst_ratio <= 1.0 + 1e-7, "exact e^{{−t}} decay at β = 0");
    }
}

#[test]
fn gibbs_certificate_single_site() {
    let h = HamiltonianSpec {
        n_sites: 1,
        site_dim: 2,
        terms: vec![(vec![0], pauli_matrix(3) * cr(0.9))],
    };
    let mut rng = rng_from_seed(22);
    let cert = gibbs_contraction_certificate(&h, 0.7, &[0.5, 2.0], 4, &mut rng).unwrap();
    // no cross-site commutators: κ(β) = 0 at every β
    assert!(cert.kappa_beta.abs() < 1e-9, "κ = {}", cert.kappa_beta);
    for row in &cert.decay_rows {
        assert!(row.worst_ratio <= 1.0 + 1e-7);
    }
}

#[test]
fn pauli_mixing_stated_constant_is_not_a_theorem() {
    // For I = {II, XI, ZZ} the string IY commutes with XI and anticommutes
    // with ZZ only, so its eigenvalue 1 − 2λ_ZZ saturates 1 − 2·minλ while
    // its jump is λ_ZZ-small; a state aligned with IY then violates the
    // bound (1−2minλ)ᵏ/(2minλ)·J by a factor approaching 2. The version
    // with the ‖·‖₁ ≤ 2W factor kept must hold.
    let pspec = PauliChannelSpec::new(vec![
        (PauliString::parse("II").unwrap(), 0.7),
        (PauliString::parse("XI").unwrap(), 0.2),
        (PauliString::parse("ZZ").unwrap(), 0.1),
    ])
    .unwrap();
    let iy = PauliString::parse("IY").unwrap().dense();
    let rho = DensityState::new(identity(4) * cr(0.25) + iy * cr(0.125)).unwrap();
    let rows = pauli_mixing_rows(&pspec, &rho, 6).unwrap();
    let mut violated = false;
    for r in &rows {
        // the instance saturates the corrected bound with equality, so the
        // comparison tolerance is the SDP solve accuracy
        assert!(
            r.measured <= r.bound_derived + 1e-7,
            "derived bound must hold: step {} measured {} vs {}",
            r.step,
            r.measured,
            r.bound_derived
        );
        if r.measured > r.bound_stated + 1e-9 {
            violated = true;
        }
    }
    assert!(
        violated,
        "the stated constant should be violated on this instance"
    );
}

#[test]
fn jump_diameter_vacuous_on_kernel_separated_pair() {
    let pspec = PauliChannelSpec::new(vec![
        (PauliString::parse("I").unwrap(), 0.5),
        (PauliString::parse("Z").unwrap(), 0.5),
    ])
    .unwrap();
    let ch = pauli_channel(&pspec).unwrap();
    let spec = pauli_seminorm(&pspec).unwrap();
    let mut k0 = CVector::zeros(2);
    k0[0] = ONE;
    let mut k1 = CVector::zeros(2);
    k1[1] = ONE;
    let r0 = DensityState::pure(&k0).unwrap();
    let r1 = DensityState::pure(&k1).unwrap();
    let rep = jump_diameter_bound(&spec, &ch, &r0, &r1, 1.0).unwrap();
    assert!(rep.vacuous, "kernel-separated pair must short-circuit to vacuous");
}
