//! Acceptance suite: one test per criterion, each printing a PASS/FAIL line
//! (run with `cargo test -p qcurv-cli --test acceptance -- --nocapture`).

use qcurv_core::channels::pauli::pauli_matrix;
use qcurv_core::channels::*;
use qcurv_core::curvature as curv;
use qcurv_core::cvmodels as cv;
use qcurv_core::matcore::*;
use qcurv_core::metrics::*;
use qcurv_core::optim;
use qcurv_core::sample::*;
use rand::Rng;
use std::time::Instant;

fn random_pauli_spec(rng: &mut impl Rng, n: usize, max_terms: usize) -> PauliChannelSpec {
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

fn verdict(name: &str, ok: bool, detail: String) -> bool {
    println!(
        "criterion {name}: {} — {detail}",
        if ok { "PASS" } else { "FAIL" }
    );
    ok
}

#[test]
fn criterion_01_pauli_eigenvalue_law() {
    let t0 = Instant::now();
    let mut rng = rng_from_seed(1);
    let mut worst = 0.0f64;
    for trial in 0..100 {
        let n = 1 + trial % 3;
        let spec = random_pauli_spec(&mut rng, n, (4usize.pow(n as u32)).min(10));
        let d = spec.dim();
        // dense oracle: act with Σ λ σ x σ through dense matrix products
        // (full matrices for n ≤ 2, matrix-vector chains for n = 3)
        for (gamma, mu) in spec.eigenvalues() {
            let g = gamma.dense();
            if n <= 2 {
                let mut out = zeros(d, d);
                for (alpha, w) in spec.terms() {
                    let a = alpha.dense();
                    out += &a * &g * &a * cr(*w);
                }
                let dense_mu = hs_inner(&g, &out).re / d as f64;
                worst = worst.max((dense_mu - mu).abs());
            } else {
                let v = random_ket(&mut rng, d);
                let gv = &g * &v;
                let mut out = CVector::zeros(d);
                for (alpha, w) in spec.terms() {
                    let a = alpha.dense();
                    out += &a * (&g * (&a * &v)) * cr(*w);
                }
                let dense_mu = (gv.adjoint() * &out)[(0, 0)].re / gv.norm_squared();
                worst = worst.max((dense_mu - mu).abs());
                // proportionality of the dense image confirms the eigenrelation
                let resid = (&out - &gv * cr(dense_mu)).norm();
                worst = worst.max(resid / gv.norm());
            }
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let ok = worst <= 1e-12 && elapsed < 10.0;
    assert!(
        verdict(
            "1 (pauli eigenvalue law)",
            ok,
            format!("max |μ_symbolic − μ_dense| = {worst:.2e}, runtime {elapsed:.1}s")
        ),
        "worst {worst:.3e}, elapsed {elapsed:.1}"
    );
}

#[test]
fn criterion_02_pauli_curvature_bound() {
    let mut rng = rng_from_seed(2);
    let mut worst_excess = f64::NEG_INFINITY;
    for trial in 0..100 {
        let n = 1 + trial % 3;
        let spec = random_pauli_spec(&mut rng, n, (4usize.pow(n as u32)).min(10));
        let bound = 1.0 - 2.0 * spec.min_weight();
        let fixed = spec.fixed_strings();
        for (g, mu) in spec.eigenvalues() {
            if !fixed.contains(&g) {
                worst_excess = worst_excess.max(mu.abs() - bound);
            }
        }
    }
    // 1-qubit depolarizing p = 0.25: structural bound 1 − 2·(0.25/3) = 5/6,
    // best Pauli witness 2/3. (The criterion text evaluates its own formula
    // to 11/12; 1 − 2·(0.25/3) is 5/6 — see the decisions ledger.)
    let dep = PauliChannelSpec::new(vec![
        (PauliString::parse("I").unwrap(), 0.75),
        (PauliString::parse("X").unwrap(), 0.25 / 3.0),
        (PauliString::parse("Y").unwrap(), 0.25 / 3.0),
        (PauliString::parse("Z").unwrap(), 0.25 / 3.0),
    ])
    .unwrap();
    let rep = curv::pauli_lipschitz_factor(&dep).unwrap();
    let formula = 1.0 - 2.0 * (0.25 / 3.0);
    let dep_ok = (rep.upper_bound_factor - formula).abs() < 1e-12
        && (rep.lower_bound_factor - 2.0 / 3.0).abs() < 1e-12;
    let ok = worst_excess <= 1e-12 && dep_ok;
    assert!(
        verdict(
            "2 (pauli curvature bound)",
            ok,
            format!(
                "max witness excess over 1−2minλ = {worst_excess:.2e}; depolarizing structural = {:.6} (= 1−2·(0.25/3)), witness = {:.6}",
                rep.upper_bound_factor, rep.lower_bound_factor
            )
        ),
        "excess {worst_excess:.3e}, dep_ok {dep_ok}"
    );
}

#[test]
fn criterion_03_pauli_mixing() {
    let t0 = Instant::now();
    let mut rng = rng_from_seed(3);
    let mut worst_stated = f64::NEG_INFINITY;
    let mut worst_derived = f64::NEG_INFINITY;
    for trial in 0..20 {
        let n = 1 + trial % 2;
        let spec = random_pauli_spec(&mut rng, n, (4usize.pow(n as u32)).min(8));
        let rho = random_state(&mut rng, spec.dim());
        let rows = curv::pauli_mixing_rows(&spec, &rho, 20).unwrap();
        for r in &rows {
            worst_stated = worst_stated.max(r.measured - r.bound_stated);
            worst_derived = worst_derived.max(r.measured - r.bound_derived);
        }
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let ok = worst_stated <= 1e-6 && elapsed < 120.0;
    // The derived bound (with the ‖·‖₁ ≤ 2W factor kept) must always hold.
    assert!(
        worst_derived <= 1e-6,
        "derived mixing bound violated by {worst_derived:.3e}"
    );
    assert!(
        verdict(
            "3 (pauli mixing)",
            ok,
            format!(
                "worst excess over stated bound = {worst_stated:.2e} (over 2× bound = {worst_derived:.2e}), runtime {elapsed:.0}s"
            )
        ),
        "stated-bound excess {worst_stated:.3e}"
    );
}

#[test]
fn criterion_04_sdp_oracles() {
    let mut rng = rng_from_seed(4);
    let mut worst_tn = 0.0f64;
    for trial in 0..50 {
        let d = 2 + trial % 7;
        let delta = random_hermitian(&mut rng, d);
        let oracle: f64 = herm_eigvals(&delta).unwrap().iter().map(|x| x.abs()).sum();
        let mut b = optim::LmiBuilder::new();
        let vars = b.add_herm_var(d, Some(&delta));
        let terms: Vec<(optim::VarId, CMatrix)> = optim::herm_basis(d)
            .iter()
            .zip(&vars)
            .map(|(e, v)| (*v, optim::herm_basis_matrix(d, *e)))
            .collect();
        b.add_opnorm_block(d, None, &terms, 1.0, &[]);
        let sol = optim::solve_sdp(&b.build(), &optim::SolveOptions::default()).unwrap();
        worst_tn = worst_tn.max((sol.value(optim::Sense::Max) - oracle).abs() / oracle.max(1.0));
    }
    let mut worst_gap = 0.0f64;
    for trial in 0..20 {
        let d = 2 + trial % 2;
        let cost = random_psd(&mut rng, d * d);
        let cost = &cost * cr(1.0 / op_norm(&cost).unwrap());
        let r1 = random_state(&mut rng, d);
        let r2 = random_state(&mut rng, d);
        let res = coupling_cost(&cost, &r1, &r2).unwrap();
        let dual =
            coupling_cost_dual(&cost, &r1, &r2, &optim::SolveOptions::default()).unwrap();
        worst_gap = worst_gap.max((res.value.expect_finite() - dual).abs());
    }
    let ok = worst_tn <= 1e-7 && worst_gap <= 1e-7;
    assert!(
        verdict(
            "4 (sdp oracles)",
            ok,
            format!("trace-norm relative error {worst_tn:.2e}; coupling primal-dual gap {worst_gap:.2e}")
        ),
        "tn {worst_tn:.3e}, coupling {worst_gap:.3e}"
    );
}

#[test]
fn criterion_05_bosonic_intertwining_and_ge() {
    let t0 = Instant::now();
    let n_max = 20usize;
    let sector = 10usize;
    let d = n_max + 1;
    let mut worst_resid = 0.0f64;
    let mut worst_kappa_gap = f64::INFINITY; // κ* − (1−λ−1e−4)
    let mut kappa_vs_sqrt = f64::INFINITY; // κ* − (1−√λ−1e−4)
    let mut rng = rng_from_seed(5);
    // vec-space indices of the ≤sector observable block
    let restrict: Vec<usize> = (0..=sector)
        .flat_map(|j| (0..=sector).map(move |i| j * d + i))
        .collect();
    for &lam in &[0.25f64, 0.5, 0.75] {
        let spec = cv::BeamSplitterSpec::thermal(lam, 1.0, n_max).unwrap();
        let ch = cv::bose_channel(&spec).unwrap();
        let resid = cv::intertwining_residual_on_sector(&spec, &ch, sector).unwrap();
        worst_resid = worst_resid.max(resid);
        let (a, adag, _) = cv::fock_ops(n_max).unwrap();
        let ds = DerivationStructure::symmetric(vec![a, adag], MeanKind::Logarithmic).unwrap();
        let states: Vec<DensityState> = (0..16)
            .map(|_| random_state_supported(&mut rng, d, sector + 1, 1e-12))
            .collect();
        let rep = curv::verify_ge(&ch, &ds, &states, (-1.0, 1.0), Some(&restrict)).unwrap();
        worst_kappa_gap = worst_kappa_gap.min(rep.kappa_star - (1.0 - lam - 1e-4));
        kappa_vs_sqrt = kappa_vs_sqrt.min(rep.kappa_star - (1.0 - lam.sqrt() - 1e-4));
    }
    let elapsed = t0.elapsed().as_secs_f64();
    let resid_ok = worst_resid <= 1e-8;
    let ge_ok = worst_kappa_gap >= 0.0;
    let ok = resid_ok && ge_ok && elapsed < 300.0;
    // The (1−κ)² bisection law gives κ* ≈ 1−√λ; that form must hold.
    assert!(
        kappa_vs_sqrt >= 0.0,
        "κ* fell below even 1−√λ−1e−4 by {kappa_vs_sqrt:.3e}"
    );
    assert!(
        verdict(
            "5 (bosonic intertwining + GE)",
            ok,
            format!(
                "sector residual {worst_resid:.2e} (required ≤ 1e-8); κ* − (1−λ−1e−4) = {worst_kappa_gap:.3e} (κ* − (1−√λ−1e−4) = {kappa_vs_sqrt:.3e}); runtime {elapsed:.0}s"
            )
        ),
        "residual {worst_resid:.3e}, ge slack {worst_kappa_gap:.3e}"
    );
}

/// Companion to criterion 5: the same residual drops below 1e-8 once the
/// cutoff leaves room for the thermal tail (the N = 20 figure is a property
/// of the configuration, not of the construction).
#[test]
fn criterion_05_companion_residual_scaling() {
    let spec = cv::BeamSplitterSpec::thermal(0.25, 1.0, 30).unwrap();
    let ch = cv::bose_channel(&spec).unwrap();
    let resid = cv::intertwining_residual_on_sector(&spec, &ch, 10).unwrap();
    println!("criterion 5 companion: residual at N=30, sector 10: {resid:.2e}");
    assert!(resid <= 1e-8, "N=30 residual {resid:.3e}");
}

#[test]
fn criterion_06_bosonic_regularity_and_mixing() {
    let n_max = 20usize;
    let sector = 10usize;
    let d = n_max + 1;
    let mut rng = rng_from_seed(6);
    let spec = cv::BeamSplitterSpec::thermal(0.5, 1.0, n_max).unwrap();
    let ch = cv::bose_channel(&spec).unwrap();
    let mut worst_slack = f64::INFINITY;
    let mut worst_mix = f64::INFINITY;
    for _ in 0..10 {
        let r1 = random_state_supported(&mut rng, d, sector + 1, 1e-12);
        let r2 = random_state_supported(&mut rng, d, sector + 1, 1e-12);
        let rep = cv::regularity_check(&spec, &ch, &r1, &r2).unwrap();
        worst_slack = worst_slack.min(rep.slack);
        let rows = cv::mixing_chain(&spec, &ch, &r1, &r2, 6).unwrap();
        for row in &rows {
            worst_mix = worst_mix.min(row.corollary_bound - row.measured);
            worst_slack = worst_slack.min(row.regularity_bound - row.measured);
        }
    }
    let ok = worst_slack >= -1e-6 && worst_mix >= 0.0;
    assert!(
        verdict(
            "6 (bosonic regularity + mixing)",
            ok,
            format!("worst regularity slack {worst_slack:.2e}; worst corollary-bound margin {worst_mix:.2e}")
        ),
        "slack {worst_slack:.3e}, mixing {worst_mix:.3e}"
    );
}

#[test]
fn criterion_07_gibbs_certificate() {
    let t0 = Instant::now();
    let h = HamiltonianSpec::ising_chain(3, 1.0, 0.0);
    let mut rng = rng_from_seed(7);
    let cert = curv::gibbs_contraction_certificate(
        &h,
        0.05,
        &[0.1, 0.5, 1.0, 2.0, 5.0],
        20,
        &mut rng,
    )
    .unwrap();
    let decay_ok = cert
        .decay_rows
        .iter()
        .all(|r| r.worst_ratio <= 1.0 + 1e-7);
    let elapsed = t0.elapsed().as_secs_f64();
    let ok = cert.applicable && decay_ok && elapsed < 300.0;
    assert!(
        verdict(
            "7 (gibbs certificate)",
            ok,
            format!(
                "κ(β=0.05) = {:.4} (< 1: {}); decay bound holds on 20 observables × 5 times: {decay_ok}; runtime {elapsed:.0}s",
                cert.kappa_beta, cert.applicable
            )
        ),
        "kappa(beta) = {:.4}, applicable {}",
        cert.kappa_beta,
        cert.applicable
    );
}

#[test]
fn criterion_08_gap_vs_curvature() {
    let mut rng = rng_from_seed(8);
    let mut worst = f64::INFINITY;
    for trial in 0..50 {
        let n = 1 + trial % 2;
        let spec = random_pauli_spec(&mut rng, n, (4usize.pow(n as u32)).min(8));
        let ch = pauli_channel(&spec).unwrap();
        let omega = DensityState::maximally_mixed(spec.dim());
        let e = pauli_conditional_expectation(&spec);
        let gap = curv::spectral_gap(&ch, &omega, &e).unwrap();
        let kappa = 2.0 * spec.min_weight();
        worst = worst.min(gap - kappa);
    }
    let ok = worst >= -1e-9;
    assert!(
        verdict(
            "8 (spectral gap vs curvature)",
            ok,
            format!("min(gap − κ) over 50 random Pauli channels = {worst:.2e}")
        ),
        "worst {worst:.3e}"
    );
}

#[test]
fn criterion_09_tc_inequality() {
    let dims = [2usize, 2];
    let es = vec![
        ConditionalExpectation::site_replacement(&dims, 0).unwrap(),
        ConditionalExpectation::site_replacement(&dims, 1).unwrap(),
    ];
    let sn = SemiNormSpec::oscillator(vec![2, 2]).unwrap();
    let mut rng = rng_from_seed(9);
    let c = curv::measure_tc_constant(&es, &sn, 6, &mut rng).unwrap().max(1.0);
    let budget = curv::SearchBudget { restarts: 6, iters: 5 };
    let mut worst = f64::INFINITY;
    let mut premise_ok = true;
    for _ in 0..50 {
        let rho = random_state(&mut rng, 4);
        let rep = curv::tc_inequality_check(&es, &sn, 0.5, c, &rho, &budget, &mut rng).unwrap();
        if !rep.vacuous {
            worst = worst.min(rep.slack);
            premise_ok &= rep.premise_ok;
        }
    }
    let ok = worst >= -1e-7 && premise_ok;
    assert!(
        verdict(
            "9 (TC inequality)",
            ok,
            format!("min slack over 50 states = {worst:.3e}, premises hold: {premise_ok}")
        ),
        "worst {worst:.3e}"
    );
}

#[test]
fn criterion_10_ti_inequality() {
    let c = cr(1.0 / (2.0 * 2.0f64.sqrt()));
    let sigma = DensityState::maximally_mixed(2);
    let ds = DerivationStructure::new(
        vec![pauli_matrix(1) * c, pauli_matrix(2) * c, pauli_matrix(3) * c],
        vec![0.0; 3],
        MeanKind::WeightedExponential,
        Some(sigma),
    )
    .unwrap();
    let e = ConditionalExpectation::trace_average(2);
    let gen = GeneratorSpec::new(
        SuperOp::new(2, e.channel().superop().matrix() - SuperOp::identity(2).matrix()).unwrap(),
        None,
    )
    .unwrap();
    let mut rng = rng_from_seed(10);
    let mut worst_slack = f64::INFINITY;
    let mut worst_dirichlet = 0.0f64;
    for _ in 0..20 {
        let rho = random_state(&mut rng, 2);
        let rep =
            curv::ti_inequality_check(&ds, &gen, 1.0, 1.0, &rho, &[0.25, 1.0, 2.0], &mut rng)
                .unwrap();
        worst_slack = worst_slack.min(rep.slack);
        worst_dirichlet = worst_dirichlet.max(rep.dirichlet_identity_defect);
    }
    let ok = worst_slack >= 0.0 && worst_dirichlet <= 1e-10;
    assert!(
        verdict(
            "10 (TI inequality)",
            ok,
            format!("min slack = {worst_slack:.3e}; Dirichlet identity defect {worst_dirichlet:.2e}")
        ),
        "slack {worst_slack:.3e}, dirichlet {worst_dirichlet:.3e}"
    );
}

#[test]
fn criterion_11_fermionic_beam_splitter() {
    let mut rng = rng_from_seed(11);
    let mut worst_car = 0.0f64;
    let mut worst_rot = 0.0f64;
    let mut worst_lip = f64::NEG_INFINITY;
    for &n in &[1usize, 2] {
        let alg = cv::clifford_generators(n).unwrap();
        for (i, ci) in alg.generators.iter().enumerate() {
            for (j, cj) in alg.generators.iter().enumerate() {
                let anti = ci * cj + cj * ci;
                let expect = if i == j {
                    identity(alg.dim()) * cr(2.0)
                } else {
                    zeros(alg.dim(), alg.dim())
                };
                worst_car = worst_car.max(max_abs(&(anti - expect)));
            }
        }
        for &lam in &[0.25f64, 0.5] {
            let env = DensityState::maximally_mixed(1 << n);
            let fb = cv::fermi_beam_splitter(lam, n, &env).unwrap();
            worst_rot = worst_rot.max(fb.report.rotation_residual);
            let spec = SemiNormSpec::commutator_max(fb.algebra.generators.clone()).unwrap();
            let budget = curv::SearchBudget { restarts: 8, iters: 6 };
            let (factor, _) = curv::witness_search(&fb.channel, &spec, &budget, &mut rng).unwrap();
            worst_lip = worst_lip.max(factor - lam.sqrt());
        }
    }
    let ok = worst_car <= 1e-14 && worst_rot <= 1e-10 && worst_lip <= 1e-8;
    assert!(
        verdict(
            "11 (fermionic beam splitter)",
            ok,
            format!("CAR defect {worst_car:.2e}; rotation residual {worst_rot:.2e}; Lipschitz excess over √λ = {worst_lip:.2e}")
        ),
        "car {worst_car:.3e}, rot {worst_rot:.3e}, lip {worst_lip:.3e}"
    );
}

#[test]
fn criterion_12_operator_lemma() {
    let mut rng = rng_from_seed(12);
    let mut worst = f64::INFINITY;
    for _ in 0..100 {
        let d = 4;
        let a = random_psd(&mut rng, d) + identity(d) * cr(0.1);
        let g = ginibre(&mut rng, d, d);
        let c = &g * cr(0.7 / op_norm(&g).unwrap());
        let b = &c.adjoint() * &a * &c + random_psd(&mut rng, d) * cr(0.3) + identity(d) * cr(0.05);
        let b_inv = pinv_on_support(&b, 1e-12).unwrap();
        let a_inv = pinv_on_support(&a, 1e-12).unwrap();
        let margin = optim::psd_gap(&(&c * b_inv * c.adjoint()), &a_inv).unwrap();
        worst = worst.min(margin);
    }
    let ok = worst >= -1e-9;
    assert!(
        verdict(
            "12 (operator lemma)",
            ok,
            format!("min conclusion margin over 100 premise-satisfying triples = {worst:.3e}")
        ),
        "worst {worst:.3e}"
    );
}

#[test]
fn criterion_13_determinism() {
    let dir = std::env::temp_dir().join("qcurv_determinism");
    std::fs::create_dir_all(&dir).unwrap();
    let spec_path = dir.join("spec.json");
    std::fs::write(
        &spec_path,
        r#"{
  "channel": {"kind": "depolarizing_semigroup", "dim": 2, "time": 0.7},
  "samples": 5
}"#,
    )
    .unwrap();
    let run = |seed: &str, out: &std::path::Path| {
        let status = std::process::Command::new(env!("CARGO_BIN_EXE_qcurv"))
            .args([
                "certify-ti",
                "--spec",
                spec_path.to_str().unwrap(),
                "--seed",
                seed,
                "--out",
                out.to_str().unwrap(),
            ])
            .status()
            .unwrap();
        assert!(status.success(), "qcurv exited with {status}");
        std::fs::read(out).unwrap()
    };
    let a = run("42", &dir.join("a.json"));
    let b = run("42", &dir.join("b.json"));
    let c = run("7", &dir.join("c.json"));
    let ok = a == b && a != c;
    assert!(
        verdict(
            "13 (determinism)",
            ok,
            format!(
                "identical seed ⇒ byte-identical reports: {}; different seed differs: {}",
                a == b,
                a != c
            )
        ),
        "determinism failed"
    );
}
