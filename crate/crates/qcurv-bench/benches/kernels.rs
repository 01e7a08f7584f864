use criterion::{black_box, criterion_group, criterion_main, Criterion};
use qcurv_bench::*;
use qcurv_core::channels::pauli_superop;
use qcurv_core::matcore::{herm_eig, herm_eigvals, mat_exp, op_norm, cr};
use qcurv_core::metrics::{w1_dual, SemiNormSpec};
use qcurv_core::optim::{herm_basis, herm_basis_matrix, solve_sdp, LmiBuilder, SolveOptions, VarId};
use qcurv_core::sample::{random_state, rng_from_seed};

fn bench_eig(c: &mut Criterion) {
    for d in [32usize, 128] {
        let m = fixture_hermitian(d);
        c.bench_function(&format!("herm_eig_{d}"), |b| {
            b.iter(|| herm_eig(black_box(&m)).unwrap())
        });
        c.bench_function(&format!("herm_eigvals_{d}"), |b| {
            b.iter(|| herm_eigvals(black_box(&m)).unwrap())
        });
    }
}

fn bench_expm(c: &mut Criterion) {
    let m = fixture_hermitian(48) * cr(0.3);
    c.bench_function("mat_exp_48", |b| b.iter(|| mat_exp(black_box(&m)).unwrap()));
}

fn bench_trace_norm_sdp(c: &mut Criterion) {
    let delta = fixture_hermitian(6);
    c.bench_function("sdp_trace_norm_6", |b| {
        b.iter(|| {
            let mut lb = LmiBuilder::new();
            let vars = lb.add_herm_var(6, Some(&delta));
            let terms: Vec<(VarId, _)> = herm_basis(6)
                .iter()
                .zip(&vars)
                .map(|(e, v)| (*v, herm_basis_matrix(6, *e)))
                .collect();
            lb.add_opnorm_block(6, None, &terms, 1.0, &[]);
            solve_sdp(&lb.build(), &SolveOptions::default()).unwrap()
        })
    });
}

fn bench_pauli(c: &mut Criterion) {
    let spec = fixture_depolarizing(0.25);
    c.bench_function("pauli_superop_1q", |b| {
        b.iter(|| pauli_superop(black_box(&spec)))
    });
    c.bench_function("pauli_eigenvalues_1q", |b| {
        b.iter(|| black_box(&spec).eigenvalues())
    });
}

fn bench_w1(c: &mut Criterion) {
    let mut rng = rng_from_seed(7);
    let spec = SemiNormSpec::operator_norm(4);
    let r1 = random_state(&mut rng, 4);
    let r2 = random_state(&mut rng, 4);
    c.bench_function("w1_trace_distance_4", |b| {
        b.iter(|| w1_dual(black_box(&spec), black_box(&r1), black_box(&r2)).unwrap())
    });
    let _ = op_norm(r1.matrix()).unwrap();
}

criterion_group!(
    benches,
    bench_eig,
    bench_expm,
    bench_trace_norm_sdp,
    bench_pauli,
    bench_w1
);
criterion_main!(benches);
