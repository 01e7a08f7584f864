//! Seeded random generators for matrices, states and unitaries.
//!
//! All sampling in the crate flows through a caller-supplied RNG so that
//! reports are reproducible under a fixed seed.

use crate::matcore::{cr, hermitize, herm_eig, zeros, CMatrix, CVector, Complex64, DensityState};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn std_normal(rng: &mut impl Rng) -> f64 {
    // Box-Muller; avoids a rand_distr dependency for one distribution.
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

pub fn ginibre(rng: &mut impl Rng, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(std_normal(rng), std_normal(rng))
    })
}

pub fn random_hermitian(rng: &mut impl Rng, d: usize) -> CMatrix {
    hermitize(&ginibre(rng, d, d))
}

pub fn random_psd(rng: &mut impl Rng, d: usize) -> CMatrix {
    let g = ginibre(rng, d, d);
    &g * g.adjoint()
}

/// Full-rank state from the Ginibre ensemble (Hilbert-Schmidt measure).
pub fn random_state(rng: &mut impl Rng, d: usize) -> DensityState {
    DensityState::from_unnormalized(random_psd(rng, d)).expect("ginibre state is valid")
}

/// Rank-`r` state.
pub fn random_state_rank(rng: &mut impl Rng, d: usize, r: usize) -> DensityState {
    let g = ginibre(rng, d, r.max(1));
    DensityState::from_unnormalized(&g * g.adjoint()).expect("ginibre state is valid")
}

/// State supported on the leading `support` basis vectors, floored to full rank.
pub fn random_state_supported(rng: &mut impl Rng, d: usize, support: usize, floor: f64) -> DensityState {
    let s = support.min(d);
    let g = ginibre(rng, s, s);
    let core = &g * g.adjoint();
    let mut m = zeros(d, d);
    m.view_mut((0, 0), (s, s)).copy_from(&core);
    DensityState::from_unnormalized(m)
        .expect("supported state is valid")
        .floored(floor)
}

pub fn random_ket(rng: &mut impl Rng, d: usize) -> CVector {
    let v = CVector::from_fn(d, |_, _| Complex64::new(std_normal(rng), std_normal(rng)));
    let n = v.norm();
    v * cr(1.0 / n)
}

/// Haar-random unitary via QR of a Ginibre matrix.
pub fn haar_unitary(rng: &mut impl Rng, d: usize) -> CMatrix {
    let g = ginibre(rng, d, d);
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    // Fix the phase convention so the distribution is Haar.
    for j in 0..d {
        let rjj = r[(j, j)];
        let phase = if rjj.norm() > 0.0 { rjj / cr(rjj.norm()) } else { cr(1.0) };
        let col = q.column(j) * phase.conj();
        q.set_column(j, &col);
    }
    q
}

/// Random traceless Hermitian in the range of a Hermitian PSD superoperator
/// matrix (used to sample valid metric-tensor arguments).
pub fn random_in_range(rng: &mut impl Rng, psd_superop: &CMatrix, d: usize) -> CMatrix {
    let x = random_hermitian(rng, d);
    let v = crate::matcore::vec_mat(&x);
    let y = psd_superop * v;
    let m = hermitize(&crate::matcore::unvec(&y, d));
    let tr = crate::matcore::trace(&m).re / d as f64;
    m - crate::matcore::identity(d) * cr(tr)
}

/// Random unit-norm eigenvector-ish direction, for witness searches.
pub fn random_direction(rng: &mut impl Rng, d: usize) -> CMatrix {
    let h = random_hermitian(rng, d);
    let (_vals, u) = herm_eig(&h).expect("random hermitian eig");
    let v = u.column(0).into_owned();
    CMatrix::from_fn(d, d, |i, j| v[i] * v[j].conj())
}

/// Kraus family of a random channel via an isometric dilation (QR of a
/// Ginibre matrix); satisfies `Σ K†K = 1` exactly up to round-off.
pub fn random_kraus_set(rng: &mut impl Rng, d: usize, n_kraus: usize) -> Vec<CMatrix> {
    let g = ginibre(rng, d * n_kraus, d);
    let q = g.qr().q();
    (0..n_kraus)
        .map(|k| CMatrix::from_fn(d, d, |i, j| q[(k * d + i, j)]))
        .collect()
}
