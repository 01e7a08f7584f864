//! Truncated Fock-space operators and the two-mode beam-splitter unitary.

use crate::error::{Error, Result};
use crate::matcore::{cr, zeros, CMatrix, CVector, DensityState, ONE};

/// Truncated single-mode operators `(a, a†, n)` on the (N+1)-dimensional
/// space; `[a, a†] = 1 − (N+1)|N⟩⟨N|` at the cutoff.
pub fn fock_ops(n_max: usize) -> Result<(CMatrix, CMatrix, CMatrix)> {
    if n_max < 1 {
        return Err(Error::pre("fock cutoff must be ≥ 1"));
    }
    let d = n_max + 1;
    let mut a = zeros(d, d);
    for k in 1..d {
        a[(k - 1, k)] = cr((k as f64).sqrt());
    }
    let adag = a.adjoint();
    let num = &adag * &a;
    Ok((a, adag, num))
}

/// Sector decomposition of the two-mode truncated space: total photon number
/// `s` carries the states `|k, s−k⟩` with `k ∈ [max(0, s−N), min(s, N)]`.
pub struct BeamSplitterUnitary {
    pub n_max: usize,
    pub matrix: CMatrix,
}

/// `U_λ = exp((a†b − b†a)·arccos √λ)`, exponentiated exactly inside each
/// total-photon-number sector (the generator conserves `a†a + b†b`), so the
/// only error source is the cutoff itself.
pub fn beam_splitter_unitary(lambda: f64, n_max: usize) -> Result<BeamSplitterUnitary> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::pre(format!("transmissivity {lambda} outside [0,1]")));
    }
    let theta = lambda.sqrt().acos();
    let d = n_max + 1;
    let dd = d * d;
    let idx = |k1: usize, k2: usize| k1 * d + k2;
    let mut u = zeros(dd, dd);
    for s in 0..=(2 * n_max) {
        let k_lo = s.saturating_sub(n_max);
        let k_hi = s.min(n_max);
        let nb = k_hi - k_lo + 1;
        // generator of the sector rotation: G[k+1,k] = θ√((k+1)(s−k)),
        // G[k−1,k] = −θ√(k(s−k+1))  (skew-symmetric, real)
        let mut g = zeros(nb, nb);
        for (slot, k) in (k_lo..=k_hi).enumerate() {
            if k + 1 <= k_hi {
                let c = theta * (((k + 1) * (s - k)) as f64).sqrt();
                g[(slot + 1, slot)] = cr(c);
                g[(slot, slot + 1)] = cr(-c);
            }
        }
        let us = crate::matcore::mat_exp(&g)?;
        for (r, kr) in (k_lo..=k_hi).enumerate() {
            for (c, kc) in (k_lo..=k_hi).enumerate() {
                u[(idx(kr, s - kr), idx(kc, s - kc))] = us[(r, c)];
            }
        }
    }
    Ok(BeamSplitterUnitary { n_max, matrix: u })
}

/// Truncated thermal state `e^{−β a†a}/Z` (geometric diagonal).
///
/// β ≤ 0 is admitted at finite cutoff (the trace stays finite) but has no
/// infinite-dimensional limit; the truncation weight at the top level is the
/// caller's leakage measure.
pub fn thermal_state(beta: f64, n_max: usize) -> Result<DensityState> {
    let d = n_max + 1;
    let w: Vec<f64> = (0..d).map(|k| (-beta * k as f64).exp()).collect();
    let z: f64 = w.iter().sum();
    DensityState::new(CMatrix::from_diagonal(&CVector::from_iterator(
        d,
        w.iter().map(|&x| cr(x / z)),
    )))
}

/// Mean photon number `Tr(a†a ρ)`.
pub fn energy(rho: &DensityState) -> Result<f64> {
    let d = rho.dim();
    let (_, _, num) = fock_ops(d - 1)?;
    Ok((num * rho.matrix()).diagonal().iter().map(|z| z.re).sum())
}

/// Projector onto the ≤`sector` photon-number block of one mode.
pub fn sector_projector(n_max: usize, sector: usize) -> CMatrix {
    let d = n_max + 1;
    let mut p = zeros(d, d);
    for k in 0..=sector.min(n_max) {
        p[(k, k)] = ONE;
    }
    p
}
