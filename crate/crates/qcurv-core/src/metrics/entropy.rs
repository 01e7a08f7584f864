//! Quantum relative entropy.

use crate::error::{Error, Result};
use crate::matcore::{herm_eig, trace_norm, CMatrix, DensityState};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyValue {
    Finite(f64),
    Infinite,
}

impl EntropyValue {
    pub fn expect_finite(&self) -> f64 {
        match self {
            EntropyValue::Finite(v) => *v,
            EntropyValue::Infinite => panic!("relative entropy is infinite"),
        }
    }
}

/// `D(ρ‖σ) = Tr(ρ log ρ − ρ log σ)`; +∞ when supp(ρ) ⊄ supp(σ).
///
/// The Pinsker bound `D ≥ ½‖ρ−σ‖₁²` is asserted as a post-check.
pub fn relative_entropy(rho: &DensityState, sigma: &DensityState) -> Result<EntropyValue> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim("relative_entropy: dimension mismatch"));
    }
    let (svals, su) = herm_eig(sigma.matrix())?;
    let smax = svals.iter().cloned().fold(0.0f64, f64::max).max(1e-300);
    let kernel_cut = 1e-12 * smax;
    // support condition: ⟨k|ρ|k⟩ must vanish on ker σ
    for (i, &sv) in svals.iter().enumerate() {
        if sv <= kernel_cut {
            let col = su.column(i);
            let overlap = (col.adjoint() * rho.matrix() * col)[(0, 0)].re;
            if overlap > 1e-10 {
                return Ok(EntropyValue::Infinite);
            }
        }
    }
    let (rvals, ru) = herm_eig(rho.matrix())?;
    let mut d_val = 0.0;
    // Tr(ρ log ρ)
    for &rv in &rvals {
        if rv > 1e-14 {
            d_val += rv * rv.ln();
        }
    }
    // −Tr(ρ log σ) = −Σ_k log(s_k) ⟨k|ρ|k⟩
    for (i, &sv) in svals.iter().enumerate() {
        if sv > kernel_cut {
            let col = su.column(i);
            let overlap = (col.adjoint() * rho.matrix() * col)[(0, 0)].re.max(0.0);
            d_val -= overlap * sv.ln();
        }
    }
    let _ = ru;
    let tn = trace_norm(&(rho.matrix() - sigma.matrix()));
    if d_val < 0.5 * tn * tn - 1e-9 {
        return Err(Error::Solver(format!(
            "Pinsker post-check failed: D = {d_val:.6e} < ½‖ρ−σ‖₁² = {:.6e}",
            0.5 * tn * tn
        )));
    }
    Ok(EntropyValue::Finite(d_val.max(0.0)))
}

/// `Tr(ρ f(ρ))`-style helper used by tests.
pub fn von_neumann_entropy(rho: &DensityState) -> Result<f64> {
    let (vals, _) = herm_eig(rho.matrix())?;
    Ok(-vals
        .iter()
        .filter(|&&v| v > 1e-14)
        .map(|&v| v * v.ln())
        .sum::<f64>())
}

pub type _Unused = CMatrix;
