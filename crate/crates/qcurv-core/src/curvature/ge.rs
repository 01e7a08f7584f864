//! Gradient-estimate verification through the superoperator characterization
//! `P† M_ρ P ⪯ (1−κ)² M_{P†ρ}`.

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::{herm_eigvals, hermitize, CMatrix, DensityState};
use crate::metrics::{metric_tensor_superop, DerivationStructure};

#[derive(Debug, Clone)]
pub struct GeSample {
    pub kappa_star: f64,
    pub margin_at_star: f64,
    pub margin_above: f64,
}

#[derive(Debug, Clone)]
pub struct GeReport {
    /// min over the sampled states of the per-sample largest κ.
    pub kappa_star: f64,
    pub per_sample: Vec<GeSample>,
}

pub const GE_MARGIN_TOL: f64 = 1e-9;
pub const GE_KAPPA_TOL: f64 = 1e-6;

fn min_eig_compressed(m: &CMatrix, restrict: Option<&[usize]>) -> Result<f64> {
    let vals = match restrict {
        None => herm_eigvals(m)?,
        Some(idx) => {
            let sub = CMatrix::from_fn(idx.len(), idx.len(), |r, c| m[(idx[r], idx[c])]);
            herm_eigvals(&sub)?
        }
    };
    Ok(vals[0])
}

/// Bisect the largest κ in `[lo, hi]` with
/// `psd_gap(P† M_ρ P, (1−κ)² M_{P†ρ}) ≥ −1e−9` for each sampled state;
/// `restrict` optionally compresses the check to a vectorized-observable
/// index subset (the ≤N/2-photon sector of truncated models).
pub fn verify_ge(
    ch: &Channel,
    ds: &DerivationStructure,
    states: &[DensityState],
    kappa_range: (f64, f64),
    restrict: Option<&[usize]>,
) -> Result<GeReport> {
    if ch.dim() != ds.dim() {
        return Err(Error::dim("channel and derivation dimensions differ"));
    }
    if states.is_empty() {
        return Err(Error::pre("verify_ge needs at least one sampled state"));
    }
    let s = ch.superop().matrix();
    let mut per_sample = Vec::with_capacity(states.len());
    let mut kappa_star = f64::INFINITY;
    for rho in states {
        let m_rho = metric_tensor_superop(rho, ds)?;
        let moved = DensityState::new(hermitize(&ch.apply_pre(rho.matrix())))?;
        let m_moved = metric_tensor_superop(&moved, ds)?;
        if crate::matcore::max_abs(&m_moved) < 1e-14 {
            return Err(Error::UnsupportedStructure(
                "metric tensor vanishes on the moved state".into(),
            ));
        }
        let base = s.adjoint() * &m_rho * s;
        let margin_at = |kappa: f64| -> Result<f64> {
            let scale = (1.0 - kappa) * (1.0 - kappa);
            let diff = hermitize(&(&m_moved * crate::matcore::cr(scale) - &base));
            min_eig_compressed(&diff, restrict)
        };
        let (mut lo, mut hi) = kappa_range;
        if margin_at(lo)? < -GE_MARGIN_TOL {
            // not even the lower end is feasible
            per_sample.push(GeSample {
                kappa_star: f64::NEG_INFINITY,
                margin_at_star: margin_at(lo)?,
                margin_above: f64::NEG_INFINITY,
            });
            kappa_star = f64::NEG_INFINITY;
            continue;
        }
        while hi - lo > GE_KAPPA_TOL {
            let mid = 0.5 * (lo + hi);
            if margin_at(mid)? >= -GE_MARGIN_TOL {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let sample = GeSample {
            kappa_star: lo,
            margin_at_star: margin_at(lo)?,
            margin_above: margin_at((lo + 1e-3).min(kappa_range.1))?,
        };
        kappa_star = kappa_star.min(lo);
        per_sample.push(sample);
    }
    Ok(GeReport {
        kappa_star,
        per_sample,
    })
}

/// Direct two-sided check `‖∂P(x)‖²_ρ ≤ (1−κ)²‖∂x‖²_{P†ρ}` on one observable.
pub fn ge_direct_check(
    ch: &Channel,
    ds: &DerivationStructure,
    rho: &DensityState,
    x: &CMatrix,
    kappa: f64,
) -> Result<(f64, f64)> {
    let lhs = crate::metrics::grad_norm_sq(&ch.apply(x), rho, ds)?;
    let moved = DensityState::new(hermitize(&ch.apply_pre(rho.matrix())))?;
    let rhs = crate::metrics::grad_norm_sq(x, &moved, ds)? * (1.0 - kappa) * (1.0 - kappa);
    Ok((lhs, rhs))
}
