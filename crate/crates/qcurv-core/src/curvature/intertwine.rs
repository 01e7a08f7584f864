//! Intertwining verification `∂P = P̂∂` plus the operator conditions
//! certifying gradient estimates.

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::{
    herm_eig, hermitize, kron, op_norm, unvec, vec_mat, zeros, CMatrix, DensityState, SuperOp,
};
use crate::metrics::DerivationStructure;

/// Block matrix of superoperators describing `P̂ : ⊕_j M → ⊕_j M`.
#[derive(Debug, Clone)]
pub struct HatMap {
    pub blocks: Vec<Vec<Option<SuperOp>>>,
}

impl HatMap {
    /// `P̂ = c·(P ⊕ … ⊕ P)`: the beam-splitter form.
    pub fn scaled_diagonal(ch: &Channel, c: f64, parts: usize) -> Self {
        let s = ch.superop().scale(crate::matcore::cr(c));
        let blocks = (0..parts)
            .map(|i| {
                (0..parts)
                    .map(|j| if i == j { Some(s.clone()) } else { None })
                    .collect()
            })
            .collect();
        HatMap { blocks }
    }

    /// Diagonal with one superoperator per component.
    pub fn diagonal(parts: Vec<SuperOp>) -> Self {
        let n = parts.len();
        let blocks = parts
            .into_iter()
            .enumerate()
            .map(|(i, s)| {
                (0..n)
                    .map(|j| if i == j { Some(s.clone()) } else { None })
                    .collect()
            })
            .collect();
        HatMap { blocks }
    }

    pub fn parts(&self) -> usize {
        self.blocks.len()
    }
}

#[derive(Debug, Clone)]
pub struct IntertwiningReport {
    /// `max_j max_basis ‖∂_j P(x) − (P̂ ∂x)_j‖` over a full operator basis.
    pub residual: f64,
    /// Smallest C with `P̂† l(ρ) P̂ ⪯ C·l(P†ρ)` over the sampled states
    /// (∞ when the range condition fails), and the right-action analogue.
    pub c_left: f64,
    pub c_right: f64,
}

/// Residual of `∂_j P = (P̂ ∂)_j` over the matrix-unit basis, plus the
/// smallest feasible constants in the operator conditions, sampled on states.
pub fn verify_intertwining(
    ch: &Channel,
    ds: &DerivationStructure,
    hat: &HatMap,
    sample_states: &[DensityState],
) -> Result<IntertwiningReport> {
    let d = ch.dim();
    let j_parts = ds.len();
    if hat.parts() != j_parts {
        return Err(Error::dim("hat map block count must match the derivation"));
    }
    // residual superoperators R_j = D_j S_P − Σ_k Ĥ_{jk} D_k
    let mut worst = 0.0f64;
    for j in 0..j_parts {
        let mut r = ds.derivation(j).compose(ch.superop())?.matrix().clone();
        for k in 0..j_parts {
            if let Some(h) = &hat.blocks[j][k] {
                r -= h.matrix() * ds.derivation(k).matrix();
            }
        }
        for col_j in 0..d {
            for col_i in 0..d {
                let mut e = zeros(d, d);
                e[(col_i, col_j)] = crate::matcore::ONE;
                let out = unvec(&(&r * vec_mat(&e)), d);
                worst = worst.max(op_norm(&out)?);
            }
        }
    }

    // conditions (ii)/(iii): big block operators on ⊕_j M
    let dd = d * d;
    let big = j_parts * dd;
    let hat_mat = {
        let mut m = zeros(big, big);
        for j in 0..j_parts {
            for k in 0..j_parts {
                if let Some(h) = &hat.blocks[j][k] {
                    m.view_mut((j * dd, k * dd), (dd, dd)).copy_from(h.matrix());
                }
            }
        }
        m
    };
    let mut c_left = 0.0f64;
    let mut c_right = 0.0f64;
    for rho in sample_states {
        let moved = hermitize(&ch.apply_pre(rho.matrix()));
        for right in [false, true] {
            let weight = |m: &CMatrix| -> CMatrix {
                // l(ρ) = 1⊗ρ, r(ρ) = ρᵀ⊗1 per block
                let base = if right {
                    kron(&m.transpose(), &crate::matcore::identity(d))
                } else {
                    kron(&crate::matcore::identity(d), m)
                };
                let mut out = zeros(big, big);
                for j in 0..j_parts {
                    out.view_mut((j * dd, j * dd), (dd, dd)).copy_from(&base);
                }
                out
            };
            let a = hermitize(&(hat_mat.adjoint() * weight(rho.matrix()) * &hat_mat));
            let b = hermitize(&weight(&moved));
            let c = smallest_dominating_constant(&a, &b)?;
            if right {
                c_right = c_right.max(c);
            } else {
                c_left = c_left.max(c);
            }
        }
    }
    Ok(IntertwiningReport {
        residual: worst,
        c_left,
        c_right,
    })
}

/// Smallest C with `A ⪯ C·B` for PSD A, B (∞ if ran(A) ⊄ ran(B)).
pub fn smallest_dominating_constant(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    let b_pinv_half = {
        let (vals, u) = herm_eig(b)?;
        let lmax = vals.iter().cloned().fold(0.0f64, f64::max).max(1e-300);
        let d = vals.len();
        let diag = CMatrix::from_diagonal(&crate::matcore::CVector::from_iterator(
            d,
            vals.iter().map(|&x| {
                if x > 1e-10 * lmax {
                    crate::matcore::cr(1.0 / x.sqrt())
                } else {
                    crate::matcore::ZERO
                }
            }),
        ));
        &u * diag * u.adjoint()
    };
    // range check: A must vanish on ker B
    let proj_range = &b_pinv_half * b * &b_pinv_half; // projector onto ran(B)
    let d = a.nrows();
    let leak = hermitize(
        &((crate::matcore::identity(d) - &proj_range) * a * (crate::matcore::identity(d) - &proj_range)),
    );
    let a_scale = crate::matcore::max_abs(a).max(1e-30);
    if crate::matcore::max_abs(&leak) > 1e-8 * a_scale {
        return Ok(f64::INFINITY);
    }
    let m = hermitize(&(&b_pinv_half * a * &b_pinv_half));
    let vals = crate::matcore::herm_eigvals(&m)?;
    Ok(vals[vals.len() - 1].max(0.0))
}

/// The Pauli intertwining blocks: `P̂_β = (1−2λ(β))·P^{(β)}` with
/// `P^{(β)}(x) = (1−2λ(β))⁻¹[(λ_0−λ_β)x + Σ_{α∉{0,β}} (−1)^{c(α,β)} λ_α σ_α x σ_α]`.
pub fn pauli_hat_map(pspec: &crate::channels::PauliChannelSpec) -> Result<(DerivationStructure, HatMap)> {
    let non_identity: Vec<(crate::channels::PauliString, f64)> = pspec
        .terms()
        .iter()
        .filter(|(s, _)| !s.is_identity())
        .cloned()
        .collect();
    if non_identity.is_empty() {
        return Err(Error::pre("pauli hat map needs non-identity strings"));
    }
    let lambda0 = pspec.weight_of_identity();
    let d = pspec.dim();
    let gens: Vec<CMatrix> = non_identity.iter().map(|(s, _)| s.dense()).collect();
    let ds = DerivationStructure::symmetric(gens, crate::metrics::MeanKind::Logarithmic)?;
    let mut parts = Vec::with_capacity(non_identity.len());
    for (beta, lb) in &non_identity {
        let mut mat = zeros(d * d, d * d);
        mat += SuperOp::identity(d).matrix() * crate::matcore::cr(lambda0 - lb);
        for (alpha, la) in pspec.terms() {
            if alpha.is_identity() || alpha == beta {
                continue;
            }
            let sign = if crate::channels::c_sign(alpha, beta)? == 0 {
                *la
            } else {
                -*la
            };
            mat += SuperOp::conjugation(&alpha.dense()).matrix() * crate::matcore::cr(sign);
        }
        parts.push(SuperOp::new(d, mat)?);
    }
    Ok((ds, HatMap::diagonal(parts)))
}

pub fn sample_states_for(dim: usize, count: usize, rng: &mut impl rand::Rng) -> Vec<DensityState> {
    (0..count).map(|_| crate::sample::random_state(rng, dim)).collect()
}
