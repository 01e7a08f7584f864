//! Dual Wasserstein-1 transport: `T_L(ρ₁,ρ₂) = sup { Tr((ρ₁−ρ₂)x) : L(x) ≤ 1 }`.

use super::lindblad::extract_trace_symmetric_lindblad;
use super::seminorm::{SemiNormSpec, SemiNormVariant};
use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::{
    cr, hermitize, identity, CMatrix, DensityState,
};
use crate::optim::{
    herm_basis, herm_basis_matrix, herm_from_coords, solve_sdp, LmiBuilder, SdpStatus, Sense,
    SolveOptions, VarId,
};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TransportValue {
    Finite(f64),
    Infinite,
}

impl TransportValue {
    pub fn finite(&self) -> Option<f64> {
        match self {
            TransportValue::Finite(v) => Some(*v),
            TransportValue::Infinite => None,
        }
    }

    pub fn expect_finite(&self) -> f64 {
        self.finite().expect("transport value is infinite")
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, TransportValue::Infinite)
    }
}

#[derive(Debug, Clone)]
pub struct TransportResult {
    pub value: TransportValue,
    /// Dual optimizer (observable) or primal optimizer (coupling), Hermitized
    /// and shrunk to strict feasibility.
    pub witness: Option<CMatrix>,
    pub gap: f64,
    pub iterations: usize,
}

pub(crate) fn w1_objective(
    b: &mut LmiBuilder,
    delta: &CMatrix,
) -> (usize, Vec<VarId>) {
    let d = delta.nrows();
    let vars = b.add_herm_var(d, Some(delta));
    (d, vars)
}

/// Add the `L(x) ≤ bound` ball constraints for `x = Σ y_i B_i`.
pub(crate) fn add_ball_constraints(
    b: &mut LmiBuilder,
    spec: &SemiNormSpec,
    vars: &[VarId],
    bound: f64,
) -> Result<()> {
    let d = spec.dim();
    let basis = herm_basis(d);
    let eye = identity(d);
    match &spec.variant {
        SemiNormVariant::OperatorNorm => {
            // −bound ⪯ x ⪯ bound (x Hermitian)
            let upper = b.add_complex_block(d);
            let lower = b.add_complex_block(d);
            b.set_const_complex(upper, &eye, bound);
            b.set_const_complex(lower, &eye, bound);
            for (e, v) in basis.iter().zip(vars) {
                let bm = herm_basis_matrix(d, *e);
                b.add_coeff_complex(upper, *v, &bm, 1.0);
                b.add_coeff_complex(lower, *v, &bm, -1.0);
            }
        }
        SemiNormVariant::CommutatorMax { generators } => {
            for a in generators {
                add_commutator_bound(b, a, &basis, vars, d, None, bound);
            }
        }
        SemiNormVariant::CommutatorL2 { generators } => {
            // ‖[v_j,x]‖ ≤ t_j, Σ t_j² ≤ 1 via 2×2 blocks [[1,t_j],[t_j,s_j]], Σ s_j ≤ bound².
            let mut s_terms = Vec::new();
            for g in generators {
                let t_j = b.add_var(0.0);
                let s_j = b.add_var(0.0);
                add_commutator_bound(b, g, &basis, vars, d, Some(t_j), 0.0);
                let quad = b.add_real_block(2);
                b.set_const_real_entry(quad, 0, 0, 1.0);
                b.add_coeff_real_entry(quad, t_j, 1, 0, -1.0);
                b.add_coeff_real_entry(quad, s_j, 1, 1, -1.0);
                s_terms.push((s_j, 1.0));
            }
            b.add_scalar_ge0(bound * bound, &s_terms);
        }
        SemiNormVariant::Oscillator { site_dims } => {
            let mut t_terms = Vec::new();
            for site in 0..site_dims.len() {
                let t_i = b.add_var(0.0);
                let tau = crate::channels::ConditionalExpectation::site_replacement(site_dims, site)?;
                // M_i(x) = x − τ_i(x), Hermitian: −t_i ⪯ M_i ⪯ t_i
                let upper = b.add_complex_block(d);
                let lower = b.add_complex_block(d);
                b.add_coeff_complex(upper, t_i, &eye, -1.0);
                b.add_coeff_complex(lower, t_i, &eye, -1.0);
                for (e, v) in basis.iter().zip(vars) {
                    let bm = herm_basis_matrix(d, *e);
                    let m = &bm - tau.apply(&bm);
                    b.add_coeff_complex(upper, *v, &m, 1.0);
                    b.add_coeff_complex(lower, *v, &m, -1.0);
                }
                t_terms.push((t_i, 1.0));
            }
            b.add_scalar_ge0(bound, &t_terms);
        }
        SemiNormVariant::Ornstein { site_dims } => {
            for site in 0..site_dims.len() {
                let keep: Vec<usize> =
                    (0..site_dims.len()).filter(|&k| k != site).collect();
                let comp_dim: usize = keep.iter().map(|&k| site_dims[k]).product();
                let upper = b.add_complex_block(d);
                let lower = b.add_complex_block(d);
                b.set_const_complex(upper, &eye, bound);
                b.set_const_complex(lower, &eye, bound);
                for (e, v) in basis.iter().zip(vars) {
                    let bm = herm_basis_matrix(d, *e);
                    b.add_coeff_complex(upper, *v, &bm, 1.0);
                    b.add_coeff_complex(lower, *v, &bm, -1.0);
                }
                // auxiliary minimizer x⁽ⁱ⁾ on the complement
                for e in herm_basis(comp_dim) {
                    let v = b.add_var(0.0);
                    let bm = herm_basis_matrix(comp_dim, e);
                    let emb = crate::matcore::embed(&bm, site_dims, &keep)?;
                    b.add_coeff_complex(upper, v, &emb, -1.0);
                    b.add_coeff_complex(lower, v, &emb, 1.0);
                }
            }
        }
        SemiNormVariant::GammaNorm { generator } => {
            // Γ(x,x) ⪯ bound² via the τ-symmetric Lindblad family:
            // 2Γ(x,x) = Σ_k [V_k,x]†[V_k,x].
            let fam = extract_trace_symmetric_lindblad(generator)?;
            let k = fam.len();
            if k == 0 {
                return Err(Error::UnsupportedStructure(
                    "generator has no dissipative part".into(),
                ));
            }
            // block [[bound²·1_d, B†],[B, 1_{kd}]] ⪰ 0 with B = col(√½ [V_k,x])
            let big = b.add_complex_block(d + k * d);
            let mut cmat = crate::matcore::zeros(d + k * d, d + k * d);
            for i in 0..d {
                cmat[(i, i)] = cr(bound * bound);
            }
            for i in d..(d + k * d) {
                cmat[(i, i)] = cr(1.0);
            }
            b.set_const_complex(big, &cmat, 1.0);
            let half = cr(0.5f64.sqrt());
            for (e, v) in basis.iter().zip(vars) {
                let bm = herm_basis_matrix(d, *e);
                let mut coeff = crate::matcore::zeros(d + k * d, d + k * d);
                for (kk, vk) in fam.iter().enumerate() {
                    let c = crate::matcore::commutator(vk, &bm) * half;
                    coeff
                        .view_mut((d + kk * d, 0), (d, d))
                        .copy_from(&c);
                    let ca = c.adjoint();
                    coeff.view_mut((0, d + kk * d), (d, d)).copy_from(&ca);
                }
                b.add_coeff_complex(big, *v, &coeff, -1.0);
            }
        }
    }
    Ok(())
}

fn add_commutator_bound(
    b: &mut LmiBuilder,
    gen: &CMatrix,
    basis: &[crate::optim::build::HermBasisElem],
    vars: &[VarId],
    d: usize,
    t_var: Option<VarId>,
    bound: f64,
) {
    let herm_gen = crate::matcore::is_hermitian(gen, 1e-12);
    if herm_gen {
        // i[A,x] is Hermitian: −t ⪯ i[A,x] ⪯ t
        let upper = b.add_complex_block(d);
        let lower = b.add_complex_block(d);
        let eye = identity(d);
        match t_var {
            Some(t) => {
                b.add_coeff_complex(upper, t, &eye, -1.0);
                b.add_coeff_complex(lower, t, &eye, -1.0);
            }
            None => {
                b.set_const_complex(upper, &eye, bound);
                b.set_const_complex(lower, &eye, bound);
            }
        }
        for (e, v) in basis.iter().zip(vars) {
            let bm = herm_basis_matrix(d, *e);
            let m = crate::matcore::commutator(gen, &bm) * crate::matcore::I;
            b.add_coeff_complex(upper, *v, &m, 1.0);
            b.add_coeff_complex(lower, *v, &m, -1.0);
        }
    } else {
        let terms: Vec<(VarId, CMatrix)> = basis
            .iter()
            .zip(vars)
            .map(|(e, v)| {
                (
                    *v,
                    crate::matcore::commutator(gen, &herm_basis_matrix(d, *e)),
                )
            })
            .collect();
        match t_var {
            Some(t) => {
                b.add_opnorm_block(d, None, &terms, 0.0, &[(t, 1.0)]);
            }
            None => {
                b.add_opnorm_block(d, None, &terms, bound, &[]);
            }
        }
    }
}

/// Dual Wasserstein-1 distance; returns the infinite flag when ρ₁, ρ₂ differ
/// on the kernel subalgebra of L.
pub fn w1_dual(spec: &SemiNormSpec, rho1: &DensityState, rho2: &DensityState) -> Result<TransportResult> {
    w1_dual_opts(spec, rho1, rho2, &SolveOptions::default())
}

pub fn w1_dual_opts(
    spec: &SemiNormSpec,
    rho1: &DensityState,
    rho2: &DensityState,
    opts: &SolveOptions,
) -> Result<TransportResult> {
    if rho1.dim() != spec.dim() || rho2.dim() != spec.dim() {
        return Err(Error::dim("state dimension does not match semi-norm"));
    }
    let delta = rho1.matrix() - rho2.matrix();
    // ∞ detection before the solver: the SDP is unbounded on kernel-separated pairs.
    if spec.kernel_component_trace_norm(&delta) > 1e-8 {
        return Ok(TransportResult {
            value: TransportValue::Infinite,
            witness: None,
            gap: 0.0,
            iterations: 0,
        });
    }
    if crate::matcore::max_abs(&delta) < 1e-15 {
        return Ok(TransportResult {
            value: TransportValue::Finite(0.0),
            witness: None,
            gap: 0.0,
            iterations: 0,
        });
    }
    let mut b = LmiBuilder::new();
    let (d, vars) = w1_objective(&mut b, &delta);
    add_ball_constraints(&mut b, spec, &vars, 1.0)?;
    let sol = solve_sdp(&b.build(), opts)?;
    match sol.status {
        SdpStatus::Infeasible => Ok(TransportResult {
            value: TransportValue::Infinite,
            witness: None,
            gap: sol.gap,
            iterations: sol.iterations,
        }),
        SdpStatus::Optimal | SdpStatus::MaxIter => {
            if sol.status == SdpStatus::MaxIter && sol.gap > 1e-5 {
                return Err(Error::Solver(format!(
                    "W1 dual SDP stalled with gap {:.3e}",
                    sol.gap
                )));
            }
            let coords: Vec<f64> = vars.iter().map(|v| sol.y[v.0]).collect();
            let x = hermitize(&herm_from_coords(d, &coords));
            // strict-feasibility shrink for downstream certificates
            let witness = &x * cr(1.0 / (1.0 + 10.0 * sol.gap.max(0.0)));
            Ok(TransportResult {
                value: TransportValue::Finite(sol.value(Sense::Max)),
                witness: Some(witness),
                gap: sol.gap,
                iterations: sol.iterations,
            })
        }
    }
}

/// Jump `J(ρ) = W(ρ, ρ∘P)` of a state under a channel.
pub fn jump(spec: &SemiNormSpec, rho: &DensityState, ch: &Channel) -> Result<TransportResult> {
    let moved = ch.apply_state(rho);
    w1_dual(spec, rho, &moved)
}
