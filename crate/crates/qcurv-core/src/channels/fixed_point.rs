//! Conditional expectations and fixed-point projectors.

use super::channel::Channel;
use super::pauli::{PauliChannelSpec, PauliString};
use crate::error::{Error, Result};
use crate::matcore::{
    cr, herm_eig, identity, kron, max_abs, partial_trace, trace, CMatrix, CVector, DensityState,
    SuperOp, ZERO,
};

/// Description of the target subalgebra of a conditional expectation.
#[derive(Debug, Clone)]
pub enum SubalgebraDesc {
    /// C·1 (full average against a state).
    Scalars,
    /// Commutant of a Pauli-string set; `strings` is the sign-free group.
    PauliGroup(Vec<PauliString>),
    /// Operators trivial on one tensor factor (`x = y ⊗ 1_site`).
    SiteReplacement { dims: Vec<usize>, site: usize },
    /// Peripheral fixed-point algebra of a channel.
    FixedPoints,
}

/// Idempotent unital CP projection onto a subalgebra, kept as a channel view.
#[derive(Debug, Clone)]
pub struct ConditionalExpectation {
    channel: Channel,
    target: SubalgebraDesc,
}

impl ConditionalExpectation {
    pub fn from_channel(channel: Channel, target: SubalgebraDesc) -> Result<Self> {
        let s = channel.superop();
        let s2 = s.compose(s)?;
        let defect = max_abs(&(s2.matrix() - s.matrix()));
        if defect > 1e-8 {
            return Err(Error::pre(format!(
                "conditional expectation must be idempotent; ‖E² − E‖ = {defect:.3e}"
            )));
        }
        Ok(ConditionalExpectation { channel, target })
    }

    pub fn channel(&self) -> &Channel {
        &self.channel
    }

    pub fn target(&self) -> &SubalgebraDesc {
        &self.target
    }

    pub fn dim(&self) -> usize {
        self.channel.dim()
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        self.channel.apply(x)
    }

    pub fn apply_pre(&self, rho: &CMatrix) -> CMatrix {
        self.channel.apply_pre(rho)
    }

    /// Full trace average `x ↦ τ(x)·1`.
    pub fn trace_average(d: usize) -> Self {
        let s = SuperOp::of_map(d, |x| identity(d) * (trace(x) * cr(1.0 / d as f64)));
        ConditionalExpectation {
            channel: Channel::from_heisenberg(s).expect("trace average is a channel"),
            target: SubalgebraDesc::Scalars,
        }
    }

    /// State average `x ↦ Tr(ωx)·1` (GNS projection onto scalars for ω-symmetric maps).
    pub fn state_average(omega: &DensityState) -> Self {
        let d = omega.dim();
        let om = omega.matrix().clone();
        let s = SuperOp::of_map(d, |x| identity(d) * trace(&(&om * x)));
        ConditionalExpectation {
            channel: Channel::from_heisenberg(s).expect("state average is a channel"),
            target: SubalgebraDesc::Scalars,
        }
    }

    /// Normalized partial trace at one site: `τ_v(x) = Tr_v(x) ⊗ 1_v/d_v`.
    pub fn site_replacement(dims: &[usize], site: usize) -> Result<Self> {
        if site >= dims.len() {
            return Err(Error::dim("site index out of range"));
        }
        let total: usize = dims.iter().product();
        let keep: Vec<usize> = (0..dims.len()).filter(|&k| k != site).collect();
        let dv = dims[site] as f64;
        let dims_owned = dims.to_vec();
        let s = SuperOp::of_map(total, |x| {
            let red = partial_trace(x, &dims_owned, &keep).expect("validated dims");
            crate::matcore::embed(&(red * cr(1.0 / dv)), &dims_owned, &keep)
                .expect("validated dims")
        });
        ConditionalExpectation::from_channel(
            Channel::from_heisenberg(s)?,
            SubalgebraDesc::SiteReplacement {
                dims: dims.to_vec(),
                site,
            },
        )
    }
}

/// `E_I(x) = |I'|⁻¹ Σ_{γ∈I'} σ_γ x σ_γ` over the sign-free group generated by
/// the spec's strings; projects onto the strings commuting with all of I.
pub fn pauli_conditional_expectation(spec: &PauliChannelSpec) -> ConditionalExpectation {
    let grp = spec.generated_group();
    let d = spec.dim();
    let w = cr(1.0 / grp.len() as f64);
    let mut mat = crate::matcore::zeros(d * d, d * d);
    for g in &grp {
        let gd = g.dense();
        mat += SuperOp::conjugation(&gd).matrix() * w;
    }
    let ch = Channel::from_heisenberg(SuperOp::new(d, mat).expect("square"))
        .expect("group average is a channel");
    ConditionalExpectation::from_channel(ch, SubalgebraDesc::PauliGroup(grp))
        .expect("group average is idempotent")
}

/// GNS weight operators `(G^{1/2}, G^{-1/2})` as superoperator matrices for
/// the inner product `⟨x,y⟩_ω = Tr(ω x† y)`; ω must be faithful.
pub fn gns_weights(omega: &DensityState) -> Result<(CMatrix, CMatrix)> {
    let (vals, u) = herm_eig(omega.matrix())?;
    if vals.iter().any(|&x| x < 1e-14) {
        return Err(Error::pre(
            "GNS weights need a faithful state (strictly positive eigenvalues)",
        ));
    }
    let half = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| cr(x.sqrt())),
    ));
    let inv_half = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| cr(1.0 / x.sqrt())),
    ));
    let w_half = &u * half * u.adjoint();
    let w_inv_half = &u * inv_half * u.adjoint();
    let d = omega.dim();
    // G = ωᵀ ⊗ 1 in the column-stacking convention.
    let g_half = kron(&w_half.transpose(), &identity(d));
    let g_inv_half = kron(&w_inv_half.transpose(), &identity(d));
    Ok((g_half, g_inv_half))
}

/// GNS-symmetry defect `‖G S − S† G‖` (zero iff `ω(P(x)†y) = ω(x†P(y))`).
pub fn gns_symmetry_defect(ch_superop: &SuperOp, omega: &DensityState) -> Result<f64> {
    let d = omega.dim();
    let g = kron(&omega.matrix().transpose(), &identity(d));
    let s = ch_superop.matrix();
    Ok(max_abs(&(&g * s - s.adjoint() * &g)))
}

/// How the fixed-point projector of a channel should be obtained.
pub enum FixedPointMode<'a> {
    /// Spectral projector at eigenvalue 1 of the channel on L₂(ω); requires
    /// GNS symmetry with respect to the supplied faithful state.
    Generic { omega: &'a DensityState },
    /// Pauli structure: the group-average expectation E_I.
    Pauli(&'a PauliChannelSpec),
    /// Primitive channel with unique invariant state: `x ↦ Tr(ωx)·1`.
    Primitive { omega: &'a DensityState },
}

/// Projector onto the fixed-point space of a channel, as an idempotent channel.
pub fn fixed_point_expectation(ch: &Channel, mode: FixedPointMode<'_>) -> Result<ConditionalExpectation> {
    match mode {
        FixedPointMode::Pauli(spec) => Ok(pauli_conditional_expectation(spec)),
        FixedPointMode::Primitive { omega } => Ok(ConditionalExpectation::state_average(omega)),
        FixedPointMode::Generic { omega } => {
            let defect = gns_symmetry_defect(ch.superop(), omega)?;
            if defect > 1e-8 {
                return Err(Error::UnsupportedStructure(format!(
                    "channel is not GNS-symmetric w.r.t. the supplied state \
                     (defect {defect:.3e}); generic fixed-point projection needs \
                     a real spectrum on L₂(ω)"
                )));
            }
            let (g_half, g_inv_half) = gns_weights(omega)?;
            let k = &g_half * ch.superop().matrix() * &g_inv_half;
            let (vals, u) = herm_eig(&k)?;
            let d2 = vals.len();
            let proj_diag = CMatrix::from_diagonal(&CVector::from_iterator(
                d2,
                vals.iter()
                    .map(|&x| if (x - 1.0).abs() <= 1e-8 { cr(1.0) } else { ZERO }),
            ));
            let pi = &u * proj_diag * u.adjoint();
            let e_mat = &g_inv_half * pi * &g_half;
            let d = ch.dim();
            let e = SuperOp::new(d, e_mat)?;
            let ch_e = Channel::from_heisenberg(e)?;
            ConditionalExpectation::from_channel(ch_e, SubalgebraDesc::FixedPoints)
        }
    }
}

/// KMS-symmetry defect `‖G_kms S − S† G_kms‖` for `⟨x,y⟩ = Tr(σ^½ x† σ^½ y)`.
pub fn kms_symmetry_defect(ch_superop: &SuperOp, sigma: &DensityState) -> Result<f64> {
    let (vals, u) = herm_eig(sigma.matrix())?;
    let d = sigma.dim();
    let half = CMatrix::from_diagonal(&CVector::from_iterator(
        d,
        vals.iter().map(|&x| cr(x.max(0.0).sqrt())),
    ));
    let s_half = &u * half * u.adjoint();
    let g = kron(&s_half.transpose(), &s_half);
    let s = ch_superop.matrix();
    Ok(max_abs(&(&g * s - s.adjoint() * &g)))
}

/// Fixed-point projector (eigenvalue-1 spectral projector) of a map that is
/// KMS-symmetric with respect to a faithful state — the conditional
/// expectation `E = lim_t e^{t(Ψ − id)}`.
pub fn kms_fixed_point_expectation(
    psi: &SuperOp,
    sigma: &DensityState,
) -> Result<ConditionalExpectation> {
    let defect = kms_symmetry_defect(psi, sigma)?;
    if defect > 1e-8 {
        return Err(Error::UnsupportedStructure(format!(
            "map is not KMS-symmetric (defect {defect:.3e})"
        )));
    }
    let (vals, u) = herm_eig(sigma.matrix())?;
    if vals.iter().any(|&x| x <= 1e-14) {
        return Err(Error::pre("KMS projection needs a faithful state"));
    }
    let d = sigma.dim();
    let quarter = CMatrix::from_diagonal(&CVector::from_iterator(
        d,
        vals.iter().map(|&x| cr(x.powf(0.25))),
    ));
    let inv_quarter = CMatrix::from_diagonal(&CVector::from_iterator(
        d,
        vals.iter().map(|&x| cr(x.powf(-0.25))),
    ));
    let s_q = &u * quarter * u.adjoint();
    let s_iq = &u * inv_quarter * u.adjoint();
    let g_half = kron(&s_q.transpose(), &s_q);
    let g_inv_half = kron(&s_iq.transpose(), &s_iq);
    let k = &g_half * psi.matrix() * &g_inv_half;
    let (kvals, ku) = herm_eig(&k)?;
    let d2 = kvals.len();
    let proj = {
        let diag = CMatrix::from_diagonal(&CVector::from_iterator(
            d2,
            kvals
                .iter()
                .map(|&x| if (x - 1.0).abs() <= 1e-8 { cr(1.0) } else { ZERO }),
        ));
        &ku * diag * ku.adjoint()
    };
    let e_mat = &g_inv_half * proj * &g_half;
    let ch = Channel::from_heisenberg(SuperOp::new(d, e_mat)?)?;
    ConditionalExpectation::from_channel(ch, SubalgebraDesc::FixedPoints)
}
