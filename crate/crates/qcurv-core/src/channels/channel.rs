//! Quantum channels in the Heisenberg picture (unital), with the pre-adjoint
//! stored explicitly.

use crate::error::{Error, Result};
use crate::matcore::{
    choi_of_superop, cr, herm_eigvals, identity, max_abs, CMatrix, DensityState, SuperOp,
};

#[derive(Debug, Clone)]
pub struct Channel {
    dim: usize,
    superop: SuperOp,
    adjoint_superop: SuperOp,
    kraus: Option<Vec<CMatrix>>,
    invariant_state: Option<DensityState>,
    fixed_point_projector: Option<SuperOp>,
}

pub const UNITAL_TOL: f64 = 1e-10;
pub const CHOI_PSD_TOL: f64 = 1e-9;

impl Channel {
    /// Build from the Heisenberg superoperator, checking unitality and
    /// complete positivity (Choi PSD within 1e-9).
    pub fn from_heisenberg(superop: SuperOp) -> Result<Self> {
        let d = superop.dim();
        let one = superop.apply(&identity(d));
        if max_abs(&(one - identity(d))) > UNITAL_TOL {
            return Err(Error::pre("channel is not unital within 1e-10"));
        }
        let choi = choi_of_superop(&superop);
        let evs = herm_eigvals(&choi).map_err(|_| Error::pre("choi matrix not Hermitian"))?;
        if evs[0] < -CHOI_PSD_TOL {
            return Err(Error::pre(format!(
                "channel is not completely positive: choi eigenvalue {:.3e}",
                evs[0]
            )));
        }
        let adjoint_superop = superop.adjoint();
        Ok(Channel {
            dim: d,
            superop,
            adjoint_superop,
            kraus: None,
            invariant_state: None,
            fixed_point_projector: None,
        })
    }

    /// Kraus construction in the Heisenberg convention `P(x) = Σ K_j† x K_j`;
    /// requires the completeness relation `Σ K_j† K_j = 1` within 1e-9.
    pub fn from_kraus(kraus: Vec<CMatrix>) -> Result<Self> {
        if kraus.is_empty() {
            return Err(Error::pre("empty Kraus list"));
        }
        let d = kraus[0].nrows();
        if kraus.iter().any(|k| k.nrows() != d || k.ncols() != d) {
            return Err(Error::dim("kraus operators must be square, equal size"));
        }
        let mut complete = crate::matcore::zeros(d, d);
        for k in &kraus {
            complete += k.adjoint() * k;
        }
        if max_abs(&(complete - identity(d))) > 1e-9 {
            return Err(Error::pre("kraus completeness Σ K†K = 1 violated beyond 1e-9"));
        }
        let mut mat = crate::matcore::zeros(d * d, d * d);
        for k in &kraus {
            mat += SuperOp::from_left_right(&k.adjoint(), k)?.matrix().clone();
        }
        let superop = SuperOp::new(d, mat)?;
        let mut ch = Channel::from_heisenberg(superop)?;
        ch.kraus = Some(kraus);
        Ok(ch)
    }

    pub fn unitary(u: &CMatrix) -> Result<Self> {
        // Heisenberg picture of conjugation by U: x ↦ U† x U.
        Channel::from_kraus(vec![u.clone()])
    }

    pub fn identity_channel(d: usize) -> Self {
        Channel::from_heisenberg(SuperOp::identity(d)).expect("identity is a channel")
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Heisenberg action on observables.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        self.superop.apply(x)
    }

    /// Schrödinger action on states (the pre-adjoint).
    pub fn apply_pre(&self, rho: &CMatrix) -> CMatrix {
        self.adjoint_superop.apply(rho)
    }

    pub fn apply_state(&self, rho: &DensityState) -> DensityState {
        let out = crate::matcore::hermitize(&self.apply_pre(rho.matrix()));
        DensityState::new(out).expect("CPTP image of a state is a state")
    }

    pub fn superop(&self) -> &SuperOp {
        &self.superop
    }

    pub fn adjoint_superop(&self) -> &SuperOp {
        &self.adjoint_superop
    }

    pub fn kraus(&self) -> Option<&[CMatrix]> {
        self.kraus.as_deref()
    }

    pub fn choi(&self) -> CMatrix {
        choi_of_superop(&self.superop)
    }

    pub fn is_cptp(&self, tol: f64) -> bool {
        let one = self.superop.apply(&identity(self.dim));
        if max_abs(&(one - identity(self.dim))) > tol.max(UNITAL_TOL) {
            return false;
        }
        match herm_eigvals(&self.choi()) {
            Ok(evs) => evs[0] >= -tol.max(CHOI_PSD_TOL),
            Err(_) => false,
        }
    }

    pub fn set_invariant_state(&mut self, omega: DensityState) {
        self.invariant_state = Some(omega);
    }

    pub fn invariant_state(&self) -> Option<&DensityState> {
        self.invariant_state.as_ref()
    }

    pub fn set_fixed_point_projector(&mut self, e: SuperOp) {
        self.fixed_point_projector = Some(e);
    }

    pub fn fixed_point_projector(&self) -> Option<&SuperOp> {
        self.fixed_point_projector.as_ref()
    }

    /// `self ∘ other` (Heisenberg composition).
    pub fn compose(&self, other: &Channel) -> Result<Channel> {
        let s = self.superop.compose(&other.superop)?;
        Channel::from_heisenberg(s)
    }

    /// Convex mixture `λ·self + (1−λ)·other`.
    pub fn mix(&self, other: &Channel, lambda: f64) -> Result<Channel> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::pre("mixture weight must lie in [0,1]"));
        }
        let s = self
            .superop
            .scale(cr(lambda))
            .add(&other.superop.scale(cr(1.0 - lambda)))?;
        Channel::from_heisenberg(s)
    }

    /// `self ⊗ id` or `id ⊗ self`-style embedding: tensor with the identity on
    /// a factor of dimension `d_other`; `self_first` picks the ordering.
    pub fn tensor_with_identity(&self, d_other: usize, self_first: bool) -> Result<Channel> {
        let d = self.dim;
        let full = d * d_other;
        let s = SuperOp::of_map(full, |e| {
            let dims = if self_first { [d, d_other] } else { [d_other, d] };
            let me = if self_first { 0 } else { 1 };
            // decompose e over the tensor basis of the identity factor
            let mut out = crate::matcore::zeros(full, full);
            let other = 1 - me;
            let d_o = dims[other];
            for a in 0..d_o {
                for b in 0..d_o {
                    let mut ea = crate::matcore::zeros(d_o, d_o);
                    ea[(a, b)] = crate::matcore::ONE;
                    // component of e on (me-part) for fixed other indices
                    let mut blk = crate::matcore::zeros(d, d);
                    for r in 0..d {
                        for c in 0..d {
                            let (row, col) = if self_first {
                                (r * d_o + a, c * d_o + b)
                            } else {
                                (a * d + r, b * d + c)
                            };
                            blk[(r, c)] = e[(row, col)];
                        }
                    }
                    let mapped = self.apply(&blk);
                    let contrib = if self_first {
                        crate::matcore::kron(&mapped, &ea)
                    } else {
                        crate::matcore::kron(&ea, &mapped)
                    };
                    out += contrib;
                }
            }
            out
        });
        Channel::from_heisenberg(s)
    }
}
