//! Lindbladian generators (Heisenberg picture) and the semigroup channels
//! they generate.

use super::channel::Channel;
use crate::error::{Error, Result};
use crate::matcore::{identity, mat_exp, max_abs, CMatrix, SuperOp};

/// Per-site piece of a local generator: `L_v = Ψ_v − id` with `Ψ_v` supported
/// on `neighborhood`.
#[derive(Debug, Clone)]
pub struct SiteGenerator {
    pub site: usize,
    pub neighborhood: Vec<usize>,
    pub psi: SuperOp,
}

#[derive(Debug, Clone)]
pub struct LocalStructure {
    pub dims: Vec<usize>,
    pub sites: Vec<SiteGenerator>,
}

#[derive(Debug, Clone)]
pub struct GeneratorSpec {
    superop: SuperOp,
    local: Option<LocalStructure>,
}

impl GeneratorSpec {
    pub fn new(superop: SuperOp, local: Option<LocalStructure>) -> Result<Self> {
        let d = superop.dim();
        let on_one = superop.apply(&identity(d));
        let scale = max_abs(superop.matrix()).max(1.0);
        if max_abs(&on_one) > 1e-10 * scale {
            return Err(Error::pre(format!(
                "generator does not annihilate the identity: ‖L(1)‖ = {:.3e}",
                max_abs(&on_one)
            )));
        }
        Ok(GeneratorSpec { superop, local })
    }

    pub fn dim(&self) -> usize {
        self.superop.dim()
    }

    pub fn superop(&self) -> &SuperOp {
        &self.superop
    }

    pub fn local(&self) -> Option<&LocalStructure> {
        self.local.as_ref()
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        self.superop.apply(x)
    }
}

/// `e^{tL}` as a channel; `t ≥ 0`.
pub fn semigroup_channel(gen: &GeneratorSpec, t: f64) -> Result<Channel> {
    if t < 0.0 {
        return Err(Error::pre(format!("negative semigroup time {t}")));
    }
    let m = mat_exp(&(gen.superop().matrix() * crate::matcore::cr(t)))?;
    Channel::from_heisenberg(SuperOp::new(gen.dim(), m)?)
}
