//! Quantum channel model and the discrete channel families: Pauli channels,
//! conditional expectations, GNS-symmetric semigroups, and Petz heat-bath
//! Gibbs samplers.

mod channel;
mod fixed_point;
mod generator;
mod gibbs;
pub mod pauli;

pub use channel::Channel;
pub use fixed_point::{
    fixed_point_expectation, gns_symmetry_defect, gns_weights, kms_fixed_point_expectation,
    kms_symmetry_defect, pauli_conditional_expectation, ConditionalExpectation, FixedPointMode,
    SubalgebraDesc,
};
pub use generator::{semigroup_channel, GeneratorSpec, LocalStructure, SiteGenerator};
pub use gibbs::{gibbs_state, heat_bath_generator, HamiltonianSpec};
pub use pauli::{all_strings, c_sign, pauli_superop, PauliChannelSpec, PauliString};

use crate::error::Result;

/// Pauli channel `x ↦ Σ_α λ_α σ_α x σ_α` as a [`Channel`].
pub fn pauli_channel(spec: &PauliChannelSpec) -> Result<Channel> {
    Channel::from_heisenberg(pauli_superop(spec))
}

/// Kraus construction `P(x) = Σ K_j† x K_j` (Heisenberg, unital).
pub fn channel_from_kraus(kraus: Vec<crate::matcore::CMatrix>) -> Result<Channel> {
    Channel::from_kraus(kraus)
}

#[cfg(test)]
pub(crate) mod tests;
