//! Continuous-variable constructions at finite truncation: bosonic Fock
//! operators and beam-splitter channels, fermionic Clifford algebra and beam
//! splitters, with energy/regularity/mixing bounds.

mod bose;
mod fermi;
mod fock;

pub use bose::{
    bose_channel, bose_lipschitz_seminorm, diameter_bound, energy_bound_check,
    env_commutator_trace_norm, intertwining_residual_on_sector, mixing_chain, regularity_check,
    state_leakage, BeamSplitterSpec, EnergyBoundReport, MixingRow, RegularityReport,
};
pub use fermi::{
    clifford_generators, fermi_beam_splitter, is_even_state, CliffordAlgebra, FermiBeamSplitter,
    FermiBeamSplitterReport,
};
pub use fock::{
    beam_splitter_unitary, energy, fock_ops, sector_projector, thermal_state, BeamSplitterUnitary,
};
