//! Curvature certification: Lipschitz contraction factors, gradient
//! estimates, intertwining checks, spectral-gap / transportation-cost /
//! transportation-information certificates, jump-diameter bounds,
//! tensorization, and finite-group transference.

mod gap;
mod ge;
mod gibbs_cert;
mod inequalities;
mod intertwine;
mod lipschitz;
mod tensorize;
mod transfer;

pub use gap::{poincare_2inf_constant, spectral_gap};
pub use ge::{ge_direct_check, verify_ge, GeReport, GeSample, GE_KAPPA_TOL, GE_MARGIN_TOL};
pub use gibbs_cert::{
    gibbs_contraction_certificate, max_site_seminorm, DecayRow, GibbsCertificate, SiteDiamond,
};
pub use inequalities::{
    dirichlet_form, dirichlet_form_derivation, jump_diameter_bound, kms_generator_fixed_point,
    local_generator_diamond, local_ti_check, measure_tc_constant, pauli_mixing_rows,
    tc_inequality_check, ti_inequality_check, EdgeData, JumpDiameterReport, LocalTiReport,
    MixingRow, TcReport, TiReport,
};
pub use intertwine::{
    pauli_hat_map, sample_states_for, smallest_dominating_constant, verify_intertwining, HatMap,
    IntertwiningReport,
};
pub use lipschitz::{
    intertwining_lipschitz_factor, kernel_preserved, lipschitz_factor, pauli_lipschitz_factor,
    pauli_seminorm, witness_search, CurvatureReport, SearchBudget,
};
pub use tensorize::{complete_lipschitz_factor, tensorization_check, TensorizationReport};
pub use transfer::{transfer_finite_group, GroupSpec, TransferReport};

#[cfg(test)]
mod tests;
