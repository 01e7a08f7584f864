//! Non-commutative transportation metrics: Lipschitz semi-norm evaluation,
//! dual Wasserstein-1 distances, coupling costs, operator means, and the
//! operator-mean metric tensor.

mod coupling;
mod entropy;
pub mod lindblad;
mod mean;
mod seminorm;
mod w1;

pub use coupling::{coupling_cost, coupling_cost_dual, coupling_cost_opts};
pub use entropy::{relative_entropy, von_neumann_entropy, EntropyValue};
pub use lindblad::{extract_gns_lindblad, extract_trace_symmetric_lindblad, lindblad_superop, LindbladTerm};
pub use mean::{
    grad_norm_sq, mean_superop, metric_tensor_norm, metric_tensor_superop, DerivationStructure,
    MeanKind, MEAN_FLOOR,
};
pub use seminorm::{gamma_form, ornstein_site_minimizer, seminorm_eval, SemiNormSpec, SemiNormVariant};
pub use w1::{jump, w1_dual, w1_dual_opts, TransportResult, TransportValue};

pub(crate) use w1::add_ball_constraints;
