//! Finite-dimensional quantum channels, non-commutative transportation metrics,
//! and coarse Ricci curvature certificates.
//!
//! The crate is organized around six modules:
//!
//! - [`matcore`]: dense complex linear algebra (Hermitian eigendecompositions,
//!   matrix exponentials, Kronecker/partial-trace calculus, superoperators).
//! - [`optim`]: a small dense primal-dual interior-point SDP solver, the
//!   diamond-norm program, and PSD-order helpers.
//! - [`channels`]: quantum channel construction (Kraus, Pauli, Gibbs samplers,
//!   semigroups, conditional expectations).
//! - [`metrics`]: Lipschitz semi-norms, dual Wasserstein-1 distances, coupling
//!   costs, operator means and the operator-mean metric tensor.
//! - [`curvature`]: contraction-factor reports, gradient estimates,
//!   intertwining checks, spectral-gap / transportation-cost /
//!   transportation-information certificates, group transference.
//! - [`cvmodels`]: truncated bosonic and fermionic beam-splitter models.

pub mod channels;
pub mod curvature;
pub mod cvmodels;
pub mod error;
pub mod matcore;
pub mod metrics;
pub mod optim;
pub mod sample;

pub use error::{Error, Result};
pub use matcore::{CMatrix, Complex64, DensityState, SuperOp};
