//! Small dense conic solver and the operator-inequality helpers built on it.

pub mod build;
mod diamond;
mod sdp;

pub use build::{herm_basis, herm_basis_matrix, herm_coords, herm_from_coords, LmiBuilder, VarId};
pub use diamond::{diamond_norm, diamond_norm_opts};
pub use sdp::{
    solve_sdp, BlockMat, IterateRow, SdpProblem, SdpSolution, SdpStatus, Sense, SolveOptions,
};

use crate::error::{Error, Result};
use crate::matcore::{herm_eigvals, CMatrix};

/// Minimum eigenvalue of `B − A`; `A ⪯ B` iff the result is ≥ −tol.
pub fn psd_gap(a: &CMatrix, b: &CMatrix) -> Result<f64> {
    if a.nrows() != b.nrows() || a.ncols() != b.ncols() {
        return Err(Error::dim(format!(
            "psd_gap dimension mismatch: {}x{} vs {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        )));
    }
    let diff = b - a;
    let evs = herm_eigvals(&diff)?;
    Ok(evs[0])
}
