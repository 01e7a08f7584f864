use super::{cr, herm_eigvals, hermitize, identity, is_hermitian, trace, CMatrix, CVector};
use crate::error::{Error, Result};

/// Positive unit-trace matrix (a density operator).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityState {
    mat: CMatrix,
}

impl DensityState {
    /// Validate hermiticity, positivity (eigenvalues ≥ -1e-10) and unit trace.
    pub fn new(mat: CMatrix) -> Result<Self> {
        if !mat.is_square() {
            return Err(Error::dim("density matrix must be square"));
        }
        if !is_hermitian(&mat, 1e-9) {
            return Err(Error::pre("density matrix is not Hermitian"));
        }
        let mat = hermitize(&mat);
        let tr = trace(&mat);
        if (tr.re - 1.0).abs() > 1e-10 || tr.im.abs() > 1e-10 {
            return Err(Error::pre(format!(
                "density matrix trace is {:.12}, expected 1",
                tr.re
            )));
        }
        let evs = herm_eigvals(&mat)?;
        if evs.iter().any(|&x| x < -1e-10) {
            return Err(Error::pre(format!(
                "density matrix has negative eigenvalue {:.3e}",
                evs[0]
            )));
        }
        Ok(DensityState { mat })
    }

    /// Normalize a PSD matrix by its trace.
    pub fn from_unnormalized(mat: CMatrix) -> Result<Self> {
        let tr = trace(&mat).re;
        if tr <= 0.0 {
            return Err(Error::pre("cannot normalize: trace is not positive"));
        }
        DensityState::new(mat * cr(1.0 / tr))
    }

    pub fn pure(ket: &CVector) -> Result<Self> {
        let n = ket.norm();
        if n == 0.0 {
            return Err(Error::pre("zero vector is not a state"));
        }
        let k = ket * cr(1.0 / n);
        let mat = CMatrix::from_fn(ket.len(), ket.len(), |i, j| k[i] * k[j].conj());
        DensityState::new(mat)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        DensityState {
            mat: identity(d) * cr(1.0 / d as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn into_matrix(self) -> CMatrix {
        self.mat
    }

    /// `(1-ε)ρ + ε·1/d`; removes boundary-of-state-space singularities before
    /// logarithmic/weighted operator means.
    pub fn floored(&self, eps: f64) -> DensityState {
        let d = self.dim();
        DensityState {
            mat: &self.mat * cr(1.0 - eps) + identity(d) * cr(eps / d as f64),
        }
    }
}
