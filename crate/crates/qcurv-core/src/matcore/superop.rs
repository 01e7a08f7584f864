use super::{identity, kron, unvec, vec_mat, zeros, CMatrix};
use crate::error::{Error, Result};

/// Matrix form of a linear map on d×d matrices, in the column-stacking
/// vectorization convention: `apply(S, X) = unvec(S · vec X)`.
#[derive(Debug, Clone, PartialEq)]
pub struct SuperOp {
    dim: usize,
    mat: CMatrix,
}

impl SuperOp {
    pub fn new(dim: usize, mat: CMatrix) -> Result<Self> {
        if mat.nrows() != dim * dim || mat.ncols() != dim * dim {
            return Err(Error::dim(format!(
                "superoperator on {dim}x{dim} matrices must be {0}x{0}",
                dim * dim
            )));
        }
        Ok(SuperOp { dim, mat })
    }

    pub fn identity(dim: usize) -> Self {
        SuperOp {
            dim,
            mat: identity(dim * dim),
        }
    }

    pub fn zero(dim: usize) -> Self {
        SuperOp {
            dim,
            mat: zeros(dim * dim, dim * dim),
        }
    }

    /// Superoperator of `X ↦ A X B`, i.e. `Bᵀ ⊗ A`.
    pub fn from_left_right(a: &CMatrix, b: &CMatrix) -> Result<Self> {
        if !a.is_square() || a.nrows() != b.nrows() || !b.is_square() {
            return Err(Error::dim("from_left_right expects square A, B of equal size"));
        }
        Ok(SuperOp {
            dim: a.nrows(),
            mat: kron(&b.transpose(), a),
        })
    }

    /// Superoperator of `X ↦ A X`.
    pub fn left_mul(a: &CMatrix) -> Self {
        SuperOp {
            dim: a.nrows(),
            mat: kron(&identity(a.nrows()), a),
        }
    }

    /// Superoperator of `X ↦ X B`.
    pub fn right_mul(b: &CMatrix) -> Self {
        SuperOp {
            dim: b.nrows(),
            mat: kron(&b.transpose(), &identity(b.nrows())),
        }
    }

    /// Superoperator of `X ↦ [V, X]`.
    pub fn commutator_with(v: &CMatrix) -> Self {
        let d = v.nrows();
        SuperOp {
            dim: d,
            mat: kron(&identity(d), v) - kron(&v.transpose(), &identity(d)),
        }
    }

    /// Superoperator of `X ↦ U X U†`.
    pub fn conjugation(u: &CMatrix) -> Self {
        SuperOp {
            dim: u.nrows(),
            mat: kron(&u.conjugate(), u),
        }
    }

    /// Build from the action on the matrix-unit basis.
    pub fn of_map(dim: usize, mut f: impl FnMut(&CMatrix) -> CMatrix) -> Self {
        let d2 = dim * dim;
        let mut mat = zeros(d2, d2);
        for j in 0..dim {
            for i in 0..dim {
                let mut e = zeros(dim, dim);
                e[(i, j)] = super::ONE;
                let out = f(&e);
                mat.set_column(j * dim + i, &vec_mat(&out));
            }
        }
        SuperOp { dim, mat }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        unvec(&(&self.mat * vec_mat(x)), self.dim)
    }

    /// Adjoint with respect to the trace inner product.
    pub fn adjoint(&self) -> SuperOp {
        SuperOp {
            dim: self.dim,
            mat: self.mat.adjoint(),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SuperOp) -> Result<SuperOp> {
        if self.dim != other.dim {
            return Err(Error::dim("superoperator composition dimension mismatch"));
        }
        Ok(SuperOp {
            dim: self.dim,
            mat: &self.mat * &other.mat,
        })
    }

    pub fn add(&self, other: &SuperOp) -> Result<SuperOp> {
        if self.dim != other.dim {
            return Err(Error::dim("superoperator sum dimension mismatch"));
        }
        Ok(SuperOp {
            dim: self.dim,
            mat: &self.mat + &other.mat,
        })
    }

    pub fn scale(&self, c: super::Complex64) -> SuperOp {
        SuperOp {
            dim: self.dim,
            mat: &self.mat * c,
        }
    }
}

/// Choi matrix `J = Σ_ij E_ij ⊗ Φ(E_ij)` (input factor first).
pub fn choi_of_superop(s: &SuperOp) -> CMatrix {
    let d = s.dim();
    let m = s.matrix();
    let mut j = zeros(d * d, d * d);
    for i in 0..d {
        for jj in 0..d {
            for a in 0..d {
                for b in 0..d {
                    // Φ(E_ij)[a,b] = S[b·d+a, j·d+i]
                    j[(i * d + a, jj * d + b)] = m[(b * d + a, jj * d + i)];
                }
            }
        }
    }
    j
}

/// Inverse of [`choi_of_superop`].
pub fn superop_from_choi(j: &CMatrix, d: usize) -> Result<SuperOp> {
    if j.nrows() != d * d || j.ncols() != d * d {
        return Err(Error::dim("choi matrix has wrong dimension"));
    }
    let mut m = zeros(d * d, d * d);
    for i in 0..d {
        for jj in 0..d {
            for a in 0..d {
                for b in 0..d {
                    m[(b * d + a, jj * d + i)] = j[(i * d + a, jj * d + b)];
                }
            }
        }
    }
    SuperOp::new(d, m)
}
