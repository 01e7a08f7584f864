//! Dense complex linear-algebra kernel.
//!
//! Everything downstream works with square complex matrices in the
//! column-stacking vectorization convention: `vec` stacks columns, so the
//! superoperator of `X ↦ A X B` is `Bᵀ ⊗ A`.

mod expm;
mod state;
mod superop;

pub use expm::mat_exp;
pub use state::DensityState;
pub use superop::{choi_of_superop, superop_from_choi, SuperOp};

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

pub type Complex64 = nalgebra::Complex<f64>;
/// Dense complex matrix; all of the crate's operator arithmetic lives on this.
pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

pub fn cr(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn identity(d: usize) -> CMatrix {
    CMatrix::identity(d, d)
}

pub fn zeros(r: usize, c: usize) -> CMatrix {
    CMatrix::zeros(r, c)
}

/// Largest absolute entry; the `‖·‖_max` used in hermiticity tolerances.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn herm_defect(m: &CMatrix) -> f64 {
    max_abs(&(m - m.adjoint()))
}

pub fn is_hermitian(m: &CMatrix, rel_tol: f64) -> bool {
    m.is_square() && herm_defect(m) <= rel_tol * max_abs(m).max(1e-300)
}

/// `(M + M†)/2`; round-off hygiene before Hermitian eigensolves.
pub fn hermitize(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()) * cr(0.5)
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().sum()
}

/// Hilbert-Schmidt inner product `Tr(A† B)`.
pub fn hs_inner(a: &CMatrix, b: &CMatrix) -> Complex64 {
    a.iter().zip(b.iter()).map(|(x, y)| x.conj() * y).sum()
}

pub fn frob_norm(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Operator norm (largest singular value), via the largest eigenvalue of `M†M`.
pub fn op_norm(m: &CMatrix) -> Result<f64> {
    if m.nrows() == 0 || m.ncols() == 0 {
        return Err(Error::dim("op_norm of empty matrix"));
    }
    if !is_finite(m) {
        return Err(Error::pre("op_norm: non-finite entries"));
    }
    let g = m.adjoint() * m;
    let ev = hermitize(&g).symmetric_eigenvalues();
    Ok(ev.iter().fold(0.0f64, |a, &x| a.max(x)).max(0.0).sqrt())
}

/// Trace norm `Σ σ_i(M)`.
pub fn trace_norm(m: &CMatrix) -> f64 {
    let svd = m.clone().svd(false, false);
    svd.singular_values.iter().sum()
}

/// Hermitian eigendecomposition `M = U diag(λ) U†` with ascending eigenvalues.
///
/// The input is symmetrized before the solve; inputs that are not Hermitian
/// within `1e-8` (relative to the largest entry) are rejected.
pub fn herm_eig(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    check_hermitian(m)?;
    let se = hermitize(m).symmetric_eigen();
    let mut idx: Vec<usize> = (0..se.eigenvalues.len()).collect();
    idx.sort_by(|&a, &b| se.eigenvalues[a].partial_cmp(&se.eigenvalues[b]).unwrap());
    let vals: Vec<f64> = idx.iter().map(|&i| se.eigenvalues[i]).collect();
    let d = m.nrows();
    let mut vecs = zeros(d, d);
    for (new_col, &old_col) in idx.iter().enumerate() {
        vecs.set_column(new_col, &se.eigenvectors.column(old_col));
    }
    Ok((vals, vecs))
}

/// Eigenvalues only (ascending); cheaper than [`herm_eig`] when vectors are not needed.
pub fn herm_eigvals(m: &CMatrix) -> Result<Vec<f64>> {
    check_hermitian(m)?;
    let ev = hermitize(m).symmetric_eigenvalues();
    let mut v: Vec<f64> = ev.iter().copied().collect();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(v)
}

fn check_hermitian(m: &CMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::dim(format!(
            "herm_eig expects square matrix, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    if !is_finite(m) {
        return Err(Error::pre("herm_eig: non-finite entries"));
    }
    if !is_hermitian(m, 1e-8) {
        return Err(Error::pre(format!(
            "matrix is not Hermitian: defect {:.3e} vs max entry {:.3e}",
            herm_defect(m),
            max_abs(m)
        )));
    }
    Ok(())
}

/// Apply `f` to the eigenvalues of a Hermitian matrix.
pub fn herm_fun(m: &CMatrix, f: impl Fn(f64) -> f64) -> Result<CMatrix> {
    let (vals, u) = herm_eig(m)?;
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| cr(f(x))),
    ));
    Ok(&u * diag * u.adjoint())
}

/// Moore-Penrose pseudo-inverse of a Hermitian PSD matrix; eigenvalues below
/// `eps · λ_max` are treated as the kernel.
pub fn pinv_on_support(m: &CMatrix, eps: f64) -> Result<CMatrix> {
    let (vals, u) = herm_eig(m)?;
    let lmax = vals.iter().fold(0.0f64, |a, &x| a.max(x));
    let neg_tol = 1e-8 * lmax.max(1e-30);
    if let Some(bad) = vals.iter().find(|&&x| x < -neg_tol) {
        return Err(Error::pre(format!(
            "pinv_on_support expects a PSD matrix; found eigenvalue {bad:.3e}"
        )));
    }
    let cut = eps * lmax;
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| if x > cut { cr(1.0 / x) } else { ZERO }),
    ));
    Ok(&u * diag * u.adjoint())
}

pub const PINV_EPS_DEFAULT: f64 = 1e-10;

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Column-stacking vectorization.
pub fn vec_mat(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvec(v: &CVector, d: usize) -> CMatrix {
    assert_eq!(v.len(), d * d, "unvec: length {} != {}²", v.len(), d);
    CMatrix::from_column_slice(d, d, v.as_slice())
}

/// Partial trace over the factors *not* in `keep`.
///
/// `dims` lists the tensor factor dimensions with factor 0 slowest (the
/// `kron` composite-index convention); `keep` are factor indices, strictly
/// increasing. The result keeps the retained factors in their original order.
pub fn partial_trace(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if m.nrows() != total || m.ncols() != total {
        return Err(Error::dim(format!(
            "partial_trace: matrix is {}x{}, dims product is {}",
            m.nrows(),
            m.ncols(),
            total
        )));
    }
    if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::dim("partial_trace: invalid keep set"));
    }
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let traced_dim: usize = traced.iter().map(|&t| dims[t]).product();

    // Strides of each factor in the composite index.
    let mut stride = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let unrank = |mut r: usize, facs: &[usize]| -> Vec<usize> {
        let mut out = vec![0; facs.len()];
        for (slot, &f) in facs.iter().enumerate().rev() {
            out[slot] = r % dims[f];
            r /= dims[f];
        }
        out
    };

    let mut out = zeros(kept_dim, kept_dim);
    for rk in 0..kept_dim {
        let ri = unrank(rk, keep);
        for ck in 0..kept_dim {
            let ci = unrank(ck, keep);
            let mut acc = ZERO;
            for t in 0..traced_dim {
                let ti = unrank(t, &traced);
                let mut row = 0usize;
                let mut col = 0usize;
                for (slot, &f) in keep.iter().enumerate() {
                    row += ri[slot] * stride[f];
                    col += ci[slot] * stride[f];
                }
                for (slot, &f) in traced.iter().enumerate() {
                    row += ti[slot] * stride[f];
                    col += ti[slot] * stride[f];
                }
                acc += m[(row, col)];
            }
            out[(rk, ck)] = acc;
        }
    }
    Ok(out)
}

/// Embed an operator acting on the `keep` factors (in order) as `Y ⊗ 1` on the
/// full tensor space described by `dims`.
pub fn embed(y: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let kept_dim: usize = keep.iter().map(|&k| dims[k]).product();
    if y.nrows() != kept_dim || y.ncols() != kept_dim {
        return Err(Error::dim(format!(
            "embed: operator is {}x{}, kept dims product is {}",
            y.nrows(),
            y.ncols(),
            kept_dim
        )));
    }
    let total: usize = dims.iter().product();
    let rest: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
    let rest_dim: usize = rest.iter().map(|&r| dims[r]).product();
    let mut stride = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        stride[i] = stride[i + 1] * dims[i + 1];
    }
    let unrank = |mut r: usize, facs: &[usize]| -> Vec<usize> {
        let mut out = vec![0; facs.len()];
        for (slot, &f) in facs.iter().enumerate().rev() {
            out[slot] = r % dims[f];
            r /= dims[f];
        }
        out
    };
    let mut out = zeros(total, total);
    for a in 0..kept_dim {
        let ai = unrank(a, keep);
        for b in 0..kept_dim {
            let v = y[(a, b)];
            if v == ZERO {
                continue;
            }
            let bi = unrank(b, keep);
            for s in 0..rest_dim {
                let si = unrank(s, &rest);
                let mut row = 0usize;
                let mut col = 0usize;
                for (slot, &f) in keep.iter().enumerate() {
                    row += ai[slot] * stride[f];
                    col += bi[slot] * stride[f];
                }
                for (slot, &f) in rest.iter().enumerate() {
                    row += si[slot] * stride[f];
                    col += si[slot] * stride[f];
                }
                out[(row, col)] += v;
            }
        }
    }
    Ok(out)
}

/// Solve `A X = B` by LU with partial pivoting.
pub fn lu_solve(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    a.clone()
        .lu()
        .solve(b)
        .ok_or_else(|| Error::Solver("singular linear system".into()))
}

#[cfg(test)]
mod tests;
