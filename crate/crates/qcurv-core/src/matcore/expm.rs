use super::{cr, herm_defect, herm_eig, identity, is_finite, lu_solve, max_abs, CMatrix, Complex64};
use crate::error::{Error, Result};

/// Matrix exponential.
///
/// Hermitian and skew-Hermitian inputs go through the eigendecomposition
/// (keeping the result exactly Hermitian resp. unitary up to round-off);
/// everything else uses degree-13 Padé with scaling and squaring.
pub fn mat_exp(m: &CMatrix) -> Result<CMatrix> {
    if !m.is_square() {
        return Err(Error::dim("mat_exp expects a square matrix"));
    }
    if !is_finite(m) {
        return Err(Error::pre("mat_exp: non-finite entries"));
    }
    let scale = max_abs(m).max(1e-300);
    if herm_defect(m) <= 1e-12 * scale {
        let (vals, u) = herm_eig(m)?;
        let d = m.nrows();
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            d,
            vals.iter().map(|&x| cr(x.exp())),
        ));
        return Ok(&u * diag * u.adjoint());
    }
    let skew = max_abs(&(m + m.adjoint()));
    if skew <= 1e-12 * scale {
        // exp(M) = exp(-iH) for H = iM Hermitian.
        let h = m * Complex64::new(0.0, 1.0);
        let (vals, u) = herm_eig(&h)?;
        let d = m.nrows();
        let diag = CMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            d,
            vals.iter().map(|&x| Complex64::new(x.cos(), -x.sin())),
        ));
        return Ok(&u * diag * u.adjoint());
    }
    pade13(m)
}

fn one_norm(m: &CMatrix) -> f64 {
    (0..m.ncols())
        .map(|j| m.column(j).iter().map(|z| z.norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

fn pade13(m: &CMatrix) -> Result<CMatrix> {
    const THETA13: f64 = 5.371920351148152;
    const B: [f64; 14] = [
        64764752532480000.0,
        32382376266240000.0,
        7771770303897600.0,
        1187353796428800.0,
        129060195264000.0,
        10559470521600.0,
        670442572800.0,
        33522128640.0,
        1323241920.0,
        40840800.0,
        960960.0,
        16380.0,
        182.0,
        1.0,
    ];
    let d = m.nrows();
    let norm = one_norm(m);
    let s = if norm > THETA13 {
        (norm / THETA13).log2().ceil() as i32
    } else {
        0
    };
    let a = m * cr(0.5f64.powi(s));
    let id = identity(d);
    let a2 = &a * &a;
    let a4 = &a2 * &a2;
    let a6 = &a2 * &a4;
    let u_inner = &a6 * (&a6 * cr(B[13]) + &a4 * cr(B[11]) + &a2 * cr(B[9]))
        + &a6 * cr(B[7])
        + &a4 * cr(B[5])
        + &a2 * cr(B[3])
        + &id * cr(B[1]);
    let u = &a * u_inner;
    let v = &a6 * (&a6 * cr(B[12]) + &a4 * cr(B[10]) + &a2 * cr(B[8]))
        + &a6 * cr(B[6])
        + &a4 * cr(B[4])
        + &a2 * cr(B[2])
        + &id * cr(B[0]);
    let mut r = lu_solve(&(&v - &u), &(&v + &u))?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}
