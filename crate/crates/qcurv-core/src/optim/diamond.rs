//! Completely bounded trace norm (diamond norm) of a Hermiticity-preserving
//! map, from its Choi matrix.

use super::build::{herm_basis, herm_basis_matrix, LmiBuilder};
use super::sdp::{solve_sdp, SdpStatus, Sense, SolveOptions};
use crate::error::{Error, Result};
use crate::matcore::{is_hermitian, CMatrix};
use nalgebra::DMatrix;

/// Diamond norm of the map with Choi matrix `J = Σ_ij E_ij ⊗ Φ(E_ij)`
/// (input factor first, `din·dout = J.nrows()`).
///
/// For Hermitian `J` the program reduces to
/// `min ‖Tr_out Y‖  s.t.  Y ⪰ J, Y ⪰ −J`,
/// solved as an LMI in `(t, Y)`. Real Choi matrices stay in real symmetric
/// variables (no realification blow-up).
pub fn diamond_norm(choi: &CMatrix, din: usize, dout: usize) -> Result<f64> {
    diamond_norm_opts(choi, din, dout, &SolveOptions::default())
}

pub fn diamond_norm_opts(
    choi: &CMatrix,
    din: usize,
    dout: usize,
    opts: &SolveOptions,
) -> Result<f64> {
    let dd = din * dout;
    if choi.nrows() != dd || choi.ncols() != dd {
        return Err(Error::dim(format!(
            "choi matrix is {}x{}, expected {dd}x{dd}",
            choi.nrows(),
            choi.ncols()
        )));
    }
    if !is_hermitian(choi, 1e-9) {
        return Err(Error::pre(
            "diamond_norm requires a Hermitian Choi matrix (Hermiticity-preserving map)",
        ));
    }
    let im_max = choi.iter().map(|z| z.im.abs()).fold(0.0f64, f64::max);
    let re_max = choi.iter().map(|z| z.re.abs()).fold(0.0f64, f64::max);
    let scale = re_max.max(im_max).max(1e-30);

    let mut b = LmiBuilder::new();
    let t = b.add_var(-1.0); // minimize t
    let sol;
    if im_max <= 1e-13 * scale {
        // Real symmetric path: Y real, blocks stay at size dd.
        let jr = DMatrix::from_fn(dd, dd, |r, c| choi[(r, c)].re);
        let plus = b.add_real_block(dd);
        let minus = b.add_real_block(dd);
        let tr_blk = b.add_real_block(din);
        b.set_const_real(plus, &jr, -1.0); // Y − J ⪰ 0 : C = −J, A_Y = −B
        b.set_const_real(minus, &jr, 1.0); // Y + J ⪰ 0
        for r in 0..din {
            b.add_coeff_real_entry(tr_blk, t, r, r, -1.0);
        }
        // Y coordinates: symmetric basis E_aa, (E_ab+E_ba)
        for a in 0..dd {
            for c2 in 0..=a {
                let v = b.add_var(0.0);
                b.add_coeff_real_entry(plus, v, a, c2, -1.0);
                b.add_coeff_real_entry(minus, v, a, c2, -1.0);
                // Tr_out of the basis element into the din-dim block.
                let (a_in, a_out) = (a / dout, a % dout);
                let (c_in, c_out) = (c2 / dout, c2 % dout);
                if a_out == c_out {
                    let (r, c) = if a_in >= c_in { (a_in, c_in) } else { (c_in, a_in) };
                    b.add_coeff_real_entry(tr_blk, v, r, c, 1.0);
                }
            }
        }
        sol = solve_sdp(&b.build(), opts)?;
    } else {
        let plus = b.add_complex_block(dd);
        let minus = b.add_complex_block(dd);
        let tr_blk = b.add_complex_block(din);
        b.set_const_complex(plus, choi, -1.0);
        b.set_const_complex(minus, choi, 1.0);
        let eye_in = CMatrix::identity(din, din);
        b.add_coeff_complex(tr_blk, t, &eye_in, -1.0);
        for e in herm_basis(dd) {
            let v = b.add_var(0.0);
            let bm = herm_basis_matrix(dd, e);
            b.add_coeff_complex(plus, v, &bm, -1.0);
            b.add_coeff_complex(minus, v, &bm, -1.0);
            let tr = crate::matcore::partial_trace(&bm, &[din, dout], &[0])
                .expect("basis partial trace");
            b.add_coeff_complex(tr_blk, v, &tr, 1.0);
        }
        sol = solve_sdp(&b.build(), opts)?;
    }
    match sol.status {
        SdpStatus::Optimal => Ok(-sol.value(Sense::Max)),
        SdpStatus::MaxIter if sol.gap < 1e-6 => Ok(-sol.value(Sense::Max)),
        other => Err(Error::Solver(format!(
            "diamond norm SDP did not converge: {other:?}, gap {:.3e}",
            sol.gap
        ))),
    }
}
