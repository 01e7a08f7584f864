//! Coupling transport cost `T_C(ρ₁,ρ₂) = inf { Tr(πC) : π ⪰ 0, marginals fixed }`.

use super::w1::{TransportResult, TransportValue};
use crate::error::{Error, Result};
use crate::matcore::{
    herm_eigvals, hermitize, identity, is_hermitian, kron, CMatrix, Complex64, DensityState,
};
use crate::optim::{
    herm_basis, herm_basis_matrix, solve_sdp, BlockMat, SdpProblem, SdpStatus, Sense, SolveOptions,
};

fn realify_lower(bm: &mut BlockMat, h: &CMatrix) {
    let d = h.nrows();
    for a in 0..d {
        for b in 0..=a {
            let re = h[(a, b)].re;
            if re != 0.0 {
                bm.push(a, b, re);
                bm.push(d + a, d + b, re);
            }
        }
    }
    for a in 0..d {
        for b in 0..d {
            let im = h[(a, b)].im;
            if im != 0.0 {
                bm.push(d + a, b, im);
            }
        }
    }
}

/// Primal coupling SDP with the dual value surfaced through the solver gap.
pub fn coupling_cost(
    cost: &CMatrix,
    rho1: &DensityState,
    rho2: &DensityState,
) -> Result<TransportResult> {
    coupling_cost_opts(cost, rho1, rho2, &SolveOptions::default())
}

pub fn coupling_cost_opts(
    cost: &CMatrix,
    rho1: &DensityState,
    rho2: &DensityState,
    opts: &SolveOptions,
) -> Result<TransportResult> {
    let d = rho1.dim();
    if rho2.dim() != d {
        return Err(Error::dim("coupling_cost: marginal dimensions differ"));
    }
    let dd = d * d;
    if cost.nrows() != dd || cost.ncols() != dd {
        return Err(Error::dim(format!(
            "cost operator must be {dd}x{dd} on H⊗H"
        )));
    }
    if !is_hermitian(cost, 1e-9) {
        return Err(Error::pre("cost operator must be Hermitian"));
    }
    let evs = herm_eigvals(cost)?;
    if evs[0] < -1e-9 {
        return Err(Error::pre(format!(
            "cost operator must be PSD; eigenvalue {:.3e}",
            evs[0]
        )));
    }
    // Two pure marginals admit exactly one coupling, the product state; the
    // primal program degenerates to a single boundary point there, so it is
    // evaluated in closed form and the dual program supplies the cross-check.
    let purity = |r: &DensityState| {
        herm_eigvals(r.matrix())
            .map(|v| v.last().copied().unwrap_or(0.0))
            .unwrap_or(0.0)
    };
    if purity(rho1) >= 1.0 - 1e-12 && purity(rho2) >= 1.0 - 1e-12 {
        let pi = kron(rho1.matrix(), rho2.matrix());
        let value = (cost * &pi).diagonal().iter().map(|z| z.re).sum::<f64>();
        let dual = coupling_cost_dual(cost, rho1, rho2, opts)?;
        return Ok(TransportResult {
            value: TransportValue::Finite(value),
            witness: Some(pi),
            gap: (value - dual).abs(),
            iterations: 0,
        });
    }

    // Variable: realified coupling on H⊗H (block of size 2d²).
    // Constraints: ⟨B⊗1, π⟩ = Tr(Bρ₁) over the full Hermitian basis,
    // ⟨1⊗B, π⟩ = Tr(Bρ₂) over the traceless part (the trace row repeats).
    let mut objective = BlockMat::default();
    realify_lower(&mut objective, cost);
    let mut constraints: Vec<(Vec<BlockMat>, f64)> = Vec::new();
    let eye = identity(d);
    for e in herm_basis(d) {
        let bmat = herm_basis_matrix(d, e);
        let lifted = kron(&bmat, &eye);
        let mut a = BlockMat::default();
        realify_lower(&mut a, &lifted);
        let target = (rho1.matrix() * &bmat).diagonal().iter().map(|z| z.re).sum::<f64>();
        constraints.push((vec![a], 2.0 * target));
    }
    for e in herm_basis(d) {
        let bmat = herm_basis_matrix(d, e);
        // drop the pure-trace direction: it is already fixed by the ρ₁ rows
        let tr: Complex64 = bmat.diagonal().sum();
        let traceless = &bmat - &eye * (tr / crate::matcore::cr(d as f64));
        if crate::matcore::max_abs(&traceless) < 1e-14 {
            continue;
        }
        let lifted = kron(&eye, &traceless);
        let mut a = BlockMat::default();
        realify_lower(&mut a, &lifted);
        let target = (rho2.matrix() * &traceless)
            .diagonal()
            .iter()
            .map(|z| z.re)
            .sum::<f64>();
        constraints.push((vec![a], 2.0 * target));
    }
    let p = SdpProblem {
        block_dims: vec![2 * dd],
        objective: vec![objective],
        constraints,
        sense: Sense::Min,
    };
    let sol = solve_sdp(&p, opts)?;
    if sol.status == SdpStatus::Infeasible {
        return Err(Error::Solver("coupling SDP reported infeasible".into()));
    }
    if sol.status == SdpStatus::MaxIter && sol.gap > 1e-5 {
        return Err(Error::Solver(format!(
            "coupling SDP stalled with gap {:.3e}",
            sol.gap
        )));
    }
    // primal value carries the factor 2 from realification
    let value = 0.5 * sol.primal_objective;
    let xr = &sol.primal_blocks[0];
    let mut pi = CMatrix::zeros(dd, dd);
    for r in 0..dd {
        for c in 0..dd {
            let re = 0.5 * (xr[(r, c)] + xr[(dd + r, dd + c)]);
            let im = 0.5 * (xr[(dd + r, c)] - xr[(r, dd + c)]);
            pi[(r, c)] = Complex64::new(re, im);
        }
    }
    Ok(TransportResult {
        value: TransportValue::Finite(value),
        witness: Some(hermitize(&pi)),
        gap: sol.gap,
        iterations: sol.iterations,
    })
}

/// Dual value of the coupling program: `sup Tr(ρ₁x) − Tr(ρ₂y)` over
/// `x⊗1 − 1⊗y ⪯ C`; used as the primal/dual cross-check oracle.
///
/// The supremum need not be attained (rank-deficient marginals drive the
/// maximizing sequence to infinity), so the variables are boxed at ±R with
/// R = 1e8; this restores attainment at the cost of an O(1/R) downward bias.
pub fn coupling_cost_dual(
    cost: &CMatrix,
    rho1: &DensityState,
    rho2: &DensityState,
    opts: &SolveOptions,
) -> Result<f64> {
    const R_BOX: f64 = 1e8;
    let d = rho1.dim();
    let eye = identity(d);
    let mut b = crate::optim::LmiBuilder::new();
    let block = b.add_complex_block(d * d);
    b.set_const_complex(block, cost, 1.0);
    let x_hi = b.add_complex_block(d);
    let x_lo = b.add_complex_block(d);
    let y_hi = b.add_complex_block(d);
    let y_lo = b.add_complex_block(d);
    for blk in [x_hi, x_lo, y_hi, y_lo] {
        b.set_const_complex(blk, &eye, R_BOX);
    }
    for e in herm_basis(d) {
        let bmat = herm_basis_matrix(d, e);
        let obj_x = (rho1.matrix() * &bmat).diagonal().iter().map(|z| z.re).sum::<f64>();
        let vx = b.add_var(obj_x);
        b.add_coeff_complex(block, vx, &kron(&bmat, &eye), 1.0);
        b.add_coeff_complex(x_hi, vx, &bmat, 1.0);
        b.add_coeff_complex(x_lo, vx, &bmat, -1.0);
        let obj_y = (rho2.matrix() * &bmat).diagonal().iter().map(|z| z.re).sum::<f64>();
        let vy = b.add_var(-obj_y);
        b.add_coeff_complex(block, vy, &kron(&eye, &bmat), -1.0);
        b.add_coeff_complex(y_hi, vy, &bmat, 1.0);
        b.add_coeff_complex(y_lo, vy, &bmat, -1.0);
    }
    let sol = solve_sdp(&b.build(), opts)?;
    if sol.status == SdpStatus::Infeasible {
        return Err(Error::Solver("coupling dual reported infeasible".into()));
    }
    Ok(sol.value(Sense::Max))
}
