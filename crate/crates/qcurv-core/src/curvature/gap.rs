//! Spectral gap on L₂(ω) and the (2–∞) Poincaré constant.

use crate::channels::{gns_symmetry_defect, gns_weights, Channel, ConditionalExpectation};
use crate::error::{Error, Result};
use crate::matcore::{herm_eigvals, hermitize, op_norm, CMatrix};
use crate::metrics::{SemiNormSpec, SemiNormVariant};
use crate::optim::{herm_basis, herm_basis_matrix, solve_sdp, LmiBuilder, SdpStatus, Sense, SolveOptions};

/// `1 − ‖P restricted to the ω-orthogonal complement of the fixed algebra‖`
/// in the GNS inner product `⟨x,y⟩_ω = ω(x†y)`.
///
/// The literal infimum definition of the gap is inconsistent with the
/// spectral-radius argument that proves `λ(P) ≥ κ`; this implements the
/// `1 − sup` version the proof actually bounds.
pub fn spectral_gap(
    ch: &Channel,
    omega: &crate::matcore::DensityState,
    e: &ConditionalExpectation,
) -> Result<f64> {
    let defect = gns_symmetry_defect(ch.superop(), omega)?;
    if defect > 1e-8 {
        return Err(Error::pre(format!(
            "spectral gap needs a GNS-symmetric channel (defect {defect:.3e})"
        )));
    }
    let (g_half, g_inv_half) = gns_weights(omega)?;
    let k = &g_half * ch.superop().matrix() * &g_inv_half;
    let pi = {
        let e_sym = &g_half * e.channel().superop().matrix() * &g_inv_half;
        let d2 = e_sym.nrows();
        crate::matcore::identity(d2) - hermitize(&e_sym)
    };
    let restricted = hermitize(&(&pi * k * &pi));
    let vals = herm_eigvals(&restricted)?;
    let radius = vals
        .iter()
        .fold(0.0f64, |acc, &x| acc.max(x.abs()));
    Ok(1.0 - radius)
}

/// Upper bound on `C = sup{‖x−E(x)‖_{L₂(ω)} : L(x) ≤ 1}` through the moment
/// lifting `W ⪰ yyᵀ` with variant-specific quadratic cuts, plus the +∞ test
/// when ker L is not fixed by E.
pub fn poincare_2inf_constant(
    spec: &SemiNormSpec,
    omega: &crate::matcore::DensityState,
    e: &ConditionalExpectation,
) -> Result<Option<f64>> {
    let d = spec.dim();
    // unbounded iff some kernel direction is moved by id − E
    for n in spec.kernel_basis() {
        let moved = &n - e.apply(&n);
        if op_norm(&moved)? > 1e-8 * op_norm(&n)?.max(1e-30) {
            return Ok(None);
        }
    }
    let basis = herm_basis(d);
    let nb = basis.len();
    // Q_ij = Re⟨(1−E)B_i, (1−E)B_j⟩_{L₂(ω)}
    let (g_half, _) = gns_weights(omega)?;
    let gw = g_half.adjoint() * &g_half;
    let mapped: Vec<crate::matcore::CVector> = basis
        .iter()
        .map(|el| {
            let b = herm_basis_matrix(d, *el);
            let m = &b - e.apply(&b);
            crate::matcore::vec_mat(&m)
        })
        .collect();
    let mut q = nalgebra::DMatrix::<f64>::zeros(nb, nb);
    for i in 0..nb {
        for j in 0..nb {
            q[(i, j)] = (mapped[i].adjoint() * &gw * &mapped[j])[(0, 0)].re;
        }
    }
    let q = (&q + q.transpose()) * 0.5;

    // moment block [[1, yᵀ],[y, W]] ⪰ 0 (real), maximize Tr(QW)
    let mut b = LmiBuilder::new();
    let lifted = b.add_real_block(1 + nb);
    b.set_const_real_entry(lifted, 0, 0, 1.0);
    let mut y_vars = Vec::with_capacity(nb);
    for i in 0..nb {
        let v = b.add_var(0.0);
        b.add_coeff_real_entry(lifted, v, 1 + i, 0, -1.0);
        y_vars.push(v);
    }
    let mut w_vars = vec![vec![None; nb]; nb];
    let mut objective_terms: Vec<(crate::optim::VarId, f64)> = Vec::new();
    for i in 0..nb {
        for j in 0..=i {
            let coeff = if i == j { q[(i, j)] } else { 2.0 * q[(i, j)] };
            let v = b.add_var(coeff);
            b.add_coeff_real_entry(lifted, v, 1 + i, 1 + j, -1.0);
            w_vars[i][j] = Some(v);
            objective_terms.push((v, coeff));
        }
    }
    // first-order ball on y
    crate::metrics::add_ball_constraints(&mut b, spec, &y_vars, 1.0)?;
    // quadratic cuts: Tr-valid inequalities linear in W
    let add_quadratic_cut = |b: &mut LmiBuilder, images: &[Vec<CMatrix>], bound: f64| {
        // Σ_k Σ_ij W_ij Re⟨K_k(B_i), K_k(B_j)⟩ ≤ bound
        let mut coef = nalgebra::DMatrix::<f64>::zeros(nb, nb);
        for imgs in images {
            for i in 0..nb {
                for j in 0..nb {
                    coef[(i, j)] += crate::matcore::hs_inner(&imgs[i], &imgs[j]).re;
                }
            }
        }
        let mut terms: Vec<(crate::optim::VarId, f64)> = Vec::new();
        for i in 0..nb {
            for j in 0..=i {
                let c = if i == j { coef[(i, j)] } else { coef[(i, j)] + coef[(j, i)] };
                if c.abs() > 1e-14 {
                    terms.push((w_vars[i][j].expect("w var"), c));
                }
            }
        }
        b.add_scalar_ge0(bound, &terms);
    };
    let images_of = |f: &dyn Fn(&CMatrix) -> CMatrix| -> Vec<CMatrix> {
        basis
            .iter()
            .map(|el| f(&herm_basis_matrix(d, *el)))
            .collect()
    };
    match &spec.variant {
        SemiNormVariant::OperatorNorm => {
            add_quadratic_cut(&mut b, &[images_of(&|x| x.clone())], d as f64);
        }
        SemiNormVariant::CommutatorMax { generators } => {
            for a in generators {
                let a = a.clone();
                add_quadratic_cut(
                    &mut b,
                    &[images_of(&move |x| crate::matcore::commutator(&a, x))],
                    d as f64,
                );
            }
        }
        SemiNormVariant::CommutatorL2 { generators } => {
            let imgs: Vec<Vec<CMatrix>> = generators
                .iter()
                .map(|g| {
                    let g = g.clone();
                    images_of(&move |x| crate::matcore::commutator(&g, x))
                })
                .collect();
            add_quadratic_cut(&mut b, &imgs, d as f64);
        }
        SemiNormVariant::Oscillator { site_dims } | SemiNormVariant::Ornstein { site_dims } => {
            for site in 0..site_dims.len() {
                let tau = ConditionalExpectation::site_replacement(site_dims, site)?;
                add_quadratic_cut(
                    &mut b,
                    &[images_of(&move |x| x - tau.apply(x))],
                    d as f64,
                );
            }
        }
        SemiNormVariant::GammaNorm { generator } => {
            let fam = crate::metrics::extract_trace_symmetric_lindblad(generator)?;
            let imgs: Vec<Vec<CMatrix>> = fam
                .iter()
                .map(|v| {
                    let v = v.clone();
                    images_of(&move |x| {
                        crate::matcore::commutator(&v, x) * crate::matcore::cr(0.5f64.sqrt())
                    })
                })
                .collect();
            add_quadratic_cut(&mut b, &imgs, d as f64);
        }
    }
    let sol = solve_sdp(&b.build(), &SolveOptions::default())?;
    if sol.status == SdpStatus::Infeasible {
        return Ok(None);
    }
    if sol.status == SdpStatus::MaxIter && sol.gap > 1e-5 {
        return Err(Error::Solver(format!(
            "poincaré lifting stalled with gap {:.3e}",
            sol.gap
        )));
    }
    Ok(Some(sol.value(Sense::Max).max(0.0).sqrt()))
}
