//! Lipschitz semi-norm families and their evaluation.

use crate::channels::ConditionalExpectation;
use crate::error::{Error, Result};
use crate::matcore::{
    commutator, herm_eig, hermitize, is_hermitian, op_norm, trace_norm, vec_mat, CMatrix, CVector,
    SuperOp, ZERO,
};
use crate::optim::{herm_basis, herm_basis_matrix, LmiBuilder, SdpStatus, Sense, SolveOptions};

#[derive(Debug, Clone)]
pub enum SemiNormVariant {
    /// The operator norm ‖x‖ (a norm: kernel {0}; dual distance is the trace distance).
    OperatorNorm,
    /// `L(x) = max_j ‖[A_j, x]‖`.
    CommutatorMax { generators: Vec<CMatrix> },
    /// `⦀x⦀_{∂,2} = (Σ_j ‖[v_j, x]‖²)^{1/2}`.
    CommutatorL2 { generators: Vec<CMatrix> },
    /// `Σ_i ‖x − τ_i(x)‖` over tensor sites.
    Oscillator { site_dims: Vec<usize> },
    /// `max_i min_{x⁽ⁱ⁾} ‖x − x⁽ⁱ⁾ ⊗ 1_i‖`.
    Ornstein { site_dims: Vec<usize> },
    /// `max(‖Γ(x,x)‖, ‖Γ(x*,x*)‖)^{1/2}` for the gradient form of a generator.
    GammaNorm { generator: SuperOp },
}

/// A Lipschitz semi-norm together with its kernel descriptor (used for the
/// `W = ∞` test before any dual solve).
#[derive(Debug, Clone)]
pub struct SemiNormSpec {
    pub variant: SemiNormVariant,
    dim: usize,
    /// Orthogonal projector (trace inner product) onto ker L, as a
    /// superoperator matrix; `None` encodes the trivial kernel {0}.
    kernel_projector: Option<CMatrix>,
}

impl SemiNormSpec {
    pub fn new(variant: SemiNormVariant, dim: usize) -> Result<Self> {
        let kernel_projector = match &variant {
            SemiNormVariant::OperatorNorm => None,
            SemiNormVariant::CommutatorMax { generators }
            | SemiNormVariant::CommutatorL2 { generators } => {
                if generators.is_empty() {
                    return Err(Error::pre("commutator semi-norm needs generators"));
                }
                if generators.iter().any(|g| g.nrows() != dim || g.ncols() != dim) {
                    return Err(Error::dim("generator dimension mismatch"));
                }
                Some(commutant_projector(generators, dim)?)
            }
            SemiNormVariant::Oscillator { site_dims } | SemiNormVariant::Ornstein { site_dims } => {
                let prod: usize = site_dims.iter().product();
                if prod != dim {
                    return Err(Error::dim(format!(
                        "site dims product {prod} does not factor dimension {dim}"
                    )));
                }
                Some(scalar_projector(dim))
            }
            SemiNormVariant::GammaNorm { generator } => {
                if generator.dim() != dim {
                    return Err(Error::dim("generator superoperator dimension mismatch"));
                }
                Some(nullspace_projector(generator.matrix())?)
            }
        };
        Ok(SemiNormSpec {
            variant,
            dim,
            kernel_projector,
        })
    }

    pub fn operator_norm(dim: usize) -> Self {
        SemiNormSpec::new(SemiNormVariant::OperatorNorm, dim).expect("valid")
    }

    pub fn commutator_max(generators: Vec<CMatrix>) -> Result<Self> {
        let dim = generators
            .first()
            .map(|g| g.nrows())
            .ok_or_else(|| Error::pre("empty generator list"))?;
        SemiNormSpec::new(SemiNormVariant::CommutatorMax { generators }, dim)
    }

    pub fn commutator_l2(generators: Vec<CMatrix>) -> Result<Self> {
        let dim = generators
            .first()
            .map(|g| g.nrows())
            .ok_or_else(|| Error::pre("empty generator list"))?;
        SemiNormSpec::new(SemiNormVariant::CommutatorL2 { generators }, dim)
    }

    pub fn oscillator(site_dims: Vec<usize>) -> Result<Self> {
        let dim = site_dims.iter().product();
        SemiNormSpec::new(SemiNormVariant::Oscillator { site_dims }, dim)
    }

    pub fn ornstein(site_dims: Vec<usize>) -> Result<Self> {
        let dim = site_dims.iter().product();
        SemiNormSpec::new(SemiNormVariant::Ornstein { site_dims }, dim)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// ‖Proj_{ker L}(δ)‖₁; transport between states differing here is infinite.
    pub fn kernel_component_trace_norm(&self, delta: &CMatrix) -> f64 {
        match &self.kernel_projector {
            None => 0.0,
            Some(p) => {
                let v = p * vec_mat(delta);
                let m = crate::matcore::unvec(&v, self.dim);
                trace_norm(&hermitize(&m))
            }
        }
    }

    /// Basis of ker L (as matrices), from the stored projector.
    pub fn kernel_basis(&self) -> Vec<CMatrix> {
        match &self.kernel_projector {
            None => Vec::new(),
            Some(p) => {
                let (vals, u) = herm_eig(p).expect("projector Hermitian");
                let mut out = Vec::new();
                for (i, &v) in vals.iter().enumerate() {
                    if v > 0.5 {
                        let col: CVector = u.column(i).into_owned();
                        out.push(crate::matcore::unvec(&col, self.dim));
                    }
                }
                out
            }
        }
    }

    pub fn kernel_projector(&self) -> Option<&CMatrix> {
        self.kernel_projector.as_ref()
    }
}

/// Orthogonal projector onto `{x : [A_j, x] = 0 ∀j}`.
fn commutant_projector(generators: &[CMatrix], dim: usize) -> Result<CMatrix> {
    let d2 = dim * dim;
    let mut k = crate::matcore::zeros(d2, d2);
    for g in generators {
        let dj = SuperOp::commutator_with(g);
        k += dj.matrix().adjoint() * dj.matrix();
    }
    nullspace_projector(&k)
}

fn nullspace_projector(k: &CMatrix) -> Result<CMatrix> {
    let ksym = &hermitize(&(k.adjoint() * k));
    let (vals, u) = herm_eig(ksym)?;
    let lmax = vals.iter().cloned().fold(0.0f64, f64::max).max(1e-30);
    let d2 = vals.len();
    let mut p = crate::matcore::zeros(d2, d2);
    for (i, &v) in vals.iter().enumerate() {
        if v <= 1e-12 * lmax {
            let col = u.column(i);
            for r in 0..d2 {
                for c in 0..d2 {
                    p[(r, c)] += col[r] * col[c].conj();
                }
            }
        }
    }
    Ok(p)
}

fn scalar_projector(dim: usize) -> CMatrix {
    let one = vec_mat(&crate::matcore::identity(dim));
    let n2 = dim as f64;
    CMatrix::from_fn(dim * dim, dim * dim, |r, c| one[r] * one[c].conj() / crate::matcore::cr(n2))
}

/// Evaluate the semi-norm on a Hermitian observable.
pub fn seminorm_eval(spec: &SemiNormSpec, x: &CMatrix) -> Result<f64> {
    if x.nrows() != spec.dim() || x.ncols() != spec.dim() {
        return Err(Error::dim(format!(
            "observable is {}x{}, semi-norm dimension is {}",
            x.nrows(),
            x.ncols(),
            spec.dim()
        )));
    }
    if !is_hermitian(x, 1e-8) {
        return Err(Error::pre("seminorm_eval expects a Hermitian observable"));
    }
    match &spec.variant {
        SemiNormVariant::OperatorNorm => op_norm(x),
        SemiNormVariant::CommutatorMax { generators } => {
            let mut best: f64 = 0.0;
            for a in generators {
                best = best.max(op_norm(&commutator(a, x))?);
            }
            Ok(best)
        }
        SemiNormVariant::CommutatorL2 { generators } => {
            let mut acc = 0.0;
            for v in generators {
                let n = op_norm(&commutator(v, x))?;
                acc += n * n;
            }
            Ok(acc.sqrt())
        }
        SemiNormVariant::Oscillator { site_dims } => {
            let mut acc = 0.0;
            for site in 0..site_dims.len() {
                let tau = ConditionalExpectation::site_replacement(site_dims, site)?;
                acc += op_norm(&(x - tau.apply(x)))?;
            }
            Ok(acc)
        }
        SemiNormVariant::Ornstein { site_dims } => {
            let mut best: f64 = 0.0;
            for site in 0..site_dims.len() {
                best = best.max(ornstein_site_value(x, site_dims, site)?);
            }
            Ok(best)
        }
        SemiNormVariant::GammaNorm { generator } => {
            let gxx = gamma_form(generator, x, false)?;
            let gss = gamma_form(generator, x, true)?;
            let a = op_norm(&gxx)?;
            let b = op_norm(&gss)?;
            Ok(a.max(b).sqrt())
        }
    }
}

/// `2Γ(x,x) = L(x†x) − L(x†)x − x†L(x)` (conjugate branch via `x ↦ x†`).
pub fn gamma_form(generator: &SuperOp, x: &CMatrix, conjugate: bool) -> Result<CMatrix> {
    let xx = if conjugate { x.adjoint() } else { x.clone() };
    let term = generator.apply(&(xx.adjoint() * &xx))
        - generator.apply(&xx.adjoint()) * &xx
        - xx.adjoint() * generator.apply(&xx);
    Ok(hermitize(&term) * crate::matcore::cr(0.5))
}

/// `min_{x⁽ⁱ⁾} ‖x − x⁽ⁱ⁾ ⊗ 1_i‖` at one site, as an SDP.
fn ornstein_site_value(x: &CMatrix, site_dims: &[usize], site: usize) -> Result<f64> {
    let keep: Vec<usize> = (0..site_dims.len()).filter(|&k| k != site).collect();
    let comp_dim: usize = keep.iter().map(|&k| site_dims[k]).product();
    let d = x.nrows();
    let mut b = LmiBuilder::new();
    let t = b.add_var(-1.0); // minimize t
    let upper = b.add_complex_block(d); // t·1 − (x − y⊗1) ⪰ 0
    let lower = b.add_complex_block(d); // t·1 + (x − y⊗1) ⪰ 0
    let eye = crate::matcore::identity(d);
    b.set_const_complex(upper, x, -1.0);
    b.set_const_complex(lower, x, 1.0);
    b.add_coeff_complex(upper, t, &eye, -1.0);
    b.add_coeff_complex(lower, t, &eye, -1.0);
    for e in herm_basis(comp_dim) {
        let v = b.add_var(0.0);
        let bm = herm_basis_matrix(comp_dim, e);
        let emb = crate::matcore::embed(&bm, site_dims, &keep)?;
        // x − y⊗1 appears with +emb·y in `upper` and −emb·y in `lower`
        b.add_coeff_complex(upper, v, &emb, -1.0);
        b.add_coeff_complex(lower, v, &emb, 1.0);
    }
    let sol = crate::optim::solve_sdp(&b.build(), &SolveOptions::default())?;
    if sol.status != SdpStatus::Optimal && sol.gap > 1e-6 {
        return Err(Error::Solver(format!(
            "ornstein site SDP did not converge (gap {:.3e})",
            sol.gap
        )));
    }
    Ok(-sol.value(Sense::Max))
}

/// Minimizer structure is occasionally useful in tests: value and the
/// optimal `x⁽ⁱ⁾` reconstructed from the dual vector.
pub fn ornstein_site_minimizer(
    x: &CMatrix,
    site_dims: &[usize],
    site: usize,
) -> Result<(f64, CMatrix)> {
    let keep: Vec<usize> = (0..site_dims.len()).filter(|&k| k != site).collect();
    let comp_dim: usize = keep.iter().map(|&k| site_dims[k]).product();
    let value = ornstein_site_value(x, site_dims, site)?;
    // one more solve to extract coordinates
    let d = x.nrows();
    let mut b = LmiBuilder::new();
    let t = b.add_var(-1.0);
    let upper = b.add_complex_block(d);
    let lower = b.add_complex_block(d);
    let eye = crate::matcore::identity(d);
    b.set_const_complex(upper, x, -1.0);
    b.set_const_complex(lower, x, 1.0);
    b.add_coeff_complex(upper, t, &eye, -1.0);
    b.add_coeff_complex(lower, t, &eye, -1.0);
    let basis = herm_basis(comp_dim);
    let mut vars = Vec::new();
    for e in &basis {
        let v = b.add_var(0.0);
        let bm = herm_basis_matrix(comp_dim, *e);
        let emb = crate::matcore::embed(&bm, site_dims, &keep)?;
        b.add_coeff_complex(upper, v, &emb, -1.0);
        b.add_coeff_complex(lower, v, &emb, 1.0);
        vars.push(v);
    }
    let sol = crate::optim::solve_sdp(&b.build(), &SolveOptions::default())?;
    let mut y = crate::matcore::zeros(comp_dim, comp_dim);
    for (e, v) in basis.iter().zip(&vars) {
        let c = sol.y[v.0];
        if c != 0.0 {
            y += herm_basis_matrix(comp_dim, *e) * crate::matcore::cr(c);
        }
    }
    let _ = ZERO;
    Ok((value, y))
}
