//! Operator means, derivation structures, and the metric-tensor
//! superoperator `M_ρ = Σ_j ∂_j† Λ_{ρ,j} ∂_j`.

use crate::error::{Error, Result};
use crate::matcore::{cr, herm_eig, kron, max_abs, CMatrix, CVector, DensityState, SuperOp};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeanKind {
    Arithmetic,
    Logarithmic,
    /// `[ρ]_ω(X) = ∫₀¹ e^{ω(s−1/2)} ρ^s X ρ^{1−s} ds`.
    WeightedExponential,
}

/// Generators `v_j`, Bohr frequencies `ω_j`, and a mean kind; the data of the
/// first-order differential structure `∂_j(x) = [v_j, x]`.
#[derive(Debug, Clone)]
pub struct DerivationStructure {
    generators: Vec<CMatrix>,
    bohr_frequencies: Vec<f64>,
    mean_kind: MeanKind,
    sigma: Option<DensityState>,
}

pub const MEAN_FLOOR: f64 = 1e-12;

impl DerivationStructure {
    pub fn new(
        generators: Vec<CMatrix>,
        bohr_frequencies: Vec<f64>,
        mean_kind: MeanKind,
        sigma: Option<DensityState>,
    ) -> Result<Self> {
        if generators.is_empty() {
            return Err(Error::pre("derivation structure needs generators"));
        }
        if generators.len() != bohr_frequencies.len() {
            return Err(Error::dim("one Bohr frequency per generator"));
        }
        let d = generators[0].nrows();
        if generators.iter().any(|g| g.nrows() != d || g.ncols() != d) {
            return Err(Error::dim("generators must be square of equal size"));
        }
        // closure under adjoints: {v_j} = {v_j†} as a set
        let scale = generators
            .iter()
            .map(max_abs)
            .fold(0.0f64, f64::max)
            .max(1e-30);
        for g in &generators {
            let adj = g.adjoint();
            let matched = generators.iter().any(|h| max_abs(&(h - &adj)) <= 1e-8 * scale);
            if !matched {
                return Err(Error::pre(
                    "generator set must be closed under adjoints",
                ));
            }
        }
        if let Some(s) = &sigma {
            if s.dim() != d {
                return Err(Error::dim("reference state dimension mismatch"));
            }
            // modular relation σ v_j σ⁻¹ = e^{−ω_j} v_j
            let (vals, u) = herm_eig(s.matrix())?;
            if vals.iter().any(|&x| x <= 0.0) {
                return Err(Error::pre("reference state must be faithful"));
            }
            let sm = s.matrix();
            let sinv = {
                let diag = CMatrix::from_diagonal(&CVector::from_iterator(
                    d,
                    vals.iter().map(|&x| cr(1.0 / x)),
                ));
                &u * diag * u.adjoint()
            };
            for (g, &w) in generators.iter().zip(&bohr_frequencies) {
                let lhs = sm * g * &sinv;
                let rhs = g * cr((-w).exp());
                if max_abs(&(lhs - rhs)) > 1e-8 * scale.max(1.0) {
                    return Err(Error::pre(format!(
                        "modular relation σvσ⁻¹ = e^(−ω)v violated for ω = {w}"
                    )));
                }
            }
        }
        Ok(DerivationStructure {
            generators,
            bohr_frequencies,
            mean_kind,
            sigma,
        })
    }

    /// Trace-symmetric structure: all frequencies zero, no reference state.
    pub fn symmetric(generators: Vec<CMatrix>, mean_kind: MeanKind) -> Result<Self> {
        let n = generators.len();
        DerivationStructure::new(generators, vec![0.0; n], mean_kind, None)
    }

    pub fn dim(&self) -> usize {
        self.generators[0].nrows()
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn generators(&self) -> &[CMatrix] {
        &self.generators
    }

    pub fn bohr_frequencies(&self) -> &[f64] {
        &self.bohr_frequencies
    }

    pub fn mean_kind(&self) -> MeanKind {
        self.mean_kind
    }

    pub fn sigma(&self) -> Option<&DensityState> {
        self.sigma.as_ref()
    }

    pub fn derivation(&self, j: usize) -> SuperOp {
        SuperOp::commutator_with(&self.generators[j])
    }
}

fn mean_coefficient(kind: MeanKind, omega: f64, pk: f64, pl: f64) -> f64 {
    match kind {
        MeanKind::Arithmetic => 0.5 * (pk + pl),
        MeanKind::Logarithmic => {
            let dl = pk.ln() - pl.ln();
            if dl.abs() < 1e-12 {
                // removable singularity: (p−q)/(ln p − ln q) → p as q → p
                pk
            } else {
                (pk - pl) / dl
            }
        }
        MeanKind::WeightedExponential => {
            let dl = pk.ln() - pl.ln() + omega;
            if dl.abs() < 1e-12 {
                // at the singular locus e^ω p_k = p_l both weighted endpoints
                // coincide with √(p_k p_l)
                (pk * pl).sqrt()
            } else {
                ((omega / 2.0).exp() * pk - (-omega / 2.0).exp() * pl) / dl
            }
        }
    }
}

/// Superoperator of the weighted operator mean `Λ_{ρ,j}`; diagonal in ρ's
/// eigenbasis with the coefficients of the selected mean.
pub fn mean_superop(rho: &DensityState, ds: &DerivationStructure, j: usize) -> Result<SuperOp> {
    if j >= ds.len() {
        return Err(Error::dim("derivation index out of range"));
    }
    let floored = match ds.mean_kind() {
        MeanKind::Arithmetic => rho.clone(),
        _ => rho.floored(MEAN_FLOOR),
    };
    let (vals, u) = herm_eig(floored.matrix())?;
    let d = rho.dim();
    let omega = ds.bohr_frequencies()[j];
    let mut diag = CVector::zeros(d * d);
    for l in 0..d {
        for k in 0..d {
            // vec index of (k,l) entry is l·d + k
            diag[l * d + k] = cr(mean_coefficient(
                ds.mean_kind(),
                omega,
                vals[k].max(1e-300),
                vals[l].max(1e-300),
            ));
        }
    }
    // Λ_ρ = (Ū⊗U) diag (Ū⊗U)†
    let w = kron(&u.conjugate(), &u);
    let mat = &w * CMatrix::from_diagonal(&diag) * w.adjoint();
    SuperOp::new(d, mat)
}

/// `M_ρ = Σ_j ∂_j† Λ_{ρ,j} ∂_j` as a superoperator matrix (Hermitian PSD).
pub fn metric_tensor_superop(rho: &DensityState, ds: &DerivationStructure) -> Result<CMatrix> {
    let d = ds.dim();
    if rho.dim() != d {
        return Err(Error::dim("state dimension does not match derivation"));
    }
    let mut m = crate::matcore::zeros(d * d, d * d);
    for j in 0..ds.len() {
        let dj = ds.derivation(j);
        let lam = mean_superop(rho, ds, j)?;
        m += dj.matrix().adjoint() * lam.matrix() * dj.matrix();
    }
    Ok(crate::matcore::hermitize(&m))
}

/// `‖x‖_{g,ρ} = √⟨vec x, M_ρ⁺ vec x⟩` for traceless Hermitian x in ran(M_ρ).
pub fn metric_tensor_norm(
    x: &CMatrix,
    rho: &DensityState,
    ds: &DerivationStructure,
) -> Result<f64> {
    let d = ds.dim();
    if x.nrows() != d || x.ncols() != d {
        return Err(Error::dim("observable dimension mismatch"));
    }
    let tr = crate::matcore::trace(x);
    let scale = max_abs(x).max(1e-30);
    if tr.norm() > 1e-9 * scale * d as f64 {
        return Err(Error::pre(format!(
            "metric tensor norm needs a traceless argument; trace = {:.3e}",
            tr.norm()
        )));
    }
    let m = metric_tensor_superop(rho, ds)?;
    let pinv = crate::matcore::pinv_on_support(&m, crate::matcore::PINV_EPS_DEFAULT)?;
    let v = crate::matcore::vec_mat(x);
    // kernel-component check: x must lie in ran(M_ρ)
    let proj = &m * &pinv * &v;
    let resid = (&v - proj).norm();
    let l2 = v.norm();
    if resid > 1e-8 * l2.max(1e-30) {
        return Err(Error::InfiniteMetric(format!(
            "argument has a kernel component of relative size {:.3e}; \
             the metric is infinite in that direction",
            resid / l2
        )));
    }
    let val = (v.adjoint() * &pinv * &v)[(0, 0)].re;
    Ok(val.max(0.0).sqrt())
}

/// Quadratic form `⟨∂x, Λ_ρ ∂x⟩` (the squared weighted gradient norm).
pub fn grad_norm_sq(x: &CMatrix, rho: &DensityState, ds: &DerivationStructure) -> Result<f64> {
    let m = metric_tensor_superop(rho, ds)?;
    let v = crate::matcore::vec_mat(x);
    Ok((v.adjoint() * m * &v)[(0, 0)].re)
}
