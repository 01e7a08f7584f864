//! Gibbs states and Petz heat-bath samplers for commuting local Hamiltonians.

use super::generator::{GeneratorSpec, LocalStructure, SiteGenerator};
use crate::error::{Error, Result};
use crate::matcore::{
    cr, embed, herm_eig, identity, max_abs, op_norm, partial_trace, CMatrix, CVector,
    DensityState, SuperOp,
};

/// `e^{−βH}/Tr e^{−βH}`, computed in H's eigenbasis with a spectral shift.
pub fn gibbs_state(h: &CMatrix, beta: f64) -> Result<DensityState> {
    let (vals, u) = herm_eig(h)?;
    let lmin = vals.iter().cloned().fold(f64::INFINITY, f64::min);
    // shift so the largest Boltzmann weight is 1; avoids overflow at large β
    let shift = if beta >= 0.0 { lmin } else { vals[vals.len() - 1] };
    let w: Vec<f64> = vals.iter().map(|&x| (-(beta) * (x - shift)).exp()).collect();
    let z: f64 = w.iter().sum();
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        w.iter().map(|&x| cr(x / z)),
    ));
    DensityState::new(&u * diag * u.adjoint())
}

/// Local Hamiltonian `H = Σ_A h_A` on a hypergraph of qudit sites.
#[derive(Debug, Clone)]
pub struct HamiltonianSpec {
    pub n_sites: usize,
    pub site_dim: usize,
    /// (support sites, local operator on those sites in increasing order)
    pub terms: Vec<(Vec<usize>, CMatrix)>,
}

impl HamiltonianSpec {
    pub fn dims(&self) -> Vec<usize> {
        vec![self.site_dim; self.n_sites]
    }

    pub fn total_dim(&self) -> usize {
        self.site_dim.pow(self.n_sites as u32)
    }

    pub fn full_matrix(&self) -> Result<CMatrix> {
        let dims = self.dims();
        let mut h = crate::matcore::zeros(self.total_dim(), self.total_dim());
        for (supp, op) in &self.terms {
            h += embed(op, &dims, supp)?;
        }
        Ok(h)
    }

    /// Nearest-neighbour Ising chain `J Σ σ₃σ₃ + h Σ σ₁` on qubit sites.
    pub fn ising_chain(n: usize, coupling: f64, field: f64) -> Self {
        let sz = super::pauli::pauli_matrix(3);
        let sx = super::pauli::pauli_matrix(1);
        let zz = crate::matcore::kron(&sz, &sz) * cr(coupling);
        let mut terms: Vec<(Vec<usize>, CMatrix)> = (0..n.saturating_sub(1))
            .map(|v| (vec![v, v + 1], zz.clone()))
            .collect();
        if field != 0.0 {
            for v in 0..n {
                terms.push((vec![v], &sx * cr(field)));
            }
        }
        HamiltonianSpec {
            n_sites: n,
            site_dim: 2,
            terms,
        }
    }

    /// Neighborhood of a site: union of the supports containing it (just the
    /// site itself when no term touches it).
    pub fn neighborhood(&self, v: usize) -> Vec<usize> {
        let mut nv: Vec<usize> = self
            .terms
            .iter()
            .filter(|(supp, _)| supp.contains(&v))
            .flat_map(|(supp, _)| supp.iter().copied())
            .collect();
        nv.push(v);
        nv.sort_unstable();
        nv.dedup();
        nv
    }
}

fn herm_power(m: &CMatrix, p: f64, kernel_cut: f64) -> Result<CMatrix> {
    let (vals, u) = herm_eig(m)?;
    let lmax = vals.iter().cloned().fold(0.0f64, f64::max).max(1e-300);
    let diag = CMatrix::from_diagonal(&CVector::from_iterator(
        vals.len(),
        vals.iter().map(|&x| {
            if x > kernel_cut * lmax {
                cr(x.powf(p))
            } else {
                cr(0.0)
            }
        }),
    ));
    Ok(&u * diag * u.adjoint())
}

/// Heat-bath generator `L_V = Σ_v (Ψ_v − id)` in the Heisenberg picture, with
/// `Ψ_v(X) = ω_{v^c}^{-1/2} Tr_v(ω^{1/2} X ω^{1/2}) ω_{v^c}^{-1/2}`.
///
/// Requires pairwise-commuting terms with `‖h_A‖ ≤ 1`.
pub fn heat_bath_generator(h: &HamiltonianSpec, beta: f64) -> Result<GeneratorSpec> {
    let dims = h.dims();
    // commuting-term precondition
    let embedded: Vec<CMatrix> = h
        .terms
        .iter()
        .map(|(supp, op)| embed(op, &dims, supp))
        .collect::<Result<Vec<_>>>()?;
    for (supp, op) in &h.terms {
        let _ = supp;
        if op_norm(op)? > 1.0 + 1e-9 {
            return Err(Error::pre("heat_bath_generator requires ‖h_A‖ ≤ 1"));
        }
    }
    for i in 0..embedded.len() {
        for j in (i + 1)..embedded.len() {
            let comm = &embedded[i] * &embedded[j] - &embedded[j] * &embedded[i];
            if max_abs(&comm) > 1e-10 {
                return Err(Error::pre(format!(
                    "heat_bath_generator requires commuting terms; ‖[h_{i}, h_{j}]‖ = {:.3e}",
                    max_abs(&comm)
                )));
            }
        }
    }

    let d = h.total_dim();
    let omega = gibbs_state(&h.full_matrix()?, beta)?;
    let w_half = herm_power(omega.matrix(), 0.5, 0.0)?;

    let mut sites = Vec::with_capacity(h.n_sites);
    let mut total = crate::matcore::zeros(d * d, d * d);
    for v in 0..h.n_sites {
        let keep: Vec<usize> = (0..h.n_sites).filter(|&k| k != v).collect();
        let w_vc = partial_trace(omega.matrix(), &dims, &keep)?;
        let w_vc_mhalf = herm_power(&w_vc, -0.5, 1e-14)?;
        let psi = SuperOp::of_map(d, |x| {
            let inner = partial_trace(&(&w_half * x * &w_half), &dims, &keep)
                .expect("dims validated");
            let core = &w_vc_mhalf * inner * &w_vc_mhalf;
            embed(&core, &dims, &keep).expect("dims validated")
        });
        total += psi.matrix() - SuperOp::identity(d).matrix();
        sites.push(SiteGenerator {
            site: v,
            neighborhood: h.neighborhood(v),
            psi,
        });
    }
    let superop = SuperOp::new(d, total)?;
    let gen = GeneratorSpec::new(
        superop,
        Some(LocalStructure {
            dims: dims.clone(),
            sites,
        }),
    )?;
    let _ = identity(d);
    Ok(gen)
}
