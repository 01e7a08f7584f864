//! Contraction-factor certification for Lipschitz semi-norms: structural
//! bounds where the channel family provides them, alternating witness
//! searches everywhere.

use crate::channels::{Channel, PauliChannelSpec};
use crate::error::{Error, Result};
use crate::matcore::{cr, herm_eig, hermitize, vec_mat, CMatrix};
use crate::metrics::{seminorm_eval, SemiNormSpec, SemiNormVariant};
use crate::optim::{herm_from_coords, solve_sdp, LmiBuilder, SdpStatus, SolveOptions};
use rand::Rng;

#[derive(Debug, Clone)]
pub struct SearchBudget {
    pub restarts: usize,
    pub iters: usize,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            restarts: 20,
            iters: 8,
        }
    }
}

/// Certified and witnessed bounds on the contraction factor
/// `sup L(P(x))/L(x)`.
#[derive(Debug, Clone)]
pub struct CurvatureReport {
    /// `1 − κ`: certified when `certified`, else the best factor found.
    pub upper_bound_factor: f64,
    /// Factor achieved by the returned witness.
    pub lower_bound_factor: f64,
    /// Coarse Ricci curvature lower bound implied by the upper factor.
    pub kappa: f64,
    pub witness: Option<CMatrix>,
    pub witness_seminorm: f64,
    pub witness_image_seminorm: f64,
    pub certified: bool,
    pub method: &'static str,
    /// Kernel element moved out of ker L by the channel, when preservation
    /// fails (the κ = −∞ case).
    pub kernel_violation: Option<CMatrix>,
}

impl CurvatureReport {
    fn kernel_violated(witness: CMatrix) -> Self {
        CurvatureReport {
            upper_bound_factor: f64::INFINITY,
            lower_bound_factor: f64::INFINITY,
            kappa: f64::NEG_INFINITY,
            witness: None,
            witness_seminorm: 0.0,
            witness_image_seminorm: f64::INFINITY,
            certified: false,
            method: "kernel-violation",
            kernel_violation: Some(witness),
        }
    }
}

/// `P(ker L) ⊆ ker L` check on a kernel basis; required for any finite κ.
pub fn kernel_preserved(ch: &Channel, spec: &SemiNormSpec) -> Result<Option<CMatrix>> {
    let proj = match spec.kernel_projector() {
        None => return Ok(None),
        Some(p) => p,
    };
    for n in spec.kernel_basis() {
        let image = ch.apply(&n);
        let v = vec_mat(&image);
        let outside = &v - proj * &v;
        if outside.norm() > 1e-8 * v.norm().max(1e-30) {
            return Ok(Some(n));
        }
    }
    Ok(None)
}

/// Supporting linear functional of the semi-norm at `y` (Hermitian G with
/// `Re Tr(Gz) ≤ L(z)` and equality at y).
fn supergradient(spec: &SemiNormSpec, y: &CMatrix) -> Result<Option<CMatrix>> {
    let top_pair = |m: &CMatrix| -> Result<(crate::matcore::CVector, crate::matcore::CVector)> {
        let svd = m.clone().svd(true, true);
        let (mut bi, mut bs) = (0usize, -1.0f64);
        for (i, &s) in svd.singular_values.iter().enumerate() {
            if s > bs {
                bs = s;
                bi = i;
            }
        }
        let u = svd.u.as_ref().expect("svd u").column(bi).into_owned();
        let vt = svd.v_t.as_ref().expect("svd v");
        let v = vt.row(bi).adjoint();
        Ok((u, v))
    };
    let outer = |v: &crate::matcore::CVector, u: &crate::matcore::CVector| -> CMatrix {
        CMatrix::from_fn(v.len(), u.len(), |i, j| v[i] * u[j].conj())
    };
    match &spec.variant {
        SemiNormVariant::OperatorNorm => {
            let (vals, vecs) = herm_eig(y)?;
            let d = y.nrows();
            let (lo, hi) = (vals[0], vals[d - 1]);
            let col = if hi >= -lo { vecs.column(d - 1) } else { vecs.column(0) };
            let sign = if hi >= -lo { 1.0 } else { -1.0 };
            let v = col.into_owned();
            Ok(Some(outer(&v, &v) * cr(sign)))
        }
        SemiNormVariant::CommutatorMax { generators } => {
            let mut best: Option<(f64, usize)> = None;
            for (j, a) in generators.iter().enumerate() {
                let n = crate::matcore::op_norm(&crate::matcore::commutator(a, y))?;
                if best.map_or(true, |(b, _)| n > b) {
                    best = Some((n, j));
                }
            }
            let (_, j) = best.expect("nonempty generators");
            let a = &generators[j];
            let m = crate::matcore::commutator(a, y);
            let (u, v) = top_pair(&m)?;
            // Re⟨u,[A,z]v⟩ = Re Tr(z (vu†A − Avu†))
            let vu = outer(&v, &u);
            let g = &vu * a - a * &vu;
            Ok(Some(hermitize(&g)))
        }
        SemiNormVariant::CommutatorL2 { generators } => {
            let total = seminorm_eval(spec, y)?;
            if total < 1e-14 {
                return Ok(None);
            }
            let mut g = crate::matcore::zeros(y.nrows(), y.ncols());
            for a in generators {
                let m = crate::matcore::commutator(a, y);
                let n = crate::matcore::op_norm(&m)?;
                if n < 1e-14 {
                    continue;
                }
                let (u, v) = top_pair(&m)?;
                let vu = outer(&v, &u);
                g += hermitize(&(&vu * a - a * &vu)) * cr(n / total);
            }
            Ok(Some(g))
        }
        SemiNormVariant::Oscillator { site_dims } => {
            let mut g = crate::matcore::zeros(y.nrows(), y.ncols());
            for site in 0..site_dims.len() {
                let tau =
                    crate::channels::ConditionalExpectation::site_replacement(site_dims, site)?;
                let m = y - tau.apply(y);
                if crate::matcore::op_norm(&m)? < 1e-14 {
                    continue;
                }
                let (u, v) = top_pair(&m)?;
                let vu = outer(&v, &u);
                g += hermitize(&(&vu - tau.apply(&vu)));
            }
            Ok(Some(g))
        }
        SemiNormVariant::Ornstein { site_dims } => {
            let mut best: Option<(f64, usize)> = None;
            for site in 0..site_dims.len() {
                let (val, _) = crate::metrics::ornstein_site_minimizer(y, site_dims, site)?;
                if best.map_or(true, |(b, _)| val > b) {
                    best = Some((val, site));
                }
            }
            let (_, site) = best.expect("sites nonempty");
            let (_, minzer) = crate::metrics::ornstein_site_minimizer(y, site_dims, site)?;
            let keep: Vec<usize> = (0..site_dims.len()).filter(|&k| k != site).collect();
            let emb = crate::matcore::embed(&minzer, site_dims, &keep)?;
            let m = y - emb;
            let (u, v) = top_pair(&m)?;
            Ok(Some(hermitize(&outer(&v, &u))))
        }
        SemiNormVariant::GammaNorm { .. } => Ok(None),
    }
}

/// One SDP step of the alternating ascent: maximize `Re Tr(Δ·x)` over the
/// unit ball of the semi-norm.
fn linear_max_over_ball(
    spec: &SemiNormSpec,
    delta: &CMatrix,
    opts: &SolveOptions,
) -> Result<Option<CMatrix>> {
    let d = spec.dim();
    let mut b = LmiBuilder::new();
    let vars = b.add_herm_var(d, Some(delta));
    crate::metrics::add_ball_constraints(&mut b, spec, &vars, 1.0)?;
    let sol = solve_sdp(&b.build(), opts)?;
    if sol.status == SdpStatus::Infeasible || (sol.status == SdpStatus::MaxIter && sol.gap > 1e-4)
    {
        return Ok(None);
    }
    let coords: Vec<f64> = vars.iter().map(|v| sol.y[v.0]).collect();
    Ok(Some(hermitize(&herm_from_coords(d, &coords))))
}

/// Empirical contraction factor by multi-start alternating maximization.
pub fn witness_search(
    ch: &Channel,
    spec: &SemiNormSpec,
    budget: &SearchBudget,
    rng: &mut impl Rng,
) -> Result<(f64, Option<CMatrix>)> {
    let d = spec.dim();
    let opts = SolveOptions::default();
    let mut best: f64 = 0.0;
    let mut best_witness = None;
    let consider = |x: &CMatrix, best: &mut f64, best_w: &mut Option<CMatrix>| -> Result<()> {
        let lx = seminorm_eval(spec, x)?;
        if lx < 1e-12 {
            return Ok(());
        }
        let ratio = seminorm_eval(spec, &ch.apply(x))? / lx;
        if ratio > *best {
            *best = ratio;
            *best_w = Some(x * cr(1.0 / lx));
        }
        Ok(())
    };
    // deterministic seeds: normalized Pauli strings are near-optimal for
    // channel families diagonal in that basis
    let mut seeds: Vec<CMatrix> = Vec::new();
    if d <= 8 && (d & (d - 1)) == 0 {
        let n = d.trailing_zeros() as usize;
        for s in crate::channels::all_strings(n) {
            if !s.is_identity() {
                seeds.push(s.dense());
            }
        }
    }
    for restart in 0..(budget.restarts + seeds.len()) {
        let mut x = if restart < seeds.len() {
            seeds[restart].clone()
        } else {
            crate::sample::random_hermitian(rng, d)
        };
        let l0 = seminorm_eval(spec, &x)?;
        if l0 < 1e-12 {
            continue;
        }
        x *= cr(1.0 / l0);
        consider(&x, &mut best, &mut best_witness)?;
        for _ in 0..budget.iters {
            let y = ch.apply(&x);
            let g = match supergradient(spec, &y)? {
                Some(g) => g,
                None => break,
            };
            let delta = hermitize(&ch.apply_pre(&g));
            let x_new = match linear_max_over_ball(spec, &delta, &opts)? {
                Some(x) => x,
                None => break,
            };
            let improved_from = best;
            consider(&x_new, &mut best, &mut best_witness)?;
            x = x_new;
            if best <= improved_from + 1e-12 {
                break;
            }
        }
    }
    Ok((best, best_witness))
}

/// Contraction-factor report: structural formula when available, witness
/// search otherwise (and as the lower bound in all cases).
pub fn lipschitz_factor(
    ch: &Channel,
    spec: &SemiNormSpec,
    budget: &SearchBudget,
    rng: &mut impl Rng,
) -> Result<CurvatureReport> {
    if let Some(witness) = kernel_preserved(ch, spec)? {
        return Ok(CurvatureReport::kernel_violated(witness));
    }
    let (found, witness) = witness_search(ch, spec, budget, rng)?;
    let (ws, wi) = match &witness {
        Some(w) => (seminorm_eval(spec, w)?, seminorm_eval(spec, &ch.apply(w))?),
        None => (0.0, 0.0),
    };
    Ok(CurvatureReport {
        upper_bound_factor: found,
        lower_bound_factor: found,
        kappa: 1.0 - found,
        witness,
        witness_seminorm: ws,
        witness_image_seminorm: wi,
        certified: false,
        method: "alternating-ascent",
        kernel_violation: None,
    })
}

/// Pauli channels: structural upper bound `1 − 2 min_β λ_β` with the best
/// Pauli-string witness `max_γ |μ_γ|` over the non-fixed strings.
pub fn pauli_lipschitz_factor(pspec: &PauliChannelSpec) -> Result<CurvatureReport> {
    let non_identity: Vec<_> = pspec
        .terms()
        .iter()
        .filter(|(s, _)| !s.is_identity())
        .collect();
    if non_identity.is_empty() {
        return Err(Error::pre(
            "structural factor needs at least one non-identity string",
        ));
    }
    let upper = 1.0 - 2.0 * pspec.min_weight();
    let fixed = pspec.fixed_strings();
    let mut best: Option<(f64, crate::channels::PauliString)> = None;
    for (gamma, mu) in pspec.eigenvalues() {
        if fixed.contains(&gamma) {
            continue;
        }
        if best.map_or(true, |(b, _)| mu.abs() > b) {
            best = Some((mu.abs(), gamma));
        }
    }
    let (lower, gamma) = best.ok_or_else(|| {
        Error::UnsupportedStructure("all strings are fixed; the semi-norm is trivial".into())
    })?;
    // σ_γ/2 has semi-norm 1 for the ∂_∞ family over the spec's strings
    let witness = gamma.dense() * cr(0.5);
    Ok(CurvatureReport {
        upper_bound_factor: upper,
        lower_bound_factor: lower,
        kappa: 1.0 - upper,
        witness: Some(witness),
        witness_seminorm: 1.0,
        witness_image_seminorm: lower,
        certified: true,
        method: "pauli-structural",
        kernel_violation: None,
    })
}

/// The commutator semi-norm `max_{α∈I, α≠0}‖[σ_α, ·]‖` matching a Pauli spec.
pub fn pauli_seminorm(pspec: &PauliChannelSpec) -> Result<SemiNormSpec> {
    let gens: Vec<CMatrix> = pspec
        .terms()
        .iter()
        .filter(|(s, _)| !s.is_identity())
        .map(|(s, _)| s.dense())
        .collect();
    SemiNormSpec::commutator_max(gens)
}

/// Upper bound from an intertwining relation: `factor ≤ ‖P̂‖`, certified.
pub fn intertwining_lipschitz_factor(
    ch: &Channel,
    spec: &SemiNormSpec,
    hat_norm_bound: f64,
    budget: &SearchBudget,
    rng: &mut impl Rng,
) -> Result<CurvatureReport> {
    if let Some(witness) = kernel_preserved(ch, spec)? {
        return Ok(CurvatureReport::kernel_violated(witness));
    }
    let (found, witness) = witness_search(ch, spec, budget, rng)?;
    let (ws, wi) = match &witness {
        Some(w) => (seminorm_eval(spec, w)?, seminorm_eval(spec, &ch.apply(w))?),
        None => (0.0, 0.0),
    };
    Ok(CurvatureReport {
        upper_bound_factor: hat_norm_bound,
        lower_bound_factor: found,
        kappa: 1.0 - hat_norm_bound,
        witness,
        witness_seminorm: ws,
        witness_image_seminorm: wi,
        certified: true,
        method: "intertwining",
        kernel_violation: None,
    })
}
