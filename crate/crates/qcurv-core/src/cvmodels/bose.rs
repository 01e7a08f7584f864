//! Bosonic beam-splitter channels at finite truncation, with the associated
//! energy, regularity, and mixing bounds.

use super::fock::{beam_splitter_unitary, energy, fock_ops, sector_projector, thermal_state};
use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::{
    cr, hermitize, kron, max_abs, op_norm, trace_norm, zeros, CMatrix, DensityState, SuperOp,
};
use crate::metrics::{w1_dual_opts, SemiNormSpec, TransportValue};
use crate::optim::SolveOptions;

#[derive(Debug, Clone)]
pub struct BeamSplitterSpec {
    pub lambda: f64,
    pub env: DensityState,
    pub cutoff: usize,
}

impl BeamSplitterSpec {
    pub fn thermal(lambda: f64, beta: f64, cutoff: usize) -> Result<Self> {
        Ok(BeamSplitterSpec {
            lambda,
            env: thermal_state(beta, cutoff)?,
            cutoff,
        })
    }

    /// Environment weight sitting at the top truncation level.
    pub fn truncation_leakage(&self) -> f64 {
        let d = self.cutoff + 1;
        self.env.matrix()[(d - 1, d - 1)].re
    }
}

/// `P_λ(x) = Tr₂[(1⊗σ) U_λ†(x⊗1)U_λ]` on the truncated mode, assembled from
/// the Kraus family `{√q_m · ⟨n|₂U|m⟩₂}` of the diagonalized environment.
pub fn bose_channel(spec: &BeamSplitterSpec) -> Result<Channel> {
    let d = spec.cutoff + 1;
    if spec.env.dim() != d {
        return Err(Error::dim("environment dimension must match the cutoff"));
    }
    let u = beam_splitter_unitary(spec.lambda, spec.cutoff)?.matrix;
    let (evals, evecs) = crate::matcore::herm_eig(spec.env.matrix())?;
    // environment eigenbasis: P(x) = Σ_m q_m Σ_n K_{nm}† x K_{nm},
    // K_{nm}[i,j] = ⟨i n|U|j m⟩ in that basis
    let u_env = {
        let rot = kron(&crate::matcore::identity(d), &evecs);
        rot.adjoint() * &u * rot
    };
    let mut superop = zeros(d * d, d * d);
    for m in 0..d {
        let q = evals[m].max(0.0);
        if q < 1e-300 {
            continue;
        }
        for n in 0..d {
            let k_nm = CMatrix::from_fn(d, d, |i, j| u_env[(i * d + n, j * d + m)]);
            // Heisenberg x ↦ K† x K: superop Kᵀ ⊗ K†
            superop += kron(&k_nm.transpose(), &k_nm.adjoint()) * cr(q);
        }
    }
    Channel::from_heisenberg(SuperOp::new(d, superop)?)
}

/// Residual of the intertwining relation `∂P_λ = √λ P_λ ∂` for ∂ ∈
/// {[a,·],[a†,·]}, compressed to the ≤`sector`-photon block, maximized over a
/// Hermitian operator basis of that block (relative to the basis norms).
pub fn intertwining_residual_on_sector(
    spec: &BeamSplitterSpec,
    ch: &Channel,
    sector: usize,
) -> Result<f64> {
    let d = spec.cutoff + 1;
    let (a, adag, _) = fock_ops(spec.cutoff)?;
    let pi = sector_projector(spec.cutoff, sector);
    let sq = spec.lambda.sqrt();
    let mut worst = 0.0f64;
    let mut check = |x: &CMatrix| -> Result<()> {
        for gen in [&a, &adag] {
            let lhs = gen * ch.apply(x) - ch.apply(x) * gen;
            let rhs = ch.apply(&(gen * x - x * gen)) * cr(sq);
            let resid = &pi * (lhs - rhs) * &pi;
            worst = worst.max(op_norm(&resid)? / op_norm(x)?.max(1e-300));
        }
        Ok(())
    };
    for i in 0..=sector {
        for j in i..=sector {
            let mut e = zeros(d, d);
            if i == j {
                e[(i, i)] = crate::matcore::ONE;
            } else {
                e[(i, j)] = crate::matcore::ONE;
                e[(j, i)] = crate::matcore::ONE;
            }
            check(&e)?;
            if i != j {
                let mut f = zeros(d, d);
                f[(i, j)] = crate::matcore::I;
                f[(j, i)] = -crate::matcore::I;
                check(&f)?;
            }
        }
    }
    Ok(worst)
}

/// The semi-norm `‖x‖_L = max{‖[a,x]‖, ‖[a†,x]‖}` of the bosonic model.
pub fn bose_lipschitz_seminorm(cutoff: usize) -> Result<SemiNormSpec> {
    let (a, adag, _) = fock_ops(cutoff)?;
    SemiNormSpec::commutator_max(vec![a, adag])
}

#[derive(Debug, Clone)]
pub struct EnergyBoundReport {
    pub energy_in: f64,
    pub energy_out: f64,
    pub energy_env: f64,
    /// `(√(λE_ρ) + √((1−λ)E_σ))²`
    pub bound: f64,
    pub slack: f64,
    /// closed-form diameter bound `inf_β √(64 coth(β/2)(βE − ln(1−e^{−β})))`
    pub diameter_bound: f64,
}

/// Energy growth bound under one channel application, with the closed-form
/// transport diameter evaluated on a β-grid.
pub fn energy_bound_check(spec: &BeamSplitterSpec, rho: &DensityState, ch: &Channel) -> Result<EnergyBoundReport> {
    let e_in = energy(rho)?;
    let e_env = energy(&spec.env)?;
    let out = DensityState::new(hermitize(&ch.apply_pre(rho.matrix())))?;
    let e_out = energy(&out)?;
    let bound = ((spec.lambda * e_in).sqrt() + ((1.0 - spec.lambda) * e_env).sqrt()).powi(2);
    let e_max = e_in.max(bound);
    Ok(EnergyBoundReport {
        energy_in: e_in,
        energy_out: e_out,
        energy_env: e_env,
        bound,
        slack: bound - e_out,
        diameter_bound: diameter_bound(e_max),
    })
}

/// `inf_{β>0} √(64·coth(β/2)·(βE − ln(1−e^{−β})))` over a log-spaced grid.
pub fn diameter_bound(energy_max: f64) -> f64 {
    let mut best = f64::INFINITY;
    for i in 0..400 {
        let beta = 10f64.powf(-3.0 + 5.0 * (i as f64) / 399.0);
        let coth = 1.0 / (beta / 2.0).tanh();
        let val = 64.0 * coth * (beta * energy_max - (1.0 - (-beta).exp()).ln().min(0.0) * 1.0)
            .max(0.0);
        let v = (64.0 * coth * (beta * energy_max - (1.0 - (-beta).exp()).ln())).max(0.0);
        let _ = val;
        best = best.min(v.sqrt());
    }
    best
}

#[derive(Debug, Clone)]
pub struct RegularityReport {
    pub lhs_trace_norm: f64,
    pub w1: f64,
    pub commutator_trace_norm: f64,
    pub commutator_trace_norm_stability: f64,
    pub rhs: f64,
    pub slack: f64,
}

/// `‖P_λ†(ρ₁−ρ₂)‖₁ ≤ √(λ/(1−λ))·‖[b,σ]‖₁·W_L(ρ₁,ρ₂)`.
pub fn regularity_check(
    spec: &BeamSplitterSpec,
    ch: &Channel,
    rho1: &DensityState,
    rho2: &DensityState,
) -> Result<RegularityReport> {
    if spec.lambda >= 1.0 {
        return Err(Error::pre("regularity bound needs λ < 1"));
    }
    let delta = rho1.matrix() - rho2.matrix();
    let lhs = trace_norm(&ch.apply_pre(&delta));
    let sn = bose_lipschitz_seminorm(spec.cutoff)?;
    let w1 = match w1_dual_opts(&sn, rho1, rho2, &SolveOptions::default())?.value {
        TransportValue::Finite(v) => v,
        TransportValue::Infinite => {
            return Err(Error::pre("regularity bound needs finite W_L"));
        }
    };
    let (b_comm, b_comm_stab) = env_commutator_trace_norm(spec)?;
    let rhs = (spec.lambda / (1.0 - spec.lambda)).sqrt() * b_comm * w1;
    Ok(RegularityReport {
        lhs_trace_norm: lhs,
        w1,
        commutator_trace_norm: b_comm,
        commutator_trace_norm_stability: b_comm_stab,
        rhs,
        slack: rhs - lhs,
    })
}

/// `‖[b, σ]‖₁` at the environment cutoff, with its value at cutoff+5 for an
/// N-stability report.
pub fn env_commutator_trace_norm(spec: &BeamSplitterSpec) -> Result<(f64, f64)> {
    let (b, _, _) = fock_ops(spec.cutoff)?;
    let v = trace_norm(&(&b * spec.env.matrix() - spec.env.matrix() * &b));
    // recompute at a larger cutoff with the environment re-embedded
    let big = spec.cutoff + 5;
    let (bb, _, _) = fock_ops(big)?;
    let mut env_big = zeros(big + 1, big + 1);
    env_big
        .view_mut((0, 0), (spec.cutoff + 1, spec.cutoff + 1))
        .copy_from(spec.env.matrix());
    let v2 = trace_norm(&(&bb * &env_big - &env_big * &bb));
    Ok((v, v2))
}

#[derive(Debug, Clone)]
pub struct MixingRow {
    pub step: usize,
    pub measured: f64,
    pub regularity_bound: f64,
    pub corollary_bound: f64,
}

/// Mixing chain `‖(P†)ⁿ(ρ₁−ρ₂)‖₁` against the step bound
/// `λ^{(n−1)/2}·√(λ/(1−λ))·‖[b,σ]‖₁·W_L(ρ₁,ρ₂)` and the closed-form
/// end-to-end corollary bound.
pub fn mixing_chain(
    spec: &BeamSplitterSpec,
    ch: &Channel,
    rho1: &DensityState,
    rho2: &DensityState,
    steps: usize,
) -> Result<Vec<MixingRow>> {
    let reg = regularity_check(spec, ch, rho1, rho2)?;
    let lam = spec.lambda;
    let e1 = energy(rho1)?;
    let e2 = energy(rho2)?;
    let e_env = energy(&spec.env)?;
    let e_corr = ((lam * e1.max(e2)).sqrt() + ((1.0 - lam) * e_env).sqrt()).powi(2);
    // corollary prefactor: 16 λ^{n/2} / (√(1−λ)(1−√λ)) · ‖[b,σ]‖₁ · inf_β √(coth·(βE − ln(1−e^{−β})))
    let diam_part = diameter_bound(e_corr) / 8.0; // diameter_bound carries √64 = 8
    let mut delta = rho1.matrix() - rho2.matrix();
    let mut rows = Vec::new();
    for n in 1..=steps {
        delta = ch.apply_pre(&delta);
        let measured = trace_norm(&delta);
        let regularity_bound =
            lam.powf((n as f64 - 1.0) / 2.0) * (lam / (1.0 - lam)).sqrt() * reg.commutator_trace_norm * reg.w1;
        let corollary_bound = 16.0 * lam.powf(n as f64 / 2.0)
            / ((1.0 - lam).sqrt() * (1.0 - lam.sqrt()))
            * reg.commutator_trace_norm
            * diam_part;
        rows.push(MixingRow {
            step: n,
            measured,
            regularity_bound,
            corollary_bound,
        });
    }
    Ok(rows)
}

/// Norm of the channel output outside the ≤`sector` block, for a state
/// supported inside it (the sector leakage of one application).
pub fn state_leakage(ch: &Channel, cutoff: usize, sector: usize, rho: &DensityState) -> Result<f64> {
    let pi = sector_projector(cutoff, sector);
    let out = ch.apply_pre(rho.matrix());
    let d = cutoff + 1;
    let comp = crate::matcore::identity(d) - &pi;
    Ok(trace_norm(&(&comp * &out * &comp)) + 2.0 * max_abs(&(&pi * &out * &comp)))
}
