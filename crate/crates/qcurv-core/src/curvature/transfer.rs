//! Finite-group transference: pass Lipschitz estimates from a left-invariant
//! Markov kernel on a group to the transferred quantum channel through a
//! projective unitary representation.

use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::{cr, max_abs, trace, trace_norm, zeros, CMatrix, SuperOp};
use crate::optim::{solve_sdp, LmiBuilder, SdpStatus, Sense, SolveOptions};
use rand::Rng;

/// Finite group by its multiplication table (`mul[g][h] = gh`, identity 0).
#[derive(Debug, Clone)]
pub struct GroupSpec {
    pub mul: Vec<Vec<usize>>,
}

impl GroupSpec {
    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.order();
        if self.mul.iter().any(|r| r.len() != n) {
            return Err(Error::dim("multiplication table must be square"));
        }
        for g in 0..n {
            if self.mul[0][g] != g || self.mul[g][0] != g {
                return Err(Error::pre("element 0 must be the identity"));
            }
        }
        for g in 0..n {
            if !(0..n).any(|h| self.mul[g][h] == 0) {
                return Err(Error::pre(format!("element {g} has no inverse")));
            }
        }
        Ok(())
    }

    pub fn inverse(&self, g: usize) -> usize {
        (0..self.order())
            .find(|&h| self.mul[g][h] == 0)
            .expect("validated group")
    }

    /// Z₂ × Z₂ (the Pauli group modulo phases for one qubit).
    pub fn klein_four() -> Self {
        // elements 0..3 with xor multiplication
        let mul = (0..4)
            .map(|g| (0..4).map(|h| g ^ h).collect())
            .collect();
        GroupSpec { mul }
    }

    /// Z₂^{2n}: Pauli strings under symplectic (phase-free) multiplication.
    pub fn pauli_group(n: usize) -> Self {
        let sz = 1usize << (2 * n);
        let mul = (0..sz).map(|g| (0..sz).map(|h| g ^ h).collect()).collect();
        GroupSpec { mul }
    }
}

#[derive(Debug, Clone)]
pub struct TransferReport {
    /// exact classical contraction factor of K on the weighted Lipschitz norm
    pub classical_factor: f64,
    /// measured quantum factors for ‖∂·‖_{∞,p}, p ∈ {1, ∞}
    pub quantum_factor_p1: f64,
    pub quantum_factor_pinf: f64,
    pub cocycle_defect: f64,
}

/// Build `P(x) = |G|⁻¹ Σ k(g) u(g) x u(g)†` and verify the transferred
/// Lipschitz estimates against the exactly-computed classical factor.
pub fn transfer_finite_group(
    group: &GroupSpec,
    kernel: &[f64],
    rep: &[CMatrix],
    generating: &[usize],
    weights: &[f64],
    samples: usize,
    rng: &mut impl Rng,
) -> Result<(Channel, TransferReport)> {
    group.validate()?;
    let n = group.order();
    if kernel.len() != n || rep.len() != n {
        return Err(Error::dim("kernel and representation must cover the group"));
    }
    if kernel.iter().any(|&k| k < -1e-12) {
        return Err(Error::pre("kernel weights must be non-negative"));
    }
    let ksum: f64 = kernel.iter().sum();
    if (ksum - n as f64).abs() > 1e-9 {
        return Err(Error::pre(format!(
            "kernel must sum to |G| = {n} (got {ksum})"
        )));
    }
    if generating.is_empty() || generating.len() != weights.len() {
        return Err(Error::dim("generating set and weights must align"));
    }
    if weights.iter().any(|&w| w <= 0.0) {
        return Err(Error::pre("weights must be positive"));
    }
    let d = rep[0].nrows();
    // projective cocycle: u(g)u(h) = phase·u(gh)
    let mut cocycle_defect = 0.0f64;
    for g in 0..n {
        for h in 0..n {
            let prod = &rep[g] * &rep[h];
            let target = &rep[group.mul[g][h]];
            let phase = trace(&(target.adjoint() * &prod)) / cr(d as f64);
            if (phase.norm() - 1.0).abs() > 1e-8 {
                return Err(Error::pre(format!(
                    "cocycle violation at ({g},{h}): phase modulus {}",
                    phase.norm()
                )));
            }
            cocycle_defect = cocycle_defect.max(max_abs(&(prod - target * phase)));
        }
    }
    if cocycle_defect > 1e-8 {
        return Err(Error::pre(format!(
            "cocycle violation: defect {cocycle_defect:.3e}"
        )));
    }
    // transferred channel
    let mut mat = zeros(d * d, d * d);
    for g in 0..n {
        if kernel[g] == 0.0 {
            continue;
        }
        mat += SuperOp::conjugation(&rep[g]).matrix() * cr(kernel[g] / n as f64);
    }
    let ch = Channel::from_heisenberg(SuperOp::new(d, mat)?)?;

    // classical side, exact: K[h,g] = k(h⁻¹g)/|G|; the Lipschitz norm is
    // max over (g, s) of √w(s)|f(g) − f(gs)|, and the factor is computed by
    // one LP per output edge.
    let kmat: Vec<Vec<f64>> = (0..n)
        .map(|h| {
            let hinv = group.inverse(h);
            (0..n).map(|g| kernel[group.mul[hinv][g]] / n as f64).collect()
        })
        .collect();
    let mut classical_factor = 0.0f64;
    for g0 in 0..n {
        for (si, &s) in generating.iter().enumerate() {
            let g1 = group.mul[g0][s];
            for sign in [1.0f64, -1.0] {
                let val = classical_edge_lp(&kmat, group, generating, weights, g0, g1, weights[si], sign)?;
                classical_factor = classical_factor.max(val);
            }
        }
    }

    // quantum side: measured contraction of ‖∂x‖_{∞,p} = max_h ‖∂_h x‖_p
    let dnorm = |x: &CMatrix, p1: bool| -> Result<f64> {
        let mut worst = 0.0f64;
        for (si, &s) in generating.iter().enumerate() {
            let dx = (&rep[s] * x * rep[s].adjoint() - x) * cr(weights[si].sqrt());
            worst = worst.max(if p1 {
                trace_norm(&dx)
            } else {
                crate::matcore::op_norm(&dx)?
            });
        }
        Ok(worst)
    };
    let mut q1 = 0.0f64;
    let mut qinf = 0.0f64;
    for _ in 0..samples {
        let x = crate::sample::random_hermitian(rng, d);
        let (n1, ninf) = (dnorm(&x, true)?, dnorm(&x, false)?);
        let px = ch.apply(&x);
        if n1 > 1e-12 {
            q1 = q1.max(dnorm(&px, true)? / n1);
        }
        if ninf > 1e-12 {
            qinf = qinf.max(dnorm(&px, false)? / ninf);
        }
    }
    Ok((
        ch,
        TransferReport {
            classical_factor,
            quantum_factor_p1: q1,
            quantum_factor_pinf: qinf,
            cocycle_defect,
        },
    ))
}

/// LP: maximize ±√w₀·[(Kf)(g₀) − (Kf)(g₁)] over ‖f‖_Lip ≤ 1, f(0) = 0.
#[allow(clippy::too_many_arguments)]
fn classical_edge_lp(
    kmat: &[Vec<f64>],
    group: &GroupSpec,
    generating: &[usize],
    weights: &[f64],
    g0: usize,
    g1: usize,
    w0: f64,
    sign: f64,
) -> Result<f64> {
    let n = group.order();
    let mut b = LmiBuilder::new();
    // f(0) is pinned to 0; variables f(1..n)
    let mut fvars = vec![None; n];
    for g in 1..n {
        let obj = sign * w0.sqrt() * (kmat[g0][g] - kmat[g1][g]);
        fvars[g] = Some(b.add_var(obj));
    }
    for g in 0..n {
        for (si, &s) in generating.iter().enumerate() {
            let gs = group.mul[g][s];
            if g == gs {
                continue;
            }
            let sw = weights[si].sqrt();
            // |√w (f(g) − f(gs))| ≤ 1: two scalar blocks
            for pm in [1.0f64, -1.0] {
                let mut terms = Vec::new();
                if let Some(v) = fvars[g] {
                    terms.push((v, pm * sw));
                }
                if let Some(v) = fvars[gs] {
                    terms.push((v, -pm * sw));
                }
                b.add_scalar_ge0(1.0, &terms);
            }
        }
    }
    let sol = solve_sdp(&b.build(), &SolveOptions::default())?;
    if sol.status == SdpStatus::Infeasible {
        return Err(Error::Solver("classical edge LP infeasible".into()));
    }
    Ok(sol.value(Sense::Max))
}
