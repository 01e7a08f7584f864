//! Fermionic Clifford algebra (Jordan-Wigner) and the fermionic beam
//! splitter on `C ⊗ Ĉ` with parity-dressed environment generators.

use crate::channels::pauli::pauli_matrix;
use crate::channels::Channel;
use crate::error::{Error, Result};
use crate::matcore::{
    commutator, cr, hs_inner, identity, kron, max_abs, mat_exp, op_norm, partial_trace, zeros,
    CMatrix, DensityState, SuperOp,
};

#[derive(Debug, Clone)]
pub struct CliffordAlgebra {
    pub modes: usize,
    /// `c_1 … c_{2n}`, Hermitian, `c_i c_j + c_j c_i = 2δ_ij`.
    pub generators: Vec<CMatrix>,
}

/// Jordan-Wigner construction: `c_{2j−1} = Z^{j−1} X`, `c_{2j} = Z^{j−1} Y`.
pub fn clifford_generators(n: usize) -> Result<CliffordAlgebra> {
    if n == 0 || n > 6 {
        return Err(Error::pre("mode count must be in 1..=6"));
    }
    let (sx, sy, sz) = (pauli_matrix(1), pauli_matrix(2), pauli_matrix(3));
    let mut gens = Vec::with_capacity(2 * n);
    for j in 0..n {
        for last in [&sx, &sy] {
            let mut m = identity(1);
            for k in 0..n {
                let site = if k < j {
                    sz.clone()
                } else if k == j {
                    last.clone()
                } else {
                    identity(2)
                };
                m = kron(&m, &site);
            }
            gens.push(m);
        }
    }
    Ok(CliffordAlgebra {
        modes: n,
        generators: gens,
    })
}

impl CliffordAlgebra {
    pub fn dim(&self) -> usize {
        1 << self.modes
    }

    /// Parity operator `Z^{⊗n}`; anticommutes with every generator.
    pub fn parity(&self) -> CMatrix {
        let sz = pauli_matrix(3);
        let mut m = identity(1);
        for _ in 0..self.modes {
            m = kron(&m, &sz);
        }
        m
    }

    /// Ordered product `c_A` for an index subset.
    pub fn ordered_product(&self, indices: &[usize]) -> CMatrix {
        let mut m = identity(self.dim());
        for &i in indices {
            m = m * &self.generators[i];
        }
        m
    }
}

/// Check that all odd moments of a state vanish (evenness).
pub fn is_even_state(alg: &CliffordAlgebra, rho: &DensityState, tol: f64) -> bool {
    let n2 = 2 * alg.modes;
    let mut odd_sets: Vec<Vec<usize>> = (0..n2).map(|i| vec![i]).collect();
    for i in 0..n2 {
        for j in (i + 1)..n2 {
            for k in (j + 1)..n2 {
                odd_sets.push(vec![i, j, k]);
            }
        }
    }
    odd_sets.iter().all(|set| {
        let m = alg.ordered_product(set);
        (rho.matrix() * m).diagonal().iter().map(|z| z.re).sum::<f64>().abs() < tol
            && (rho.matrix() * alg.ordered_product(set))
                .diagonal()
                .iter()
                .map(|z| z.im)
                .sum::<f64>()
                .abs()
                < tol
    })
}

#[derive(Debug, Clone)]
pub struct FermiBeamSplitterReport {
    /// max residual of `U† d_j U = √λ d_j + √(1−λ) e_j` over the generators
    pub rotation_residual: f64,
    /// max over the *even* operator basis of `‖∂_j P(x) − √λ P(∂_j x)‖`.
    ///
    /// The parity dressing of the environment generators makes the
    /// intertwining exact on the even subalgebra only: for odd x the
    /// commutator `[Θ⊗ĉ_j, x⊗1] = [Θ,x]⊗ĉ_j` survives and contributes an
    /// O(1) defect, reported separately. The Lipschitz contraction by √λ
    /// still holds on the full algebra.
    pub intertwining_residual: f64,
    /// same residual over odd basis elements (not expected to be small)
    pub odd_sector_residual: f64,
    pub unitarity_defect: f64,
}

pub struct FermiBeamSplitter {
    pub channel: Channel,
    pub unitary: CMatrix,
    pub algebra: CliffordAlgebra,
    pub report: FermiBeamSplitterReport,
}

/// Fermionic beam splitter: a unitary on `C ⊗ Ĉ` rotating `{c_j⊗1}` into the
/// parity-dressed `{Θ⊗ĉ_j}`, built by solving least squares for a quadratic
/// generator with the prescribed linear action, then exponentiating.
pub fn fermi_beam_splitter(
    lambda: f64,
    n: usize,
    env: &DensityState,
) -> Result<FermiBeamSplitter> {
    if !(0.0..=1.0).contains(&lambda) {
        return Err(Error::pre(format!("transmissivity {lambda} outside [0,1]")));
    }
    let alg = clifford_generators(n)?;
    let d = alg.dim();
    if env.dim() != d {
        return Err(Error::dim("environment dimension must be 2ⁿ"));
    }
    if !is_even_state(&alg, env, 1e-9) {
        return Err(Error::pre("environment state must be even (vanishing odd moments)"));
    }
    let theta = lambda.sqrt().acos();
    let big = d * d;
    let parity = alg.parity();
    let mut frame: Vec<CMatrix> = Vec::with_capacity(4 * n);
    for c in &alg.generators {
        frame.push(kron(c, &identity(d)));
    }
    for c in &alg.generators {
        frame.push(kron(&parity, c));
    }
    // quadratic basis: products frame[i]·frame[j] for i<j (anti-Hermitian)
    let mut quad: Vec<CMatrix> = Vec::new();
    for i in 0..frame.len() {
        for j in (i + 1)..frame.len() {
            quad.push(&frame[i] * &frame[j]);
        }
    }
    // target: [G, d_j] = −θ e_j, [G, e_j] = +θ d_j
    // least squares over the coefficients of G in the quadratic basis, using
    // the frame coordinates of each commutator (frame elements are HS-orthogonal)
    let m = 2 * frame.len() * frame.len(); // generous row count: coords of each commutator
    let cols = quad.len();
    let mut amat = nalgebra::DMatrix::<f64>::zeros(m, cols);
    let mut rhs = nalgebra::DVector::<f64>::zeros(m);
    let fnorm2 = big as f64; // ⟨f, f⟩ = dim for Clifford frames
    for (col, q) in quad.iter().enumerate() {
        for (gi, g) in frame.iter().enumerate() {
            let comm = commutator(q, g);
            for (fi, f) in frame.iter().enumerate() {
                let coeff = hs_inner(f, &comm) / cr(fnorm2);
                let row = gi * frame.len() + fi;
                // commutators of quadratics with frame elements stay in the
                // frame span with real coefficients for this basis
                amat[(row, col)] = coeff.re;
            }
        }
    }
    let nf = frame.len() / 2;
    for j in 0..nf {
        // row of [G, d_j] against e_j: target −θ
        rhs[j * frame.len() + (nf + j)] = -theta;
        // row of [G, e_j] against d_j: target +θ
        rhs[(nf + j) * frame.len() + j] = theta;
    }
    let svd = amat.clone().svd(true, true);
    let coef = svd
        .solve(&rhs, 1e-12)
        .map_err(|e| Error::Construction(format!("least-squares solve failed: {e}")))?;
    let mut g = zeros(big, big);
    for (c, q) in coef.iter().zip(&quad) {
        if c.abs() > 1e-14 {
            g += q * cr(*c);
        }
    }
    // G must be anti-Hermitian for exp(G) to be unitary
    let g = (&g - g.adjoint()) * cr(0.5);
    let u = mat_exp(&g)?;
    let unitarity = max_abs(&(&u * u.adjoint() - identity(big)));

    let mut rotation_residual = 0.0f64;
    let sq = lambda.sqrt();
    let sq1 = (1.0 - lambda).sqrt();
    for j in 0..nf {
        let lhs = u.adjoint() * &frame[j] * &u;
        let target = &frame[j] * cr(sq) + &frame[nf + j] * cr(sq1);
        rotation_residual = rotation_residual.max(max_abs(&(lhs - target)));
        let lhs = u.adjoint() * &frame[nf + j] * &u;
        let target = &frame[j] * cr(-sq1) + &frame[nf + j] * cr(sq);
        rotation_residual = rotation_residual.max(max_abs(&(lhs - target)));
    }
    if rotation_residual > 1e-6 {
        return Err(Error::Construction(format!(
            "beam-splitter rotation relations violated: residual {rotation_residual:.3e}"
        )));
    }

    // P(x) = Tr₂[(1⊗σ)U†(x⊗1)U]
    let env_mat = env.matrix().clone();
    let u_clone = u.clone();
    let superop = SuperOp::of_map(d, |x| {
        let m = kron(&identity(d), &env_mat)
            * (u_clone.adjoint() * kron(x, &identity(d)) * &u_clone);
        partial_trace(&m, &[d, d], &[0]).expect("dims fixed")
    });
    let channel = Channel::from_heisenberg(superop)?;

    // intertwining ∂_j P = √λ P ∂_j over the Clifford product basis,
    // split by parity
    let mut intertwining_residual = 0.0f64;
    let mut odd_sector_residual = 0.0f64;
    let n2 = 2 * n;
    for mask in 0u32..(1 << n2) {
        let set: Vec<usize> = (0..n2).filter(|&k| mask >> k & 1 == 1).collect();
        let x = alg.ordered_product(&set);
        let target = if set.len() % 2 == 0 {
            &mut intertwining_residual
        } else {
            &mut odd_sector_residual
        };
        for c in &alg.generators {
            let lhs = commutator(c, &channel.apply(&x));
            let rhs = channel.apply(&commutator(c, &x)) * cr(sq);
            *target = target.max(op_norm(&(lhs - rhs))?);
        }
    }

    Ok(FermiBeamSplitter {
        channel,
        unitary: u,
        algebra: alg,
        report: FermiBeamSplitterReport {
            rotation_residual,
            intertwining_residual,
            odd_sector_residual,
            unitarity_defect: unitarity,
        },
    })
}
