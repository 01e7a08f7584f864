//! Pauli strings in the symplectic-pair representation, and Pauli channels.
//!
//! A string over {I,X,Y,Z}^n is stored as two bit masks (x, z): site i carries
//! X iff only x_i is set, Z iff only z_i, Y iff both. Commutation is the
//! symplectic form: σ_α σ_β = (−1)^{c(α,β)} σ_β σ_α with
//! `c(α,β) = parity(α.x & β.z) ⊕ parity(α.z & β.x)`.

use crate::error::{Error, Result};
use crate::matcore::{identity, kron, zeros, CMatrix, Complex64, SuperOp, ONE};
use std::collections::BTreeSet;
use std::fmt;

pub const MAX_QUBITS: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PauliString {
    n: usize,
    x: u32,
    z: u32,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        PauliString { n, x: 0, z: 0 }
    }

    pub fn from_bits(n: usize, x: u32, z: u32) -> Result<Self> {
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::pre(format!("qubit count {n} out of range 1..={MAX_QUBITS}")));
        }
        let mask = (1u32 << n) - 1;
        if x & !mask != 0 || z & !mask != 0 {
            return Err(Error::dim("pauli bits outside the string length"));
        }
        Ok(PauliString { n, x, z })
    }

    /// Parse a string over I/X/Y/Z (also accepts 0/1/2/3).
    pub fn parse(s: &str) -> Result<Self> {
        let n = s.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::pre(format!(
                "pauli string length {n} out of range 1..={MAX_QUBITS}"
            )));
        }
        let mut x = 0u32;
        let mut z = 0u32;
        for (i, ch) in s.chars().enumerate() {
            let bit = 1u32 << i;
            match ch {
                'I' | 'i' | '0' => {}
                'X' | 'x' | '1' => x |= bit,
                'Y' | 'y' | '2' => {
                    x |= bit;
                    z |= bit;
                }
                'Z' | 'z' | '3' => z |= bit,
                other => {
                    return Err(Error::pre(format!("invalid pauli letter '{other}'")));
                }
            }
        }
        Ok(PauliString { n, x, z })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Product string of σ_a σ_b with the phase dropped.
    pub fn mul_unsigned(&self, other: &PauliString) -> PauliString {
        PauliString {
            n: self.n,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    /// Dense 2ⁿ×2ⁿ matrix (phase convention: plain Kronecker product of
    /// single-site I, X, Y, Z).
    pub fn dense(&self) -> CMatrix {
        let mut out = CMatrix::identity(1, 1);
        for i in 0..self.n {
            let xb = (self.x >> i) & 1 == 1;
            let zb = (self.z >> i) & 1 == 1;
            let site = match (xb, zb) {
                (false, false) => identity(2),
                (true, false) => pauli_matrix(1),
                (true, true) => pauli_matrix(2),
                (false, true) => pauli_matrix(3),
            };
            out = kron(&out, &site);
        }
        out
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let xb = (self.x >> i) & 1 == 1;
            let zb = (self.z >> i) & 1 == 1;
            f.write_str(match (xb, zb) {
                (false, false) => "I",
                (true, false) => "X",
                (true, true) => "Y",
                (false, true) => "Z",
            })?;
        }
        Ok(())
    }
}

pub fn pauli_matrix(k: usize) -> CMatrix {
    match k {
        0 => identity(2),
        1 => CMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.0, 0.0), ONE,
            ONE, Complex64::new(0.0, 0.0),
        ]),
        2 => CMatrix::from_row_slice(2, 2, &[
            Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0),
            Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0),
        ]),
        3 => CMatrix::from_row_slice(2, 2, &[
            ONE, Complex64::new(0.0, 0.0),
            Complex64::new(0.0, 0.0), -ONE,
        ]),
        _ => panic!("pauli index {k} out of range"),
    }
}

/// Anticommutation bit: 0 iff σ_α and σ_β commute.
pub fn c_sign(alpha: &PauliString, beta: &PauliString) -> Result<u8> {
    if alpha.n != beta.n {
        return Err(Error::dim("c_sign: string length mismatch"));
    }
    let p = ((alpha.x & beta.z).count_ones() + (alpha.z & beta.x).count_ones()) & 1;
    Ok(p as u8)
}

/// Weighted Pauli-string mixture defining the channel `x ↦ Σ λ_α σ_α x σ_α`.
#[derive(Debug, Clone)]
pub struct PauliChannelSpec {
    n: usize,
    terms: Vec<(PauliString, f64)>,
}

impl PauliChannelSpec {
    pub fn new(terms: Vec<(PauliString, f64)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::pre("pauli channel needs at least one term"));
        }
        let n = terms[0].0.len();
        if terms.iter().any(|(s, _)| s.len() != n) {
            return Err(Error::dim("pauli strings of unequal length"));
        }
        let mut seen = BTreeSet::new();
        for (s, w) in &terms {
            if *w <= 0.0 {
                return Err(Error::pre(format!("weight {w} for {s} must be positive")));
            }
            if !seen.insert(*s) {
                return Err(Error::pre(format!("duplicate pauli string {s}")));
            }
        }
        let total: f64 = terms.iter().map(|(_, w)| w).sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::pre(format!("weights sum to {total}, expected 1")));
        }
        if !terms.iter().any(|(s, _)| s.is_identity()) {
            return Err(Error::pre(
                "pauli channel spec must include the all-identity string",
            ));
        }
        Ok(PauliChannelSpec { n, terms })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1usize << self.n
    }

    pub fn terms(&self) -> &[(PauliString, f64)] {
        &self.terms
    }

    pub fn weight_of_identity(&self) -> f64 {
        self.terms
            .iter()
            .find(|(s, _)| s.is_identity())
            .map(|(_, w)| *w)
            .expect("validated spec contains the identity")
    }

    pub fn min_weight(&self) -> f64 {
        self.terms.iter().map(|(_, w)| *w).fold(f64::INFINITY, f64::min)
    }

    /// μ_γ = Σ_α λ_α (−1)^{c(α,γ)}: the channel superoperator eigenvalue on σ_γ.
    pub fn eigenvalue_on(&self, gamma: &PauliString) -> Result<f64> {
        let mut mu = 0.0;
        for (alpha, w) in &self.terms {
            let c = c_sign(alpha, gamma)?;
            mu += if c == 0 { *w } else { -*w };
        }
        Ok(mu)
    }

    /// All 4ⁿ eigenvalues, keyed by string.
    pub fn eigenvalues(&self) -> Vec<(PauliString, f64)> {
        all_strings(self.n)
            .into_iter()
            .map(|g| {
                let mu = self.eigenvalue_on(&g).expect("same length");
                (g, mu)
            })
            .collect()
    }

    /// Strings commuting with every α in the spec (the channel's fixed basis
    /// elements); kernel of the induced commutator semi-norm.
    pub fn fixed_strings(&self) -> Vec<PauliString> {
        all_strings(self.n)
            .into_iter()
            .filter(|g| {
                self.terms
                    .iter()
                    .all(|(a, _)| c_sign(a, g).expect("same length") == 0)
            })
            .collect()
    }

    /// Sign-free group generated by the spec's strings.
    pub fn generated_group(&self) -> Vec<PauliString> {
        let mut grp: BTreeSet<PauliString> = BTreeSet::new();
        grp.insert(PauliString::identity(self.n));
        let mut frontier: Vec<PauliString> = self.terms.iter().map(|(s, _)| *s).collect();
        while let Some(g) = frontier.pop() {
            if grp.contains(&g) {
                continue;
            }
            let products: Vec<PauliString> = grp.iter().map(|h| g.mul_unsigned(h)).collect();
            grp.insert(g);
            for p in products {
                if !grp.contains(&p) {
                    frontier.push(p);
                }
            }
        }
        grp.into_iter().collect()
    }
}

pub fn all_strings(n: usize) -> Vec<PauliString> {
    let mask = 1u32 << n;
    let mut out = Vec::with_capacity(1 << (2 * n));
    for x in 0..mask {
        for z in 0..mask {
            out.push(PauliString { n, x, z });
        }
    }
    out
}

/// Dense Heisenberg superoperator of the Pauli channel.
pub fn pauli_superop(spec: &PauliChannelSpec) -> SuperOp {
    let d = spec.dim();
    let mut mat = zeros(d * d, d * d);
    for (s, w) in spec.terms() {
        let sd = s.dense();
        let conj = SuperOp::conjugation(&sd);
        mat += conj.matrix() * crate::matcore::cr(*w);
    }
    SuperOp::new(d, mat).expect("square by construction")
}
