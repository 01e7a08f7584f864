//! Builder for problems stated as linear matrix inequalities over real
//! variables, with complex Hermitian blocks realified to symmetric blocks of
//! doubled size.

use super::sdp::{BlockMat, SdpProblem, Sense};
use crate::matcore::{CMatrix, Complex64};
use nalgebra::DMatrix;

/// Hermitian basis of d×d matrices: `E_aa`, then `(E_ab+E_ba)`, `i(E_ab−E_ba)`
/// for a<b. Real coordinates against this basis parametrize Hermitian x.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HermBasisElem {
    Diag(usize),
    Sym(usize, usize),
    Asym(usize, usize),
}

pub fn herm_basis(d: usize) -> Vec<HermBasisElem> {
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        out.push(HermBasisElem::Diag(a));
    }
    for a in 0..d {
        for b in (a + 1)..d {
            out.push(HermBasisElem::Sym(a, b));
            out.push(HermBasisElem::Asym(a, b));
        }
    }
    out
}

pub fn herm_basis_matrix(d: usize, e: HermBasisElem) -> CMatrix {
    let mut m = CMatrix::zeros(d, d);
    match e {
        HermBasisElem::Diag(a) => m[(a, a)] = Complex64::new(1.0, 0.0),
        HermBasisElem::Sym(a, b) => {
            m[(a, b)] = Complex64::new(1.0, 0.0);
            m[(b, a)] = Complex64::new(1.0, 0.0);
        }
        HermBasisElem::Asym(a, b) => {
            m[(a, b)] = Complex64::new(0.0, 1.0);
            m[(b, a)] = Complex64::new(0.0, -1.0);
        }
    }
    m
}

/// Assemble a Hermitian matrix from coordinates against [`herm_basis`].
pub fn herm_from_coords(d: usize, coords: &[f64]) -> CMatrix {
    let basis = herm_basis(d);
    let mut m = CMatrix::zeros(d, d);
    for (e, &c) in basis.iter().zip(coords) {
        if c != 0.0 {
            m += herm_basis_matrix(d, *e) * Complex64::new(c, 0.0);
        }
    }
    m
}

/// Coordinates of a Hermitian matrix against [`herm_basis`]
/// (`x_ab = c⁺ + i c⁻` for a<b).
pub fn herm_coords(x: &CMatrix) -> Vec<f64> {
    let d = x.nrows();
    let mut out = Vec::with_capacity(d * d);
    for a in 0..d {
        out.push(x[(a, a)].re);
    }
    for a in 0..d {
        for b in (a + 1)..d {
            out.push(x[(a, b)].re);
            out.push(x[(a, b)].im);
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct VarId(pub usize);
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BlockId(pub usize);

enum BlockKind {
    Real(usize),
    /// Complex Hermitian of dimension d, realified to 2d.
    Complex(usize),
}

/// Builds `max Σ obj_i y_i` subject to `C_k − Σ_i y_i A_{i,k} ⪰ 0` per block.
pub struct LmiBuilder {
    obj: Vec<f64>,
    blocks: Vec<BlockKind>,
    consts: Vec<BlockMat>,
    coeffs: Vec<Vec<BlockMat>>, // per variable, per block
}

impl LmiBuilder {
    pub fn new() -> Self {
        LmiBuilder {
            obj: Vec::new(),
            blocks: Vec::new(),
            consts: Vec::new(),
            coeffs: Vec::new(),
        }
    }

    pub fn add_var(&mut self, obj_coeff: f64) -> VarId {
        self.obj.push(obj_coeff);
        self.coeffs.push(vec![BlockMat::default(); self.blocks.len()]);
        VarId(self.obj.len() - 1)
    }

    /// Hermitian variable: one real coordinate per basis element of [`herm_basis`].
    /// Objective is `Re Tr(obj_matrix · x)`.
    pub fn add_herm_var(&mut self, d: usize, obj_matrix: Option<&CMatrix>) -> Vec<VarId> {
        let basis = herm_basis(d);
        basis
            .iter()
            .map(|e| {
                let coeff = match obj_matrix {
                    None => 0.0,
                    Some(m) => {
                        let bm = herm_basis_matrix(d, *e);
                        // Re Tr(M · B) for Hermitian M, B
                        (m * bm).diagonal().iter().map(|z| z.re).sum()
                    }
                };
                self.add_var(coeff)
            })
            .collect()
    }

    pub fn add_real_block(&mut self, dim: usize) -> BlockId {
        self.blocks.push(BlockKind::Real(dim));
        self.consts.push(BlockMat::default());
        for c in &mut self.coeffs {
            c.push(BlockMat::default());
        }
        BlockId(self.blocks.len() - 1)
    }

    pub fn add_complex_block(&mut self, dim: usize) -> BlockId {
        self.blocks.push(BlockKind::Complex(dim));
        self.consts.push(BlockMat::default());
        for c in &mut self.coeffs {
            c.push(BlockMat::default());
        }
        BlockId(self.blocks.len() - 1)
    }

    fn realify_into(bm: &mut BlockMat, d: usize, h: &CMatrix, scale: f64) {
        // [[Re, −Im],[Im, Re]]: lower triangle of the symmetric realification.
        for a in 0..d {
            for b in 0..=a {
                let re = h[(a, b)].re * scale;
                if re != 0.0 {
                    bm.push(a, b, re);
                    bm.push(d + a, d + b, re);
                }
            }
        }
        for a in 0..d {
            for b in 0..d {
                let im = h[(a, b)].im * scale;
                if im != 0.0 {
                    bm.push(d + a, b, im);
                }
            }
        }
    }

    /// Add `scale · H` to the constant matrix `C` of a complex block.
    pub fn set_const_complex(&mut self, blk: BlockId, h: &CMatrix, scale: f64) {
        let d = match self.blocks[blk.0] {
            BlockKind::Complex(d) => d,
            BlockKind::Real(_) => panic!("complex constant on a real block"),
        };
        Self::realify_into(&mut self.consts[blk.0], d, h, scale);
    }

    /// Add `scale · H` to the coefficient `A_var` of a complex block
    /// (the block reads `C − Σ y·A ⪰ 0`).
    pub fn add_coeff_complex(&mut self, blk: BlockId, var: VarId, h: &CMatrix, scale: f64) {
        let d = match self.blocks[blk.0] {
            BlockKind::Complex(d) => d,
            BlockKind::Real(_) => panic!("complex coefficient on a real block"),
        };
        Self::realify_into(&mut self.coeffs[var.0][blk.0], d, h, scale);
    }

    pub fn set_const_real(&mut self, blk: BlockId, h: &DMatrix<f64>, scale: f64) {
        for a in 0..h.nrows() {
            for b in 0..=a {
                let v = h[(a, b)] * scale;
                if v != 0.0 {
                    self.consts[blk.0].push(a, b, v);
                }
            }
        }
    }

    pub fn add_coeff_real(&mut self, blk: BlockId, var: VarId, h: &DMatrix<f64>, scale: f64) {
        for a in 0..h.nrows() {
            for b in 0..=a {
                let v = h[(a, b)] * scale;
                if v != 0.0 {
                    self.coeffs[var.0][blk.0].push(a, b, v);
                }
            }
        }
    }

    pub fn add_coeff_real_entry(&mut self, blk: BlockId, var: VarId, r: usize, c: usize, v: f64) {
        self.coeffs[var.0][blk.0].push(r, c, v);
    }

    pub fn set_const_real_entry(&mut self, blk: BlockId, r: usize, c: usize, v: f64) {
        self.consts[blk.0].push(r, c, v);
    }

    /// Constrain `‖M(y)‖ ≤ t(y)` where `M(y) = M0 + Σ y_i M_i` (complex, not
    /// necessarily Hermitian) and `t(y) = t0 + Σ y_i t_i`, via the block
    /// `[[t·I, M],[M†, t·I]] ⪰ 0`.
    pub fn add_opnorm_block(
        &mut self,
        dc: usize,
        m0: Option<&CMatrix>,
        terms: &[(VarId, CMatrix)],
        t0: f64,
        t_terms: &[(VarId, f64)],
    ) -> BlockId {
        let blk = self.add_complex_block(2 * dc);
        let lift = |m: &CMatrix| -> CMatrix {
            let mut big = CMatrix::zeros(2 * dc, 2 * dc);
            big.view_mut((0, dc), (dc, dc)).copy_from(m);
            big.view_mut((dc, 0), (dc, dc)).copy_from(&m.adjoint());
            big
        };
        if let Some(m0) = m0 {
            self.set_const_complex(blk, &lift(m0), 1.0);
        }
        for (v, m) in terms {
            self.add_coeff_complex(blk, *v, &lift(m), -1.0);
        }
        let eye = CMatrix::identity(2 * dc, 2 * dc);
        if t0 != 0.0 {
            self.set_const_complex(blk, &eye, t0);
        }
        for (v, c) in t_terms {
            self.add_coeff_complex(blk, *v, &eye, -c);
        }
        blk
    }

    /// Budget inequality `a0 − Σ cᵢ yᵢ ≥ 0` as a 1×1 block (so positive
    /// coefficients count the variables against the budget `a0`).
    pub fn add_scalar_ge0(&mut self, a0: f64, terms: &[(VarId, f64)]) -> BlockId {
        let blk = self.add_real_block(1);
        self.set_const_real_entry(blk, 0, 0, a0);
        for (v, c) in terms {
            self.add_coeff_real_entry(blk, *v, 0, 0, *c);
        }
        blk
    }

    pub fn build(self) -> SdpProblem {
        let block_dims: Vec<usize> = self
            .blocks
            .iter()
            .map(|b| match b {
                BlockKind::Real(d) => *d,
                BlockKind::Complex(d) => 2 * d,
            })
            .collect();
        let nblk = block_dims.len();
        // LMI read of the primal-dual pair: objective C = consts,
        // constraints (A_i, b_i = obj_i).
        let constraints = self
            .coeffs
            .into_iter()
            .zip(self.obj)
            .map(|(a, b)| (a, b))
            .collect();
        SdpProblem {
            block_dims,
            objective: if nblk == 0 { Vec::new() } else { self.consts },
            constraints,
            sense: Sense::Max,
        }
    }
}

impl Default for LmiBuilder {
    fn default() -> Self {
        Self::new()
    }
}
