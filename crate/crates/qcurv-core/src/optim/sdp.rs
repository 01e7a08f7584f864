//! Dense primal-dual interior-point solver for semidefinite programs with
//! real symmetric blocks.
//!
//! Data model: block-diagonal variable `X = diag(X_1..X_K)`, objective
//! matrices `C_k`, and equality constraints `Σ_k ⟨A_{i,k}, X_k⟩ = b_i`.
//! The solver follows the Nesterov-Todd scaled central path with an
//! infeasible start and Mehrotra predictor-corrector steps, solving the
//! primal `min ⟨C,X⟩` and dual `max bᵀy, Σ y_i A_i + S = C, S ⪰ 0`
//! simultaneously.
//!
//! Problems stated as linear matrix inequalities (`max bᵀy` over
//! `Σ y_i A_i ⪯ C`) are the dual read of the same data; [`Sense::Max`]
//! selects which objective is reported as the problem value.

use crate::error::{Error, Result};
use nalgebra::{DMatrix, DVector};

/// Sparse symmetric matrix for one block; entries on or below the diagonal,
/// mirrored implicitly.
#[derive(Debug, Clone, Default)]
pub struct BlockMat {
    pub entries: Vec<(u32, u32, f64)>,
}

impl BlockMat {
    pub fn push(&mut self, r: usize, c: usize, v: f64) {
        if v == 0.0 {
            return;
        }
        let (r, c) = if r >= c { (r, c) } else { (c, r) };
        self.entries.push((r as u32, c as u32, v));
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    fn to_dense(&self, d: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(d, d);
        for &(r, c, v) in &self.entries {
            m[(r as usize, c as usize)] += v;
            if r != c {
                m[(c as usize, r as usize)] += v;
            }
        }
        m
    }

    /// ⟨A, X⟩ for symmetric X.
    fn inner(&self, x: &DMatrix<f64>) -> f64 {
        let mut acc = 0.0;
        for &(r, c, v) in &self.entries {
            let val = x[(r as usize, c as usize)];
            acc += if r == c { v * val } else { 2.0 * v * val };
        }
        acc
    }

    fn add_into(&self, target: &mut DMatrix<f64>, scale: f64) {
        for &(r, c, v) in &self.entries {
            target[(r as usize, c as usize)] += scale * v;
            if r != c {
                target[(c as usize, r as usize)] += scale * v;
            }
        }
    }

    /// Entries with explicit mirrors, for the sparse Schur formula.
    fn full_entries(&self) -> Vec<(usize, usize, f64)> {
        let mut out = Vec::with_capacity(self.entries.len() * 2);
        for &(r, c, v) in &self.entries {
            out.push((r as usize, c as usize, v));
            if r != c {
                out.push((c as usize, r as usize, v));
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    /// Value is the primal objective ⟨C, X⟩.
    Min,
    /// Value is the dual objective bᵀy (LMI read: max bᵀy, Σ y_i A_i ⪯ C).
    Max,
}

#[derive(Debug, Clone)]
pub struct SdpProblem {
    pub block_dims: Vec<usize>,
    pub objective: Vec<BlockMat>,
    pub constraints: Vec<(Vec<BlockMat>, f64)>,
    pub sense: Sense,
}

impl SdpProblem {
    pub fn validate(&self) -> Result<()> {
        let k = self.block_dims.len();
        if self.objective.len() != k {
            return Err(Error::dim("objective must have one BlockMat per block"));
        }
        let total_sq: usize = self.block_dims.iter().map(|&d| d * d).sum();
        if self.constraints.len() > total_sq {
            return Err(Error::pre(format!(
                "{} constraints exceed total block dimension squared {}",
                self.constraints.len(),
                total_sq
            )));
        }
        let check = |bm: &BlockMat, d: usize| -> bool {
            bm.entries
                .iter()
                .all(|&(r, c, _)| (r as usize) < d && (c as usize) <= r as usize)
        };
        for (bm, &d) in self.objective.iter().zip(&self.block_dims) {
            if !check(bm, d) {
                return Err(Error::dim("objective entry out of block range"));
            }
        }
        for (ai, _) in &self.constraints {
            if ai.len() != k {
                return Err(Error::dim("constraint must have one BlockMat per block"));
            }
            for (bm, &d) in ai.iter().zip(&self.block_dims) {
                if !check(bm, d) {
                    return Err(Error::dim("constraint entry out of block range"));
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    MaxIter,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct IterateRow {
    pub iter: usize,
    pub primal: f64,
    pub dual: f64,
    pub gap: f64,
}

#[derive(Debug, Clone)]
pub struct SdpSolution {
    pub status: SdpStatus,
    pub primal_blocks: Vec<DMatrix<f64>>,
    pub dual_blocks: Vec<DMatrix<f64>>,
    pub y: DVector<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub iterates: Vec<IterateRow>,
}

impl SdpSolution {
    /// Problem value under the stated sense.
    pub fn value(&self, sense: Sense) -> f64 {
        match sense {
            Sense::Min => self.primal_objective,
            Sense::Max => self.dual_objective,
        }
    }

    /// Iterate log as CSV (`iteration,primal,dual,gap`); empty unless the
    /// solve ran with `log_iterates`.
    pub fn iterates_csv(&self) -> String {
        let mut out = String::from("iteration,primal,dual,gap
");
        for r in &self.iterates {
            out.push_str(&format!("{},{:.12e},{:.12e},{:.3e}
", r.iter, r.primal, r.dual, r.gap));
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct SolveOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub log_iterates: bool,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            tol: 1e-8,
            max_iter: 200,
            log_iterates: false,
        }
    }
}

struct NtScaling {
    g: DMatrix<f64>,
    w: DMatrix<f64>,
    sigma: DVector<f64>,
}

fn chol_with_jitter(m: &DMatrix<f64>) -> Option<(nalgebra::Cholesky<f64, nalgebra::Dyn>, f64)> {
    let n = m.nrows();
    let scale = m.diagonal().amax().max(1e-300);
    let mut jit = 0.0;
    for _ in 0..12 {
        let trial = if jit == 0.0 {
            m.clone()
        } else {
            m + DMatrix::identity(n, n) * jit
        };
        if let Some(ch) = nalgebra::Cholesky::new(trial) {
            return Some((ch, jit));
        }
        jit = if jit == 0.0 { 1e-14 * scale } else { jit * 32.0 };
    }
    None
}

fn nt_scaling(x: &DMatrix<f64>, s: &DMatrix<f64>) -> Option<NtScaling> {
    let (chx, _) = chol_with_jitter(x)?;
    let (chs, _) = chol_with_jitter(s)?;
    let lx = chx.l();
    let ls = chs.l();
    let m = ls.transpose() * &lx;
    let svd = m.svd(true, true);
    let u = svd.u?;
    let vt = svd.v_t?;
    let sig = svd.singular_values;
    let n = x.nrows();
    // G = Lx V Σ^{-1/2},  G⁻ᵀ = Ls U Σ^{-1/2};  then GᵀSG = G⁻¹XG⁻ᵀ = Σ.
    let mut g = &lx * vt.transpose();
    let mut ginv_t = &ls * u;
    for j in 0..n {
        let sc = sig[j].max(1e-300).sqrt();
        let col = g.column(j) / sc;
        g.set_column(j, &col);
        let col = ginv_t.column(j) / sc;
        ginv_t.set_column(j, &col);
    }
    let w = &g * g.transpose();
    Some(NtScaling { g, w, sigma: sig })
}

fn min_eig_step(chol_l: &DMatrix<f64>, delta: &DMatrix<f64>) -> f64 {
    // max α with M + α·Δ ⪰ 0, via λ_min(L⁻¹ Δ L⁻ᵀ).
    let li = chol_l
        .clone()
        .solve_lower_triangular(&DMatrix::identity(chol_l.nrows(), chol_l.nrows()))
        .expect("triangular solve");
    let y = &li * delta * li.transpose();
    let y = (&y + y.transpose()) * 0.5;
    let lmin = y.symmetric_eigenvalues().min();
    if lmin >= -1e-13 {
        f64::INFINITY
    } else {
        -1.0 / lmin
    }
}

/// Solve the primal-dual pair described by `p`.
pub fn solve_sdp(p: &SdpProblem, opts: &SolveOptions) -> Result<SdpSolution> {
    p.validate()?;
    let dims = &p.block_dims;
    let m = p.constraints.len();
    let n_total: usize = dims.iter().sum();
    if n_total == 0 {
        return Err(Error::dim("SDP with no blocks"));
    }

    let b = DVector::from_iterator(m, p.constraints.iter().map(|(_, bi)| *bi));
    let bnorm = b.norm();
    let cnorm = p
        .objective
        .iter()
        .flat_map(|bm| bm.entries.iter().map(|e| e.2.abs()))
        .fold(0.0f64, f64::max);

    // Infeasible start on the central ray.
    let xi = 10.0 * (1.0 + b.amax().max(if m == 0 { 0.0 } else { b.amax() }));
    let eta = 10.0 * (1.0 + cnorm);
    let mut x: Vec<DMatrix<f64>> = dims.iter().map(|&d| DMatrix::identity(d, d) * xi).collect();
    let mut s: Vec<DMatrix<f64>> = dims.iter().map(|&d| DMatrix::identity(d, d) * eta).collect();
    let mut y = DVector::zeros(m);

    // Classify constraints for the Schur complement formation.
    const SPARSE_NNZ: usize = 12;
    let full_entries: Vec<Vec<Vec<(usize, usize, f64)>>> = p
        .constraints
        .iter()
        .map(|(ai, _)| ai.iter().map(|bm| bm.full_entries()).collect())
        .collect();
    let is_sparse: Vec<bool> = p
        .constraints
        .iter()
        .map(|(ai, _)| ai.iter().map(|bm| bm.nnz()).sum::<usize>() <= SPARSE_NNZ)
        .collect();

    let apply_a = |xs: &[DMatrix<f64>]| -> DVector<f64> {
        DVector::from_iterator(
            m,
            p.constraints
                .iter()
                .map(|(ai, _)| ai.iter().zip(xs).map(|(bm, xk)| bm.inner(xk)).sum::<f64>()),
        )
    };
    let adjoint_a = |yv: &DVector<f64>| -> Vec<DMatrix<f64>> {
        let mut out: Vec<DMatrix<f64>> = dims.iter().map(|&d| DMatrix::zeros(d, d)).collect();
        for (i, (ai, _)) in p.constraints.iter().enumerate() {
            let yi = yv[i];
            if yi == 0.0 {
                continue;
            }
            for (bm, tgt) in ai.iter().zip(out.iter_mut()) {
                bm.add_into(tgt, yi);
            }
        }
        out
    };

    let mut iterates = Vec::new();
    let mut best: Option<(f64, SdpSolution)> = None; // (merit, snapshot)
    let mut stall = 0usize;
    let mut last_mu = f64::INFINITY;
    let mut last_xs = f64::INFINITY;

    for iter in 0..opts.max_iter {
        // Residuals.
        let ax = apply_a(&x);
        let rp = &b - &ax;
        let aty = adjoint_a(&y);
        let mut rd: Vec<DMatrix<f64>> = Vec::with_capacity(dims.len());
        for k in 0..dims.len() {
            let mut r = p.objective[k].to_dense(dims[k]);
            r -= &s[k];
            r -= &aty[k];
            rd.push(r);
        }
        let pobj: f64 = p
            .objective
            .iter()
            .zip(&x)
            .map(|(bm, xk)| bm.inner(xk))
            .sum();
        let dobj = b.dot(&y);
        let xs: f64 = x.iter().zip(&s).map(|(xk, sk)| xk.dot(sk)).sum();
        let mu = xs / n_total as f64;
        let pres = rp.norm() / (1.0 + bnorm);
        let dres = rd
            .iter()
            .map(|r| r.norm())
            .fold(0.0f64, f64::max)
            / (1.0 + cnorm);
        let relgap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());

        if opts.log_iterates {
            iterates.push(IterateRow {
                iter,
                primal: pobj,
                dual: dobj,
                gap: relgap,
            });
            if std::env::var("QCURV_SDP_TRACE").is_ok() {
                eprintln!(
                    "    [sdp] it {iter}: mu={mu:.3e} gap={relgap:.3e} pres={pres:.3e} dres={dres:.3e}"
                );
            }
        }

        let make_solution = |status: SdpStatus| SdpSolution {
            status,
            primal_blocks: x.clone(),
            dual_blocks: s.clone(),
            y: y.clone(),
            primal_objective: pobj,
            dual_objective: dobj,
            gap: relgap,
            primal_residual: pres,
            dual_residual: dres,
            iterations: iter,
            iterates: iterates.clone(),
        };

        if relgap <= opts.tol && pres <= opts.tol && dres <= opts.tol {
            return Ok(make_solution(SdpStatus::Optimal));
        }
        let merit = relgap.max(pres).max(dres);
        let best_merit = best.as_ref().map_or(f64::INFINITY, |(m, _)| *m);
        if merit < best_merit {
            best = Some((merit, make_solution(SdpStatus::MaxIter)));
        }
        // Numerical breakdown after near-convergence: hand back the best
        // iterate instead of a wrecked one.
        if merit > 1e4 * best_merit.max(1e-14) && best_merit < 1e-4 {
            let mut sol = best.unwrap().1;
            if sol.gap <= 100.0 * opts.tol {
                sol.status = SdpStatus::Optimal;
            }
            return Ok(sol);
        }
        // Dual objective divergence: the primal (or LMI) problem has no
        // finite optimum; surfaces the W = ∞ case as a status. Only credible
        // when the iteration never came close to optimality.
        if dobj.abs() > 1.0 / opts.tol && dres <= 1e-4 && best_merit > 1e-2 {
            return Ok(make_solution(SdpStatus::Infeasible));
        }
        if mu > 0.995 * last_mu && pres < 1e-12 + opts.tol && dres < 1e-12 + opts.tol {
            stall += 1;
            if stall > 14 {
                let mut sol = best.map(|(_, s)| s).unwrap_or_else(|| make_solution(SdpStatus::MaxIter));
                if sol.gap <= 100.0 * opts.tol {
                    sol.status = SdpStatus::Optimal;
                }
                return Ok(sol);
            }
        } else {
            stall = 0;
        }
        last_mu = mu;
        let _ = last_xs;
        last_xs = xs;

        // NT scaling per block.
        let mut scal = Vec::with_capacity(dims.len());
        for k in 0..dims.len() {
            match nt_scaling(&x[k], &s[k]) {
                Some(sc) => scal.push(sc),
                None => {
                    return Err(Error::Solver(format!(
                        "NT scaling failed at iteration {iter} (block {k}); mu={mu:.3e}"
                    )))
                }
            }
        }

        // Schur complement M_ij = Σ_k ⟨A_i, W A_j W⟩.
        let mut schur = DMatrix::<f64>::zeros(m, m);
        for j in 0..m {
            if is_sparse[j] {
                continue;
            }
            // Dense column.
            let mut tj: Vec<DMatrix<f64>> = Vec::with_capacity(dims.len());
            for k in 0..dims.len() {
                let a = p.constraints[j].0[k].to_dense(dims[k]);
                tj.push(&scal[k].w * a * &scal[k].w);
            }
            for i in 0..m {
                let mut acc = 0.0;
                for k in 0..dims.len() {
                    acc += p.constraints[i].0[k].inner(&tj[k]);
                }
                schur[(i, j)] = acc;
            }
        }
        for i in 0..m {
            if !is_sparse[i] {
                continue;
            }
            for j in 0..=i {
                if !is_sparse[j] {
                    continue;
                }
                let mut acc = 0.0;
                for k in 0..dims.len() {
                    let (ei, ej) = (&full_entries[i][k], &full_entries[j][k]);
                    if ei.is_empty() || ej.is_empty() {
                        continue;
                    }
                    let w = &scal[k].w;
                    for &(a, bb, va) in ei {
                        for &(c, dd, vb) in ej {
                            acc += va * vb * w[(bb, c)] * w[(dd, a)];
                        }
                    }
                }
                schur[(i, j)] = acc;
                schur[(j, i)] = acc;
            }
        }
        // Mirror dense columns into rows for symmetric consistency.
        for j in 0..m {
            if !is_sparse[j] {
                for i in 0..m {
                    schur[(j, i)] = schur[(i, j)];
                }
            }
        }

        let schur_chol = match chol_with_jitter(&schur) {
            Some((ch, _)) => ch,
            None => {
                return Err(Error::Solver(format!(
                    "Schur complement numerically singular at iteration {iter}; mu={mu:.3e}, \
                     constraints may be linearly dependent"
                )))
            }
        };

        let x_chols: Vec<_> = (0..dims.len())
            .map(|k| chol_with_jitter(&x[k]).map(|(c, _)| c.l()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Solver("iterate left the PSD cone".into()))?;
        let s_chols: Vec<_> = (0..dims.len())
            .map(|k| chol_with_jitter(&s[k]).map(|(c, _)| c.l()))
            .collect::<Option<Vec<_>>>()
            .ok_or_else(|| Error::Solver("iterate left the PSD cone".into()))?;

        // One direction solve shared by predictor and corrector.
        let solve_direction = |rc: &[DMatrix<f64>]| -> (Vec<DMatrix<f64>>, DVector<f64>, Vec<DMatrix<f64>>) {
            // U from V U + U V = 2 Rc (V diagonal), then the Schur solve.
            let mut gug: Vec<DMatrix<f64>> = Vec::with_capacity(dims.len());
            for k in 0..dims.len() {
                let d = dims[k];
                let sig = &scal[k].sigma;
                let mut u = DMatrix::zeros(d, d);
                for r in 0..d {
                    for c in 0..d {
                        u[(r, c)] = 2.0 * rc[k][(r, c)] / (sig[r] + sig[c]).max(1e-300);
                    }
                }
                gug.push(&scal[k].g * u * scal[k].g.transpose());
            }
            let mut rhs = rp.clone();
            for (i, (ai, _)) in p.constraints.iter().enumerate() {
                let mut acc = 0.0;
                for k in 0..dims.len() {
                    let wrw = &scal[k].w * &rd[k] * &scal[k].w;
                    acc += ai[k].inner(&(&wrw - &gug[k]));
                }
                // rhs_i = Rp_i − ⟨A_i, GUGᵀ⟩ + ⟨A_i, W Rd W⟩
                rhs[i] += acc;
            }
            let dy = schur_chol.solve(&rhs);
            let aty_dy = adjoint_a(&dy);
            let mut ds: Vec<DMatrix<f64>> = Vec::with_capacity(dims.len());
            let mut dx: Vec<DMatrix<f64>> = Vec::with_capacity(dims.len());
            for k in 0..dims.len() {
                let dsk = &rd[k] - &aty_dy[k];
                let dxk = &gug[k] - &scal[k].w * &dsk * &scal[k].w;
                ds.push((&dsk + dsk.transpose()) * 0.5);
                dx.push((&dxk + dxk.transpose()) * 0.5);
            }
            (dx, dy, ds)
        };

        // Predictor (affine scaling).
        let rc_aff: Vec<DMatrix<f64>> = (0..dims.len())
            .map(|k| {
                let d = dims[k];
                DMatrix::from_fn(d, d, |r, c| {
                    if r == c {
                        -scal[k].sigma[r] * scal[k].sigma[r]
                    } else {
                        0.0
                    }
                })
            })
            .collect();
        let (dx_a, _dy_a, ds_a) = solve_direction(&rc_aff);

        let mut ap = 1.0f64;
        let mut ad = 1.0f64;
        for k in 0..dims.len() {
            ap = ap.min(min_eig_step(&x_chols[k], &dx_a[k]));
            ad = ad.min(min_eig_step(&s_chols[k], &ds_a[k]));
        }
        let ap_aff = ap.min(1.0);
        let ad_aff = ad.min(1.0);
        let mut mu_aff = 0.0;
        for k in 0..dims.len() {
            let xa = &x[k] + &dx_a[k] * ap_aff;
            let sa = &s[k] + &ds_a[k] * ad_aff;
            mu_aff += xa.dot(&sa);
        }
        mu_aff /= n_total as f64;
        let sigma_c = (mu_aff / mu).clamp(0.0, 1.0).powi(3).max(1e-12);
        let mu_eff = mu;

        // Corrector with second-order term in the scaled space.
        let mut rc: Vec<DMatrix<f64>> = Vec::with_capacity(dims.len());
        for k in 0..dims.len() {
            let d = dims[k];
            let ginv = {
                // G⁻¹ = solve G z = e_j columns; G is small, use LU.
                scal[k]
                    .g
                    .clone()
                    .lu()
                    .try_inverse()
                    .expect("NT scaling matrix invertible")
            };
            let dxt = &ginv * &dx_a[k] * ginv.transpose();
            let dst = scal[k].g.transpose() * &ds_a[k] * &scal[k].g;
            let cross = (&dxt * &dst + &dst * &dxt) * 0.5;
            let mut r = DMatrix::zeros(d, d);
            for rr in 0..d {
                for cc in 0..d {
                    let base = if rr == cc {
                        sigma_c * mu_eff - scal[k].sigma[rr] * scal[k].sigma[rr]
                    } else {
                        0.0
                    };
                    r[(rr, cc)] = base - cross[(rr, cc)];
                }
            }
            rc.push(r);
        }
        let (dx, dy, ds) = solve_direction(&rc);

        let mut ap = 1.0f64;
        let mut ad = 1.0f64;
        for k in 0..dims.len() {
            ap = ap.min(min_eig_step(&x_chols[k], &dx[k]));
            ad = ad.min(min_eig_step(&s_chols[k], &ds[k]));
        }
        // aggressive fraction-to-boundary near convergence, conservative early
        let tau = if relgap < 1e-2 && pres < 1e-6 { 0.995 } else { 0.97 };
        let mut ap = (tau * ap).min(1.0);
        let mut ad = (tau * ad).min(1.0);
        if ap < 1e-10 && ad < 1e-10 {
            let mut sol = best.map(|(_, s)| s).unwrap_or_else(|| make_solution(SdpStatus::MaxIter));
            if sol.gap <= 100.0 * opts.tol {
                sol.status = SdpStatus::Optimal;
            }
            return Ok(sol);
        }
        // Reject steps that blow the complementarity up (garbage direction
        // from a near-singular Schur system); 2× headroom for recentering.
        for _ in 0..6 {
            let mut xs_new = 0.0;
            for k in 0..dims.len() {
                let xn = &x[k] + &dx[k] * ap;
                let sn = &s[k] + &ds[k] * ad;
                xs_new += xn.dot(&sn);
            }
            if xs_new.is_finite() && xs_new <= (2.0 * xs.abs()).max(1e-9 * n_total as f64) {
                break;
            }
            ap *= 0.1;
            ad *= 0.1;
        }

        if opts.log_iterates && std::env::var("QCURV_SDP_TRACE").is_ok() {
            eprintln!("    [sdp]   step: ap={ap:.3e} ad={ad:.3e} sigma={sigma_c:.3e}");
        }
        for k in 0..dims.len() {
            x[k] += &dx[k] * ap;
            s[k] += &ds[k] * ad;
        }
        y += &dy * ad;
    }

    if let Some((_, mut sol)) = best {
        if sol.gap <= 100.0 * opts.tol && sol.primal_residual <= 1e-6 && sol.dual_residual <= 1e-6 {
            sol.status = SdpStatus::Optimal;
        }
        return Ok(sol);
    }
    Ok(SdpSolution {
        status: SdpStatus::MaxIter,
        primal_blocks: x,
        dual_blocks: s,
        y,
        primal_objective: 0.0,
        dual_objective: 0.0,
        gap: f64::INFINITY,
        primal_residual: f64::INFINITY,
        dual_residual: f64::INFINITY,
        iterations: opts.max_iter,
        iterates,
    })
}
