//! Dense primal-dual interior-point solver for semidefinite programs
//!
//! ```text
//! minimize  Σ_b ⟨C_b, X_b⟩   s.t.  Σ_b ⟨A_{j,b}, X_b⟩ = b_j,  X_b ⪰ 0
//! maximize  bᵀy              s.t.  C_b - Σ_j y_j A_{j,b} = Z_b ⪰ 0
//! ```
//!
//! Hermitian blocks are embedded into real symmetric blocks of twice the size.
//! The iteration is an infeasible-start path-following method with
//! Nesterov–Todd scaling and a Mehrotra predictor-corrector step.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, RMatrix};

/// Sparse Hermitian matrix, both triangles stored.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct HermitianSparse {
    dim: usize,
    entries: BTreeMap<(usize, usize), Complex64>,
}

impl HermitianSparse {
    pub fn new(dim: usize) -> Self {
        HermitianSparse { dim, entries: BTreeMap::new() }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::new(dim);
        for i in 0..dim {
            m.add(i, i, Complex64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_dense(m: &CMatrix) -> Self {
        let mut s = Self::new(m.nrows());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                if m[(i, j)].norm() > 0.0 {
                    s.add(i, j, m[(i, j)]);
                }
            }
        }
        s
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `M[row, col] += value`; the caller supplies both triangles.
    pub fn add(&mut self, row: usize, col: usize, value: Complex64) {
        assert!(row < self.dim && col < self.dim, "entry ({row}, {col}) outside dim {}", self.dim);
        *self.entries.entry((row, col)).or_insert(Complex64::new(0.0, 0.0)) += value;
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, Complex64)> + '_ {
        self.entries.iter().map(|(&(r, c), &v)| (r, c, v))
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.dim, self.dim);
        for (r, c, v) in self.entries() {
            m[(r, c)] += v;
        }
        m
    }

    /// Largest `|M[r,c] - conj(M[c,r])|`.
    pub fn hermitian_defect(&self) -> f64 {
        self.entries()
            .map(|(r, c, v)| {
                let t = self.entries.get(&(c, r)).copied().unwrap_or(Complex64::new(0.0, 0.0));
                (v - t.conj()).norm()
            })
            .fold(0.0, f64::max)
    }

    pub fn is_real(&self) -> bool {
        self.entries.values().all(|v| v.im == 0.0)
    }

    /// `Re Tr(M X)`.
    pub fn inner(&self, x: &CMatrix) -> f64 {
        self.entries().map(|(r, c, v)| (v * x[(c, r)]).re).sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpConstraint {
    /// `(block, A_{j,block})`; absent blocks are zero.
    pub matrices: Vec<(usize, HermitianSparse)>,
    pub rhs: f64,
}

/// Minimization problem over Hermitian PSD blocks.
#[derive(Debug, Clone, PartialEq)]
pub struct SdpProblem {
    pub blocks: Vec<usize>,
    pub objective: Vec<HermitianSparse>,
    pub constraints: Vec<SdpConstraint>,
}

impl SdpProblem {
    pub fn validate(&self) -> Result<()> {
        if self.objective.len() != self.blocks.len() {
            return Err(Error::Contract("one objective matrix per block required".into()));
        }
        for (b, (c, &dim)) in self.objective.iter().zip(&self.blocks).enumerate() {
            if c.dim() != dim {
                return Err(Error::Contract(format!("objective block {b} has dim {}, expected {dim}", c.dim())));
            }
            if c.hermitian_defect() > 1e-12 {
                return Err(Error::Contract(format!("objective block {b} is not Hermitian")));
            }
        }
        for (j, con) in self.constraints.iter().enumerate() {
            for (b, a) in &con.matrices {
                let dim = *self
                    .blocks
                    .get(*b)
                    .ok_or_else(|| Error::Contract(format!("constraint {j} names missing block {b}")))?;
                if a.dim() != dim {
                    return Err(Error::Contract(format!("constraint {j} block {b} has wrong dimension")));
                }
                if a.hermitian_defect() > 1e-12 {
                    return Err(Error::Contract(format!("constraint {j} block {b} is not Hermitian")));
                }
            }
        }
        Ok(())
    }

    pub fn is_real(&self) -> bool {
        self.objective.iter().all(HermitianSparse::is_real)
            && self.constraints.iter().all(|c| c.matrices.iter().all(|(_, a)| a.is_real()))
    }

    /// Objective value `Σ_b Re Tr(C_b X_b)`.
    pub fn objective_value(&self, x: &[CMatrix]) -> f64 {
        self.objective.iter().zip(x).map(|(c, x)| c.inner(x)).sum()
    }

    /// `max_j |Σ_b ⟨A_{j,b}, X_b⟩ - b_j|`.
    pub fn primal_residual(&self, x: &[CMatrix]) -> f64 {
        self.constraints
            .iter()
            .map(|con| {
                let lhs: f64 = con.matrices.iter().map(|(b, a)| a.inner(&x[*b])).sum();
                (lhs - con.rhs).abs()
            })
            .fold(0.0, f64::max)
    }
}

/// Sparse real symmetric matrix, both triangles stored.
#[derive(Debug, Clone, PartialEq)]
pub struct SymSparse {
    pub dim: usize,
    pub entries: Vec<(usize, usize, f64)>,
}

impl SymSparse {
    fn inner(&self, x: &RMatrix) -> f64 {
        self.entries.iter().map(|&(r, c, v)| v * x[(c, r)]).sum()
    }

    fn add_scaled_to(&self, s: f64, out: &mut RMatrix) {
        for &(r, c, v) in &self.entries {
            out[(r, c)] += s * v;
        }
    }

    fn frobenius(&self) -> f64 {
        libm::sqrt(self.entries.iter().map(|e| e.2 * e.2).sum())
    }

    pub fn to_dense(&self) -> RMatrix {
        let mut m = RMatrix::zeros(self.dim, self.dim);
        self.add_scaled_to(1.0, &mut m);
        m
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealConstraint {
    pub matrices: Vec<(usize, SymSparse)>,
    pub rhs: f64,
}

/// Real symmetric counterpart of [`SdpProblem`].
#[derive(Debug, Clone, PartialEq)]
pub struct RealSdpProblem {
    pub blocks: Vec<usize>,
    pub objective: Vec<SymSparse>,
    pub constraints: Vec<RealConstraint>,
}

fn real_part(m: &HermitianSparse) -> SymSparse {
    SymSparse { dim: m.dim(), entries: m.entries().filter(|e| e.2.re != 0.0).map(|(r, c, v)| (r, c, v.re)).collect() }
}

/// Embeds `A = P + iQ` as `½ [[P, -Q], [Q, P]]`, so that `⟨½ emb(A), emb(X)⟩ = Re Tr(A X)`.
fn embed(m: &HermitianSparse) -> SymSparse {
    let n = m.dim();
    let mut entries = Vec::with_capacity(4 * m.nnz());
    for (r, c, v) in m.entries() {
        if v.re != 0.0 {
            entries.push((r, c, 0.5 * v.re));
            entries.push((r + n, c + n, 0.5 * v.re));
        }
        if v.im != 0.0 {
            entries.push((r, c + n, -0.5 * v.im));
            entries.push((r + n, c, 0.5 * v.im));
        }
    }
    SymSparse { dim: 2 * n, entries }
}

/// Standard real embedding of a Hermitian problem with the same optimal values.
pub fn hermitian_to_real(problem: &SdpProblem) -> RealSdpProblem {
    RealSdpProblem {
        blocks: problem.blocks.iter().map(|d| 2 * d).collect(),
        objective: problem.objective.iter().map(embed).collect(),
        constraints: problem
            .constraints
            .iter()
            .map(|c| RealConstraint { matrices: c.matrices.iter().map(|(b, a)| (*b, embed(a))).collect(), rhs: c.rhs })
            .collect(),
    }
}

fn as_real(problem: &SdpProblem) -> RealSdpProblem {
    RealSdpProblem {
        blocks: problem.blocks.clone(),
        objective: problem.objective.iter().map(real_part).collect(),
        constraints: problem
            .constraints
            .iter()
            .map(|c| RealConstraint { matrices: c.matrices.iter().map(|(b, a)| (*b, real_part(a))).collect(), rhs: c.rhs })
            .collect(),
    }
}

/// Inverse of the embedding for a real `2n × 2n` block (averaging the two copies).
pub fn complex_from_embedded(x: &RMatrix) -> CMatrix {
    let n = x.nrows() / 2;
    CMatrix::from_fn(n, n, |r, c| {
        let p = 0.5 * (x[(r, c)] + x[(r + n, c + n)]);
        let q = 0.5 * (x[(r + n, c)] - x[(r, c + n)]);
        Complex64::new(p, q)
    })
}

/// Real symmetric embedding `[[P, -Q], [Q, P]]` of a Hermitian matrix.
pub fn embed_dense(x: &CMatrix) -> RMatrix {
    let n = x.nrows();
    RMatrix::from_fn(2 * n, 2 * n, |r, c| {
        let v = x[(r % n, c % n)];
        match (r < n, c < n) {
            (true, true) | (false, false) => v.re,
            (true, false) => -v.im,
            (false, true) => v.im,
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SdpStatus {
    Optimal,
    MaxIterations,
    NumericalFailure,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Target for relative gap and relative residuals.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { tol: 1e-8, max_iter: 200 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RealSdpSolution {
    pub x: Vec<RMatrix>,
    pub z: Vec<RMatrix>,
    pub y: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    /// `|p - d| / (1 + |p| + |d|)`.
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub status: SdpStatus,
    pub message: String,
}

impl RealSdpSolution {
    pub fn residual(&self) -> f64 {
        self.primal_residual.max(self.dual_residual)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SdpSolution {
    pub x: Vec<CMatrix>,
    pub z: Vec<CMatrix>,
    pub y: Vec<f64>,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub primal_residual: f64,
    pub dual_residual: f64,
    pub iterations: usize,
    pub status: SdpStatus,
    pub message: String,
}

impl SdpSolution {
    pub fn residual(&self) -> f64 {
        self.primal_residual.max(self.dual_residual)
    }

    pub fn is_optimal(&self) -> bool {
        self.status == SdpStatus::Optimal
    }

    /// Fails unless the solver reported an optimal point.
    pub fn require_optimal(self) -> Result<Self> {
        if self.is_optimal() {
            Ok(self)
        } else {
            Err(Error::Solver(format!(
                "{:?} after {} iterations (gap {:.3e}, residual {:.3e}): {}",
                self.status,
                self.iterations,
                self.gap,
                self.residual(),
                self.message
            )))
        }
    }
}

/// Compact solver summary carried by downstream results.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverDiagnostics {
    pub status: SdpStatus,
    pub primal_objective: f64,
    pub dual_objective: f64,
    pub gap: f64,
    pub residual: f64,
    pub iterations: usize,
}

impl From<&SdpSolution> for SolverDiagnostics {
    fn from(s: &SdpSolution) -> Self {
        SolverDiagnostics {
            status: s.status,
            primal_objective: s.primal_objective,
            dual_objective: s.dual_objective,
            gap: s.gap,
            residual: s.residual(),
            iterations: s.iterations,
        }
    }
}

/// Solves a Hermitian-block problem; real problems skip the embedding.
pub fn solve(problem: &SdpProblem, options: &SolverOptions) -> Result<SdpSolution> {
    problem.validate()?;
    if problem.is_real() {
        let sol = solve_real(&as_real(problem), options);
        let lift = |m: &RMatrix| m.map(|v| Complex64::new(v, 0.0));
        return Ok(SdpSolution {
            x: sol.x.iter().map(lift).collect(),
            z: sol.z.iter().map(lift).collect(),
            y: sol.y,
            primal_objective: sol.primal_objective,
            dual_objective: sol.dual_objective,
            gap: sol.gap,
            primal_residual: sol.primal_residual,
            dual_residual: sol.dual_residual,
            iterations: sol.iterations,
            status: sol.status,
            message: sol.message,
        });
    }
    let sol = solve_real(&hermitian_to_real(problem), options);
    Ok(SdpSolution {
        x: sol.x.iter().map(complex_from_embedded).collect(),
        // Z' = ½ emb(C - Σ y A)
        z: sol.z.iter().map(|z| complex_from_embedded(z) * Complex64::new(2.0, 0.0)).collect(),
        y: sol.y,
        primal_objective: sol.primal_objective,
        dual_objective: sol.dual_objective,
        gap: sol.gap,
        primal_residual: sol.primal_residual,
        dual_residual: sol.dual_residual,
        iterations: sol.iterations,
        status: sol.status,
        message: sol.message,
    })
}

struct Scaling {
    g: RMatrix,
    g_inv: RMatrix,
    w: RMatrix,
    s: DVector<f64>,
}

fn nt_scaling(x: &RMatrix, z: &RMatrix) -> Option<Scaling> {
    let l = x.clone().cholesky()?.unpack();
    let r = z.clone().cholesky()?.unpack();
    let svd = (r.transpose() * &l).svd(true, true);
    let v_t = svd.v_t?;
    let s = svd.singular_values;
    if s.iter().any(|&v| !(v > 0.0) || !v.is_finite()) {
        return None;
    }
    let s_isqrt = DMatrix::from_diagonal(&s.map(|v| 1.0 / libm::sqrt(v)));
    let s_sqrt = DMatrix::from_diagonal(&s.map(libm::sqrt));
    let g = &l * v_t.transpose() * s_isqrt;
    let l_inv = l.solve_lower_triangular(&RMatrix::identity(x.nrows(), x.nrows()))?;
    let g_inv = s_sqrt * v_t * l_inv;
    let w = &g * g.transpose();
    Some(Scaling { g, g_inv, w, s })
}

/// Largest step `α ≤ 1/γ` keeping `X + α dX ⪰ 0`, reported as `min(1, γ α_max)`.
fn max_step(x: &RMatrix, dx: &RMatrix, gamma: f64) -> f64 {
    let chol = match x.clone().cholesky() {
        Some(c) => c,
        None => return 0.0,
    };
    let l = chol.unpack();
    let t = match l.solve_lower_triangular(dx) {
        Some(t) => t,
        None => return 0.0,
    };
    let s = match l.solve_lower_triangular(&t.transpose()) {
        Some(s) => s,
        None => return 0.0,
    };
    let lmin = crate::linalg::real_eigvalsh(&s)[0];
    if lmin >= 0.0 {
        1.0
    } else {
        (gamma * (-1.0 / lmin)).min(1.0)
    }
}

fn frob_inner(a: &RMatrix, b: &RMatrix) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn sym(m: RMatrix) -> RMatrix {
    (&m + m.transpose()) * 0.5
}

struct Operators<'a> {
    p: &'a RealSdpProblem,
    /// per block: list of (constraint index, matrix)
    by_block: Vec<Vec<(usize, &'a SymSparse)>>,
}

impl<'a> Operators<'a> {
    fn new(p: &'a RealSdpProblem) -> Self {
        let mut by_block = vec![Vec::new(); p.blocks.len()];
        for (j, con) in p.constraints.iter().enumerate() {
            for (b, a) in &con.matrices {
                by_block[*b].push((j, a));
            }
        }
        Operators { p, by_block }
    }

    fn a_of(&self, x: &[RMatrix]) -> Vec<f64> {
        let mut out = vec![0.0; self.p.constraints.len()];
        for (b, list) in self.by_block.iter().enumerate() {
            for (j, a) in list {
                out[*j] += a.inner(&x[b]);
            }
        }
        out
    }

    fn a_adjoint(&self, y: &[f64]) -> Vec<RMatrix> {
        let mut out: Vec<RMatrix> = self.p.blocks.iter().map(|&d| RMatrix::zeros(d, d)).collect();
        for (b, list) in self.by_block.iter().enumerate() {
            for (j, a) in list {
                if y[*j] != 0.0 {
                    a.add_scaled_to(y[*j], &mut out[b]);
                }
            }
        }
        out
    }

    /// `M_ij = Σ_b Tr(A_ib W_b A_jb W_b)`.
    fn schur(&self, scalings: &[Scaling]) -> RMatrix {
        let m = self.p.constraints.len();
        let mut schur = RMatrix::zeros(m, m);
        for (b, list) in self.by_block.iter().enumerate() {
            let w = &scalings[b].w;
            let dim = w.nrows();
            let mut t = RMatrix::zeros(dim, dim);
            for (j, aj) in list {
                // t = A_j W, then W t
                t.fill(0.0);
                for &(r, c, v) in &aj.entries {
                    for k in 0..dim {
                        t[(r, k)] += v * w[(c, k)];
                    }
                }
                let y = w * &t;
                for (i, ai) in list {
                    if i > j {
                        continue;
                    }
                    let val = ai.inner(&y);
                    schur[(*i, *j)] += val;
                    if i != j {
                        schur[(*j, *i)] += val;
                    }
                }
            }
        }
        schur
    }
}

struct SchurSolver {
    m: RMatrix,
    chol: Option<nalgebra::Cholesky<f64, nalgebra::Dyn>>,
    lu: Option<nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>>,
}

impl SchurSolver {
    fn new(m: RMatrix) -> Self {
        let chol = m.clone().cholesky().or_else(|| {
            let scale = m.diagonal().iter().fold(0.0f64, |a, &v| a.max(v.abs())).max(1.0);
            let reg = &m + RMatrix::identity(m.nrows(), m.ncols()) * (1e-13 * scale);
            reg.cholesky()
        });
        let lu = if chol.is_none() { Some(m.clone().lu()) } else { None };
        SchurSolver { m, chol, lu }
    }

    fn raw(&self, rhs: &DVector<f64>) -> Option<DVector<f64>> {
        if let Some(c) = &self.chol {
            Some(c.solve(rhs))
        } else {
            self.lu.as_ref()?.solve(rhs)
        }
    }

    /// Solve with two rounds of iterative refinement.
    fn solve(&self, rhs: &[f64]) -> Option<Vec<f64>> {
        let b = DVector::from_column_slice(rhs);
        let mut x = self.raw(&b)?;
        for _ in 0..2 {
            let r = &b - &self.m * &x;
            x += self.raw(&r)?;
        }
        if x.iter().all(|v| v.is_finite()) {
            Some(x.iter().copied().collect())
        } else {
            None
        }
    }
}

/// Solves a real symmetric problem. Deterministic for a given input.
pub fn solve_real(problem: &RealSdpProblem, options: &SolverOptions) -> RealSdpSolution {
    let ops = Operators::new(problem);
    let m = problem.constraints.len();
    let nb = problem.blocks.len();
    let b: Vec<f64> = problem.constraints.iter().map(|c| c.rhs).collect();
    let b_norm = libm::sqrt(b.iter().map(|v| v * v).sum());
    let c_dense: Vec<RMatrix> = problem.objective.iter().map(SymSparse::to_dense).collect();
    let c_norm = libm::sqrt(c_dense.iter().map(|c| frob_inner(c, c)).sum());
    let total_dim: usize = problem.blocks.iter().sum();

    // starting point
    let mut x: Vec<RMatrix> = Vec::with_capacity(nb);
    let mut z: Vec<RMatrix> = Vec::with_capacity(nb);
    for (blk, &dim) in problem.blocks.iter().enumerate() {
        let dimf = dim as f64;
        let mut xi: f64 = 10.0f64.max(libm::sqrt(dimf));
        let mut eta: f64 = 10.0f64.max(libm::sqrt(dimf)).max(problem.objective[blk].frobenius());
        for (j, a) in &ops.by_block[blk] {
            let an = a.frobenius();
            xi = xi.max(dimf * (1.0 + b[*j].abs()) / (1.0 + an));
            eta = eta.max(an);
        }
        x.push(RMatrix::identity(dim, dim) * xi);
        z.push(RMatrix::identity(dim, dim) * eta);
    }
    let mut y = vec![0.0; m];

    let mut status = SdpStatus::MaxIterations;
    let mut message = String::new();
    let mut iterations = 0;
    let mut stalls = 0;

    let residuals = |x: &[RMatrix], y: &[f64], z: &[RMatrix]| {
        let ax = ops.a_of(x);
        let rp: Vec<f64> = b.iter().zip(&ax).map(|(bi, ai)| bi - ai).collect();
        let aty = ops.a_adjoint(y);
        let rd: Vec<RMatrix> = (0..nb).map(|k| &c_dense[k] - &aty[k] - &z[k]).collect();
        (rp, rd)
    };

    loop {
        let (rp, rd) = residuals(&x, &y, &z);
        let pobj: f64 = (0..nb).map(|k| frob_inner(&c_dense[k], &x[k])).sum();
        let dobj: f64 = b.iter().zip(&y).map(|(a, c)| a * c).sum();
        let gap = (pobj - dobj).abs() / (1.0 + pobj.abs() + dobj.abs());
        let pinf = libm::sqrt(rp.iter().map(|v| v * v).sum()) / (1.0 + b_norm);
        let dinf = libm::sqrt(rd.iter().map(|r| frob_inner(r, r)).sum()) / (1.0 + c_norm);
        let xz: f64 = (0..nb).map(|k| frob_inner(&x[k], &z[k])).sum();
        let mu = xz / total_dim as f64;

        let finish = |status: SdpStatus, message: String, x: Vec<RMatrix>, y: Vec<f64>, z: Vec<RMatrix>, iterations: usize| {
            RealSdpSolution {
                x,
                z,
                y,
                primal_objective: pobj,
                dual_objective: dobj,
                gap,
                primal_residual: pinf,
                dual_residual: dinf,
                iterations,
                status,
                message,
            }
        };

        if gap <= options.tol && pinf <= options.tol && dinf <= options.tol {
            return finish(SdpStatus::Optimal, message, x, y, z, iterations);
        }
        if iterations >= options.max_iter {
            message = format!("iteration cap {} reached", options.max_iter);
            return finish(status, message, x, y, z, iterations);
        }
        iterations += 1;

        let scalings: Option<Vec<Scaling>> = (0..nb).map(|k| nt_scaling(&x[k], &z[k])).collect();
        let scalings = match scalings {
            Some(s) => s,
            None => {
                status = SdpStatus::NumericalFailure;
                message = "iterate lost positive definiteness".into();
                return finish(status, message, x, y, z, iterations);
            }
        };
        let schur = SchurSolver::new(ops.schur(&scalings));

        // direction for a given scaled-space target D_b = G H G^T
        let direction = |targets: &[RMatrix]| -> Option<(Vec<RMatrix>, Vec<f64>, Vec<RMatrix>)> {
            let wrw: Vec<RMatrix> = (0..nb).map(|k| &scalings[k].w * &rd[k] * &scalings[k].w).collect();
            let inner: Vec<RMatrix> = (0..nb).map(|k| &targets[k] - &wrw[k]).collect();
            let a_inner = ops.a_of(&inner);
            let rhs: Vec<f64> = rp.iter().zip(&a_inner).map(|(r, a)| r - a).collect();
            let dy = schur.solve(&rhs)?;
            let atdy = ops.a_adjoint(&dy);
            let dz: Vec<RMatrix> = (0..nb).map(|k| sym(&rd[k] - &atdy[k])).collect();
            let dx: Vec<RMatrix> =
                (0..nb).map(|k| sym(&targets[k] - &scalings[k].w * &dz[k] * &scalings[k].w)).collect();
            Some((dx, dy, dz))
        };

        // predictor: D = -X
        let pred_targets: Vec<RMatrix> = x.iter().map(|xk| -xk).collect();
        let (dxa, _dya, dza) = match direction(&pred_targets) {
            Some(d) => d,
            None => {
                status = SdpStatus::NumericalFailure;
                message = "Schur complement solve failed".into();
                return finish(status, message, x, y, z, iterations);
            }
        };
        let ap = (0..nb).map(|k| max_step(&x[k], &dxa[k], 1.0)).fold(1.0, f64::min);
        let ad = (0..nb).map(|k| max_step(&z[k], &dza[k], 1.0)).fold(1.0, f64::min);
        let mu_aff: f64 = (0..nb)
            .map(|k| frob_inner(&(&x[k] + &dxa[k] * ap), &(&z[k] + &dza[k] * ad)))
            .sum::<f64>()
            / total_dim as f64;
        let ratio = (mu_aff / mu).clamp(0.0, 1.0);
        let sigma = ratio * ratio * ratio;

        // corrector in the scaled space
        let corr_targets: Vec<RMatrix> = (0..nb)
            .map(|k| {
                let sc = &scalings[k];
                let dim = sc.s.len();
                let dxt = &sc.g_inv * &dxa[k] * sc.g_inv.transpose();
                let dzt = sc.g.transpose() * &dza[k] * &sc.g;
                let second = &dxt * &dzt + &dzt * &dxt;
                let mut h = RMatrix::zeros(dim, dim);
                for i in 0..dim {
                    for j in 0..dim {
                        let mut rc = -second[(i, j)];
                        if i == j {
                            rc += 2.0 * sigma * mu - 2.0 * sc.s[i] * sc.s[i];
                        }
                        h[(i, j)] = rc / (sc.s[i] + sc.s[j]);
                    }
                }
                &sc.g * h * sc.g.transpose()
            })
            .collect();
        let (dx, dy, dz) = match direction(&corr_targets) {
            Some(d) => d,
            None => {
                status = SdpStatus::NumericalFailure;
                message = "Schur complement solve failed".into();
                return finish(status, message, x, y, z, iterations);
            }
        };
        let gamma = 0.9 + 0.09 * ap.min(ad);
        let ap = (0..nb).map(|k| max_step(&x[k], &dx[k], gamma)).fold(1.0, f64::min);
        let ad = (0..nb).map(|k| max_step(&z[k], &dz[k], gamma)).fold(1.0, f64::min);
        if ap < 1e-10 && ad < 1e-10 {
            stalls += 1;
            if stalls >= 3 {
                status = SdpStatus::NumericalFailure;
                message = "step length collapsed".into();
                return finish(status, message, x, y, z, iterations);
            }
        }
        for k in 0..nb {
            x[k] = sym(&x[k] + &dx[k] * ap);
            z[k] = sym(&z[k] + &dz[k] * ad);
        }
        for (yj, dyj) in y.iter_mut().zip(&dy) {
            *yj += ad * dyj;
        }
    }
}
