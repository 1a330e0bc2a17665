//! Homogeneous reproducing kernels `C_r^n` on the two-copy space, their
//! Krawtchouk spectra, and the almost-reproducing kernel `K = Σ_r c_r C_r^n`.
//!
//! Two-copy operators act on `(ℂ²)^{⊗n} ⊗ (ℂ²)^{⊗n}`. The first copy (the
//! polynomial variables) occupies the most significant index bits, so a pair
//! of words `(u, v)` is the `2n`-site word `u` followed by `v`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::DVector;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{ToPrimitive, Zero};

use crate::dense::{evaluate, ground_state, word_matrix};
use crate::error::{Error, Result};
use crate::krawtchouk::{binomial, KrawtchoukContext};
use crate::linalg::{self, c, CMatrix, RMatrix};
use crate::pauli::{words_up_to_weight, Letter, PauliWord};
use crate::polynomial::PauliPolynomial;
use crate::sdp::{self, HermitianSparse, SdpConstraint, SdpProblem, SolverDiagnostics, SolverOptions};

/// Largest `n` for dense two-copy operators (`4^n × 4^n`).
pub const TWO_COPY_CAP: usize = 4;

/// Accuracy demanded of the coefficient problem against the Krawtchouk root.
pub const COEFFICIENT_TOL: f64 = 1e-6;

fn check_two_copy(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("n must be positive".into()));
    }
    if n > TWO_COPY_CAP {
        return Err(Error::Resource { what: "two-copy qubit count", requested: n, cap: TWO_COPY_CAP });
    }
    Ok(())
}

/// The `2n`-site word `u ⊗ v`.
pub fn two_copy_word(u: &PauliWord, v: &PauliWord) -> PauliWord {
    let n = u.n();
    PauliWord::from_masks(2 * n, u.x_mask() | (v.x_mask() << n), u.z_mask() | (v.z_mask() << n))
}

/// Hermitian operator on the `4^n`-dimensional two-copy space.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoCopyOperator {
    n: usize,
    matrix: CMatrix,
}

impl TwoCopyOperator {
    fn from_polynomial(n: usize, p: &PauliPolynomial) -> Result<Self> {
        Ok(TwoCopyOperator { n, matrix: evaluate(p)?.into_matrix() })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        linalg::eigvalsh(&self.matrix)
    }

    /// `Tr(A† B) / 4^n`.
    pub fn inner(&self, other: &TwoCopyOperator) -> Complex64 {
        linalg::trace(&(self.matrix.adjoint() * &other.matrix)) / self.matrix.nrows() as f64
    }
}

/// `A_j = ¾ I + ¼ Σ_W σ_W^j ⊗ σ_W^j` for site `j` (0-based).
pub fn build_a(n: usize, j: usize) -> Result<TwoCopyOperator> {
    check_two_copy(n)?;
    if j >= n {
        return Err(Error::Domain(format!("site {j} outside 0..{n}")));
    }
    let mut p = PauliPolynomial::constant(2 * n, 0.75);
    for letter in Letter::NON_IDENTITY {
        let w = PauliWord::single(n, j, letter);
        p.add_term(two_copy_word(&w, &w), c(0.25, 0.0));
    }
    TwoCopyOperator::from_polynomial(n, &p)
}

/// `Σ_j A_j`.
pub fn build_a_sum(n: usize) -> Result<TwoCopyOperator> {
    check_two_copy(n)?;
    let mut m = CMatrix::zeros(1 << (2 * n), 1 << (2 * n));
    for j in 0..n {
        m += build_a(n, j)?.matrix;
    }
    Ok(TwoCopyOperator { n, matrix: m })
}

/// `C_r^n(σ, σ) = Σ_{|w| = r} w(σ) ⊗ w(σ)`, straight from the definition.
pub fn build_crn(n: usize, r: usize) -> Result<TwoCopyOperator> {
    check_two_copy(n)?;
    if r > n {
        return Err(Error::Domain(format!("degree {r} exceeds n = {n}")));
    }
    let mut p = PauliPolynomial::zero(2 * n);
    for w in words_up_to_weight(n, r).iter().filter(|w| w.weight() == r) {
        p.add_term(two_copy_word(w, w), c(1.0, 0.0));
    }
    TwoCopyOperator::from_polynomial(n, &p)
}

/// `C_r^n = Σ_l 4^l (-3)^{r-l} C(n-l, r-l) e_l(A_1, …, A_n)` with `e_l` the elementary symmetric sums.
pub fn build_crn_from_a(n: usize, r: usize) -> Result<TwoCopyOperator> {
    check_two_copy(n)?;
    if r > n {
        return Err(Error::Domain(format!("degree {r} exceeds n = {n}")));
    }
    let dim = 1 << (2 * n);
    let mut e: Vec<CMatrix> = vec![CMatrix::zeros(dim, dim); r + 1];
    e[0] = CMatrix::identity(dim, dim);
    for j in 0..n {
        let a = build_a(n, j)?.matrix;
        for l in (1..=r).rev() {
            let t = &a * &e[l - 1];
            e[l] += t;
        }
    }
    let mut m = CMatrix::zeros(dim, dim);
    for (l, el) in e.iter().enumerate() {
        let coeff = BigInt::from(4).pow(l as u32) * BigInt::from(-3).pow((r - l) as u32) * binomial(n - l, r - l);
        m += el * c(coeff.to_f64().unwrap_or(f64::NAN), 0.0);
    }
    Ok(TwoCopyOperator { n, matrix: m })
}

/// `K_r(S)` for a matrix `S`, using the explicit sum with matrix binomials.
pub fn krawtchouk_of_operator(ctx: &KrawtchoukContext, r: usize, s: &CMatrix) -> Result<CMatrix> {
    if r > ctx.n() {
        return Err(Error::Domain(format!("degree {r} exceeds n = {}", ctx.n())));
    }
    let (n, q) = (ctx.n(), ctx.q() as i64);
    let dim = s.nrows();
    let eye = CMatrix::identity(dim, dim);
    let mut falling = eye.clone();
    let mut out = CMatrix::zeros(dim, dim);
    let mut factorial = BigInt::from(1);
    for j in 0..=r {
        if j > 0 {
            falling = &falling * (s - &eye * c((j - 1) as f64, 0.0));
            factorial *= j;
        }
        let num = BigInt::from(-q).pow(j as u32) * BigInt::from(q - 1).pow((r - j) as u32) * binomial(n - j, r - j);
        let coeff = num.to_f64().unwrap_or(f64::NAN) / factorial.to_f64().unwrap_or(f64::NAN);
        out += &falling * c(coeff, 0.0);
    }
    Ok(out)
}

/// `((-1)^r K_r(i), 3^i C(n, i))` for `i = 0..=n`: eigenvalues of `C_r^n` with multiplicities.
pub fn crn_spectrum(ctx: &KrawtchoukContext, r: usize) -> Result<Vec<(BigInt, BigInt)>> {
    if ctx.q() != 4 {
        return Err(Error::Contract("kernel spectra use q = 4".into()));
    }
    let n = ctx.n();
    (0..=n)
        .map(|i| {
            let v = ctx.value(r, i)?.clone();
            let v = if r % 2 == 1 { -v } else { v };
            Ok((v, BigInt::from(3).pow(i as u32) * binomial(n, i)))
        })
        .collect()
}

/// The spectrum of [`crn_spectrum`] expanded to a sorted list (small `n` only).
pub fn crn_spectrum_sorted(ctx: &KrawtchoukContext, r: usize) -> Result<Vec<f64>> {
    if ctx.n() > 8 {
        return Err(Error::Resource { what: "expanded spectrum qubit count", requested: ctx.n(), cap: 8 });
    }
    let mut out = Vec::new();
    for (v, m) in crn_spectrum(ctx, r)? {
        let v = v.to_f64().unwrap_or(f64::NAN);
        let m = m.to_usize().unwrap_or(0);
        out.extend(core::iter::repeat_n(v, m));
    }
    out.sort_by(f64::total_cmp);
    Ok(out)
}

/// Orthonormal Krawtchouk basis value `K_m(i) / sqrt(K_m(0))` (for `q = 4`, `‖K_m‖² = K_m(0)`).
fn basis_value(ctx: &KrawtchoukContext, m: usize, i: usize) -> f64 {
    ctx.value_f64(m, i) / libm::sqrt(ctx.value_f64(m, 0))
}

/// Coefficients `c_0, …, c_{min(2d, n)}` of an almost-reproducing kernel, with the
/// Gram witness of its univariate profile
/// `f(i) = Σ_r c_r (-1)^r K_r(i) = b(i)ᵀ G b(i)`, where `b_m = K_m / ‖K_m‖`, `m ≤ min(d, n)`.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelCoefficients {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub c: Vec<f64>,
    pub gram: RMatrix,
    /// `f(0), …, f(n)`.
    pub profile: Vec<f64>,
    pub sdp_objective: f64,
    /// `ξ_{d+1}`, zero once `d ≥ n`.
    pub xi_reference: f64,
    /// Optimal positivity margin, when the level admits one.
    pub eta: Option<f64>,
    pub solver: SolverDiagnostics,
}

impl KernelCoefficients {
    /// `c_r`, or `None` beyond the stored range.
    pub fn coefficient(&self, r: usize) -> Option<f64> {
        self.c.get(r).copied()
    }

    /// `Σ_{r=1}^{k/2} (1 - c_{2r})`.
    pub fn deficit_sum(&self) -> f64 {
        (1..=self.k / 2).map(|r| 1.0 - self.coefficient(2 * r).unwrap_or(0.0)).sum()
    }

    /// `k(k+2)/(3n) · ⟨i, f⟩`, the coefficient bound with `q = 4`.
    pub fn deficit_bound(&self) -> f64 {
        let k = self.k as f64;
        k * (k + 2.0) / (3.0 * self.n as f64) * self.sdp_objective
    }

    pub fn gram_min_eigenvalue(&self) -> f64 {
        linalg::real_eigvalsh(&self.gram).first().copied().unwrap_or(0.0)
    }
}

/// Solves `min ⟨i, f⟩_4` over sums of squares `f` of degree `2d` with `⟨1, f⟩_4 = 1`,
/// and reads off the kernel coefficients.
pub fn solve_coefficients(n: usize, d: usize, k: usize) -> Result<KernelCoefficients> {
    let ctx = KrawtchoukContext::new(n, 4)?;
    solve_coefficients_with(&ctx, d, k, &SolverOptions { tol: 1e-10, ..SolverOptions::default() })
}

pub fn solve_coefficients_with(
    ctx: &KrawtchoukContext,
    d: usize,
    k: usize,
    options: &SolverOptions,
) -> Result<KernelCoefficients> {
    if ctx.q() != 4 {
        return Err(Error::Contract("kernel coefficients use q = 4".into()));
    }
    if k % 2 != 0 || k == 0 {
        return Err(Error::Contract(format!("k = {k} must be positive and even")));
    }
    if d == 0 || 2 * d < k {
        return Err(Error::Contract(format!("level d = {d} must satisfy 2d ≥ k = {k}")));
    }
    let n = ctx.n();
    let dd = d.min(n);
    let weights = ctx.weights();
    let basis: Vec<Vec<f64>> = (0..=n).map(|i| (0..=dd).map(|m| basis_value(ctx, m, i)).collect()).collect();

    // ⟨i, b_a b_b⟩_4: the Jacobi matrix of the orthonormal family
    let mut objective = HermitianSparse::new(dd + 1);
    for a in 0..=dd {
        for b in 0..=dd {
            let v: f64 = (0..=n).map(|i| weights[i] * i as f64 * basis[i][a] * basis[i][b]).sum();
            if v != 0.0 {
                objective.add(a, b, c(v, 0.0));
            }
        }
    }
    let problem = SdpProblem {
        blocks: vec![dd + 1],
        objective: vec![objective.clone()],
        constraints: vec![SdpConstraint { matrices: vec![(0, HermitianSparse::identity(dd + 1))], rhs: 1.0 }],
    };
    let solution = sdp::solve(&problem, options)?.require_optimal()?;
    let solver = SolverDiagnostics::from(&solution);

    // project onto the PSD cone and renormalize so that c_0 = 1 exactly
    let raw = solution.x[0].map(|z| z.re);
    let eig = nalgebra::SymmetricEigen::new(crate::linalg::real_symmetrize(&raw));
    let clipped = DVector::from_iterator(eig.eigenvalues.len(), eig.eigenvalues.iter().map(|&v| v.max(0.0)));
    let mut gram = &eig.eigenvectors * RMatrix::from_diagonal(&clipped) * eig.eigenvectors.transpose();
    let tr = gram.trace();
    gram /= tr;

    let profile: Vec<f64> = basis
        .iter()
        .map(|b| {
            let v = DVector::from_column_slice(b);
            (v.transpose() * &gram * &v)[(0, 0)]
        })
        .collect();
    let top = (2 * d).min(n);
    let coeff: Vec<f64> = (0..=top)
        .map(|r| {
            let s: f64 = (0..=n).map(|i| weights[i] * ctx.normalized(r, i) * profile[i]).sum();
            if r % 2 == 0 {
                s
            } else {
                -s
            }
        })
        .collect();
    let sdp_objective = objective.inner(&gram.map(|v| c(v, 0.0)));
    let xi_reference = ctx.next_root(d)?;
    if (sdp_objective - xi_reference).abs() > COEFFICIENT_TOL {
        return Err(Error::Certificate(format!(
            "coefficient objective {sdp_objective} differs from ξ_{} = {xi_reference}",
            d + 1
        )));
    }
    let eta = optimal_eta_from_xi(n, k, xi_reference).ok();
    let out = KernelCoefficients { n, d, k, c: coeff, gram, profile, sdp_objective, xi_reference, eta, solver };
    if out.deficit_sum() > out.deficit_bound() + 1e-9 {
        return Err(Error::Certificate(format!(
            "coefficient deficit {} exceeds its bound {}",
            out.deficit_sum(),
            out.deficit_bound()
        )));
    }
    Ok(out)
}

/// `η = (1 - (4k/3n) ξ)^{-1}`.
pub fn optimal_eta_from_xi(n: usize, k: usize, xi: f64) -> Result<f64> {
    let margin = 1.0 - 4.0 * k as f64 / (3.0 * n as f64) * xi;
    if margin <= 0.0 {
        return Err(Error::Regime(format!("1 - (4k/3n) ξ = {margin} is not positive (n = {n}, k = {k})")));
    }
    Ok(1.0 / margin)
}

/// Optimal `η` at level `d`, using `ξ_{d+1}` (zero once `d ≥ n`).
pub fn optimal_eta(n: usize, k: usize, d: usize) -> Result<f64> {
    let ctx = KrawtchoukContext::new(n, 4)?;
    optimal_eta_from_xi(n, k, ctx.next_root(d)?)
}

/// The η = 2 condition `(4k/3)(ξ/n) ≤ 1/2`.
pub fn theorem1_regime(n: usize, k: usize, xi: f64) -> bool {
    4.0 * k as f64 / 3.0 * (xi / n as f64) <= 0.5 + 1e-12
}

fn check_coeffs(p: &PauliPolynomial, coeffs: &KernelCoefficients) -> Result<()> {
    if p.n() != coeffs.n {
        return Err(Error::Dimension { expected: coeffs.n, found: p.n() });
    }
    if p.degree() > 2 * coeffs.d {
        return Err(Error::Contract(format!("degree {} exceeds 2d = {}", p.degree(), 2 * coeffs.d)));
    }
    Ok(())
}

/// `Kp = Σ_r c_r p_r`.
pub fn apply_k(p: &PauliPolynomial, coeffs: &KernelCoefficients) -> Result<PauliPolynomial> {
    check_coeffs(p, coeffs)?;
    Ok(p.map_components(|r| c(coeffs.coefficient(r).unwrap_or(0.0), 0.0)))
}

/// Smallest `|c_r|` accepted as invertible.
pub const SINGULAR_TOL: f64 = 1e-12;

/// `K⁻¹p = Σ_r p_r / c_r`.
pub fn apply_k_inverse(p: &PauliPolynomial, coeffs: &KernelCoefficients) -> Result<PauliPolynomial> {
    check_coeffs(p, coeffs)?;
    for r in 0..=p.degree() {
        if !p.homogeneous_component(r).is_empty() && coeffs.coefficient(r).unwrap_or(0.0).abs() < SINGULAR_TOL {
            return Err(Error::SingularKernel { degree: r });
        }
    }
    Ok(p.map_components(|r| match coeffs.coefficient(r) {
        Some(v) if v.abs() >= SINGULAR_TOL => c(1.0 / v, 0.0),
        _ => c(0.0, 0.0),
    }))
}

/// `γ_k Σ_{r=1}^{k/2} |1/c_{2r} - 1|`, which bounds `‖K⁻¹p - p‖` for even-weight `p` of
/// degree `k` with `‖p‖ ≤ 1`.
pub fn coefficient_epsilon(coeffs: &KernelCoefficients, gamma: f64) -> Result<f64> {
    let mut acc = 0.0;
    for r in 1..=coeffs.k / 2 {
        let v = coeffs.coefficient(2 * r).unwrap_or(0.0);
        if v.abs() < SINGULAR_TOL {
            return Err(Error::SingularKernel { degree: 2 * r });
        }
        acc += (1.0 / v - 1.0).abs();
    }
    Ok(gamma * acc)
}

/// Which positivity margin the lower-bound rate uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaMode {
    /// η = 2, valid when `(4k/3)(ξ/n) ≤ 1/2`.
    Fixed,
    /// `η = (1 - (4k/3n) ξ)^{-1}`.
    Optimal,
}

/// `C(k) = (2/3) k (k+2) γ_k`.
pub fn theorem1_constant(k: usize, gamma: f64) -> f64 {
    2.0 / 3.0 * (k * (k + 2)) as f64 * gamma
}

/// `C(k)` with the closed-form `γ_k < (1+√2)^{2k+1}`.
pub fn theorem1_constant_closed(k: usize) -> f64 {
    theorem1_constant(k, crate::component_bounds::gamma_k_closed(k))
}

/// Lower-bound rate `ε`: `C(k) ξ/n` for [`EtaMode::Fixed`], `η (k(k+2)/3) γ_k ξ/n` otherwise.
pub fn epsilon_bound(n: usize, k: usize, xi: f64, gamma: f64, mode: EtaMode) -> Result<f64> {
    let ratio = xi / n as f64;
    match mode {
        EtaMode::Fixed => {
            if !theorem1_regime(n, k, xi) {
                return Err(Error::Regime(format!("(4k/3)(ξ/n) = {} exceeds 1/2", 4.0 * k as f64 / 3.0 * ratio)));
            }
            Ok(theorem1_constant(k, gamma) * ratio)
        }
        EtaMode::Optimal => {
            let eta = optimal_eta_from_xi(n, k, xi)?;
            Ok(eta * (k * (k + 2)) as f64 / 3.0 * gamma * ratio)
        }
    }
}

/// Upper-bound rate `(C(k)/2) ξ/n`; no regime condition.
pub fn theorem2_bound(n: usize, k: usize, xi: f64, gamma: f64) -> f64 {
    theorem1_constant(k, gamma) / 2.0 * xi / n as f64
}

/// Dense `K(σ, σ) = Σ_r c_r C_r^n(σ, σ)`.
pub fn kernel_operator(coeffs: &KernelCoefficients) -> Result<TwoCopyOperator> {
    let n = coeffs.n;
    check_two_copy(n)?;
    let dim = 1 << (2 * n);
    let mut m = CMatrix::zeros(dim, dim);
    for (r, &cr) in coeffs.c.iter().enumerate() {
        m += build_crn(n, r)?.matrix * c(cr, 0.0);
    }
    Ok(TwoCopyOperator { n, matrix: m })
}

/// Gram factors `Q_l = Σ_m g_l[m] b_m(Σ_j A_j)` with `G = Σ_l g_l g_lᵀ`, so `f(Σ A_j) = Σ_l Q_l²`.
fn profile_factors(coeffs: &KernelCoefficients) -> Result<Vec<CMatrix>> {
    let n = coeffs.n;
    let ctx = KrawtchoukContext::new(n, 4)?;
    let s = build_a_sum(n)?.matrix;
    let dd = coeffs.gram.nrows() - 1;
    let basis: Vec<CMatrix> = (0..=dd)
        .map(|m| Ok(krawtchouk_of_operator(&ctx, m, &s)? * c(1.0 / libm::sqrt(ctx.value_f64(m, 0)), 0.0)))
        .collect::<Result<_>>()?;
    let eig = nalgebra::SymmetricEigen::new(coeffs.gram.clone());
    let mut factors = Vec::new();
    for (l, &lam) in eig.eigenvalues.iter().enumerate() {
        if lam < -1e-8 {
            return Err(Error::Certificate(format!("profile Gram eigenvalue {lam} is negative")));
        }
        if lam <= 0.0 {
            continue;
        }
        let g = eig.eigenvectors.column(l) * libm::sqrt(lam);
        let mut q = CMatrix::zeros(s.nrows(), s.ncols());
        for (m, bm) in basis.iter().enumerate() {
            q += bm * c(g[m], 0.0);
        }
        factors.push(q);
    }
    Ok(factors)
}

/// `f(Σ_j A_j)` assembled from the Gram factors.
pub fn profile_operator(coeffs: &KernelCoefficients) -> Result<TwoCopyOperator> {
    let factors = profile_factors(coeffs)?;
    let dim = 1 << (2 * coeffs.n);
    let mut m = CMatrix::zeros(dim, dim);
    for q in &factors {
        m += q * q;
    }
    Ok(TwoCopyOperator { n: coeffs.n, matrix: m })
}

/// Sum-of-squares witness `s = Σ_{u,v} G[u,v] u*·v` over a word basis.
#[derive(Debug, Clone, PartialEq)]
pub struct GramWitness {
    pub n: usize,
    pub basis: Vec<PauliWord>,
    pub gram: CMatrix,
}

impl GramWitness {
    pub fn polynomial(&self) -> PauliPolynomial {
        gram_polynomial(self.n, &self.basis, &self.gram)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        linalg::eigvalsh(&self.gram).first().copied().unwrap_or(0.0)
    }

    pub fn trace(&self) -> f64 {
        linalg::trace(&self.gram).re
    }
}

/// `Σ_{u,v} G[u,v] u*·v`, reduced with the Pauli relations.
pub fn gram_polynomial(n: usize, basis: &[PauliWord], gram: &CMatrix) -> PauliPolynomial {
    let mut acc: alloc::collections::BTreeMap<PauliWord, Complex64> = alloc::collections::BTreeMap::new();
    for (a, u) in basis.iter().enumerate() {
        for (b, v) in basis.iter().enumerate() {
            let g = gram[(a, b)];
            if g == Complex64::zero() {
                continue;
            }
            let (phase, w) = u.mul_unchecked(v);
            *acc.entry(w).or_insert(Complex64::zero()) += g * phase.to_complex();
        }
    }
    let mut p = PauliPolynomial::zero(n);
    for (w, v) in acc {
        p.add_term(w, v);
    }
    p
}

/// Sum-of-squares certificate for `Kp`, `p(σ) ⪰ 0`, following
/// `Kp = Tr₂((I ⊗ p^{1/2}) f(Σ_j A_j) (I ⊗ p^{1/2}))`.
pub fn build_sos_certificate(p: &PauliPolynomial, coeffs: &KernelCoefficients) -> Result<GramWitness> {
    check_coeffs(p, coeffs)?;
    check_two_copy(p.n())?;
    let dense = evaluate(p)?;
    certificate_for_operator(dense.matrix(), coeffs)
}

/// As [`build_sos_certificate`] for a PSD matrix `P` in place of `p(σ)`.
pub fn certificate_for_operator(pm: &CMatrix, coeffs: &KernelCoefficients) -> Result<GramWitness> {
    let n = coeffs.n;
    check_two_copy(n)?;
    let half = 1usize << n;
    if pm.nrows() != half {
        return Err(Error::Dimension { expected: n, found: pm.nrows().trailing_zeros() as usize });
    }
    let lmin = linalg::eigvalsh(pm)[0];
    if lmin < -1e-9 {
        return Err(Error::Contract(format!("operator is not PSD (λ_min = {lmin})")));
    }
    let sqrt_p = linalg::psd_sqrt(pm);
    let dd = coeffs.gram.nrows() - 1;
    let basis = words_up_to_weight(n, dd);
    let factors = profile_factors(coeffs)?;

    // vec(M_{l,u} P^{1/2}) stacked as columns, one block of rows per factor
    let mut stacked = CMatrix::zeros(factors.len() * half * half, basis.len());
    for (l, q) in factors.iter().enumerate() {
        for (col, u) in basis.iter().enumerate() {
            // M_u = 2^{-n} Tr_1((u ⊗ I) Q)
            let um = word_matrix(u);
            let mut mu = CMatrix::zeros(half, half);
            for x in 0..half {
                let (y, phase) = (0..half).map(|y| (y, um[(x, y)])).find(|(_, v)| *v != Complex64::zero()).unwrap();
                for a in 0..half {
                    for b in 0..half {
                        mu[(a, b)] += phase * q[(y * half + a, x * half + b)];
                    }
                }
            }
            mu /= c(half as f64, 0.0);
            let nu = mu * &sqrt_p;
            for (idx, v) in nu.iter().enumerate() {
                stacked[(l * half * half + idx, col)] = *v;
            }
        }
    }
    let gram = stacked.adjoint() * stacked / c(half as f64, 0.0);
    let witness = GramWitness { n, basis, gram };
    let min_eig = witness.min_eigenvalue();
    if min_eig < -1e-8 {
        return Err(Error::Certificate(format!("certificate Gram eigenvalue {min_eig} below -1e-8")));
    }
    Ok(witness)
}

/// `s = (v ⊗ I)* K(σ, x) (v ⊗ I)` for the first ground-state eigenvector `v` of `p(σ)`:
/// the coefficient of a word `u` is `c_{|u|} v†u(σ)v`.
pub fn upper_bound_feasible_s(p: &PauliPolynomial, coeffs: &KernelCoefficients) -> Result<PauliPolynomial> {
    if p.n() != coeffs.n {
        return Err(Error::Dimension { expected: coeffs.n, found: p.n() });
    }
    check_two_copy(p.n())?;
    let (_, v) = ground_state(p)?;
    Ok(feasible_s_from_vector(coeffs, &v))
}

fn feasible_s_from_vector(coeffs: &KernelCoefficients, v: &[Complex64]) -> PauliPolynomial {
    let n = coeffs.n;
    let top = coeffs.c.len() - 1;
    let mut s = PauliPolynomial::zero(n);
    for u in words_up_to_weight(n, top) {
        let um = word_matrix(&u);
        let mut e = Complex64::zero();
        for (x, vx) in v.iter().enumerate() {
            for (y, vy) in v.iter().enumerate() {
                e += vx.conj() * um[(x, y)] * vy;
            }
        }
        s.add_term(u, c(coeffs.c[u.weight()] * e.re, 0.0));
    }
    s
}

/// Gram witness showing that the feasible `s` of [`upper_bound_feasible_s`] is a sum of squares.
pub fn feasible_s_certificate(p: &PauliPolynomial, coeffs: &KernelCoefficients) -> Result<GramWitness> {
    let (_, v) = ground_state(p)?;
    let dim = v.len();
    // s = 2^n K(v v†)
    let vv = CMatrix::from_fn(dim, dim, |a, b| v[a] * v[b].conj() * dim as f64);
    certificate_for_operator(&vv, coeffs)
}
