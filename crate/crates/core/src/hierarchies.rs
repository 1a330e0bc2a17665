//! Level-`d` lower bounds `ν_d` (sums of squares, solved with the moment matrix
//! as the dual) and upper bounds `μ_d` (states `s` that are sums of squares),
//! plus the end-to-end checks of both convergence rates.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;

use crate::component_bounds::gamma_k;
use crate::dense::{lambda_min, spectral_norm};
use crate::error::{Error, Result};
use crate::kernels::{
    apply_k_inverse, build_sos_certificate, epsilon_bound, gram_polynomial, solve_coefficients, theorem1_constant,
    theorem2_bound, upper_bound_feasible_s, EtaMode, GramWitness, KernelCoefficients,
};
use crate::krawtchouk::KrawtchoukContext;
use crate::linalg::CMatrix;
use crate::pauli::{words_up_to_weight, PauliWord};
use crate::polynomial::PauliPolynomial;
use crate::sdp::{self, HermitianSparse, SdpConstraint, SdpProblem, SolverDiagnostics, SolverOptions};

pub const DEFAULT_BASIS_CAP: usize = 2000;
pub const HIERARCHY_QUBIT_CAP: usize = 4;
/// Agreement required between a certificate and the polynomial it certifies.
pub const RECONSTRUCTION_TOL: f64 = 1e-7;
/// Slack allowed when comparing solver values with bounds.
pub const BOUND_TOL: f64 = 1e-6;

/// All words of weight at most `d`, in graded lexicographic order.
#[derive(Debug, Clone, PartialEq)]
pub struct WordBasis {
    pub n: usize,
    pub d: usize,
    words: Vec<PauliWord>,
    index: BTreeMap<PauliWord, usize>,
}

impl WordBasis {
    pub fn words(&self) -> &[PauliWord] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn position(&self, w: &PauliWord) -> Option<usize> {
        self.index.get(w).copied()
    }
}

/// `Σ_{r ≤ d} 3^r C(n, r)`, saturating.
pub fn basis_size(n: usize, d: usize) -> usize {
    let mut total: usize = 0;
    let mut binom: usize = 1;
    let mut pow3: usize = 1;
    for r in 0..=d.min(n) {
        total = total.saturating_add(binom.saturating_mul(pow3));
        binom = binom.saturating_mul(n - r) / (r + 1);
        pow3 = pow3.saturating_mul(3);
    }
    total
}

pub fn enumerate_words(n: usize, d: usize) -> Result<WordBasis> {
    enumerate_words_capped(n, d, DEFAULT_BASIS_CAP)
}

pub fn enumerate_words_capped(n: usize, d: usize, cap: usize) -> Result<WordBasis> {
    let size = basis_size(n, d);
    if size > cap {
        return Err(Error::Resource { what: "word basis size", requested: size, cap });
    }
    let words = words_up_to_weight(n, d);
    let index = words.iter().enumerate().map(|(i, w)| (*w, i)).collect();
    Ok(WordBasis { n, d, words, index })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HierarchyOptions {
    pub solver: SolverOptions,
    pub basis_cap: usize,
    pub qubit_cap: usize,
}

impl Default for HierarchyOptions {
    fn default() -> Self {
        HierarchyOptions { solver: SolverOptions::default(), basis_cap: DEFAULT_BASIS_CAP, qubit_cap: HIERARCHY_QUBIT_CAP }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    Lower,
    Upper,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HierarchyResult {
    pub kind: BoundKind,
    pub level: usize,
    /// `ν_d` or `μ_d`, read from the certificate.
    pub value: f64,
    /// The same bound read from the other side of the duality.
    pub moment_value: f64,
    pub certificate_value: f64,
    /// Lower: Gram of `p - ν_d`. Upper: Gram of `s`.
    pub certificate: GramWitness,
    /// Upper bound only: the optimal `s`.
    pub state: Option<PauliPolynomial>,
    /// Lower bound only: `M[u, v] = L(u*·v)`.
    pub moment_matrix: Option<CMatrix>,
    pub reconstruction_error: f64,
    pub lambda_min: Option<f64>,
    pub solver: SolverDiagnostics,
}

impl HierarchyResult {
    /// `|moment_value - certificate_value|`.
    pub fn discrepancy(&self) -> f64 {
        (self.moment_value - self.certificate_value).abs()
    }
}

/// Constraint matrices `A_w` with `⟨A_w, G⟩ = [u*·v coefficient of w in Σ G[u,v] u*·v]`.
fn product_constraints(basis: &WordBasis) -> BTreeMap<PauliWord, HermitianSparse> {
    let m = basis.len();
    let mut out: BTreeMap<PauliWord, HermitianSparse> = BTreeMap::new();
    for (a, u) in basis.words.iter().enumerate() {
        for (b, v) in basis.words.iter().enumerate() {
            let (phase, w) = u.multiply(v).expect("basis words share n");
            out.entry(w).or_insert_with(|| HermitianSparse::new(m)).add(b, a, phase.to_complex());
        }
    }
    out
}

fn check_input(p: &PauliPolynomial, d: usize, options: &HierarchyOptions) -> Result<WordBasis> {
    if !p.is_hermitian() {
        return Err(Error::Contract("hierarchies need a Hermitian polynomial".into()));
    }
    if p.n() > options.qubit_cap {
        return Err(Error::Resource { what: "hierarchy qubit count", requested: p.n(), cap: options.qubit_cap });
    }
    enumerate_words_capped(p.n(), d, options.basis_cap)
}

fn reference_lambda(p: &PauliPolynomial) -> Option<f64> {
    lambda_min(p).ok()
}

/// The Gram-side SDP behind [`nu_d_with`]: objective `Tr G`, one constraint per non-identity word.
pub fn lower_problem(p: &PauliPolynomial, d: usize, options: &HierarchyOptions) -> Result<(WordBasis, SdpProblem)> {
    let basis = check_input(p, d, options)?;
    if p.degree() > 2 * d.min(p.n()) {
        return Err(Error::Contract(format!("degree {} exceeds 2d = {}", p.degree(), 2 * d)));
    }
    let n = p.n();
    let m = basis.len();
    let mut constraints_by_word = product_constraints(&basis);
    let identity = constraints_by_word.remove(&PauliWord::identity(n)).expect("identity is a product");
    let words: Vec<PauliWord> = constraints_by_word.keys().copied().collect();
    let constraints: Vec<SdpConstraint> = words
        .iter()
        .map(|w| SdpConstraint { matrices: vec![(0, constraints_by_word.remove(w).unwrap())], rhs: p.coeff(w).re })
        .collect();
    Ok((basis, SdpProblem { blocks: vec![m], objective: vec![identity], constraints }))
}

pub fn nu_d(p: &PauliPolynomial, d: usize) -> Result<HierarchyResult> {
    nu_d_with(p, d, &HierarchyOptions::default())
}

/// `ν_d = sup { λ : p - λ = Σ G[u,v] u*·v, G ⪰ 0 }`, computed as
/// `p_1 - min { Tr G : ⟨A_w, G⟩ = p_w, w ≠ 1 }`. The dual variables give the moments
/// `L(w) = -y_w`, `L(1) = 1`.
pub fn nu_d_with(p: &PauliPolynomial, d: usize, options: &HierarchyOptions) -> Result<HierarchyResult> {
    let (basis, problem) = lower_problem(p, d, options)?;
    let n = p.n();
    let sol = sdp::solve(&problem, &options.solver)?.require_optimal()?;

    let p1 = p.constant_term().re;
    let gram = crate::linalg::symmetrize(&sol.x[0]);
    let certificate = GramWitness { n, basis: basis.words.clone(), gram };
    let trace = certificate.trace();
    let certificate_value = p1 - trace;
    let moment_value = p1 - sol.dual_objective;
    let reconstruction_error = certificate.polynomial().max_coeff_diff(&p.shift(-certificate_value));
    if reconstruction_error > RECONSTRUCTION_TOL {
        return Err(Error::Certificate(format!(
            "Gram reconstruction of p - ν_{d} is off by {reconstruction_error:.3e}"
        )));
    }
    let moment_matrix = sol.z[0].transpose();
    Ok(HierarchyResult {
        kind: BoundKind::Lower,
        level: d,
        value: certificate_value,
        moment_value,
        certificate_value,
        certificate,
        state: None,
        moment_matrix: Some(moment_matrix),
        reconstruction_error,
        lambda_min: reference_lambda(p),
        solver: SolverDiagnostics::from(&sol),
    })
}

/// The SDP behind [`mu_d_with`]: objective `⟨p, s(G)⟩`, constraint `Tr G = 1`.
pub fn upper_problem(p: &PauliPolynomial, d: usize, options: &HierarchyOptions) -> Result<(WordBasis, SdpProblem)> {
    let basis = check_input(p, d, options)?;
    let m = basis.len();
    let by_word = product_constraints(&basis);
    let mut objective = HermitianSparse::new(m);
    for (w, a) in &by_word {
        let pw = p.coeff(w).re;
        if pw != 0.0 {
            for (r, col, v) in a.entries() {
                objective.add(r, col, v * pw);
            }
        }
    }
    let problem = SdpProblem {
        blocks: vec![m],
        objective: vec![objective],
        constraints: vec![SdpConstraint { matrices: vec![(0, HermitianSparse::identity(m))], rhs: 1.0 }],
    };
    Ok((basis, problem))
}

pub fn mu_d(p: &PauliPolynomial, d: usize) -> Result<HierarchyResult> {
    mu_d_with(p, d, &HierarchyOptions::default())
}

/// `μ_d = inf { ⟨p, s⟩ : ⟨1, s⟩ = 1, s = Σ G[u,v] u*·v, G ⪰ 0 }`.
pub fn mu_d_with(p: &PauliPolynomial, d: usize, options: &HierarchyOptions) -> Result<HierarchyResult> {
    let (basis, problem) = upper_problem(p, d, options)?;
    let n = p.n();
    let sol = sdp::solve(&problem, &options.solver)?.require_optimal()?;
    let gram = crate::linalg::symmetrize(&sol.x[0]);
    let state = gram_polynomial(n, &basis.words, &gram);
    let certificate_value = p.inner(&state)?.re;
    let normalization = state.constant_term().re;
    let reconstruction_error = (normalization - 1.0).abs();
    if reconstruction_error > RECONSTRUCTION_TOL {
        return Err(Error::Certificate(format!("⟨1, s⟩ = {normalization}, expected 1")));
    }
    Ok(HierarchyResult {
        kind: BoundKind::Upper,
        level: d,
        value: certificate_value,
        moment_value: sol.dual_objective,
        certificate_value,
        certificate: GramWitness { n, basis: basis.words.clone(), gram },
        state: Some(state),
        moment_matrix: None,
        reconstruction_error,
        lambda_min: reference_lambda(p),
        solver: SolverDiagnostics::from(&sol),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Passed,
    Failed,
    /// The rate does not apply at this level.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TheoremReport {
    /// 1 for the lower-bound rate, 2 for the upper-bound rate.
    pub theorem: u8,
    pub n: usize,
    pub k: usize,
    pub d: usize,
    /// `ν_d` or `μ_d`.
    pub value: f64,
    pub lambda_min: f64,
    pub gap: f64,
    pub bound: Option<f64>,
    pub xi: f64,
    pub constant_ck: f64,
    pub gamma_k: f64,
    pub regime_ok: bool,
    pub eta: Option<f64>,
    /// Lower: `λ_min - ε` from the kernel. Upper: `⟨p, s⟩` for the kernel state.
    pub kernel_value: Option<f64>,
    pub verdict: Verdict,
    pub solver: SolverDiagnostics,
    pub note: String,
}

impl TheoremReport {
    pub fn slack(&self) -> Option<f64> {
        self.bound.map(|b| b - self.gap)
    }
}

/// Locality used for the rate: the degree rounded up to an even number, at least 2.
pub fn rate_locality(p: &PauliPolynomial) -> usize {
    let deg = p.degree();
    (deg + deg % 2).max(2)
}

fn check_rate_input(p: &PauliPolynomial) -> Result<()> {
    if !p.is_hermitian() {
        return Err(Error::Contract("rate checks need a Hermitian polynomial".into()));
    }
    if !p.is_even_weight() {
        return Err(Error::Contract("rate checks need an even-weight polynomial; apply the reduction first".into()));
    }
    let norm = spectral_norm(p)?;
    if norm > 1.0 + 1e-9 {
        return Err(Error::Contract(format!("spectral norm {norm} exceeds 1; normalize first")));
    }
    Ok(())
}

/// Compares `λ_min - ν_d` with the lower-bound rate.
pub fn verify_theorem1(p: &PauliPolynomial, d: usize, mode: EtaMode) -> Result<TheoremReport> {
    verify_theorem1_with(p, d, mode, &HierarchyOptions::default())
}

pub fn verify_theorem1_with(
    p: &PauliPolynomial,
    d: usize,
    mode: EtaMode,
    options: &HierarchyOptions,
) -> Result<TheoremReport> {
    check_rate_input(p)?;
    let nu = nu_d_with(p, d, options)?;
    theorem1_report(p, &nu, mode)
}

/// Lower-bound rate report for an already solved `ν_d`.
pub fn theorem1_report(p: &PauliPolynomial, nu: &HierarchyResult, mode: EtaMode) -> Result<TheoremReport> {
    check_rate_input(p)?;
    if nu.kind != BoundKind::Lower {
        return Err(Error::Contract("theorem1_report needs a lower-bound result".into()));
    }
    let d = nu.level;
    let (n, k) = (p.n(), rate_locality(p));
    let ctx = KrawtchoukContext::new(n, 4)?;
    let xi = ctx.next_root(d)?;
    let gamma = gamma_k(k)?;
    let lambda = lambda_min(p)?;
    let gap = lambda - nu.value;
    let bound = epsilon_bound(n, k, xi, gamma, mode);
    let eta = match mode {
        EtaMode::Fixed => Some(2.0),
        EtaMode::Optimal => crate::kernels::optimal_eta_from_xi(n, k, xi).ok(),
    };
    let kernel_value = if 2 * d >= k { kernel_certified_lower_bound(p, d).ok().map(|b| b.value) } else { None };
    let (bound, verdict, note) = match bound {
        Ok(b) => {
            let ok = gap <= b + BOUND_TOL;
            (Some(b), if ok { Verdict::Passed } else { Verdict::Failed }, String::new())
        }
        Err(_) => (None, Verdict::NotApplicable, String::from("bound not applicable at this level")),
    };
    Ok(TheoremReport {
        theorem: 1,
        n,
        k,
        d,
        value: nu.value,
        lambda_min: lambda,
        gap,
        bound,
        xi,
        constant_ck: theorem1_constant(k, gamma),
        gamma_k: gamma,
        regime_ok: verdict != Verdict::NotApplicable,
        eta: if verdict == Verdict::NotApplicable { None } else { eta },
        kernel_value,
        verdict,
        solver: nu.solver,
        note,
    })
}

/// Compares `μ_d - λ_min` with the upper-bound rate, which holds at every level.
pub fn verify_theorem2(p: &PauliPolynomial, d: usize) -> Result<TheoremReport> {
    verify_theorem2_with(p, d, &HierarchyOptions::default())
}

pub fn verify_theorem2_with(p: &PauliPolynomial, d: usize, options: &HierarchyOptions) -> Result<TheoremReport> {
    check_rate_input(p)?;
    let mu = mu_d_with(p, d, options)?;
    theorem2_report(p, &mu)
}

/// Upper-bound rate report for an already solved `μ_d`.
pub fn theorem2_report(p: &PauliPolynomial, mu: &HierarchyResult) -> Result<TheoremReport> {
    check_rate_input(p)?;
    if mu.kind != BoundKind::Upper {
        return Err(Error::Contract("theorem2_report needs an upper-bound result".into()));
    }
    let d = mu.level;
    let (n, k) = (p.n(), rate_locality(p));
    let ctx = KrawtchoukContext::new(n, 4)?;
    let xi = ctx.next_root(d)?;
    let gamma = gamma_k(k)?;
    let lambda = lambda_min(p)?;
    let gap = mu.value - lambda;
    let bound = theorem2_bound(n, k, xi, gamma);
    let kernel_value = if 2 * d >= k {
        let coeffs = solve_coefficients(n, d, k)?;
        let s = upper_bound_feasible_s(p, &coeffs)?;
        Some(p.inner(&s)?.re)
    } else {
        None
    };
    let ok = gap <= bound + BOUND_TOL;
    Ok(TheoremReport {
        theorem: 2,
        n,
        k,
        d,
        value: mu.value,
        lambda_min: lambda,
        gap,
        bound: Some(bound),
        xi,
        constant_ck: theorem1_constant(k, gamma),
        gamma_k: gamma,
        regime_ok: true,
        eta: None,
        kernel_value,
        verdict: if ok { Verdict::Passed } else { Verdict::Failed },
        solver: mu.solver,
        note: String::new(),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelBound {
    /// `λ_min - ε`.
    pub value: f64,
    pub lambda_min: f64,
    /// `‖K⁻¹p - p‖_∞`.
    pub epsilon: f64,
    pub coefficients: KernelCoefficients,
    /// Gram witness for `K(K⁻¹(p - λ_min + ε)) = p - λ_min + ε`.
    pub certificate: GramWitness,
    pub reconstruction_error: f64,
}

/// Lower bound `λ_min - ε` with `ε = ‖K⁻¹p - p‖_∞`, certified by an explicit sum of squares
/// for `p - (λ_min - ε)` built from the kernel, without solving the hierarchy.
pub fn kernel_certified_lower_bound(p: &PauliPolynomial, d: usize) -> Result<KernelBound> {
    if !p.is_hermitian() || !p.is_even_weight() {
        return Err(Error::Contract("kernel bound needs a Hermitian even-weight polynomial".into()));
    }
    let (n, k) = (p.n(), rate_locality(p));
    let coefficients = solve_coefficients(n, d, k)?;
    for r in 1..=k / 2 {
        if coefficients.coefficient(2 * r).unwrap_or(0.0) <= 0.0 {
            return Err(Error::Regime(format!("c_{} is not positive at level {d}", 2 * r)));
        }
    }
    let lambda = lambda_min(p)?;
    let inv = apply_k_inverse(p, &coefficients)?;
    let epsilon = spectral_norm(&(&inv - p))?;
    let shifted = inv.shift(epsilon - lambda);
    let target = p.shift(epsilon - lambda);
    let certificate = build_sos_certificate(&shifted, &coefficients)?;
    let reconstruction_error = certificate.polynomial().max_coeff_diff(&target);
    if reconstruction_error > RECONSTRUCTION_TOL {
        return Err(Error::Certificate(format!("kernel certificate is off by {reconstruction_error:.3e}")));
    }
    Ok(KernelBound { value: lambda - epsilon, lambda_min: lambda, epsilon, coefficients, certificate, reconstruction_error })
}

/// Words `w` with their moments `L(w)` read off the first row of a moment matrix.
pub fn moments_from_matrix(basis: &WordBasis, moment: &CMatrix) -> BTreeMap<PauliWord, Complex64> {
    let mut out = BTreeMap::new();
    let id = PauliWord::identity(basis.n);
    if let Some(row) = basis.position(&id) {
        for (col, w) in basis.words.iter().enumerate() {
            out.insert(*w, moment[(row, col)]);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_sizes() {
        assert_eq!(enumerate_words(2, 1).unwrap().len(), 7);
        assert_eq!(enumerate_words(6, 2).unwrap().len(), 154);
        assert_eq!(enumerate_words(5, 0).unwrap().len(), 1);
        assert!(enumerate_words(10, 4).is_err());
    }

    #[test]
    fn zz_first_level() {
        let p = PauliPolynomial::from_real(2, &[(1.0, "ZZ")]).unwrap();
        let nu = nu_d(&p, 1).unwrap();
        assert!((nu.value + 1.0).abs() < 1e-6);
        let mu = mu_d(&p, 1).unwrap();
        assert!((mu.value + 1.0).abs() < 1e-6);
    }

    #[test]
    fn constants() {
        let p = PauliPolynomial::constant(2, 0.3);
        assert!((nu_d(&p, 1).unwrap().value - 0.3).abs() < 1e-7);
        assert!((mu_d(&p, 1).unwrap().value - 0.3).abs() < 1e-7);
    }
}
