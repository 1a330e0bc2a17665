//! JSON report shapes. Every float passes through [`round_sig`].

use serde::Serialize;

use pauli_sos::hierarchies::{TheoremReport, Verdict};
use pauli_sos::kernels::KernelCoefficients;
use pauli_sos::reduction::SpectrumReport;
use pauli_sos::sdp::SolverDiagnostics;

use crate::format::round_sig;

fn r(x: f64) -> f64 {
    round_sig(x)
}

fn ro(x: Option<f64>) -> Option<f64> {
    x.map(round_sig)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolverJson {
    pub status: String,
    pub gap: f64,
    pub residual: f64,
    pub iterations: usize,
}

impl From<&SolverDiagnostics> for SolverJson {
    fn from(s: &SolverDiagnostics) -> Self {
        SolverJson {
            status: format!("{:?}", s.status).to_lowercase(),
            gap: r(s.gap),
            residual: r(s.residual),
            iterations: s.iterations,
        }
    }
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Passed => "passed",
        Verdict::Failed => "failed",
        Verdict::NotApplicable => "not_applicable",
    }
}

/// Result of `certify`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HierarchyJson {
    pub n: usize,
    pub k: usize,
    pub d: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    pub lambda_min: Option<f64>,
    pub gap: Option<f64>,
    pub bound: Option<f64>,
    pub xi: f64,
    #[serde(rename = "constant_Ck")]
    pub constant_ck: f64,
    pub gamma_k: f64,
    pub regime_ok: bool,
    pub solver: SolverJson,
    /// `passed`, `failed`, `not_applicable`, or `skipped` when the rate preconditions fail.
    pub verdict: String,
    pub note: String,
    /// Lower: the kernel bound `λ_min - ε`. Upper: `⟨p, s⟩` for the kernel state.
    pub kernel_value: Option<f64>,
    pub moment_value: f64,
    pub certificate_value: f64,
    pub reconstruction_error: f64,
    pub certificate_min_eigenvalue: f64,
}

impl HierarchyJson {
    pub fn rounded(mut self) -> Self {
        self.nu = ro(self.nu);
        self.mu = ro(self.mu);
        self.lambda_min = ro(self.lambda_min);
        self.gap = ro(self.gap);
        self.bound = ro(self.bound);
        self.xi = r(self.xi);
        self.constant_ck = r(self.constant_ck);
        self.gamma_k = r(self.gamma_k);
        self.kernel_value = ro(self.kernel_value);
        self.moment_value = r(self.moment_value);
        self.certificate_value = r(self.certificate_value);
        self.reconstruction_error = r(self.reconstruction_error);
        self.certificate_min_eigenvalue = r(self.certificate_min_eigenvalue);
        self
    }

    pub fn apply_theorem(&mut self, t: &TheoremReport) {
        self.k = t.k;
        self.lambda_min = Some(t.lambda_min);
        self.gap = Some(t.gap);
        self.bound = t.bound;
        self.xi = t.xi;
        self.constant_ck = t.constant_ck;
        self.gamma_k = t.gamma_k;
        self.regime_ok = t.regime_ok;
        self.verdict = verdict_name(t.verdict).into();
        self.note = t.note.clone();
        self.kernel_value = t.kernel_value;
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GramFingerprint {
    pub dim: usize,
    pub trace: f64,
    pub min_eigenvalue: f64,
    pub psd: bool,
}

/// Kernel coefficients with the profile Gram stored as its lower triangle, row by row.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KernelJson {
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub c: Vec<f64>,
    pub sdp_objective: f64,
    pub xi_reference: f64,
    pub eta: Option<f64>,
    pub deficit_sum: f64,
    pub deficit_bound: f64,
    pub gram_lower: Vec<Vec<f64>>,
    pub gram_check: GramFingerprint,
}

impl From<&KernelCoefficients> for KernelJson {
    fn from(k: &KernelCoefficients) -> Self {
        let m = k.gram.nrows();
        let min_eig = k.gram_min_eigenvalue();
        KernelJson {
            n: k.n,
            d: k.d,
            k: k.k,
            c: k.c.iter().map(|&v| r(v)).collect(),
            sdp_objective: r(k.sdp_objective),
            xi_reference: r(k.xi_reference),
            eta: ro(k.eta),
            deficit_sum: r(k.deficit_sum()),
            deficit_bound: r(k.deficit_bound()),
            gram_lower: (0..m).map(|i| (0..=i).map(|j| r(k.gram[(i, j)])).collect()).collect(),
            gram_check: GramFingerprint { dim: m, trace: r(k.gram.trace()), min_eigenvalue: r(min_eig), psd: min_eig >= -1e-9 },
        }
    }
}

/// Result of `reduce`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReduceJson {
    pub n: usize,
    pub n_embedded: usize,
    pub k: usize,
    pub k_embedded: usize,
    pub locality_ok: bool,
    pub even_weight: bool,
    pub set_equal: bool,
    pub doubled_multiset: bool,
    pub blocks_match: bool,
    pub lambda_min: [f64; 2],
    pub lambda_max: [f64; 2],
    pub max_deviation: f64,
    pub tol: f64,
    pub passed: bool,
}

impl ReduceJson {
    pub fn new(n: usize, k: usize, k_embedded: usize, even_weight: bool, s: &SpectrumReport) -> Self {
        let locality_ok = k_embedded <= pauli_sos::reduction::embedded_locality(k);
        ReduceJson {
            n,
            n_embedded: n + 1,
            k,
            k_embedded,
            locality_ok,
            even_weight,
            set_equal: s.set_equal,
            doubled_multiset: s.doubled_multiset,
            blocks_match: s.blocks_match,
            lambda_min: [r(s.lambda_min.0), r(s.lambda_min.1)],
            lambda_max: [r(s.lambda_max.0), r(s.lambda_max.1)],
            max_deviation: r(s.max_deviation),
            tol: s.tol,
            passed: s.passed() && even_weight && locality_ok,
        }
    }
}
