//! Command bodies, independent of argument parsing.

use std::fmt;

use pauli_sos::component_bounds::{gamma_k, gamma_k_closed, MAX_INTERPOLATION_DEGREE};
use pauli_sos::dense::spectral_norm;
use pauli_sos::hierarchies::{
    kernel_certified_lower_bound, mu_d_with, nu_d_with, rate_locality, theorem1_report, theorem2_report,
    BoundKind, HierarchyResult,
};
use pauli_sos::kernels::{solve_coefficients, theorem1_constant, EtaMode};
use pauli_sos::krawtchouk::{phi_asymptotic, KrawtchoukContext};
use pauli_sos::polynomial::PauliPolynomial;
use pauli_sos::reduction::{even_weight_embedding, verify_spectrum_equal};
use pauli_sos::Error;

use crate::config::Config;
use crate::format::fmt_num;
use crate::report::{HierarchyJson, KernelJson, ReduceJson, SolverJson};

/// Exit code 2 for [`CliError::Usage`], 1 otherwise.
#[derive(Debug, Clone, PartialEq)]
pub enum CliError {
    Usage(String),
    Failure(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Failure(_) => 1,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Failure(m) => f.write_str(m),
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::Contract(_) | Error::Domain(_) | Error::Dimension { .. } | Error::Resource { .. } => {
                CliError::Usage(e.to_string())
            }
            _ => CliError::Failure(e.to_string()),
        }
    }
}

pub const ROOT_COLUMNS: [&str; 8] = ["n", "q", "d", "xi", "xi_over_n", "phi", "threshold_k2", "threshold_k4"];

/// One row of the root table. `phi` is absent past the support edge `(q-1)/q`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootRow {
    pub n: usize,
    pub q: usize,
    pub d: usize,
    pub xi: f64,
    pub xi_over_n: f64,
    pub phi: Option<f64>,
}

/// Regime threshold `3/(4k)` for `ξ/n`.
pub fn regime_threshold(k: usize) -> f64 {
    3.0 / (4.0 * k as f64)
}

/// `ξ_{d+1}` for `d = 0..=dmax`.
pub fn roots_table(n: usize, q: usize, dmax: usize) -> Result<Vec<RootRow>, CliError> {
    if !(2..=4).contains(&q) {
        return Err(CliError::Usage(format!("q = {q} must be 2, 3 or 4")));
    }
    if n == 0 || n > 60 {
        return Err(CliError::Usage(format!("n = {n} must lie in 1..=60")));
    }
    if dmax >= n {
        return Err(CliError::Usage(format!("dmax = {dmax} must be below n = {n}")));
    }
    let ctx = KrawtchoukContext::new(n, q)?;
    let mut rows = Vec::with_capacity(dmax + 1);
    for d in 0..=dmax {
        let xi = ctx.smallest_root(d + 1)?;
        let t = d as f64 / n as f64;
        rows.push(RootRow { n, q, d, xi, xi_over_n: xi / n as f64, phi: phi_asymptotic(q, t).ok() });
    }
    Ok(rows)
}

fn csv_string(header: &[&str], rows: Vec<Vec<String>>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf8 csv")
}

pub fn roots_csv(rows: &[RootRow]) -> String {
    let body = rows
        .iter()
        .map(|r| {
            vec![
                r.n.to_string(),
                r.q.to_string(),
                r.d.to_string(),
                fmt_num(r.xi),
                fmt_num(r.xi_over_n),
                r.phi.map(fmt_num).unwrap_or_default(),
                fmt_num(regime_threshold(2)),
                fmt_num(regime_threshold(4)),
            ]
        })
        .collect();
    csv_string(&ROOT_COLUMNS, body)
}

/// `(k, γ_k, (1+√2)^{2k+1})` for `k = 1..=kmax`.
pub fn gamma_csv(kmax: usize) -> Result<String, CliError> {
    if kmax == 0 || kmax > MAX_INTERPOLATION_DEGREE {
        return Err(CliError::Usage(format!("kmax = {kmax} must lie in 1..={MAX_INTERPOLATION_DEGREE}")));
    }
    let mut rows = Vec::new();
    for k in 1..=kmax {
        rows.push(vec![k.to_string(), fmt_num(gamma_k(k)?), fmt_num(gamma_k_closed(k))]);
    }
    Ok(csv_string(&["k", "gamma_exact", "gamma_closed"], rows))
}

pub fn kernel_json(n: usize, d: usize, k: usize) -> Result<KernelJson, CliError> {
    Ok(KernelJson::from(&solve_coefficients(n, d, k)?))
}

fn base_json(p: &PauliPolynomial, res: &HierarchyResult) -> Result<HierarchyJson, CliError> {
    let n = p.n();
    let k = rate_locality(p);
    let ctx = KrawtchoukContext::new(n, 4)?;
    let gamma = gamma_k(k)?;
    let (nu, mu) = match res.kind {
        BoundKind::Lower => (Some(res.value), None),
        BoundKind::Upper => (None, Some(res.value)),
    };
    let gap = res.lambda_min.map(|l| match res.kind {
        BoundKind::Lower => l - res.value,
        BoundKind::Upper => res.value - l,
    });
    Ok(HierarchyJson {
        n,
        k,
        d: res.level,
        nu,
        mu,
        lambda_min: res.lambda_min,
        gap,
        bound: None,
        xi: ctx.next_root(res.level)?,
        constant_ck: theorem1_constant(k, gamma),
        gamma_k: gamma,
        regime_ok: false,
        solver: SolverJson::from(&res.solver),
        verdict: "skipped".into(),
        note: String::new(),
        kernel_value: None,
        moment_value: res.moment_value,
        certificate_value: res.certificate_value,
        reconstruction_error: res.reconstruction_error,
        certificate_min_eigenvalue: res.certificate.min_eigenvalue(),
    })
}

/// `certify`: one hierarchy level plus the rate check when its preconditions hold.
pub fn certify(p: &PauliPolynomial, level: usize, upper: bool, cfg: &Config) -> Result<HierarchyJson, CliError> {
    if !p.is_hermitian() {
        return Err(CliError::Usage("the polynomial is not Hermitian".into()));
    }
    if !p.is_even_weight() {
        return Err(CliError::Usage(
            "the polynomial has odd-weight terms; run `pauli-sos reduce` first and certify the embedded file".into(),
        ));
    }
    if p.n() > cfg.dense_cap {
        return Err(CliError::Usage(format!("n = {} exceeds the dense cap {}", p.n(), cfg.dense_cap)));
    }
    let opts = &cfg.hierarchy;
    let res = if upper { mu_d_with(p, level, opts)? } else { nu_d_with(p, level, opts)? };
    let mut out = base_json(p, &res)?;
    let norm = spectral_norm(p)?;
    if norm > 1.0 + 1e-9 {
        out.note = format!("spectral norm {} exceeds 1; rescale for the rate check", fmt_num(norm));
        return Ok(out.rounded());
    }
    let report = if upper { theorem2_report(p, &res)? } else { theorem1_report(p, &res, EtaMode::Fixed)? };
    out.apply_theorem(&report);
    if !upper && out.kernel_value.is_none() {
        out.kernel_value = kernel_certified_lower_bound(p, level).ok().map(|b| b.value);
    }
    Ok(out.rounded())
}

/// `reduce`: the embedded polynomial and its spectrum report.
pub fn reduce(p: &PauliPolynomial) -> Result<(PauliPolynomial, ReduceJson), CliError> {
    let embedded = even_weight_embedding(p)?;
    let spectrum = verify_spectrum_equal(p, &embedded)?;
    let report = ReduceJson::new(p.n(), p.degree(), embedded.degree(), embedded.is_even_weight(), &spectrum);
    Ok((embedded, report))
}
