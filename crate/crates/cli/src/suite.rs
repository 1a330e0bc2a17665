//! The verification suite behind `verify-all` and the acceptance target.

use std::time::Instant;

use pauli_sos::component_bounds::{gamma_k, gamma_k_closed, verify_component_bound};
use pauli_sos::dense::{all_words, lambda_min, word_matrix};
use pauli_sos::hierarchies::{
    mu_d_with, nu_d_with, theorem1_report, theorem2_report, HierarchyOptions, TheoremReport, Verdict,
};
use pauli_sos::kernels::{
    build_a_sum, build_crn, crn_spectrum_sorted, krawtchouk_of_operator, solve_coefficients, EtaMode,
};
use pauli_sos::krawtchouk::KrawtchoukContext;
use pauli_sos::linalg::{max_abs_diff, operator_norm};
use pauli_sos::polynomial::PauliPolynomial;
use pauli_sos::random::{normalize_sup, random_diagonal, random_even_weight, random_hermitian};
use pauli_sos::reduction::{embedded_locality, even_weight_embedding, verify_spectrum_equal};
use pauli_sos::sdp::{self, HermitianSparse, SdpConstraint, SdpProblem, SolverOptions};

use crate::commands::roots_table;

/// Reference values of `ξ_{d+1}^{40,4}/40` at `d ∈ {0, 4, 20, 26, 30}`.
pub const REFERENCE_ROOTS: [(usize, f64); 5] =
    [(0, 0.750000), (4, 0.525296), (20, 0.125181), (26, 0.050000), (30, 0.018611)];

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl Check {
    pub fn line(&self) -> String {
        format!("{} {}: {} ({:.2}s)", if self.passed { "PASS" } else { "FAIL" }, self.name, self.detail, self.seconds)
    }
}

fn timed(name: &'static str, f: impl FnOnce() -> (bool, String)) -> Check {
    let start = Instant::now();
    let (passed, detail) = f();
    Check { name, passed, detail, seconds: start.elapsed().as_secs_f64() }
}

/// Instance seeds: disjoint ranges per check, shifted by the user seed.
fn seed_for(seed: u64, base: u64, i: usize) -> u64 {
    seed.wrapping_mul(1_000_003).wrapping_add(base * 10_000 + i as u64)
}

pub fn reference_roots() -> Check {
    let start = Instant::now();
    let mut c = timed("reference-roots", || match roots_table(40, 4, 30) {
        Ok(rows) => {
            let worst = REFERENCE_ROOTS.iter().map(|&(d, v)| (rows[d].xi_over_n - v).abs()).fold(0.0, f64::max);
            (worst <= 1e-5, format!("max deviation {worst:.2e} over 5 reference points"))
        }
        Err(e) => (false, e.to_string()),
    });
    if start.elapsed().as_secs_f64() >= 5.0 {
        c.passed = false;
        c.detail.push_str("; over the 5 s budget");
    }
    c
}

pub fn kernel_spectra(nmax: usize) -> Check {
    let mut c = timed("kernel-spectra", || {
        let mut worst: f64 = 0.0;
        for n in 1..=nmax {
            let Ok(ctx) = KrawtchoukContext::new(n, 4) else { return (false, format!("context n = {n}")) };
            for r in 0..=n {
                let (Ok(op), Ok(formula)) = (build_crn(n, r), crn_spectrum_sorted(&ctx, r)) else {
                    return (false, format!("n = {n}, r = {r}: build failed"));
                };
                let dense = op.eigenvalues();
                if dense.len() != formula.len() {
                    return (false, format!("n = {n}, r = {r}: multiset sizes differ"));
                }
                worst = dense.iter().zip(&formula).map(|(a, b)| (a - b).abs()).fold(worst, f64::max);
            }
        }
        (worst <= 1e-10, format!("n <= {nmax}, max eigenvalue deviation {worst:.2e}"))
    });
    if c.seconds >= 10.0 {
        c.passed = false;
        c.detail.push_str("; over the 10 s budget");
    }
    c
}

pub fn kernel_identity(nmax: usize) -> Check {
    timed("kernel-identity", || {
        let mut worst: f64 = 0.0;
        for n in 1..=nmax {
            let (Ok(ctx), Ok(s)) = (KrawtchoukContext::new(n, 4), build_a_sum(n)) else {
                return (false, format!("n = {n}: setup failed"));
            };
            for r in 0..=n {
                let (Ok(c), Ok(mut k)) = (build_crn(n, r), krawtchouk_of_operator(&ctx, r, s.matrix())) else {
                    return (false, format!("n = {n}, r = {r}: build failed"));
                };
                if r % 2 == 1 {
                    k = -k;
                }
                worst = worst.max(operator_norm(&(c.matrix() - &k)));
            }
        }
        (worst <= 1e-10, format!("n <= {nmax}, max operator-norm defect {worst:.2e}"))
    })
}

/// Damage injected into the suite to confirm that it reports failures.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Adds one to a cached Krawtchouk value at `n = 10, q = 4`.
    KrawtchoukTable,
}

pub fn krawtchouk_lemmas(nmax: usize, fault: Option<Fault>) -> Check {
    let mut c = timed("krawtchouk-lemmas", || {
        let (mut lemma, mut table, mut cells) = (0usize, 0usize, 0usize);
        let mut first = None;
        for q in 2..=4 {
            for n in 1..=nmax {
                let Ok(mut ctx) = KrawtchoukContext::new(n, q) else { return (false, format!("context n = {n}, q = {q}")) };
                if fault == Some(Fault::KrawtchoukTable) && n == 10.min(nmax) && q == 4 {
                    ctx.corrupt_value(2, 3, 1);
                }
                let v = ctx.lemma_violations();
                let t = ctx.table_defects();
                if first.is_none() {
                    if let Some(x) = v.first() {
                        first = Some(format!("lemma {} at n = {n}, q = {q}, r = {}, i = {}", x.lemma, x.r, x.i));
                    } else if let Some(&(r, i)) = t.first() {
                        first = Some(format!("table entry n = {n}, q = {q}, r = {r}, i = {i}"));
                    }
                }
                lemma += v.len();
                table += t.len();
                cells += (n + 1) * (n + 1);
            }
        }
        let detail = format!(
            "{cells} cells, n <= {nmax}, q in 2..=4: {lemma} lemma violations, {table} table defects{}",
            first.map(|f| format!(", first: {f}")).unwrap_or_default()
        );
        (lemma == 0 && table == 0, detail)
    });
    if c.seconds >= 30.0 {
        c.passed = false;
        c.detail.push_str("; over the 30 s budget");
    }
    c
}

pub fn coefficient_sdp() -> Check {
    timed("coefficient-sdp", || {
        let n = 8;
        let Ok(ctx) = KrawtchoukContext::new(n, 4) else { return (false, "context".into()) };
        let mut worst: f64 = 0.0;
        for d in 1..=3 {
            match (solve_coefficients(n, d, 2), ctx.smallest_root(d + 1)) {
                (Ok(co), Ok(xi)) => worst = worst.max((co.sdp_objective - xi).abs()),
                (Err(e), _) | (_, Err(e)) => return (false, format!("d = {d}: {e}")),
            }
        }
        let full = match solve_coefficients(n, n, n) {
            Ok(co) => co,
            Err(e) => return (false, format!("d = n: {e}")),
        };
        let deficit = full.c.iter().step_by(2).map(|v| (v - 1.0).abs()).fold(0.0, f64::max);
        let ok = worst <= 1e-6 && full.sdp_objective <= 1e-8 && deficit <= 1e-6;
        (
            ok,
            format!(
                "n = 8: |objective - xi| <= {worst:.2e} for d = 1..3; d = n objective {:.2e}, max |c_2r - 1| {deficit:.2e}",
                full.sdp_objective
            ),
        )
    })
}

/// Values of one instance across levels.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelRecord {
    pub label: String,
    pub lambda_min: f64,
    /// `(d, ν_d)`, increasing `d`.
    pub nu: Vec<(usize, f64)>,
    /// `(d, μ_d)`, increasing `d`.
    pub mu: Vec<(usize, f64)>,
    pub solver_tol: f64,
}

pub fn finite_convergence(seed: u64, at_two: usize, at_three: usize, opts: &HierarchyOptions) -> (Check, Vec<LevelRecord>) {
    let mut records = Vec::new();
    let mut c = timed("finite-convergence", || {
        let mut worst: f64 = 0.0;
        let mut count = 0;
        for (n, total, levels) in [(2usize, at_two, 1..=2usize), (3, at_three, 2..=3)] {
            for i in 0..total {
                let p = random_hermitian(n, n, seed_for(seed, 6 + n as u64, i));
                let Ok(lambda) = lambda_min(&p) else { return (false, "eigensolve failed".into()) };
                let mut rec = LevelRecord {
                    label: format!("n = {n} #{i}"),
                    lambda_min: lambda,
                    nu: vec![],
                    mu: vec![],
                    solver_tol: opts.solver.tol,
                };
                for d in levels.clone() {
                    match (nu_d_with(&p, d, opts), mu_d_with(&p, d, opts)) {
                        (Ok(nu), Ok(mu)) => {
                            rec.nu.push((d, nu.value));
                            rec.mu.push((d, mu.value));
                            if d == n {
                                worst = worst.max((nu.value - lambda).abs()).max((mu.value - lambda).abs());
                            }
                        }
                        (Err(e), _) | (_, Err(e)) => return (false, format!("{}: d = {d}: {e}", rec.label)),
                    }
                }
                records.push(rec);
                count += 1;
            }
        }
        (worst <= 1e-6, format!("{count} instances, max |bound - lambda_min| at d = n: {worst:.2e}"))
    });
    if c.seconds >= 300.0 {
        c.passed = false;
        c.detail.push_str("; over the 5 min budget");
    }
    (c, records)
}

/// Rate reports for one normalized even-weight instance at every level.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepInstance {
    pub record: LevelRecord,
    pub lower: Vec<TheoremReport>,
    pub upper: Vec<TheoremReport>,
}

pub fn theorem_sweep(seed: u64, count: usize, opts: &HierarchyOptions) -> Result<Vec<SweepInstance>, String> {
    let n = 3;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let label = format!("sweep #{i}");
        let p = random_even_weight(n, 2, seed_for(seed, 7, i))
            .and_then(|p| normalize_sup(&p))
            .map_err(|e| format!("{label}: {e}"))?;
        let lambda = lambda_min(&p).map_err(|e| e.to_string())?;
        let mut inst = SweepInstance {
            record: LevelRecord { label: label.clone(), lambda_min: lambda, nu: vec![], mu: vec![], solver_tol: opts.solver.tol },
            lower: vec![],
            upper: vec![],
        };
        for d in 1..=n {
            let nu = nu_d_with(&p, d, opts).map_err(|e| format!("{label}: nu_{d}: {e}"))?;
            let mu = mu_d_with(&p, d, opts).map_err(|e| format!("{label}: mu_{d}: {e}"))?;
            inst.record.nu.push((d, nu.value));
            inst.record.mu.push((d, mu.value));
            inst.lower.push(theorem1_report(&p, &nu, EtaMode::Fixed).map_err(|e| format!("{label}: {e}"))?);
            inst.upper.push(theorem2_report(&p, &mu).map_err(|e| format!("{label}: {e}"))?);
        }
        out.push(inst);
    }
    Ok(out)
}

fn rate_check(name: &'static str, sweep: &Result<Vec<SweepInstance>, String>, upper: bool) -> Check {
    timed(name, || {
        let sweep = match sweep {
            Ok(s) => s,
            Err(e) => return (false, e.clone()),
        };
        let (mut applied, mut skipped, mut failed) = (0, 0, 0);
        let mut min_slack = f64::INFINITY;
        for inst in sweep {
            for rep in if upper { &inst.upper } else { &inst.lower } {
                match rep.verdict {
                    Verdict::NotApplicable => skipped += 1,
                    Verdict::Passed | Verdict::Failed => {
                        applied += 1;
                        if rep.verdict == Verdict::Failed {
                            failed += 1;
                        }
                        min_slack = min_slack.min(rep.slack().unwrap_or(f64::INFINITY));
                    }
                }
            }
        }
        (
            applied > 0 && failed == 0,
            format!(
                "{} instances: {applied} level checks, {failed} violations, {skipped} outside the regime, min slack {min_slack:.3e}",
                sweep.len()
            ),
        )
    })
}

pub fn theorem1_rate(sweep: &Result<Vec<SweepInstance>, String>) -> Check {
    rate_check("theorem1-rate", sweep, false)
}

pub fn theorem2_rate(sweep: &Result<Vec<SweepInstance>, String>) -> Check {
    rate_check("theorem2-rate", sweep, true)
}

/// Sandwich `ν_d ≤ λ_min ≤ μ_d` to 1e-7 and monotonicity in `d` to twice the solver tolerance.
pub fn sandwich_monotone<'a>(records: impl IntoIterator<Item = &'a LevelRecord>) -> Check {
    let records: Vec<&LevelRecord> = records.into_iter().collect();
    timed("sandwich-monotone", || {
        let mut bad = Vec::new();
        let mut levels = 0;
        for r in &records {
            let slack = |v: f64| 2.0 * r.solver_tol * (1.0 + v.abs());
            for &(d, v) in &r.nu {
                levels += 1;
                if v > r.lambda_min + 1e-7 {
                    bad.push(format!("{}: nu_{d} above lambda_min", r.label));
                }
            }
            for &(d, v) in &r.mu {
                levels += 1;
                if v < r.lambda_min - 1e-7 {
                    bad.push(format!("{}: mu_{d} below lambda_min", r.label));
                }
            }
            for w in r.nu.windows(2) {
                if w[1].1 < w[0].1 - slack(w[0].1) {
                    bad.push(format!("{}: nu decreases at d = {}", r.label, w[1].0));
                }
            }
            for w in r.mu.windows(2) {
                if w[1].1 > w[0].1 + slack(w[0].1) {
                    bad.push(format!("{}: mu increases at d = {}", r.label, w[1].0));
                }
            }
        }
        let detail = format!("{} instances, {levels} solved levels, {} violations", records.len(), bad.len());
        match bad.first() {
            None => (!records.is_empty(), detail),
            Some(b) => (false, format!("{detail}, first: {b}")),
        }
    })
}

pub fn reduction(seed: u64, n: usize, count: usize) -> Check {
    timed("reduction", || {
        let mut worst: f64 = 0.0;
        for i in 0..count {
            let k = 2 + i % 2;
            let p = random_hermitian(n, k, seed_for(seed, 9, i));
            let t = match even_weight_embedding(&p) {
                Ok(t) => t,
                Err(e) => return (false, e.to_string()),
            };
            if !t.is_even_weight() || t.degree() > embedded_locality(k) || t.n() != n + 1 {
                return (false, format!("instance {i}: embedding audit failed"));
            }
            match verify_spectrum_equal(&p, &t) {
                Ok(rep) if rep.passed() => worst = worst.max(rep.max_deviation),
                Ok(rep) => return (false, format!("instance {i}: spectra differ by {:.2e}", rep.max_deviation)),
                Err(e) => return (false, e.to_string()),
            }
        }
        (true, format!("{count} instances at n = {n}, k in {{2, 3}}, max spectral deviation {worst:.2e}"))
    })
}

pub fn gamma_chain(seed: u64, n: usize, count: usize) -> Check {
    timed("gamma-chain", || {
        for k in 1..=8 {
            match gamma_k(k) {
                Ok(g) if g < gamma_k_closed(k) => {}
                Ok(g) => return (false, format!("gamma_{k} = {g} not below the closed form")),
                Err(e) => return (false, e.to_string()),
            }
        }
        let Ok(g2) = gamma_k(2) else { return (false, "gamma_2".into()) };
        let mut worst: f64 = 0.0;
        for i in 0..count {
            let rep = normalize_sup(&random_hermitian(n, 2, seed_for(seed, 10, i))).and_then(|p| verify_component_bound(&p, 2));
            match rep {
                Ok(r) if r.passed => worst = worst.max(r.worst_ratio),
                Ok(r) => return (false, format!("instance {i}: ratio {} above gamma_2", r.worst_ratio)),
                Err(e) => return (false, e.to_string()),
            }
        }
        (worst <= g2, format!("gamma_k below closed form for k <= 8; {count} instances at n = {n}, worst ratio {worst:.4} <= gamma_2 = {g2:.4}"))
    })
}

fn brute_force_min(p: &PauliPolynomial) -> f64 {
    (0u64..1 << p.n())
        .map(|bits| {
            p.terms()
                .map(|(w, c)| if (w.z_mask() & bits).count_ones() % 2 == 0 { c.re } else { -c.re })
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min)
}

pub fn diagonal(seed: u64, count: usize, opts: &HierarchyOptions) -> Check {
    timed("diagonal", || {
        let n = 3;
        let mut worst: f64 = 0.0;
        for i in 0..count {
            let p = random_diagonal(n, n, seed_for(seed, 12, i));
            match nu_d_with(&p, n, opts) {
                Ok(nu) => worst = worst.max((nu.value - brute_force_min(&p)).abs()),
                Err(e) => return (false, format!("instance {i}: {e}")),
            }
        }
        (worst <= 1e-7, format!("{count} Z-only instances at n = 3, max |nu_n - brute force| {worst:.2e}"))
    })
}

pub fn pauli_products(nmax: usize) -> Check {
    timed("pauli-products", || {
        let mut worst: f64 = 0.0;
        for n in 1..=nmax {
            let words = all_words(n);
            for a in &words {
                for b in &words {
                    let Ok((phase, w)) = a.multiply(b) else { return (false, "multiply".into()) };
                    let lhs = word_matrix(a) * word_matrix(b);
                    worst = worst.max(max_abs_diff(&lhs, &(word_matrix(&w) * phase.to_complex())));
                }
            }
        }
        (worst <= 1e-12, format!("all word pairs for n <= {nmax}, max defect {worst:.2e}"))
    })
}

pub fn sdp_smoke() -> Check {
    timed("sdp-smoke", || {
        // min ⟨M, X⟩ over density matrices is λ_min(M)
        let p = random_hermitian(2, 2, 77);
        let Ok(m) = pauli_sos::dense::evaluate(&p) else { return (false, "evaluate".into()) };
        let dim = m.dim();
        let problem = SdpProblem {
            blocks: vec![dim],
            objective: vec![HermitianSparse::from_dense(m.matrix())],
            constraints: vec![SdpConstraint { matrices: vec![(0, HermitianSparse::identity(dim))], rhs: 1.0 }],
        };
        match sdp::solve(&problem, &SolverOptions::default()) {
            Ok(s) => {
                let err = (s.primal_objective - m.eigenvalues()[0]).abs();
                (s.is_optimal() && err <= 1e-7, format!("{} iterations, |value - lambda_min| {err:.2e}", s.iterations))
            }
            Err(e) => (false, e.to_string()),
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    pub seed: u64,
    pub quick: bool,
    pub fault: Option<Fault>,
}

/// Every check in a fixed order. `quick` keeps `n ≤ 2` and drops the hierarchy solves.
pub fn run_suite(options: &SuiteOptions, hierarchy: &HierarchyOptions, mut progress: impl FnMut(&Check)) -> Vec<Check> {
    let seed = options.seed;
    let mut out = Vec::new();
    let mut push = |c: Check| {
        progress(&c);
        out.push(c);
    };
    let small = if options.quick { 2 } else { 3 };
    push(pauli_products(small));
    push(reference_roots());
    push(krawtchouk_lemmas(60, options.fault));
    push(kernel_spectra(small));
    push(kernel_identity(small));
    push(sdp_smoke());
    push(reduction(seed, small, if options.quick { 20 } else { 100 }));
    push(gamma_chain(seed, small, if options.quick { 50 } else { 200 }));
    if !options.quick {
        push(coefficient_sdp());
        let (c6, records) = finite_convergence(seed, 20, 5, hierarchy);
        push(c6);
        let start = Instant::now();
        let sweep = theorem_sweep(seed, 50, hierarchy);
        let mut c7 = theorem1_rate(&sweep);
        c7.seconds += start.elapsed().as_secs_f64();
        push(c7);
        push(theorem2_rate(&sweep));
        let swept: Vec<&LevelRecord> = sweep.as_ref().map(|s| s.iter().map(|i| &i.record).collect()).unwrap_or_default();
        push(sandwich_monotone(records.iter().chain(swept)));
        push(diagonal(seed, 20, hierarchy));
    }
    out
}
