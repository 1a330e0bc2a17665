//! Acceptance criteria 1 to 12, one PASS/FAIL line each on stdout (not captured).

use std::io::Write;
use std::time::Instant;

use pauli_sos::hierarchies::HierarchyOptions;
use pauli_sos_cli::suite::{self, Check, LevelRecord};

const SEED: u64 = 0;

fn report(number: usize, check: &Check) -> bool {
    let line = format!("criterion {number:>2} {}\n", check.line());
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
    check.passed
}

#[test]
fn acceptance_criteria() {
    let opts = HierarchyOptions::default();
    let mut results = vec![(1, report(1, &suite::reference_roots()))];
    results.push((2, report(2, &suite::kernel_spectra(3))));
    results.push((3, report(3, &suite::kernel_identity(3))));
    results.push((4, report(4, &suite::krawtchouk_lemmas(60, None))));
    results.push((5, report(5, &suite::coefficient_sdp())));

    let (c6, records) = suite::finite_convergence(SEED, 20, 5, &opts);
    results.push((6, report(6, &c6)));

    let start = Instant::now();
    let sweep = suite::theorem_sweep(SEED, 50, &opts);
    let sweep_secs = start.elapsed().as_secs_f64();
    let mut c7 = suite::theorem1_rate(&sweep);
    c7.seconds += sweep_secs;
    results.push((7, report(7, &c7)));
    results.push((8, report(8, &suite::theorem2_rate(&sweep))));

    results.push((9, report(9, &suite::reduction(SEED, 3, 100))));
    results.push((10, report(10, &suite::gamma_chain(SEED, 3, 200))));

    let swept: Vec<&LevelRecord> = sweep.as_ref().map(|s| s.iter().map(|i| &i.record).collect()).unwrap_or_default();
    results.push((11, report(11, &suite::sandwich_monotone(records.iter().chain(swept)))));
    results.push((12, report(12, &suite::diagonal(SEED, 20, &opts))));

    let failed: Vec<usize> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
