use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_pauli-sos"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn certify(file: &Path, level: usize, upper: bool) -> (Output, Option<Value>) {
    let lvl = level.to_string();
    let mut args = vec!["certify", "--input", file.to_str().unwrap(), "--level", &lvl];
    if upper {
        args.push("--upper");
    }
    let o = run(&args);
    let v = serde_json::from_slice(&o.stdout).ok();
    (o, v)
}

#[test]
fn roots_table_matches_reference() {
    let o = run(&["roots", "--n", "40", "--q", "4", "--dmax", "30"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(header, ["n", "q", "d", "xi", "xi_over_n", "phi", "threshold_k2", "threshold_k4"]);
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 31);
    for (d, v) in [(0, 0.75), (4, 0.525296), (20, 0.125181), (26, 0.05), (30, 0.018611)] {
        let got: f64 = rows[d][4].parse().unwrap();
        assert!((got - v).abs() < 1e-5, "d = {d}");
    }
    assert_eq!(&rows[0][5], "0.75");
    assert_eq!(&rows[0][6], "0.375");
    assert_eq!(&rows[0][7], "0.1875");
    assert_eq!(text, stdout(&run(&["roots", "--n", "40", "--q", "4", "--dmax", "30"])));
}

#[test]
fn range_errors_are_usage_errors() {
    for args in [&["roots", "--n", "5", "--dmax", "5"][..], &["roots", "--n", "5", "--q", "7", "--dmax", "2"], &["gamma", "--kmax", "40"], &["roots"]] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn heisenberg_pair_at_level_one() {
    let (o, v) = certify(&data("heisenberg_pair.txt"), 1, false);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = v.unwrap();
    assert!((v["nu"].as_f64().unwrap() + 1.0).abs() < 1e-7);
    assert!((v["lambda_min"].as_f64().unwrap() + 1.0).abs() < 1e-9);
    assert!(v["gap"].as_f64().unwrap().abs() < 1e-7);
    for key in ["n", "k", "d", "bound", "xi", "constant_Ck", "gamma_k", "regime_ok", "solver"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    for key in ["gap", "residual", "iterations"] {
        assert!(v["solver"].get(key).is_some());
    }
}

#[test]
fn constant_file_gives_the_constant() {
    for upper in [false, true] {
        let (o, v) = certify(&data("constant.txt"), 1, upper);
        assert!(o.status.success(), "{}", stderr(&o));
        let v = v.unwrap();
        let key = if upper { "mu" } else { "nu" };
        assert!((v[key].as_f64().unwrap() - 0.25).abs() < 1e-7);
    }
}

#[test]
fn even_weight_sample_respects_rates() {
    for d in 1..=3 {
        for upper in [false, true] {
            let (o, v) = certify(&data("even_n3.txt"), d, upper);
            assert!(o.status.success(), "d = {d}: {}", stderr(&o));
            let v = v.unwrap();
            if v["regime_ok"].as_bool().unwrap() {
                assert!(v["gap"].as_f64().unwrap() <= v["bound"].as_f64().unwrap() + 1e-6);
                assert_eq!(v["verdict"], "passed");
            } else {
                assert_eq!(v["verdict"], "not_applicable");
            }
        }
    }
}

#[test]
fn odd_weight_input_points_to_reduce() {
    let (o, _) = certify(&data("odd_chain.txt"), 1, false);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("reduce"));

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("embedded.txt");
    let rep = dir.path().join("report.json");
    let o = run(&[
        "reduce",
        "--input",
        data("odd_chain.txt").to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--report",
        rep.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["n_embedded"], 3);
    let (o, v) = certify(&out, 2, false);
    assert!(o.status.success(), "{}", stderr(&o));
    let lambda = report["lambda_min"][0].as_f64().unwrap();
    assert!((v.unwrap()["nu"].as_f64().unwrap() - lambda).abs() < 1e-6);
}

#[test]
fn malformed_file_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("bad.txt");
    std::fs::write(&f, "1 XX\n0.5 XQ\n").unwrap();
    let (o, _) = certify(&f, 1, false);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn outputs_are_byte_stable() {
    let a = run(&["certify", "--input", data("even_n3.txt").to_str().unwrap(), "--level", "2"]);
    let b = run(&["certify", "--input", data("even_n3.txt").to_str().unwrap(), "--level", "2"]);
    assert_eq!(a.stdout, b.stdout);
    let a = run(&["kernel", "--n", "6", "--d", "2"]);
    assert_eq!(a.stdout, run(&["kernel", "--n", "6", "--d", "2"]).stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["c"][0], 1.0);
    assert_eq!(v["gram_check"]["psd"], true);
    assert_eq!(v["gram_lower"][2].as_array().unwrap().len(), 3);
}

#[test]
fn config_file_and_flags() {
    let p = data("heisenberg_pair.txt");
    let o = run(&["--config", data("config.txt").to_str().unwrap(), "certify", "--input", p.to_str().unwrap(), "--level", "1"]);
    assert!(o.status.success());
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.cfg");
    std::fs::write(&bad, "tol = 1e-8\nspeed = 3\n").unwrap();
    let o = run(&["--config", bad.to_str().unwrap(), "gamma"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));
    // a two-iteration cap cannot converge
    let o = run(&["--max-iter", "2", "certify", "--input", p.to_str().unwrap(), "--level", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn problem_dump() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("problem.txt");
    let o = run(&[
        "certify",
        "--input",
        data("heisenberg_pair.txt").to_str().unwrap(),
        "--level",
        "1",
        "--dump",
        f.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(&f).unwrap();
    assert!(text.starts_with("# blocks 7\n"));
    assert!(text.lines().any(|l| l.starts_with("rhs ")));
    assert!(text.lines().filter(|l| !l.starts_with('#') && !l.starts_with("rhs")).all(|l| l.split(' ').count() == 6));
}

#[test]
fn quick_suite_and_fault_injection() {
    let o = run(&["verify-all", "--quick"]);
    assert!(o.status.success(), "{}", stdout(&o));
    let o = run(&["verify-all", "--quick", "--inject-fault", "krawtchouk-table"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL krawtchouk-lemmas"));
    assert!(stderr(&o).contains("krawtchouk-lemmas"));
}
