use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};

use pauli_sos::hierarchies::{lower_problem, upper_problem};
use pauli_sos_cli::commands::{self, CliError};
use pauli_sos_cli::config::Config;
use pauli_sos_cli::io::{dump_problem, read_polynomial, write_polynomial};
use pauli_sos_cli::suite::{run_suite, Fault, SuiteOptions};

#[derive(Parser)]
#[command(name = "pauli-sos", version, about = "Sum-of-squares bounds for Pauli Hamiltonians")]
struct Cli {
    /// key = value file with tol, max_iter, basis_cap, qubit_cap, dense_cap.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Solver tolerance; overrides the config file.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Solver iteration cap; overrides the config file.
    #[arg(long, global = true)]
    max_iter: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum FaultArg {
    KrawtchoukTable,
}

#[derive(Subcommand)]
enum Command {
    /// Smallest Krawtchouk roots as CSV.
    Roots {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 4)]
        q: usize,
        #[arg(long)]
        dmax: usize,
    },
    /// Solve one hierarchy level and check the rate; JSON on stdout.
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        level: usize,
        /// Upper-bound hierarchy instead of the lower one.
        #[arg(long)]
        upper: bool,
        /// Also write the SDP in sparse text form.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Embed into an even-weight Hamiltonian on one more qubit.
    Reduce {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Spectrum report; stdout when absent.
        #[arg(long)]
        report: Option<PathBuf>,
    },
    /// Interpolation constants as CSV.
    Gamma {
        #[arg(long, default_value_t = 8)]
        kmax: usize,
    },
    /// Kernel coefficients as JSON.
    Kernel {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 2)]
        k: usize,
    },
    /// Run the verification suite.
    VerifyAll {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        quick: bool,
        #[arg(long, value_enum, hide = true)]
        inject_fault: Option<FaultArg>,
    },
}

fn config(cli: &Cli) -> Result<Config, CliError> {
    let mut cfg = match &cli.config {
        Some(path) => Config::load(path).map_err(|e| CliError::Usage(e.to_string()))?,
        None => Config::default(),
    };
    if let Some(tol) = cli.tol {
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::Usage(format!("--tol {tol} outside (0, 1)")));
        }
        cfg.hierarchy.solver.tol = tol;
    }
    if let Some(it) = cli.max_iter {
        cfg.hierarchy.solver.max_iter = it;
    }
    Ok(cfg)
}

fn write(path: &PathBuf, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(|e| CliError::Failure(format!("{}: {e}", path.display())))
}

fn json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable report") + "\n"
}

fn run(cli: Cli) -> Result<(), CliError> {
    let cfg = config(&cli)?;
    match cli.command {
        Command::Roots { n, q, dmax } => {
            print!("{}", commands::roots_csv(&commands::roots_table(n, q, dmax)?));
        }
        Command::Certify { input, level, upper, dump } => {
            let p = read_polynomial(&input).map_err(|e| CliError::Usage(e.to_string()))?;
            if let Some(path) = dump {
                let (_, problem) =
                    if upper { upper_problem(&p, level, &cfg.hierarchy)? } else { lower_problem(&p, level, &cfg.hierarchy)? };
                write(&path, &dump_problem(&problem))?;
            }
            let report = commands::certify(&p, level, upper, &cfg)?;
            print!("{}", json(&report));
            if report.verdict == "failed" {
                return Err(CliError::Failure("gap exceeds the rate bound".into()));
            }
        }
        Command::Reduce { input, output, report } => {
            let p = read_polynomial(&input).map_err(|e| CliError::Usage(e.to_string()))?;
            let (embedded, rep) = commands::reduce(&p)?;
            write(&output, &write_polynomial(&embedded))?;
            match report {
                Some(path) => write(&path, &json(&rep))?,
                None => print!("{}", json(&rep)),
            }
            if !rep.passed {
                return Err(CliError::Failure("spectrum check failed".into()));
            }
        }
        Command::Gamma { kmax } => print!("{}", commands::gamma_csv(kmax)?),
        Command::Kernel { n, d, k } => print!("{}", json(&commands::kernel_json(n, d, k)?)),
        Command::VerifyAll { seed, quick, inject_fault } => {
            let fault = inject_fault.map(|f| match f {
                FaultArg::KrawtchoukTable => Fault::KrawtchoukTable,
            });
            let start = Instant::now();
            let checks = run_suite(&SuiteOptions { seed, quick, fault }, &cfg.hierarchy, |c| println!("{}", c.line()));
            let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name).collect();
            let secs = start.elapsed().as_secs_f64();
            println!("{} of {} checks passed in {secs:.1}s", checks.len() - failed.len(), checks.len());
            if quick && secs > 60.0 {
                eprintln!("warning: quick suite took {secs:.1}s, above the 60 s budget");
            }
            if !failed.is_empty() {
                return Err(CliError::Failure(format!("failed: {}", failed.join(", "))));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
