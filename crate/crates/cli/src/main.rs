use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use antonym_core::json::{self, to_canonical_string};
use antonym_core::verify::{self, Suite, VerifyConfig};
use antonym_core::{
    antonymous, approximate, observable, opposite_of, outcome_bounds, expectation, Error, Hermitian64, LeftFamily64,
    Quasipoint64, RightFamily64, StepFunction64,
};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

const EXIT_CODES: &str = "\
Exit codes:
  0  success (verify: every check passed)
  1  verify: at least one check failed; witnesses are in the report
  2  malformed or invalid input (missing file, bad JSON, non-Hermitian matrix,
     non-unit vector, --dim 0, --trials 0, non-positive --epsilon)
  3  eval: operator and quasipoint disagree in dimension or algebra
  4  export: an output file could not be written";

#[derive(Parser)]
#[command(name = "antonym", version, about = "Antonymous and observable functions on the Stone spectrum", after_help = EXIT_CODES)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate g_A, f_A, the outcome bounds or the expectation at a quasipoint.
    #[command(after_help = EXIT_CODES)]
    Eval {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        quasipoint: PathBuf,
        #[arg(long, value_enum, default_value_t = What::Both)]
        what: What,
    },
    /// Run verification suites and print a JSON report.
    #[command(after_help = EXIT_CODES)]
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
        /// Largest dimension drawn by the random suites.
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 100)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Write spectral families, the opposite family, step functions and
    /// optionally the A_ε approximation of an operator.
    #[command(after_help = EXIT_CODES)]
    Export {
        #[arg(long)]
        operator: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long)]
        epsilon: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Antonymous,
    Observable,
    Both,
    Bounds,
    Expectation,
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self { code: 2, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::DimensionMismatch { .. } | Error::ContextMismatch(_) => 3,
            _ => 2,
        };
        Self { code, message: e.to_string() }
    }
}

fn read_json(path: &Path) -> Result<Value, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    json::parse(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn load_operator(path: &Path) -> Result<Hermitian64, Failure> {
    json::hermitian_from_json(&read_json(path)?).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

fn eval(operator: &Path, quasipoint: &Path, what: What) -> Result<Value, Failure> {
    let a = load_operator(operator)?;
    let q: Quasipoint64 = json::quasipoint_from_json(&read_json(quasipoint)?, a.dim()).map_err(|e| match e {
        Error::DimensionMismatch { .. } => Failure::from(e),
        e => Failure::input(format!("{}: {e}", quasipoint.display())),
    })?;
    if q.dim() != a.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: q.dim() }.into());
    }
    Ok(match what {
        What::Antonymous => json!({ "g": antonymous(&a, &q)? }),
        What::Observable => json!({ "f": observable(&a, &q)? }),
        What::Both => json!({ "g": antonymous(&a, &q)?, "f": observable(&a, &q)? }),
        What::Bounds => {
            let (g, f) = outcome_bounds(&a, &q.generating_vector())?;
            json!({ "g": g, "f": f })
        }
        What::Expectation => json!({ "expectation": expectation(&a, &q.generating_vector())? }),
    })
}

fn run_verify(suite: &str, dim: usize, trials: usize, seed: u64) -> Result<(Value, bool), Failure> {
    let suite: Suite = suite.parse().map_err(|e: Error| Failure::input(e.to_string()))?;
    let cfg = VerifyConfig { max_dim: dim, trials, seed };
    let reports = verify::run(suite, &cfg).map_err(|e| Failure::input(e.to_string()))?;
    let passed = reports.iter().all(|r| r.passed);
    for r in &reports {
        for c in r.checks.iter().filter(|c| !c.passed) {
            eprintln!("FAIL [{}] {}: {}", r.suite, c.statement, c.witness.as_deref().unwrap_or(""));
        }
    }
    let value = json!({ "passed": passed, "suites": serde_json::to_value(&reports).expect("report serializes") });
    Ok((value, passed))
}

fn export(operator: &Path, out: &Path, epsilon: Option<f64>) -> Result<Vec<PathBuf>, Failure> {
    let a = load_operator(operator)?;
    let approximation = match epsilon {
        Some(eps) => Some(approximate(&a, eps)?),
        None => None,
    };
    let left = LeftFamily64::of(&a);
    let mut files = vec![
        ("spectral_left.json", json::spectral_family_to_json(&left)),
        ("spectral_right.json", json::spectral_family_to_json(&RightFamily64::of(&a))),
        ("opposite.json", json::opposite_to_json(&opposite_of(&left))),
        ("antonymous_step.json", json::step_function_to_json(&StepFunction64::antonymous_of(&a))),
        ("observable_step.json", json::step_function_to_json(&StepFunction64::observable_of(&a))),
    ];
    if let Some(ap) = &approximation {
        files.push(("approximation.json", json::approximation_to_json(ap)));
    }
    let write_failure = |e: std::io::Error, p: &Path| Failure { code: 4, message: format!("{}: {e}", p.display()) };
    fs::create_dir_all(out).map_err(|e| write_failure(e, out))?;
    let mut written = Vec::new();
    for (name, value) in files {
        let path = out.join(name);
        fs::write(&path, to_canonical_string(&value)).map_err(|e| write_failure(e, &path))?;
        written.push(path);
    }
    Ok(written)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Eval { operator, quasipoint, what } => eval(&operator, &quasipoint, what).map(|v| {
            print!("{}", to_canonical_string(&v));
            0
        }),
        Command::Verify { suite, dim, trials, seed } => run_verify(&suite, dim, trials, seed).map(|(v, passed)| {
            print!("{}", to_canonical_string(&v));
            if passed {
                0
            } else {
                1
            }
        }),
        Command::Export { operator, out, epsilon } => export(&operator, &out, epsilon).map(|files| {
            for f in files {
                println!("{}", f.display());
            }
            0
        }),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
