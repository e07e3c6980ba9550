use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fm_core::error::FmError;
use fm_core::io::{compare_files, compute, verify, Check, Constructor, SeriesFile, SetupFile, ALL_CHECKS, SCHEMA};
use fm_core::series::Truncation;
use serde_json::json;

/// Environment variable holding the worker thread count.
const THREADS_VAR: &str = "FM_THREADS";

#[derive(Parser)]
#[command(name = "fm", version, about = "Compute and check flag-bundle I-functions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a constructor and write the series as JSON.
    Compute {
        #[arg(long)]
        constructor: String,
        #[arg(long)]
        setup: PathBuf,
        #[command(flatten)]
        trunc: TruncArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run structural checks and write a report.
    Verify {
        #[arg(long)]
        constructor: Option<String>,
        #[arg(long)]
        setup: Option<PathBuf>,
        /// A series file from `compute`; supplies setup and constructor.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Comma-separated subset of divisor, weyl, c1, c2, cone.
        #[arg(long, value_delimiter = ',')]
        checks: Option<Vec<String>>,
        #[command(flatten)]
        trunc: TruncArgs,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
    /// Compare two series files coefficient by coefficient.
    Compare {
        a: PathBuf,
        b: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        force: bool,
    },
}

#[derive(Args)]
struct TruncArgs {
    #[arg(long)]
    dmax: Option<u32>,
    /// Kept z-exponents as lo:hi.
    #[arg(long, allow_hyphen_values = true)]
    zwin: Option<String>,
    #[arg(long)]
    minv: Option<u32>,
}

impl TruncArgs {
    fn resolve(&self, base: Truncation) -> Result<Truncation, FmError> {
        let mut t = base;
        if let Some(d) = self.dmax {
            t.dmax = d;
        }
        if let Some(w) = &self.zwin {
            let (lo, hi) = w
                .split_once(':')
                .ok_or_else(|| FmError::Parse(format!("--zwin {w}: expected lo:hi")))?;
            let p = |s: &str| {
                s.trim()
                    .parse::<i32>()
                    .map_err(|e| FmError::Parse(format!("--zwin {w}: {e}")))
            };
            t.zlo = p(lo)?;
            t.zhi = p(hi)?;
        }
        if let Some(m) = self.minv {
            t.minv = m;
        }
        if t.dmax == 0 || t.minv == 0 || t.zlo > t.zhi {
            return Err(FmError::Truncation(format!(
                "need dmax > 0, minv > 0 and lo <= hi (got {}, {}, {}:{})",
                t.dmax, t.minv, t.zlo, t.zhi
            )));
        }
        Ok(t)
    }

    fn is_set(&self) -> bool {
        self.dmax.is_some() || self.zwin.is_some() || self.minv.is_some()
    }
}

fn read(path: &Path) -> Result<String, FmError> {
    std::fs::read_to_string(path).map_err(|e| FmError::Missing(format!("{}: {e}", path.display())))
}

fn emit(out: Option<&Path>, text: &str) -> Result<(), FmError> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| FmError::Missing(format!("{}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// Returns whether every check passed.
fn run(cli: Cli) -> Result<bool, FmError> {
    match cli.command {
        Command::Compute {
            constructor,
            setup,
            trunc,
            out,
        } => {
            let c: Constructor = constructor.parse()?;
            let s = SetupFile::parse(&read(&setup)?)?;
            let f = compute(&s, c, trunc.resolve(Truncation::default())?)?;
            emit(out.as_deref(), &f.to_json())?;
            Ok(true)
        }
        Command::Verify {
            constructor,
            setup,
            input,
            checks,
            trunc,
            out,
            force,
        } => {
            let input = input
                .map(|p| read(&p).and_then(|s| SeriesFile::from_json(&s)))
                .transpose()?;
            let setup = setup.map(|p| read(&p).and_then(|s| SetupFile::parse(&s))).transpose()?;
            let (s, c, t) = match (&input, setup) {
                (Some(f), s) => {
                    if let Some(s) = &s {
                        if s.hash() != f.setup_hash && !force {
                            return Err(FmError::Incompatible(
                                "setup differs from the one recorded in the input; use --force".into(),
                            ));
                        }
                    }
                    if trunc.is_set() {
                        return Err(FmError::Parse("truncation comes from the input file".into()));
                    }
                    let c = match &constructor {
                        Some(name) => name.parse()?,
                        None => f.constructor.parse()?,
                    };
                    (s.unwrap_or_else(|| f.setup.clone()), c, f.truncation)
                }
                (None, Some(s)) => {
                    let name = constructor.ok_or_else(|| FmError::Parse("--constructor is required".into()))?;
                    (s, name.parse()?, trunc.resolve(Truncation::default())?)
                }
                (None, None) => return Err(FmError::Parse("need --setup or --input".into())),
            };
            let list: Vec<Check> = match checks {
                Some(names) => names.iter().map(|n| n.parse()).collect::<Result<_, _>>()?,
                None => ALL_CHECKS.to_vec(),
            };
            let reps = verify(&s, c, t, &list, input.as_ref(), t.dmax)?;
            let passed = reps.iter().all(|r| r.passed);
            let report = json!({
                "checks": reps,
                "constructor": c.to_string(),
                "passed": passed,
                "schema": SCHEMA,
                "setup_hash": s.hash(),
            });
            emit(out.as_deref(), &pretty(&report))?;
            Ok(passed)
        }
        Command::Compare { a, b, out, force } => {
            let fa = SeriesFile::from_json(&read(&a)?)?;
            let fb = SeriesFile::from_json(&read(&b)?)?;
            let rep = compare_files(&fa, &fb, force)?;
            let report = json!({
                "first_diff": rep.failures.first(),
                "passed": rep.passed,
                "report": rep,
                "schema": SCHEMA,
            });
            emit(out.as_deref(), &pretty(&report))?;
            Ok(rep.passed)
        }
    }
}

fn init_threads() -> Result<(), FmError> {
    let Ok(v) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = v
        .parse()
        .map_err(|_| FmError::Parse(format!("{THREADS_VAR}={v}: expected a thread count")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| FmError::Unsupported(format!("thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match init_threads().and_then(|_| run(cli)) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            let err = json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{err}");
            ExitCode::from(2)
        }
    }
}
