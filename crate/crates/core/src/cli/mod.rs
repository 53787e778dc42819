//! `dvblab` command line: instance generation, verification suites, worked
//! examples and round trips through the equivalence.
//!
//! Exit codes: 0 when every check passes, 1 when some check fails, 2 on
//! IO, parse or argument errors.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::dvb::DvbMorphism;
use crate::equivalence::{check_nat_pi, check_nat_t, doubling, nat_pi, nat_t};
use crate::exactla::Space;
use crate::geom::{atiyah_fiber, check_atiyah, check_jet, jet_fiber, square_report, GeomContext};
use crate::report::{run_suite, verify_instance, Suite};
use crate::sample::{rng_from_seed, trial_rng};
use crate::seq::{DvbSeq, SeqFile, SeqMorphism};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

const EXAMPLE_SAMPLES: usize = 10;

#[derive(Debug, Parser)]
#[command(
    name = "dvblab",
    version,
    about = "Exact checks for double vector bundles and their duals"
)]
pub struct Cli {
    /// Default seed for every subcommand.
    #[arg(long, env = "DVBLAB_SEED", default_value_t = 0, global = true)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a random DVB sequence 0 → C → Ω → A⊗B → 0 as JSON.
    Gen {
        /// Dimensions of A, B and C.
        #[arg(long, value_parser = parse_dims)]
        dims: (usize, usize, usize),
        /// Write the split sequence instead of a random one.
        #[arg(long)]
        split: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run verification suites over random instances, or on one instance.
    Verify {
        #[arg(long, value_enum, default_value_t = Suite::All)]
        suite: Suite,
        #[arg(long, default_value_t = 20, value_parser = clap::value_parser!(u32).range(1..))]
        trials: u32,
        #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
        max_dim: u32,
        /// Check a sequence file instead of random instances.
        #[arg(long)]
        instance: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build one of the tangent/cotangent examples and report its verdicts.
    Example {
        #[arg(value_enum)]
        kind: ExampleKind,
        #[arg(long, default_value_t = 1)]
        dim_t: usize,
        #[arg(long, default_value_t = 1)]
        dim_e: usize,
    },
    /// Run the t and π round trips on a sequence file.
    Roundtrip { file: PathBuf },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ExampleKind {
    Jet,
    Atiyah,
    Square,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}: {source}")]
    Parse { path: PathBuf, source: serde_json::Error },
}

fn parse_dims(s: &str) -> Result<(usize, usize, usize), String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts[..] else {
        return Err(format!("expected three comma-separated dims, got {s:?}"));
    };
    let n = |x: &str| x.parse::<usize>().map_err(|e| format!("bad dim {x:?}: {e}"));
    Ok((n(a)?, n(b)?, n(c)?))
}

fn read_instance(path: &Path) -> Result<SeqFile, CliError> {
    let text = fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })?;
    serde_json::from_str(&text).map_err(|source| CliError::Parse {
        path: path.into(),
        source,
    })
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("reports serialize");
    text.push('\n');
    match out {
        Some(path) => fs::write(path, text).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn verdict(passed: bool) -> i32 {
    if passed {
        EXIT_PASS
    } else {
        EXIT_FAIL
    }
}

fn cmd_gen(dims: (usize, usize, usize), split: bool, seed: u64, out: Option<&Path>) -> Result<i32, CliError> {
    let (a, b, c) = dims;
    let s = if split {
        let (sa, sb, sc) = DvbSeq::with_dims(a, b, c);
        DvbSeq::split(&sa, &sb, &sc)
    } else {
        DvbSeq::random(&mut rng_from_seed(seed), a, b, c)
    };
    emit(&SeqFile::from_seq(&s), out)?;
    Ok(EXIT_PASS)
}

fn cmd_verify(
    suite: Suite,
    trials: usize,
    max_dim: usize,
    seed: u64,
    instance: Option<&Path>,
    out: Option<&Path>,
) -> Result<i32, CliError> {
    let report = match instance {
        Some(path) => verify_instance(&read_instance(path)?, seed, trials),
        None => run_suite(suite, seed, trials, max_dim),
    };
    for c in report.failed_checks() {
        eprintln!("FAIL {} ({} of {} trials)", c.name, c.failures, c.trials);
    }
    emit(&report, out)?;
    Ok(verdict(report.passed))
}

fn cmd_example(kind: ExampleKind, dt: usize, de: usize, seed: u64) -> Result<i32, CliError> {
    let ctx = GeomContext::new(dt, de);
    let mut rng = rng_from_seed(seed);
    let (passed, body) = match kind {
        ExampleKind::Jet => {
            let model = jet_fiber(&ctx);
            let rep = check_jet(&ctx, &mut rng, EXAMPLE_SAMPLES);
            let body = json!({
                "example": "jet",
                "dimT": dt,
                "dimE": de,
                "dimJE": rep.dim,
                "sequence": seq_shape(&model.xseq.u, &model.xseq.v, &model.xseq.k),
                "report": rep,
            });
            (rep.passed(), body)
        }
        ExampleKind::Atiyah => {
            let model = atiyah_fiber(&ctx);
            let rep = check_atiyah(&ctx, &mut rng, EXAMPLE_SAMPLES);
            let body = json!({
                "example": "atiyah",
                "dimT": dt,
                "dimE": de,
                "dimDE": rep.dim,
                "sequence": seq_shape(&model.xseq.u, &model.xseq.v, &model.xseq.k),
                "report": rep,
            });
            (rep.passed(), body)
        }
        ExampleKind::Square => {
            let rep = square_report(&ctx, &mut rng, EXAMPLE_SAMPLES);
            let edges = json!({
                "transposition": rep.transposition.passed(),
                "tstarDuality": rep.tstar_duality.passed(),
                "eDuality": rep.e_duality.passed(),
                "estarDuality": rep.estar_duality.passed(),
            });
            let body = json!({
                "example": "square",
                "dimT": dt,
                "dimE": de,
                "edges": edges,
                "report": rep,
            });
            (rep.passed(), body)
        }
    };
    emit(&json!({ "passed": passed, "result": body }), None)?;
    Ok(verdict(passed))
}

/// `0 → U⊗V → Π → K → 0` by dimensions.
fn seq_shape(u: &Space, v: &Space, k: &Space) -> Value {
    json!({ "U": u.dim, "V": v.dim, "K": k.dim, "Pi": u.dim * v.dim + k.dim })
}

fn cmd_roundtrip(path: &Path, seed: u64) -> Result<i32, CliError> {
    let file = read_instance(path)?;
    let s = match file.to_seq() {
        Ok(s) => s,
        Err(err) => {
            let body = json!({ "passed": false, "error": err.to_string() });
            emit(&body, None)?;
            return Ok(EXIT_FAIL);
        }
    };
    let mut rng = trial_rng(seed, "roundtrip", 0);
    let pi = nat_pi(&s);
    let pi_rep = check_nat_pi(&SeqMorphism::identity(&s), &mut rng, EXAMPLE_SAMPLES);
    let d = doubling(&s).trivial();
    let t = nat_t(&d).canonical();
    let t_rep = check_nat_t(&DvbMorphism::identity(&d), &mut rng, EXAMPLE_SAMPLES);
    let passed = pi_rep.passed() && t_rep.passed();
    let body = json!({
        "passed": passed,
        "pi": { "matrix": pi.morphism.varpi.matrix(), "report": pi_rep },
        "t": { "fa": t.fa.matrix(), "fb": t.fb.matrix(), "fc": t.fc.matrix(), "omega": t.omega.matrix(), "report": t_rep },
    });
    emit(&body, None)?;
    Ok(verdict(passed))
}

pub fn execute(cli: Cli) -> Result<i32, CliError> {
    let seed = cli.seed;
    match cli.command {
        Command::Gen { dims, split, out } => cmd_gen(dims, split, seed, out.as_deref()),
        Command::Verify {
            suite,
            trials,
            max_dim,
            instance,
            out,
        } => cmd_verify(
            suite,
            trials as usize,
            max_dim as usize,
            seed,
            instance.as_deref(),
            out.as_deref(),
        ),
        Command::Example { kind, dim_t, dim_e } => cmd_example(kind, dim_t, dim_e, seed),
        Command::Roundtrip { file } => cmd_roundtrip(&file, seed),
    }
}

/// Parses `args` and runs the command, returning the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return if err.use_stderr() { EXIT_ERROR } else { EXIT_PASS };
        }
    };
    match execute(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            EXIT_ERROR
        }
    }
}
