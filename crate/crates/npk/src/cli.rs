//! Command-line surface.
//!
//! Every command is deterministic given its inputs and `--seed`.  Output is
//! JSON on stdout (pretty-printed with `--pretty`); `group` and the witness
//! check print their documented plain-text forms.  Exit codes: 0 success,
//! 1 parse/input error, 2 not an n-potent, 3 field violation,
//! 4 verification failure.

use std::io::Read;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::de::DeserializeOwned;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exactmat::CycMatrix;
use crate::kgroup::{class_of, group_structure, representative, KClass};
use crate::nhom::{apply_entrywise, check_nhom, NHomSpec};
use crate::npotent::{
    complementary, decompose, quadripotent_split_q4, random_npotent, recompose, tripotent_split,
    NPartition,
};
use crate::witness::{
    closeness_bound_check, from_similarity, normalize_algebraic, stable_similarity, Witness,
};

#[derive(Parser)]
#[command(name = "npk", version, about = "Exact n-potent matrix calculator over cyclotomic fields")]
struct Cli {
    /// Pretty-print JSON output (and human-readable summaries where noted)
    #[arg(long, global = true)]
    pretty: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct MatrixArg {
    /// Matrix JSON file ("-" for stdin)
    input: PathBuf,
}

#[derive(Subcommand)]
enum Command {
    /// Check whether a matrix is an n-potent (e^n = e)
    Verify {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        matrix: MatrixArg,
    },
    /// Decompose an n-potent into its n-partition of unity
    Decompose {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        matrix: MatrixArg,
    },
    /// Rebuild the n-potent from a partition file
    Recompose {
        /// Partition JSON file ("-" for stdin)
        input: PathBuf,
    },
    /// Complementary n-potent of size (n-1) * size(e)
    Complement {
        #[arg(long)]
        n: u32,
        #[command(flatten)]
        matrix: MatrixArg,
    },
    /// Split a tripotent into orthogonal idempotents (e1, e2) with e = e1 - e2
    Split3 {
        #[command(flatten)]
        matrix: MatrixArg,
    },
    /// Split a quadripotent over Q(i) into (e1, e2 + e3)
    Split4 {
        #[command(flatten)]
        matrix: MatrixArg,
    },
    /// Construct and verify equivalence witnesses
    Witness {
        #[command(subcommand)]
        op: WitnessOp,
    },
    /// K-class of an n-potent over a base field
    Class {
        #[arg(long)]
        n: u32,
        /// Base field conductor
        #[arg(long)]
        field: u64,
        #[command(flatten)]
        matrix: MatrixArg,
    },
    /// Group structure of the K-group over a base field
    Group {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        field: u64,
    },
    /// Block-diagonal n-potent realizing a class
    Representative {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        field: u64,
        /// Orbit values, comma-separated (one per Galois orbit)
        #[arg(long, value_delimiter = ',')]
        values: Vec<i64>,
    },
    /// Deterministic random n-potent with prescribed component ranks
    Random {
        #[arg(long)]
        n: u32,
        #[arg(long)]
        field: u64,
        #[arg(long)]
        size: usize,
        /// Component ranks r_0,...,r_{n-1}, comma-separated
        #[arg(long, value_delimiter = ',')]
        ranks: Vec<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the defining identity of an n-homomorphism spec
    NhomCheck {
        /// Spec JSON file ("-" for stdin)
        input: PathBuf,
    },
    /// Apply an n-homomorphism entrywise to a matrix
    NhomApply {
        /// Spec JSON file
        spec: PathBuf,
        #[command(flatten)]
        matrix: MatrixArg,
    },
    /// Run the full regression battery of computed facts
    CheckPaper {
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Subcommand)]
enum WitnessOp {
    /// Verify a witness file; prints VERIFIED or FAILED plus the first
    /// failing identity
    Check {
        /// Witness JSON file ("-" for stdin)
        input: PathBuf,
    },
    /// Build an algebraic witness from an n-potent and an invertible z
    FromSimilarity {
        #[arg(long)]
        n: u32,
        /// n-potent matrix JSON
        e: PathBuf,
        /// invertible matrix JSON
        z: PathBuf,
    },
    /// Replace an algebraic witness by its normalized pair
    Normalize {
        input: PathBuf,
    },
    /// Promote a normalized algebraic witness to a 2x2 block similarity
    Stable {
        input: PathBuf,
    },
    /// Numeric closeness bound check for a pair of n-potents
    Closeness {
        #[arg(long)]
        n: u32,
        e: PathBuf,
        f: PathBuf,
    },
}

fn read_input(path: &PathBuf) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn load<T: DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = read_input(path)?;
    Ok(serde_json::from_str(&text)?)
}

fn precision_bits() -> u32 {
    std::env::var("NPK_PRECISION_BITS")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(64)
}

struct Output {
    text: String,
    code: i32,
}

fn emit_json<T: serde::Serialize>(value: &T, pretty: bool) -> Result<Output> {
    let text = if pretty {
        serde_json::to_string_pretty(value)?
    } else {
        serde_json::to_string(value)?
    };
    Ok(Output { text, code: 0 })
}

fn run_command(cli: Cli) -> Result<Output> {
    let pretty = cli.pretty;
    match cli.command {
        Command::Verify { n, matrix } => {
            let m: CycMatrix = load(&matrix.input)?;
            let ok = m.is_npotent(n)?;
            let text = if pretty {
                format!("n-potent: {ok}")
            } else {
                serde_json::to_string(&json!({ "n": n, "npotent": ok }))?
            };
            Ok(Output { text, code: if ok { 0 } else { 2 } })
        }
        Command::Decompose { n, matrix } => {
            let m: CycMatrix = load(&matrix.input)?;
            let p = decompose(&m, n)?;
            emit_json(&p, pretty)
        }
        Command::Recompose { input } => {
            let p: NPartition = load(&input)?;
            let m = recompose(&p)?;
            emit_json(&m, pretty)
        }
        Command::Complement { n, matrix } => {
            let m: CycMatrix = load(&matrix.input)?;
            emit_json(&complementary(&m, n)?, pretty)
        }
        Command::Split3 { matrix } => {
            let m: CycMatrix = load(&matrix.input)?;
            let (e1, e2) = tripotent_split(&m)?;
            emit_json(&json!({ "e1": e1, "e2": e2 }), pretty)
        }
        Command::Split4 { matrix } => {
            let m: CycMatrix = load(&matrix.input)?;
            let (e1, e23) = quadripotent_split_q4(&m)?;
            let traces = [e1.trace_int()?.to_string(), e23.trace_int()?.to_string()];
            emit_json(&json!({ "e1": e1, "e23": e23, "traces": traces }), pretty)
        }
        Command::Witness { op } => run_witness(op, pretty),
        Command::Class { n, field, matrix } => {
            let m: CycMatrix = load(&matrix.input)?;
            let c = class_of(&m, n, field)?;
            emit_json(
                &json!({ "orbits": c.orbits().orbits(), "values": c.values() }),
                pretty,
            )
        }
        Command::Group { n, field } => {
            let g = group_structure(n, field);
            Ok(Output { text: g.to_string(), code: 0 })
        }
        Command::Representative { n, field, values } => {
            let target = KClass::new(n, field, values)?;
            emit_json(&representative(&target)?, pretty)
        }
        Command::Random { n, field, size, ranks, seed } => {
            let e = random_npotent(n, field, size, &ranks, seed)?;
            emit_json(&e, pretty)
        }
        Command::NhomCheck { input } => {
            let spec: NHomSpec = load(&input)?;
            let ok = check_nhom(&spec)?;
            let text = if pretty {
                format!("n-homomorphism: {ok}")
            } else {
                serde_json::to_string(&json!({ "n": spec.n(), "nhom": ok }))?
            };
            Ok(Output { text, code: 0 })
        }
        Command::NhomApply { spec, matrix } => {
            let spec: NHomSpec = load(&spec)?;
            let m: CycMatrix = load(&matrix.input)?;
            emit_json(&apply_entrywise(&spec, &m)?, pretty)
        }
        Command::CheckPaper { seed } => {
            let reports = crate::checks::run_all(seed);
            let all_passed = reports.iter().all(|r| r.passed);
            let text = if pretty {
                let mut lines: Vec<String> = reports
                    .iter()
                    .map(|r| {
                        format!(
                            "{} {:<20} ({:>6.2}s)  {}",
                            if r.passed { "PASS" } else { "FAIL" },
                            r.name,
                            r.seconds,
                            r.detail
                        )
                    })
                    .collect();
                lines.push(format!(
                    "{}/{} checks passed",
                    reports.iter().filter(|r| r.passed).count(),
                    reports.len()
                ));
                lines.join("\n")
            } else {
                serde_json::to_string(&reports)?
            };
            Ok(Output { text, code: if all_passed { 0 } else { 4 } })
        }
    }
}

fn run_witness(op: WitnessOp, pretty: bool) -> Result<Output> {
    match op {
        WitnessOp::Check { input } => {
            let w: Witness = load(&input)?;
            match w.verify() {
                Ok(()) => Ok(Output { text: "VERIFIED".into(), code: 0 }),
                Err(Error::VerificationFailed(identity)) => {
                    Ok(Output { text: format!("FAILED: {identity}"), code: 4 })
                }
                Err(e) => Err(e),
            }
        }
        WitnessOp::FromSimilarity { n, e, z } => {
            let e: CycMatrix = load(&e)?;
            let z: CycMatrix = load(&z)?;
            let w = from_similarity(&e, &z, n)?;
            emit_json(&Witness::Algebraic(w), pretty)
        }
        WitnessOp::Normalize { input } => {
            let w: Witness = load(&input)?;
            let Witness::Algebraic(w) = w else {
                return Err(Error::InvalidWitness("normalize expects an algebraic witness".into()));
            };
            let nw = normalize_algebraic(w.e(), w.f(), w.a(), w.b(), w.n())?;
            emit_json(&Witness::Algebraic(nw), pretty)
        }
        WitnessOp::Stable { input } => {
            let w: Witness = load(&input)?;
            let Witness::Algebraic(w) = w else {
                return Err(Error::InvalidWitness("stable expects an algebraic witness".into()));
            };
            let sim = stable_similarity(&w)?;
            emit_json(&Witness::Similarity(sim), pretty)
        }
        WitnessOp::Closeness { n, e, f } => {
            let e: CycMatrix = load(&e)?;
            let f: CycMatrix = load(&f)?;
            let report = closeness_bound_check(&e, &f, n, precision_bits())?;
            emit_json(&report, pretty)
        }
    }
}

/// Entry point used by the binary; returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return code;
        }
    };
    match run_command(cli) {
        Ok(out) => {
            println!("{}", out.text);
            out.code
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

