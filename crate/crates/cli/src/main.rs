use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use absorb_core::absorption::{cond2_products, cond3_products, decide_theorem, derive_power_algebra};
use absorb_core::algebra::PowerCache;
use absorb_core::enumeration::{enumerate_tables_with, EnumConfig, Filters, GenMode, GenSpec, RNG_ALGORITHM};
use absorb_core::harness::io::{read_algebra, read_corpus, read_sub, write_algebra, write_corpus};
use absorb_core::harness::{check_pair, run_tables, BoundsPolicy, MaxLenPolicy, RunConfig, RunStatus};
use absorb_core::oracle::{DEFAULT_MAX_VARS, DEFAULT_MIN_MAX_LEN};
use absorb_core::{search_absorbing_term, Error, NaryTable, OracleBounds};
use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

const EXIT_COUNTEREXAMPLE: u8 = 2;
const EXIT_ERROR: u8 = 1;

#[derive(Parser)]
#[command(name = "absorb", version, about = "Absorption in finite semigroups and n-ary semigroups")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a subuniverse absorbs an algebra.
    Check {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        sub: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
        #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
        max_vars: usize,
        /// Longest word tried by the oracle [default: max(9, k)]
        #[arg(long)]
        max_len: Option<usize>,
    },
    /// Print the power profile and exponent of an algebra.
    Exponent {
        #[arg(long)]
        algebra: PathBuf,
    },
    /// Write a corpus of associative tables to a directory.
    Enumerate {
        #[arg(long)]
        size: usize,
        #[arg(long)]
        arity: usize,
        #[arg(long)]
        idempotent: bool,
        #[arg(long)]
        commutative: bool,
        /// Keep one table per isomorphism class.
        #[arg(long)]
        dedup: bool,
        #[arg(long, value_enum, default_value_t = Mode::Exhaustive)]
        mode: Mode,
        #[arg(long, required_if_eq("mode", "random"))]
        count: Option<usize>,
        #[arg(long, required_if_eq("mode", "random"))]
        seed: Option<u64>,
        #[arg(long, default_value_t = EnumConfig::default().max_free_cells)]
        max_free_cells: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check every proper closed subuniverse of every table in a corpus.
    VerifyConjecture {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        report: PathBuf,
        /// Checkpoint file; resumes from it when it exists [default: <REPORT>.ckpt, no resume]
        #[arg(long)]
        resume: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_MAX_VARS)]
        max_vars: usize,
        /// Fixed oracle length bound [default: max(9, k) per table]
        #[arg(long)]
        max_len: Option<usize>,
        /// Stop after this many tables, as if interrupted.
        #[arg(long, hide = true)]
        stop_after_tables: Option<usize>,
    },
    /// Tabulate the k-ary operation x1 x2 .. xk of an associative algebra.
    PowerAlgebra {
        #[arg(long)]
        algebra: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "snake_case")]
enum Method {
    Theorem,
    Oracle,
    Both,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Exhaustive,
    Power,
    Random,
}

fn header(command: &str, settings: Value) -> Value {
    json!({
        "tool": "absorb",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "settings": settings,
    })
}

fn print(value: &Value) -> Result<()> {
    let text = serde_json::to_string_pretty(value)?;
    match writeln!(io::stdout().lock(), "{text}") {
        Err(e) if e.kind() != io::ErrorKind::BrokenPipe => Err(e.into()),
        _ => Ok(()),
    }
}

fn check(algebra: PathBuf, sub: PathBuf, method: Method, max_vars: usize, max_len: Option<usize>) -> Result<u8> {
    let table = read_algebra(&algebra)?;
    let sub = read_sub(&sub, table.size())?;
    let k = PowerCache::new(&table).exponent();
    let bounds = OracleBounds::new(max_vars, max_len.unwrap_or(DEFAULT_MIN_MAX_LEN.max(k.unwrap_or(0))));
    let settings = json!({
        "algebra": algebra,
        "sub": sub.elements(),
        "method": method,
        "max_vars": max_vars,
        "max_len": bounds.max_len,
        "max_len_default": format!("max({DEFAULT_MIN_MAX_LEN}, k)"),
        "allow_trivial": bounds.allow_trivial,
    });
    let mut out = header("check", settings);
    let mut code = 0;
    match method {
        Method::Theorem => {
            let verdict = decide_theorem(&table, &sub)?;
            out["result"] = json!({
                "cond2": cond2_products(&table, &sub),
                "cond3": cond3_products(&table, &sub),
                "verdict": verdict,
            });
        }
        Method::Oracle => {
            out["result"] = json!({ "oracle": search_absorbing_term(&table, &sub, &bounds)? });
        }
        Method::Both => {
            let report = check_pair(&table, &sub, &bounds)?;
            if report.is_fatal() {
                code = EXIT_COUNTEREXAMPLE;
            }
            out["result"] = serde_json::to_value(&report)?;
        }
    }
    print(&out)?;
    Ok(code)
}

fn exponent(algebra: PathBuf) -> Result<u8> {
    let table = read_algebra(&algebra)?;
    let cache = PowerCache::new(&table);
    let mut out = header("exponent", json!({ "algebra": algebra }));
    out["result"] = json!({
        "arity": table.arity(),
        "size": table.size(),
        "exponent_k": cache.exponent(),
        "profiles": cache.profiles().collect::<Vec<_>>(),
    });
    print(&out)?;
    Ok(0)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    size: usize,
    arity: usize,
    filters: Filters,
    dedup: bool,
    mode: Mode,
    count: Option<usize>,
    seed: Option<u64>,
    max_free_cells: usize,
    out: PathBuf,
) -> Result<u8> {
    let mode = match mode {
        Mode::Exhaustive => GenMode::ExhaustiveBacktrack,
        Mode::Power => GenMode::FromBinaryPower,
        Mode::Random => GenMode::RandomFiltered {
            count: count.context("--count is required for random mode")?,
            seed: seed.context("--seed is required for random mode")?,
        },
    };
    let spec = GenSpec {
        size,
        arity,
        mode,
        filters,
        dedup,
    };
    let cfg = EnumConfig {
        max_free_cells,
        ..EnumConfig::default()
    };
    let generated = enumerate_tables_with(&spec, &cfg)?;
    let mut generator = json!({ "spec": spec, "config": cfg });
    if let GenMode::RandomFiltered { .. } = mode {
        generator["rng"] = RNG_ALGORITHM.into();
        generator["attempt_cap_exhausted"] = generated.attempt_cap_exhausted.into();
    }
    write_corpus(&out, generator.clone(), &generated.tables, generated.attempt_cap_exhausted)?;
    if generated.attempt_cap_exhausted {
        eprintln!(
            "warning: attempt cap reached after {} tables",
            generated.tables.len()
        );
    }
    let mut report = header("enumerate", json!({ "out": out, "generator": generator }));
    report["result"] = json!({ "tables": generated.tables.len() });
    print(&report)?;
    Ok(0)
}

fn verify_conjecture(
    corpus: PathBuf,
    report: PathBuf,
    resume: Option<PathBuf>,
    max_vars: usize,
    max_len: Option<usize>,
    stop_after_tables: Option<usize>,
) -> Result<u8> {
    let (generator, tables) = read_corpus(&corpus)?;
    let bounds = BoundsPolicy {
        max_vars,
        max_len: match max_len {
            Some(l) => MaxLenPolicy::Fixed(l),
            None => MaxLenPolicy::AtLeastExponent(DEFAULT_MIN_MAX_LEN),
        },
        allow_trivial: false,
    };
    let cfg = RunConfig {
        bounds,
        resume: resume.is_some(),
        checkpoint: resume,
        stop_after_tables,
    };
    let outcome = run_tables(generator, &tables, &report, &cfg)?;
    let Some(summary) = outcome.report else {
        eprintln!("stopped after {} of {} tables", outcome.tables_done, tables.len());
        return Ok(0);
    };
    let mut out = header("verify-conjecture", json!({ "corpus": corpus, "report": report, "bounds": bounds }));
    out["result"] = json!({
        "status": summary.status,
        "tables": summary.tables,
        "pairs": summary.pairs,
        "agreement_totals": summary.agreement_totals,
        "counterexamples": summary.counterexamples.len(),
        "conjecture_candidates": summary.conjecture_candidates.len(),
        "wall_time_secs": outcome.wall_time.as_secs_f64(),
    });
    print(&out)?;
    Ok(match summary.status {
        RunStatus::Consistent => 0,
        RunStatus::Counterexample => EXIT_COUNTEREXAMPLE,
    })
}

fn power_algebra(algebra: PathBuf, k: usize, out: PathBuf) -> Result<u8> {
    let table: NaryTable = read_algebra(&algebra)?;
    if !table.is_associative() {
        bail!(Error::NotAssociative);
    }
    let derived = derive_power_algebra(&table, k)?;
    write_algebra(&out, &derived)?;
    let mut report = header("power-algebra", json!({ "algebra": algebra, "k": k, "out": out }));
    report["result"] = json!({
        "arity": derived.arity(),
        "size": derived.size(),
        "idempotent": derived.is_idempotent(),
        "commutative": derived.is_commutative(),
    });
    print(&report)?;
    Ok(0)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Check {
            algebra,
            sub,
            method,
            max_vars,
            max_len,
        } => check(algebra, sub, method, max_vars, max_len),
        Command::Exponent { algebra } => exponent(algebra),
        Command::Enumerate {
            size,
            arity,
            idempotent,
            commutative,
            dedup,
            mode,
            count,
            seed,
            max_free_cells,
            out,
        } => enumerate(
            size,
            arity,
            Filters {
                idempotent,
                commutative,
            },
            dedup,
            mode,
            count,
            seed,
            max_free_cells,
            out,
        ),
        Command::VerifyConjecture {
            corpus,
            report,
            resume,
            max_vars,
            max_len,
            stop_after_tables,
        } => verify_conjecture(corpus, report, resume, max_vars, max_len, stop_after_tables),
        Command::PowerAlgebra { algebra, k, out } => power_algebra(algebra, k, out),
    }
}

fn main() -> ExitCode {
    // clap exits with 2 on usage errors, which is taken here
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { 0 });
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
