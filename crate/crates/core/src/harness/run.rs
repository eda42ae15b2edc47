//! Resumable corpus runs.
//!
//! The report is JSON Lines: a header record, one record per checked pair in
//! corpus order, then a summary record. A checkpoint written after every table
//! (write to a temporary file, then rename) stores how many tables are fully
//! reported and the report length at that point; a resumed run truncates the
//! report there and carries on with the next table.

use std::collections::BTreeMap;
use std::fs::{self, File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use super::pair::{check_pair, PairReport};
use super::HarnessError;
use crate::absorption::CaseTag;
use crate::algebra::{enumerate_subuniverses, NaryTable, PowerCache};
use crate::enumeration::{enumerate_tables, GenMode, GenSpec, RNG_ALGORITHM};
use crate::oracle::{Agreement, OracleBounds, DEFAULT_MAX_VARS, DEFAULT_MIN_MAX_LEN};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value", rename_all = "snake_case")]
pub enum MaxLenPolicy {
    Fixed(usize),
    /// `max(floor, k)`, with `floor` alone when there is no exponent.
    AtLeastExponent(usize),
}

/// Oracle bounds, resolved per table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundsPolicy {
    pub max_vars: usize,
    pub max_len: MaxLenPolicy,
    pub allow_trivial: bool,
}

impl Default for BoundsPolicy {
    fn default() -> Self {
        BoundsPolicy {
            max_vars: DEFAULT_MAX_VARS,
            max_len: MaxLenPolicy::AtLeastExponent(DEFAULT_MIN_MAX_LEN),
            allow_trivial: false,
        }
    }
}

impl BoundsPolicy {
    pub fn resolve(&self, table: &NaryTable) -> OracleBounds {
        let max_len = match self.max_len {
            MaxLenPolicy::Fixed(l) => l,
            MaxLenPolicy::AtLeastExponent(floor) => {
                floor.max(PowerCache::new(table).exponent().unwrap_or(0))
            }
        };
        OracleBounds {
            max_vars: self.max_vars,
            max_len,
            allow_trivial: self.allow_trivial,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportHeader {
    pub tool: String,
    pub version: String,
    /// Echo of whatever produced the corpus.
    pub corpus: serde_json::Value,
    pub table_count: usize,
    pub bounds: BoundsPolicy,
    pub subuniverses: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Consistent,
    Counterexample,
}

/// Final aggregate of a corpus run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorpusReport {
    pub corpus: serde_json::Value,
    pub tables: usize,
    pub pairs: usize,
    pub agreement_totals: BTreeMap<Agreement, usize>,
    pub case_totals: BTreeMap<CaseTag, usize>,
    /// Pairs with fatal violations.
    pub counterexamples: Vec<PairReport>,
    /// Re-checked conjectural-case pairs where the oracle beats condition 2.
    pub conjecture_candidates: Vec<PairReport>,
    pub status: RunStatus,
    pub version: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "record", rename_all = "snake_case")]
pub enum Record {
    Header(ReportHeader),
    Pair(Box<PairReport>),
    Summary(Box<CorpusReport>),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Checkpoint {
    pub tables_done: usize,
    pub report_bytes: u64,
    pub header_digest: String,
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    pub bounds: BoundsPolicy,
    /// Where to keep the checkpoint; defaults to `<report>.ckpt`.
    pub checkpoint: Option<PathBuf>,
    /// Continue from an existing checkpoint instead of starting over.
    pub resume: bool,
    /// Stop (as if killed) once this many tables are reported in total.
    pub stop_after_tables: Option<usize>,
}

#[derive(Debug, Clone)]
pub struct RunOutcome {
    /// `None` when the run stopped early.
    pub report: Option<CorpusReport>,
    pub tables_done: usize,
    pub wall_time: Duration,
}

#[derive(Default)]
struct Totals {
    pairs: usize,
    agreement: BTreeMap<Agreement, usize>,
    case: BTreeMap<CaseTag, usize>,
    counterexamples: Vec<PairReport>,
    candidates: Vec<PairReport>,
}

impl Totals {
    fn add(&mut self, r: &PairReport) {
        self.pairs += 1;
        *self.agreement.entry(r.agreement).or_default() += 1;
        *self.case.entry(r.case).or_default() += 1;
        if r.is_fatal() {
            self.counterexamples.push(r.clone());
        } else if r.is_candidate() {
            self.candidates.push(r.clone());
        }
    }
}

fn digest(s: &str) -> String {
    hex::encode(&Sha256::digest(s.as_bytes())[..16])
}

fn write_checkpoint(path: &Path, ckpt: &Checkpoint) -> Result<(), HarnessError> {
    let tmp = path.with_extension("ckpt.tmp");
    fs::write(&tmp, serde_json::to_vec(ckpt)?).map_err(|e| HarnessError::io(&tmp, e))?;
    fs::rename(&tmp, path).map_err(|e| HarnessError::io(path, e))
}

pub fn read_checkpoint(path: &Path) -> Result<Checkpoint, HarnessError> {
    let bytes = fs::read(path).map_err(|e| HarnessError::io(path, e))?;
    Ok(serde_json::from_slice(&bytes)?)
}

/// Checks every proper closed subuniverse of one table.
pub fn check_table(
    index: usize,
    table: &NaryTable,
    bounds: &BoundsPolicy,
) -> Result<Vec<PairReport>, HarnessError> {
    let resolved = bounds.resolve(table);
    enumerate_subuniverses(table, true)?
        .iter()
        .map(|s| {
            let mut r = check_pair(table, s, &resolved)?;
            r.table_index = index;
            Ok(r)
        })
        .collect()
}

/// Checks a corpus of tables and writes the report to `out`.
pub fn run_tables(
    corpus: serde_json::Value,
    tables: &[NaryTable],
    out: &Path,
    cfg: &RunConfig,
) -> Result<RunOutcome, HarnessError> {
    let started = Instant::now();
    let header = ReportHeader {
        tool: "absorb".into(),
        version: env!("CARGO_PKG_VERSION").into(),
        corpus: corpus.clone(),
        table_count: tables.len(),
        bounds: cfg.bounds,
        subuniverses: "all proper closed subuniverses, ascending mask".into(),
    };
    let header_line = serde_json::to_string(&Record::Header(header))?;
    let header_digest = digest(&header_line);
    let ckpt_path = cfg
        .checkpoint
        .clone()
        .unwrap_or_else(|| PathBuf::from(format!("{}.ckpt", out.display())));

    let mut totals = Totals::default();
    let (mut file, mut tables_done, mut bytes) = if cfg.resume && ckpt_path.exists() {
        let ckpt = read_checkpoint(&ckpt_path)?;
        if ckpt.header_digest != header_digest {
            return Err(HarnessError::ResumeMismatch(
                "checkpoint belongs to a different corpus or bounds".into(),
            ));
        }
        let file = OpenOptions::new()
            .read(true)
            .write(true)
            .open(out)
            .map_err(|e| HarnessError::io(out, e))?;
        let len = file.metadata().map_err(|e| HarnessError::io(out, e))?.len();
        if len < ckpt.report_bytes {
            return Err(HarnessError::ResumeMismatch(format!(
                "report is {len} bytes, checkpoint expects at least {}",
                ckpt.report_bytes
            )));
        }
        file.set_len(ckpt.report_bytes).map_err(|e| HarnessError::io(out, e))?;
        replay(out, &header_line, &mut totals)?;
        let file = OpenOptions::new()
            .append(true)
            .open(out)
            .map_err(|e| HarnessError::io(out, e))?;
        (file, ckpt.tables_done, ckpt.report_bytes)
    } else {
        let mut file = File::create(out).map_err(|e| HarnessError::io(out, e))?;
        writeln!(file, "{header_line}").map_err(|e| HarnessError::io(out, e))?;
        let bytes = header_line.len() as u64 + 1;
        write_checkpoint(
            &ckpt_path,
            &Checkpoint {
                tables_done: 0,
                report_bytes: bytes,
                header_digest: header_digest.clone(),
            },
        )?;
        (file, 0, bytes)
    };

    let stop = cfg.stop_after_tables.unwrap_or(usize::MAX);
    let chunk = rayon::current_num_threads().max(1) * 4;
    while tables_done < tables.len() {
        if tables_done >= stop {
            return Ok(RunOutcome {
                report: None,
                tables_done,
                wall_time: started.elapsed(),
            });
        }
        let end = (tables_done + chunk).min(tables.len()).min(stop);
        let batch: Vec<Vec<PairReport>> = (tables_done..end)
            .into_par_iter()
            .map(|i| check_table(i, &tables[i], &cfg.bounds))
            .collect::<Result<_, _>>()?;
        for reports in batch {
            let mut buf = String::new();
            for r in &reports {
                buf.push_str(&serde_json::to_string(&Record::Pair(Box::new(r.clone())))?);
                buf.push('\n');
                totals.add(r);
            }
            file.write_all(buf.as_bytes()).map_err(|e| HarnessError::io(out, e))?;
            file.flush().map_err(|e| HarnessError::io(out, e))?;
            bytes += buf.len() as u64;
            tables_done += 1;
            write_checkpoint(
                &ckpt_path,
                &Checkpoint {
                    tables_done,
                    report_bytes: bytes,
                    header_digest: header_digest.clone(),
                },
            )?;
        }
    }

    let status = if totals.counterexamples.is_empty() {
        RunStatus::Consistent
    } else {
        RunStatus::Counterexample
    };
    let report = CorpusReport {
        corpus,
        tables: tables.len(),
        pairs: totals.pairs,
        agreement_totals: totals.agreement,
        case_totals: totals.case,
        counterexamples: totals.counterexamples,
        conjecture_candidates: totals.candidates,
        status,
        version: env!("CARGO_PKG_VERSION").into(),
    };
    let line = serde_json::to_string(&Record::Summary(Box::new(report.clone())))?;
    writeln!(file, "{line}").map_err(|e| HarnessError::io(out, e))?;
    file.flush().map_err(|e| HarnessError::io(out, e))?;
    Ok(RunOutcome {
        report: Some(report),
        tables_done,
        wall_time: started.elapsed(),
    })
}

/// Rebuilds totals from the already-reported pairs of a truncated report.
fn replay(path: &Path, header_line: &str, totals: &mut Totals) -> Result<(), HarnessError> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    let mut lines = BufReader::new(file).lines();
    match lines.next() {
        Some(Ok(first)) if first == header_line => {}
        _ => {
            return Err(HarnessError::ResumeMismatch(
                "report header differs from the current run".into(),
            ))
        }
    }
    for line in lines {
        let line = line.map_err(|e| HarnessError::io(path, e))?;
        match serde_json::from_str(&line)? {
            Record::Pair(r) => totals.add(&r),
            _ => {
                return Err(HarnessError::ResumeMismatch(
                    "unexpected record before the checkpoint".into(),
                ))
            }
        }
    }
    Ok(())
}

/// Generates the corpus described by `spec` and runs it.
pub fn run_corpus(spec: &GenSpec, out: &Path, cfg: &RunConfig) -> Result<RunOutcome, HarnessError> {
    let generated = enumerate_tables(spec)?;
    let mut echo = serde_json::to_value(spec)?;
    if let GenMode::RandomFiltered { .. } = spec.mode {
        echo["rng"] = RNG_ALGORITHM.into();
        echo["attempt_cap_exhausted"] = generated.attempt_cap_exhausted.into();
    }
    run_tables(echo, &generated.tables, out, cfg)
}

/// Reads every record of a finished or partial report.
pub fn read_report(path: &Path) -> Result<Vec<Record>, HarnessError> {
    let file = File::open(path).map_err(|e| HarnessError::io(path, e))?;
    BufReader::new(file)
        .lines()
        .map(|l| {
            let l = l.map_err(|e| HarnessError::io(path, e))?;
            Ok(serde_json::from_str(&l)?)
        })
        .collect()
}
