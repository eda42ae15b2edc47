//! Verification pipeline: per-pair checks, corpus runs, reports and file formats.

pub mod io;
mod pair;
mod run;

use std::path::Path;

use thiserror::Error;

pub use pair::{check_pair, check_reduction, derived_fact_probes, PairReport, ProbeResult, Violation};
pub use run::{
    check_table, read_checkpoint, read_report, run_corpus, run_tables, BoundsPolicy, Checkpoint,
    CorpusReport, MaxLenPolicy, Record, ReportHeader, RunConfig, RunOutcome, RunStatus,
};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Algebra(#[from] crate::Error),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed record: {0}")]
    Json(#[from] serde_json::Error),
    #[error("malformed input: {0}")]
    Format(String),
    #[error("cannot resume: {0}")]
    ResumeMismatch(String),
}

impl HarnessError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        HarnessError::Io {
            path: path.display().to_string(),
            source,
        }
    }
}
