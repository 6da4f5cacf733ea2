//! Experiment drivers: the unimodularity tables, coprimality and bounds
//! tables, and exact checks of the counting lemmas.

mod checks;
mod report;
mod tables;
mod unimodular;

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bounds::BoundsError;
use crate::groupgen::GroupError;
use crate::lattice::LatticeError;
use crate::sampling::{SamplerKind, SamplingError, DEFAULT_MAX_REJECTS};

pub use checks::{
    desk_lemma_instances, desk_tv_instances, fullrank_threshold, run_fullrank_check, run_lemma_verification, run_tv_check,
    FullrankReport, HyperplaneCheck, LemmaCheck, LemmaReport, TvInstance, TvReport, FULLRANK_STREAM,
};
pub use report::{read_reports_csv, write_reports_csv, ExperimentReport, Provenance, ShardOutcome, STREAM_LAYOUT};
pub use tables::{
    bounds_table_csv, coprime_table_csv, run_bounds_table, run_coprime_table, BoundsRow, CoprimeRow, CoprimeTable,
    COPRIME_CLAIM,
};
pub use unimodular::{run_unimodular, run_unimodular_experiment, stream_id};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("n = {n}, parallelepiped {shard} (stream {stream}): {source}")]
    Shard {
        n: u32,
        shard: u32,
        stream: u64,
        #[source]
        source: SamplingError,
    },
    #[error(transparent)]
    Sampling(#[from] SamplingError),
    #[error(transparent)]
    Bounds(#[from] BoundsError),
    #[error(transparent)]
    Lattice(#[from] LatticeError),
    #[error(transparent)]
    Group(#[from] GroupError),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed report: {0}")]
    Parse(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Unimodular,
    Coprime,
    BoundsTable,
    LemmaVerify,
    TvCheck,
    FullrankCheck,
}

/// Number of columns `m` as a function of `n`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MPolicy {
    /// `m = n + k`
    Offset(u32),
    /// the same `m` for every `n`
    Fixed(u32),
}

impl Default for MPolicy {
    fn default() -> Self {
        MPolicy::Offset(1)
    }
}

impl MPolicy {
    pub fn columns(&self, n: u32) -> u32 {
        match *self {
            MPolicy::Offset(k) => n + k,
            MPolicy::Fixed(m) => m,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    pub n: Vec<u32>,
    /// Generator coordinates are drawn from `[-C, C]`.
    pub c: i128,
    /// Parallelepipeds per `n`.
    pub reps: u32,
    /// Matrices per parallelepiped.
    pub samples: u32,
    pub m: MPolicy,
    pub seed: u64,
    pub workers: usize,
    pub sampler: SamplerKind,
    pub max_rejects: u64,
    /// Decimal digits for the zeta enclosures.
    pub precision: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            kind: ExperimentKind::Unimodular,
            n: vec![1, 2, 3, 4],
            c: 10_000,
            reps: 100,
            samples: 10_000,
            m: MPolicy::default(),
            seed: 0,
            workers: 1,
            sampler: SamplerKind::Rejection,
            max_rejects: DEFAULT_MAX_REJECTS,
            precision: 30,
            out: None,
        }
    }
}

impl ExperimentConfig {
    /// Full protocol: 1000 parallelepipeds of 10000 matrices, `C = 10^18`,
    /// `n <= 15`. Rejection is hopeless for large `n`, so the coset sampler
    /// is selected.
    pub fn paper_scale() -> Self {
        ExperimentConfig {
            n: (1..=15).collect(),
            c: 1_000_000_000_000_000_000,
            reps: 1000,
            samples: 10_000,
            sampler: SamplerKind::Coset,
            ..Default::default()
        }
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        let bad = |msg: &str| Err(ExperimentError::Config(msg.to_string()));
        if self.n.is_empty() || self.n.contains(&0) {
            return bad("n values must be at least 1");
        }
        if self.c < 1 {
            return bad("C must be at least 1");
        }
        if self.reps == 0 || self.samples == 0 || self.workers == 0 || self.max_rejects == 0 {
            return bad("reps, samples, workers and max_rejects must be at least 1");
        }
        if self.precision == 0 {
            return bad("precision must be at least 1");
        }
        if let Some(&n) = self.n.iter().find(|&&n| self.m.columns(n) < n) {
            return Err(ExperimentError::Config(format!("m = {} is below n = {n}", self.m.columns(n))));
        }
        Ok(())
    }
}

/// Parses `"3"`, `"1..4"` (inclusive), `"1..=4"` or `"1,2,5"`.
pub fn parse_n_list(s: &str) -> Result<Vec<u32>, String> {
    let s = s.trim();
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    if let Some((a, b)) = s.split_once("..") {
        let (a, b) = (num(a)?, num(b.trim_start_matches('='))?);
        if a > b {
            return Err(format!("empty range {s:?}"));
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}
