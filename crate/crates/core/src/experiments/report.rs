use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use super::{ExperimentConfig, ExperimentError};
use crate::bounds::{ideal_probability, Enclosure, ZetaContext};
use crate::numeric::wilson_radius;
use crate::sampling::{SamplerKind, RNG_ALGORITHM};

pub const STREAM_LAYOUT: &str = "stream = n * 2^32 + parallelepiped index";

/// Everything needed to regenerate the random choices of a run.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Provenance {
    pub algorithm: String,
    pub seed: u64,
    pub stream_layout: String,
    pub sampler: SamplerKind,
    pub workers: usize,
    pub version: String,
}

impl Provenance {
    pub fn of(cfg: &ExperimentConfig) -> Self {
        Provenance {
            algorithm: RNG_ALGORITHM.to_string(),
            seed: cfg.seed,
            stream_layout: STREAM_LAYOUT.to_string(),
            sampler: cfg.sampler,
            workers: cfg.workers,
            version: env!("CARGO_PKG_VERSION").to_string(),
        }
    }
}

/// Result for one parallelepiped.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShardOutcome {
    pub shard: u32,
    pub stream: u64,
    pub successes: u64,
    pub samples: u64,
    /// Degenerate generator sets redrawn before this parallelepiped.
    pub resamples: u32,
    pub det: String,
}

impl ShardOutcome {
    pub fn frequency(&self) -> f64 {
        self.successes as f64 / self.samples as f64
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub n: u32,
    pub m: u32,
    pub shards: Vec<ShardOutcome>,
    pub frequencies: Vec<f64>,
    pub average: f64,
    pub minimum: f64,
    pub maximum: f64,
    pub successes: u64,
    pub trials: u64,
    /// 95% Wilson half-width for the pooled frequency.
    pub wilson_radius: f64,
    pub ideal: Enclosure,
    pub config: ExperimentConfig,
    pub provenance: Provenance,
}

impl ExperimentReport {
    pub fn from_shards(cfg: &ExperimentConfig, n: u32, m: u32, mut shards: Vec<ShardOutcome>, ideal: Enclosure) -> Self {
        shards.sort_by_key(|s| s.shard);
        let frequencies: Vec<f64> = shards.iter().map(ShardOutcome::frequency).collect();
        let successes = shards.iter().map(|s| s.successes).sum();
        let trials = shards.iter().map(|s| s.samples).sum();
        let (minimum, maximum) = frequencies
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &f| (lo.min(f), hi.max(f)));
        let average = if trials == 0 { 0.0 } else { successes as f64 / trials as f64 };
        ExperimentReport {
            n,
            m,
            frequencies,
            average,
            minimum: if shards.is_empty() { 0.0 } else { minimum },
            maximum: if shards.is_empty() { 0.0 } else { maximum },
            successes,
            trials,
            wilson_radius: wilson_radius(successes, trials),
            ideal,
            config: cfg.clone(),
            provenance: Provenance::of(cfg),
            shards,
        }
    }

    /// Distance from the average to the ideal enclosure (0 inside it).
    pub fn deviation(&self) -> f64 {
        let (lo, hi) = (self.ideal.lo_f64(), self.ideal.hi_f64());
        (lo - self.average).max(self.average - hi).max(0.0)
    }

    /// Average within `k` Wilson radii of the ideal value.
    pub fn within(&self, k: f64) -> bool {
        self.deviation() <= k * self.wilson_radius
    }

    /// Maximal minus minimal per-parallelepiped frequency.
    pub fn spread(&self) -> f64 {
        self.maximum - self.minimum
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    config: ExperimentConfig,
    provenance: Provenance,
}

#[derive(Serialize, Deserialize)]
struct Row {
    n: u32,
    m: u32,
    shard: u32,
    stream: u64,
    successes: u64,
    samples: u64,
    frequency: f64,
    resamples: u32,
    det: String,
}

/// One CSV row per parallelepiped after a `#` line holding the JSON config
/// and provenance. All reports must share one configuration.
pub fn write_reports_csv<W: Write>(mut w: W, reports: &[ExperimentReport]) -> Result<(), ExperimentError> {
    let Some(first) = reports.first() else {
        return Err(ExperimentError::Parse("no reports to write".into()));
    };
    let header = Header {
        config: first.config.clone(),
        provenance: first.provenance.clone(),
    };
    writeln!(w, "# {}", serde_json::to_string(&header)?)?;
    let mut out = csv::Writer::from_writer(w);
    for r in reports {
        for s in &r.shards {
            out.serialize(Row {
                n: r.n,
                m: r.m,
                shard: s.shard,
                stream: s.stream,
                successes: s.successes,
                samples: s.samples,
                frequency: s.frequency(),
                resamples: s.resamples,
                det: s.det.clone(),
            })?;
        }
    }
    out.flush()?;
    Ok(())
}

/// Inverse of [`write_reports_csv`]; summaries and ideal values are recomputed.
pub fn read_reports_csv<R: BufRead>(mut r: R) -> Result<Vec<ExperimentReport>, ExperimentError> {
    let mut first = String::new();
    r.read_line(&mut first)?;
    let json = first
        .trim_end()
        .strip_prefix("# ")
        .ok_or_else(|| ExperimentError::Parse("missing '# ' header line".into()))?;
    let header: Header = serde_json::from_str(json)?;
    let ctx = ZetaContext::new(header.config.precision);
    let mut groups: Vec<(u32, u32, Vec<ShardOutcome>)> = Vec::new();
    for row in csv::Reader::from_reader(r).deserialize() {
        let row: Row = row?;
        let shard = ShardOutcome {
            shard: row.shard,
            stream: row.stream,
            successes: row.successes,
            samples: row.samples,
            resamples: row.resamples,
            det: row.det,
        };
        match groups.last_mut() {
            Some((n, m, v)) if *n == row.n && *m == row.m => v.push(shard),
            _ => groups.push((row.n, row.m, vec![shard])),
        }
    }
    groups
        .into_iter()
        .map(|(n, m, shards)| {
            let ideal = ideal_probability(n, m, &ctx)?;
            let mut rep = ExperimentReport::from_shards(&header.config, n, m, shards, ideal);
            rep.provenance = header.provenance.clone();
            Ok(rep)
        })
        .collect()
}
