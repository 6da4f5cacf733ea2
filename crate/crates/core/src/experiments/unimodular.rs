use rayon::prelude::*;

use super::report::{ExperimentReport, ShardOutcome};
use super::{ExperimentConfig, ExperimentError};
use crate::bounds::{ideal_probability, ZetaContext};
use crate::exactmat::is_unimodular_i128;
use crate::sampling::{random_parallelepiped, IntegerPointSampler, RngStream, SamplingError};

/// Stream of parallelepiped `shard` for dimension `n`: `n * 2^32 + shard`.
pub fn stream_id(n: u32, shard: u32) -> u64 {
    ((n as u64) << 32) | shard as u64
}

fn run_shard(cfg: &ExperimentConfig, n: u32, m: u32, shard: u32) -> Result<ShardOutcome, SamplingError> {
    let stream = stream_id(n, shard);
    let mut rng = RngStream::new(cfg.seed, stream);
    let (p, resamples) = random_parallelepiped(n as usize, cfg.c, &mut rng)?;
    let mut sampler = IntegerPointSampler::new(cfg.sampler, &p, cfg.max_rejects);
    let (n, m) = (n as usize, m as usize);
    let mut entries = vec![0i128; n * m];
    let mut successes = 0u64;
    for _ in 0..cfg.samples {
        for j in 0..m {
            let z = sampler.sample(&mut rng)?;
            for i in 0..n {
                entries[i * m + j] = z[i];
            }
        }
        if is_unimodular_i128(n, m, &entries) {
            successes += 1;
        }
    }
    Ok(ShardOutcome {
        shard,
        stream,
        successes,
        samples: cfg.samples as u64,
        resamples,
        det: p.det().to_string(),
    })
}

/// One row of the table: `reps` parallelepipeds for a single `n`.
pub fn run_unimodular(cfg: &ExperimentConfig, n: u32, ctx: &ZetaContext) -> Result<ExperimentReport, ExperimentError> {
    cfg.validate()?;
    let m = cfg.m.columns(n);
    if m < n {
        return Err(ExperimentError::Config(format!("m = {m} is below n = {n}")));
    }
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.workers)
        .build()
        .map_err(|e| ExperimentError::Config(e.to_string()))?;
    let shards = pool.install(|| {
        (0..cfg.reps)
            .into_par_iter()
            .map(|shard| {
                run_shard(cfg, n, m, shard).map_err(|source| ExperimentError::Shard {
                    n,
                    shard,
                    stream: stream_id(n, shard),
                    source,
                })
            })
            .collect::<Result<Vec<_>, _>>()
    })?;
    let ideal = ideal_probability(n, m, ctx)?;
    Ok(ExperimentReport::from_shards(cfg, n, m, shards, ideal))
}

/// Every `n` of the configuration, in order.
pub fn run_unimodular_experiment(cfg: &ExperimentConfig) -> Result<Vec<ExperimentReport>, ExperimentError> {
    cfg.validate()?;
    let ctx = ZetaContext::new(cfg.precision);
    cfg.n.iter().map(|&n| run_unimodular(cfg, n, &ctx)).collect()
}
