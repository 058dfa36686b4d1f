//! Batch-parallel driver. Batches run on a rayon pool and are joined in
//! index order, so the result matches [`septenary_core::engine::run`] for
//! any thread count.

use rayon::prelude::*;
use septenary_core::engine::{assemble, simulate_batch, Run};
use septenary_core::{EngineError, TrialConfig};
use thiserror::Error;

/// Failures of a parallel run.
#[derive(Debug, Error)]
pub enum ParallelError {
    /// The simulation itself failed.
    #[error(transparent)]
    Engine(#[from] EngineError),
    /// The worker pool could not be built.
    #[error("cannot start worker pool: {0}")]
    Pool(#[from] rayon::ThreadPoolBuildError),
}

/// Runs `cfg` on `threads` workers, or on rayon's default count for `None`.
pub fn run_parallel(cfg: &TrialConfig, threads: Option<usize>) -> Result<Run, ParallelError> {
    cfg.validate()?;
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build()?;
    let batches = pool.install(|| {
        (0..cfg.batch_count()).into_par_iter().map(|b| simulate_batch(cfg, b)).collect::<Result<Vec<_>, _>>()
    })?;
    Ok(assemble(cfg, batches))
}

#[cfg(test)]
mod tests {
    use septenary_core::engine::run;
    use septenary_core::Experiment;

    use super::*;

    #[test]
    fn matches_sequential_run() {
        let cfg = TrialConfig { batch_size: 97, ..TrialConfig::new(Experiment::Ghz, 1000, 12) };
        assert_eq!(run_parallel(&cfg, Some(3)).unwrap(), run(&cfg).unwrap());
    }

    #[test]
    fn invalid_config_is_reported() {
        let cfg = TrialConfig::new(Experiment::Epr, 0, 1);
        assert!(matches!(run_parallel(&cfg, None), Err(ParallelError::Engine(EngineError::ZeroTrials))));
    }
}
