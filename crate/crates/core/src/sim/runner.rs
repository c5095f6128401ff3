use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::sim::result::TrialBatchResult;
use crate::sim::rng::{rng_spawn, TrialRng};

/// Trials per work unit. Fixed so that the merge order, and hence every
/// floating-point accumulation, does not depend on the thread count.
const CHUNK: u64 = 1024;

/// How many trials to run, from which seed, on how many threads.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunConfig {
    pub trials: u64,
    pub seed: u64,
    /// `None` uses the global rayon pool.
    pub workers: Option<usize>,
}

impl RunConfig {
    pub fn new(trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            workers: None,
        }
    }

    pub fn with_workers(mut self, workers: usize) -> Self {
        self.workers = Some(workers);
        self
    }
}

/// Accumulator that can absorb another one.
pub(crate) trait Tally: Send {
    fn merge(&mut self, other: Self);
}

impl Tally for TrialBatchResult {
    fn merge(&mut self, other: Self) {
        self.trials += other.trials;
        self.errors += other.errors;
        self.ties += other.ties;
        for (a, b) in self
            .per_decoder_errors
            .iter_mut()
            .zip(other.per_decoder_errors)
        {
            *a += b;
        }
    }
}

impl<T: Tally> Tally for Vec<T> {
    fn merge(&mut self, other: Self) {
        for (a, b) in self.iter_mut().zip(other) {
            a.merge(b);
        }
    }
}

/// Runs `trial` once per trial index with its own generator and merges the
/// chunk accumulators in index order.
pub(crate) fn run_trials<A, I, F>(cfg: &RunConfig, init: I, trial: F) -> Result<A>
where
    A: Tally,
    I: Fn() -> A + Sync,
    F: Fn(&mut TrialRng, &mut A) -> Result<()> + Sync,
{
    if cfg.trials < 1 {
        return Err(invalid("trials", "must be at least 1"));
    }
    let n_chunks = cfg.trials.div_ceil(CHUNK);
    let work = || {
        (0..n_chunks)
            .into_par_iter()
            .map(|c| {
                let mut acc = init();
                for i in c * CHUNK..((c + 1) * CHUNK).min(cfg.trials) {
                    let mut rng = rng_spawn(cfg.seed, i);
                    trial(&mut rng, &mut acc)?;
                }
                Ok(acc)
            })
            .collect::<Result<Vec<A>>>()
    };
    let parts = match cfg.workers {
        Some(0) => return Err(invalid("workers", "must be at least 1")),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| invalid("workers", e.to_string()))?
            .install(work)?,
        None => work()?,
    };
    let mut acc = init();
    for p in parts {
        acc.merge(p);
    }
    Ok(acc)
}
