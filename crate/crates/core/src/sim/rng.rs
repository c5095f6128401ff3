use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Generator used for every Monte-Carlo trial.
pub type TrialRng = ChaCha8Rng;

/// Per-trial generator derived from `(master_seed, trial_index)`.
///
/// The master seed fixes the ChaCha key and the trial index selects the
/// stream, so trial `i` draws the same numbers no matter which worker runs
/// it or in what order.
pub fn rng_spawn(master_seed: u64, trial_index: u64) -> TrialRng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(trial_index);
    rng
}
