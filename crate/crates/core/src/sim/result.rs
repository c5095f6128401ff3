use serde::{Deserialize, Serialize};

/// Error counts from a batch of end-to-end trials.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TrialBatchResult {
    pub trials: u64,
    /// Trials in which every decoder exceeded the distortion threshold.
    pub errors: u64,
    pub per_decoder_errors: Vec<u64>,
    /// Exact score ties seen by any selection.
    pub ties: u64,
}

impl TrialBatchResult {
    pub fn new(decoders: usize) -> Self {
        Self {
            per_decoder_errors: vec![0; decoders],
            ..Self::default()
        }
    }

    pub fn p_hat(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        self.errors as f64 / self.trials as f64
    }

    /// Binomial standard error `sqrt(p(1-p)/n)`.
    pub fn stderr(&self) -> f64 {
        if self.trials == 0 {
            return 0.0;
        }
        let p = self.p_hat();
        (p * (1.0 - p) / self.trials as f64).sqrt()
    }

    /// Whether `p_hat <= bound + sigmas * stderr`.
    pub fn within(&self, bound: f64, sigmas: f64) -> bool {
        self.p_hat() <= bound + sigmas * self.stderr()
    }
}

/// Two-sample z statistic for the difference of two error rates.
pub fn two_sample_z(a: &TrialBatchResult, b: &TrialBatchResult) -> f64 {
    let diff = a.p_hat() - b.p_hat();
    let se = (a.stderr().powi(2) + b.stderr().powi(2)).sqrt();
    if se == 0.0 {
        if diff == 0.0 {
            0.0
        } else {
            diff.signum() * f64::INFINITY
        }
    } else {
        diff / se
    }
}

/// Mismatch statistics for one conditioning cell of a matching-lemma run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MismatchCell {
    /// Conditioning input symbol, absent for the unconditional lemma.
    pub x: Option<usize>,
    /// The encoder's selected symbol.
    pub u: usize,
    pub count: u64,
    pub mismatches: u64,
    /// Mean of the lemma's right-hand side over the trials in this cell.
    pub rhs: f64,
}

impl MismatchCell {
    pub fn rate(&self) -> f64 {
        if self.count == 0 {
            0.0
        } else {
            self.mismatches as f64 / self.count as f64
        }
    }

    pub fn stderr(&self) -> f64 {
        if self.count == 0 {
            return 0.0;
        }
        let r = self.rate();
        (r * (1.0 - r) / self.count as f64).sqrt()
    }

    pub fn within(&self, sigmas: f64) -> bool {
        self.rate() <= self.rhs + sigmas * self.stderr()
    }
}

/// Outcome of a matching-lemma harness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MismatchReport {
    pub trials: u64,
    pub mismatches: u64,
    /// Right-hand side averaged over all trials.
    pub rhs: f64,
    pub ties: u64,
    /// Cells the encoder selected at least once.
    pub cells: Vec<MismatchCell>,
}

impl MismatchReport {
    pub fn rate(&self) -> f64 {
        self.mismatches as f64 / self.trials.max(1) as f64
    }

    pub fn all_within(&self, sigmas: f64) -> bool {
        self.cells.iter().all(|c| c.within(sigmas))
    }
}
