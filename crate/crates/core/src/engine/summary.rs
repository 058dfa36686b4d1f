use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{Experiment, TrialConfig, TrialRecord};

/// Partial sums over a set of trials. Merging is order-sensitive only
/// through floating-point addition, so merge in batch order.
#[derive(Clone, Debug, PartialEq)]
pub struct Tally {
    bin_width_deg: f64,
    arity: usize,
    trials: u64,
    corr_total: f64,
    corr_sums: Vec<f64>,
    prediction_sums: Vec<f64>,
    counts: Vec<u64>,
    outcome_sums: [i64; 4],
    max_event_deviation: f64,
}

fn bin_count(width: f64) -> usize {
    libm::ceil(360.0 / width) as usize
}

impl Tally {
    /// Empty tally for `cfg`.
    pub fn new(cfg: &TrialConfig) -> Self {
        let n = bin_count(cfg.bin_width_deg);
        Self {
            bin_width_deg: cfg.bin_width_deg,
            arity: cfg.experiment.arity(),
            trials: 0,
            corr_total: 0.0,
            corr_sums: vec![0.0; n],
            prediction_sums: vec![0.0; n],
            counts: vec![0; n],
            outcome_sums: [0; 4],
            max_event_deviation: 0.0,
        }
    }

    /// Bin holding a combined angle, after folding into `[0, 360)`.
    pub fn bin_of(&self, angle_deg: f64) -> usize {
        let folded = libm::fmod(angle_deg.abs(), 360.0);
        ((folded / self.bin_width_deg) as usize).min(self.counts.len() - 1)
    }

    /// Adds one event and its predicted value.
    pub fn push(&mut self, rec: &TrialRecord, prediction: f64) {
        let b = self.bin_of(rec.angle_deg);
        self.trials += 1;
        self.corr_total += rec.corr;
        self.corr_sums[b] += rec.corr;
        self.prediction_sums[b] += prediction;
        self.counts[b] += 1;
        for (s, &o) in self.outcome_sums.iter_mut().zip(rec.outcomes()) {
            *s += i64::from(o);
        }
        self.max_event_deviation = self.max_event_deviation.max((rec.corr - prediction).abs());
    }

    /// Adds another tally built with the same configuration.
    pub fn merge(&mut self, other: &Tally) {
        self.trials += other.trials;
        self.corr_total += other.corr_total;
        for (a, b) in self.corr_sums.iter_mut().zip(&other.corr_sums) {
            *a += b;
        }
        for (a, b) in self.prediction_sums.iter_mut().zip(&other.prediction_sums) {
            *a += b;
        }
        for (a, b) in self.counts.iter_mut().zip(&other.counts) {
            *a += b;
        }
        for (a, b) in self.outcome_sums.iter_mut().zip(other.outcome_sums) {
            *a += b;
        }
        self.max_event_deviation = self.max_event_deviation.max(other.max_event_deviation);
    }

    /// Events seen.
    pub fn trials(&self) -> u64 {
        self.trials
    }

    /// Integer outcome sums per detector.
    pub fn outcome_sums(&self) -> &[i64] {
        &self.outcome_sums[..self.arity]
    }
}

/// One histogram bin.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BinSummary {
    /// Bin centre in degrees.
    pub angle_deg: f64,
    /// Mean per-event correlation.
    pub mean_corr: f64,
    /// Mean of `-cos` of each event's combined angle.
    pub mean_prediction: f64,
    /// Events in the bin.
    pub count: u64,
}

/// Aggregates of a run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrelationSummary {
    /// Experiment type.
    pub experiment: Experiment,
    /// Number of trials.
    pub trials: u64,
    /// Effective seed.
    pub seed: u64,
    /// Bin width in degrees.
    pub bin_width_deg: f64,
    /// Non-empty bins in angle order.
    pub bins: Vec<BinSummary>,
    /// Mean outcome per detector, keyed `A`, `B`, ...
    pub ave_outcomes: BTreeMap<String, f64>,
    /// Mean correlation over all trials.
    pub mean_corr: f64,
    /// Largest `|corr - (-cos angle)|` over all events.
    pub max_event_deviation: f64,
}

impl CorrelationSummary {
    /// Builds the summary from a complete tally.
    pub fn from_tally(cfg: &TrialConfig, t: &Tally) -> Self {
        let bins = (0..t.counts.len())
            .filter(|&b| t.counts[b] > 0)
            .map(|b| {
                let n = t.counts[b] as f64;
                BinSummary {
                    angle_deg: (b as f64 + 0.5) * t.bin_width_deg,
                    mean_corr: t.corr_sums[b] / n,
                    mean_prediction: t.prediction_sums[b] / n,
                    count: t.counts[b],
                }
            })
            .collect();
        let m = t.trials.max(1) as f64;
        let ave_outcomes =
            cfg.experiment.labels().iter().zip(t.outcome_sums()).map(|(l, &s)| (l.to_string(), s as f64 / m)).collect();
        Self {
            experiment: cfg.experiment,
            trials: t.trials,
            seed: cfg.seed,
            bin_width_deg: t.bin_width_deg,
            bins,
            ave_outcomes,
            mean_corr: t.corr_total / m,
            max_event_deviation: t.max_event_deviation,
        }
    }
}
