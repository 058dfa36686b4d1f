//! Event-by-event simulation of the two- and four-particle experiments.
//!
//! Trials are split into fixed-size batches. Batch `b` draws from
//! `ChaCha8Rng::seed_from_u64(seed)` on stream `b`, so any batch can be
//! recomputed alone and a parallel driver that reduces in batch order
//! reproduces [`run`] bit for bit.

mod chsh;
mod summary;

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{Multivector, Orientation};
use crate::conformal::{GeometryError, Vec3};
use crate::oracle::epr_expectation;
use crate::sampling::random_planar_unit;
use crate::spin::{make_pair_planar, measure, Detector, Side};

pub use chsh::{chsh_scan, ChshScan, CorrelationSource};
pub use summary::{BinSummary, CorrelationSummary, Tally};

/// Default number of trials per batch.
pub const DEFAULT_BATCH_SIZE: u64 = 4096;

/// Default histogram bin width in degrees.
pub const DEFAULT_BIN_WIDTH_DEG: f64 = 5.0;

/// Simulation failures.
#[derive(Clone, Debug, PartialEq, Error)]
pub enum EngineError {
    /// `trials` was zero.
    #[error("trials must be at least 1")]
    ZeroTrials,
    /// `batch_size` was zero.
    #[error("batch size must be at least 1")]
    ZeroBatchSize,
    /// Bin width not in `(0, 360]`.
    #[error("bin width must be in (0, 360] degrees, got {0}")]
    InvalidBinWidth(f64),
    /// Grid step not in `(0, 360]`.
    #[error("grid step must be in (0, 360] degrees, got {0}")]
    InvalidGridStep(f64),
    /// Wrong number of fixed settings.
    #[error("expected {expected} fixed angles, got {got}")]
    WrongSettingCount {
        /// Required count.
        expected: usize,
        /// Supplied count.
        got: usize,
    },
    /// A fixed setting was NaN or infinite.
    #[error("fixed angles must be finite")]
    NonFiniteSetting,
    /// Fewer than two detectors in a product.
    #[error("a paired product needs at least two detectors, got {0}")]
    EmptyInput(usize),
    /// Batch index past the end of the run.
    #[error("batch {index} out of range ({count} batches)")]
    BatchOutOfRange {
        /// Requested batch.
        index: u64,
        /// Number of batches.
        count: u64,
    },
    /// Invalid setting geometry.
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

/// Which experiment to simulate.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Experiment {
    /// Two particles, detectors `a, b`.
    Epr,
    /// Four particles, detectors `a, b, c, d`.
    Ghz,
}

impl Experiment {
    /// Number of detectors.
    pub const fn arity(self) -> usize {
        match self {
            Experiment::Epr => 2,
            Experiment::Ghz => 4,
        }
    }

    /// Outcome labels in detector order.
    pub const fn labels(self) -> &'static [&'static str] {
        match self {
            Experiment::Epr => &["A", "B"],
            Experiment::Ghz => &["A", "B", "C", "D"],
        }
    }
}

/// Where detector settings come from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SettingSource {
    /// Fresh uniform planar directions every trial.
    RandomPlanar,
    /// The same settings every trial, as recorded angles in degrees.
    ///
    /// For four particles the first and last angles follow the recorded-angle
    /// convention of [`ghz_recorded_angles`].
    Fixed {
        /// One angle per detector.
        angles_deg: Vec<f64>,
    },
}

/// Run parameters.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialConfig {
    /// Number of trials `m`.
    pub trials: u64,
    /// RNG seed.
    pub seed: u64,
    /// Experiment type.
    pub experiment: Experiment,
    /// Setting source.
    pub source: SettingSource,
    /// Histogram bin width in degrees.
    pub bin_width_deg: f64,
    /// Trials per batch. Changing it changes the random stream.
    pub batch_size: u64,
}

impl TrialConfig {
    /// Random planar settings with default binning and batching.
    pub fn new(experiment: Experiment, trials: u64, seed: u64) -> Self {
        Self {
            trials,
            seed,
            experiment,
            source: SettingSource::RandomPlanar,
            bin_width_deg: DEFAULT_BIN_WIDTH_DEG,
            batch_size: DEFAULT_BATCH_SIZE,
        }
    }

    /// Replaces the setting source with fixed angles.
    pub fn with_fixed_angles(mut self, angles_deg: Vec<f64>) -> Self {
        self.source = SettingSource::Fixed { angles_deg };
        self
    }

    /// Replaces the bin width.
    pub fn with_bin_width(mut self, deg: f64) -> Self {
        self.bin_width_deg = deg;
        self
    }

    /// Checks every field.
    pub fn validate(&self) -> Result<(), EngineError> {
        if self.trials == 0 {
            return Err(EngineError::ZeroTrials);
        }
        if self.batch_size == 0 {
            return Err(EngineError::ZeroBatchSize);
        }
        let w = self.bin_width_deg;
        if !(w.is_finite() && w > 0.0 && w <= 360.0) {
            return Err(EngineError::InvalidBinWidth(w));
        }
        if let SettingSource::Fixed { angles_deg } = &self.source {
            let expected = self.experiment.arity();
            if angles_deg.len() != expected {
                return Err(EngineError::WrongSettingCount { expected, got: angles_deg.len() });
            }
            if angles_deg.iter().any(|a| !a.is_finite()) {
                return Err(EngineError::NonFiniteSetting);
            }
        }
        Ok(())
    }

    /// Number of batches.
    pub fn batch_count(&self) -> u64 {
        self.trials.div_ceil(self.batch_size.max(1))
    }
}

/// One simulated event.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    /// Trial index `k`, from 0.
    pub index: u64,
    /// Coin value `λ`.
    pub lambda: Orientation,
    /// Recorded azimuths in degrees; only the first `arity` are used.
    pub phis_deg: [f64; 4],
    /// Outcomes `±1`; only the first `arity` are used.
    pub outcomes: [i8; 4],
    /// Number of detectors.
    pub arity: u8,
    /// Combined angle in degrees: `|φb - φa|` or `|φa + φb - φc - φd|`.
    pub angle_deg: f64,
    /// Scalar part of the orientation-ordered product.
    pub corr: f64,
}

impl TrialRecord {
    /// Recorded azimuths.
    pub fn phis(&self) -> &[f64] {
        &self.phis_deg[..self.arity as usize]
    }

    /// Outcomes.
    pub fn outcomes(&self) -> &[i8] {
        &self.outcomes[..self.arity as usize]
    }
}

/// `+1` when a uniform draw in `[0, 1)` exceeds one half, else `-1`.
pub fn flip_lambda<R: Rng + ?Sized>(rng: &mut R) -> Orientation {
    if rng.random::<f64>() > 0.5 {
        Orientation::Positive
    } else {
        Orientation::Negative
    }
}

/// Normalized pair of standard normal draws in the x-y plane.
pub fn random_planar_direction<R: Rng + ?Sized>(rng: &mut R) -> Vec3 {
    random_planar_unit(rng)
}

/// Product of the twisted maps `N_k = λ D_k`, each written in the detector
/// basis, in the given order for `λ = +1` and reversed for `λ = -1`.
pub fn paired_product(detectors: &[Detector], lambda: Orientation) -> Result<Multivector, EngineError> {
    if detectors.len() < 2 {
        return Err(EngineError::EmptyInput(detectors.len()));
    }
    let twisted = |d: &Detector| d.element().scale(lambda.sign());
    let one = Multivector::one(Orientation::Positive);
    let q = match lambda {
        Orientation::Positive => detectors.iter().map(twisted).fold(one, |acc, n| acc * n),
        Orientation::Negative => detectors.iter().rev().map(twisted).fold(one, |acc, n| acc * n),
    };
    Ok(q)
}

/// Azimuth of a detector as read from its `ζ2`, `ζ3` slots, in degrees.
fn slot_azimuth(y: f64, x: f64) -> f64 {
    libm::atan2(y, x).to_degrees()
}

/// Recorded azimuths of four planar detectors.
///
/// The first detector is read from the sign-flipped `ζ2` slot and the last
/// from the sign-flipped `ζ3` slot; the middle two are read directly.
pub fn ghz_recorded_angles(detectors: &[Detector; 4]) -> [f64; 4] {
    let c: [[f64; 8]; 4] = core::array::from_fn(|i| *detectors[i].element().coeffs());
    [
        slot_azimuth(-c[0][2], c[0][3]),
        slot_azimuth(c[1][2], c[1][3]),
        slot_azimuth(c[2][2], c[2][3]),
        slot_azimuth(c[3][2], -c[3][3]),
    ]
}

/// Physical azimuths (degrees) that produce the given recorded angles.
pub fn ghz_physical_angles(recorded_deg: [f64; 4]) -> [f64; 4] {
    let [a, b, c, d] = recorded_deg;
    [-a, b, c, 180.0 - d]
}

/// Output of one batch.
#[derive(Clone, Debug, PartialEq)]
pub struct BatchOutput {
    /// Batch index.
    pub index: u64,
    /// Records in trial order.
    pub records: Vec<TrialRecord>,
    /// Partial sums.
    pub tally: Tally,
}

/// A finished run.
#[derive(Clone, Debug, PartialEq)]
pub struct Run {
    /// Every event in trial order.
    pub records: Vec<TrialRecord>,
    /// Aggregates.
    pub summary: CorrelationSummary,
}

struct Settings {
    detectors: Vec<Detector>,
}

impl Settings {
    fn fixed(cfg: &TrialConfig) -> Result<Option<Self>, EngineError> {
        let SettingSource::Fixed { angles_deg } = &cfg.source else {
            return Ok(None);
        };
        let physical: Vec<f64> = match cfg.experiment {
            Experiment::Epr => angles_deg.clone(),
            Experiment::Ghz => {
                ghz_physical_angles([angles_deg[0], angles_deg[1], angles_deg[2], angles_deg[3]]).to_vec()
            }
        };
        let detectors = physical
            .into_iter()
            .map(|deg| Ok(Detector::new(make_pair_planar(Vec3::planar(deg.to_radians()))?)))
            .collect::<Result<Vec<_>, EngineError>>()?;
        Ok(Some(Self { detectors }))
    }
}

fn simulate_trial<R: Rng + ?Sized>(
    cfg: &TrialConfig,
    fixed: Option<&Settings>,
    index: u64,
    rng: &mut R,
) -> Result<TrialRecord, EngineError> {
    let n = cfg.experiment.arity();
    let dets = match fixed {
        Some(s) => s.detectors.clone(),
        None => (0..n)
            .map(|_| Ok(Detector::new(make_pair_planar(random_planar_direction(rng))?)))
            .collect::<Result<Vec<_>, EngineError>>()?,
    };
    let lambda = flip_lambda(rng);
    let mut outcomes = [0i8; 4];
    for (k, d) in dets.iter().enumerate() {
        let side = if k % 2 == 0 { Side::First } else { Side::Second };
        outcomes[k] = measure(d, lambda, side).value();
    }
    let corr = paired_product(&dets, lambda)?.scalar_part();
    let mut phis_deg = [0.0; 4];
    let angle_deg = match cfg.experiment {
        Experiment::Epr => {
            for (p, d) in phis_deg.iter_mut().zip(&dets) {
                let c = d.element();
                *p = slot_azimuth(c.coeffs()[2], c.coeffs()[3]);
            }
            (phis_deg[1] - phis_deg[0]).abs()
        }
        Experiment::Ghz => {
            phis_deg = ghz_recorded_angles(&[dets[0], dets[1], dets[2], dets[3]]);
            (phis_deg[0] + phis_deg[1] - phis_deg[2] - phis_deg[3]).abs()
        }
    };
    Ok(TrialRecord { index, lambda, phis_deg, outcomes, arity: n as u8, angle_deg, corr })
}

/// Runs one batch on its own RNG stream.
pub fn simulate_batch(cfg: &TrialConfig, index: u64) -> Result<BatchOutput, EngineError> {
    cfg.validate()?;
    let count = cfg.batch_count();
    if index >= count {
        return Err(EngineError::BatchOutOfRange { index, count });
    }
    let fixed = Settings::fixed(cfg)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(index);
    let start = index * cfg.batch_size;
    let end = (start + cfg.batch_size).min(cfg.trials);
    let mut records = Vec::with_capacity((end - start) as usize);
    let mut tally = Tally::new(cfg);
    for k in start..end {
        let rec = simulate_trial(cfg, fixed.as_ref(), k, &mut rng)?;
        tally.push(&rec, prediction(&rec));
        records.push(rec);
    }
    Ok(BatchOutput { index, records, tally })
}

/// `-cos` of the combined angle: the shared prediction for one event.
pub fn prediction(rec: &TrialRecord) -> f64 {
    epr_expectation(rec.angle_deg.to_radians())
}

/// Joins batch outputs, which must be in batch order.
pub fn assemble(cfg: &TrialConfig, batches: Vec<BatchOutput>) -> Run {
    let mut tally = Tally::new(cfg);
    let mut records = Vec::with_capacity(cfg.trials as usize);
    for b in batches {
        tally.merge(&b.tally);
        records.extend(b.records);
    }
    Run { records, summary: CorrelationSummary::from_tally(cfg, &tally) }
}

/// Runs every batch sequentially.
pub fn run(cfg: &TrialConfig) -> Result<Run, EngineError> {
    cfg.validate()?;
    let batches = (0..cfg.batch_count()).map(|b| simulate_batch(cfg, b)).collect::<Result<Vec<_>, _>>()?;
    Ok(assemble(cfg, batches))
}

/// [`run`] with the experiment forced to two particles.
pub fn run_epr(cfg: &TrialConfig) -> Result<Run, EngineError> {
    let mut cfg = cfg.clone();
    cfg.experiment = Experiment::Epr;
    run(&cfg)
}

/// [`run`] with the experiment forced to four particles.
pub fn run_ghz(cfg: &TrialConfig) -> Result<Run, EngineError> {
    let mut cfg = cfg.clone();
    cfg.experiment = Experiment::Ghz;
    run(&cfg)
}
