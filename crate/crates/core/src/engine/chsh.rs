use alloc::vec;
use alloc::vec::Vec;

use serde::{Deserialize, Serialize};

use super::{run, EngineError, Experiment, TrialConfig};
use crate::oracle::{chsh_value, epr_expectation};

/// Where the two-particle correlations of a scan come from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum CorrelationSource {
    /// `-cos(y - x)`.
    Analytic,
    /// Mean correlation of a fixed-setting simulation per grid pair.
    Simulated {
        /// Trials per grid pair.
        trials: u64,
        /// Seed shared by every grid pair.
        seed: u64,
    },
}

/// Result of scanning `S(x, x', y, y')` over a planar grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ChshScan {
    /// Grid spacing in degrees.
    pub grid_step_deg: f64,
    /// Grid angles in degrees.
    pub angles_deg: Vec<f64>,
    /// `E(x_i, y_j)` stored row-major by `i`.
    pub correlations: Vec<f64>,
    /// Largest `|S|` on the grid.
    pub max_abs_s: f64,
    /// `S` at the maximizing point.
    pub s_at_argmax: f64,
    /// First maximizing `(x, x', y, y')` in degrees.
    pub argmax_deg: [f64; 4],
    /// Number of grid points visited.
    pub points: u64,
}

impl ChshScan {
    /// `E(x_i, y_j)`.
    pub fn correlation(&self, i: usize, j: usize) -> f64 {
        self.correlations[i * self.angles_deg.len() + j]
    }
}

/// Evaluates `S = E(x,y) + E(x,y') + E(x',y) - E(x',y')` at every point of
/// the grid `{0, step, 2 step, ...} ∩ [0, 360)` and reports the maximum of `|S|`.
pub fn chsh_scan(grid_step_deg: f64, source: CorrelationSource) -> Result<ChshScan, EngineError> {
    let w = grid_step_deg;
    if !(w.is_finite() && w > 0.0 && w <= 360.0) {
        return Err(EngineError::InvalidGridStep(w));
    }
    let n = libm::ceil(360.0 / w - 1e-9) as usize;
    let angles_deg: Vec<f64> = (0..n).map(|k| k as f64 * w).collect();
    let mut correlations = vec![0.0; n * n];
    for (i, &x) in angles_deg.iter().enumerate() {
        for (j, &y) in angles_deg.iter().enumerate() {
            correlations[i * n + j] = match source {
                CorrelationSource::Analytic => epr_expectation((y - x).to_radians()),
                CorrelationSource::Simulated { trials, seed } => {
                    let cfg = TrialConfig::new(Experiment::Epr, trials, seed).with_fixed_angles(vec![x, y]);
                    run(&cfg)?.summary.mean_corr
                }
            };
        }
    }
    let e = |i: usize, j: usize| correlations[i * n + j];
    let mut best = (f64::NEG_INFINITY, 0.0, [0usize; 4]);
    for x in 0..n {
        for xp in 0..n {
            for y in 0..n {
                for yp in 0..n {
                    let s = chsh_value([e(x, y), e(x, yp), e(xp, y), e(xp, yp)]);
                    if s.abs() > best.0 {
                        best = (s.abs(), s, [x, xp, y, yp]);
                    }
                }
            }
        }
    }
    let argmax_deg = best.2.map(|k| angles_deg[k]);
    Ok(ChshScan {
        grid_step_deg: w,
        angles_deg,
        correlations,
        max_abs_s: best.0,
        s_at_argmax: best.1,
        argmax_deg,
        points: (n as u64).pow(4),
    })
}

#[cfg(test)]
mod tests {
    use core::f64::consts::SQRT_2;

    use super::*;

    #[test]
    fn coarse_grid_finds_the_tsirelson_value() {
        let scan = chsh_scan(45.0, CorrelationSource::Analytic).unwrap();
        assert_eq!(scan.points, 8u64.pow(4));
        assert!((scan.max_abs_s - 2.0 * SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn equal_pairs_are_bounded_by_two() {
        let scan = chsh_scan(30.0, CorrelationSource::Analytic).unwrap();
        let n = scan.angles_deg.len();
        for i in 0..n {
            for j in 0..n {
                let e = scan.correlation(i, j);
                assert!(chsh_value([e, e, e, e]).abs() <= 2.0 + 1e-15);
            }
        }
    }

    #[test]
    fn simulated_source_matches_analytic() {
        let a = chsh_scan(90.0, CorrelationSource::Analytic).unwrap();
        let s = chsh_scan(90.0, CorrelationSource::Simulated { trials: 8, seed: 1 }).unwrap();
        for (x, y) in a.correlations.iter().zip(&s.correlations) {
            assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn bad_step_rejected() {
        assert_eq!(chsh_scan(0.0, CorrelationSource::Analytic), Err(EngineError::InvalidGridStep(0.0)));
    }
}
