//! Verification suites behind `septenary check`.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use septenary_core::algebra::basis_product;
use septenary_core::algebra::table::{ReferenceEntry, REFERENCE_TABLE};
use septenary_core::sampling::{random_multivector, random_s7, random_unit_vector};
use septenary_core::spin::{conservation_product, make_pair_general};
use septenary_core::{BasisIndex, Multivector, Orientation};
use serde::Serialize;

/// Suite parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CheckConfig {
    /// Random samples per floating-point suite.
    pub samples: usize,
    /// Absolute (or, for associativity, relative) tolerance.
    pub tol: f64,
    /// Seed for the random samples.
    pub seed: u64,
}

/// Outcome of one suite.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SuiteResult {
    /// Suite name.
    pub name: &'static str,
    /// Whether every case was within tolerance.
    pub passed: bool,
    /// Cases evaluated.
    pub checked: u64,
    /// Largest error seen.
    pub max_error: f64,
}

/// Full report.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    /// Parameters used.
    #[serde(flatten)]
    pub config: CheckConfig,
    /// One entry per suite, in a fixed order.
    pub suites: Vec<SuiteResult>,
    /// True iff every suite passed.
    pub all_passed: bool,
}

/// Names of the suites in report order.
pub const SUITES: [&str; 5] = ["table", "associativity", "norm_composition", "conservation", "s7_closure"];

fn rng_for(cfg: &CheckConfig, suite: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(suite);
    rng
}

fn orientation_of(k: usize) -> Orientation {
    if k.is_multiple_of(2) {
        Orientation::Positive
    } else {
        Orientation::Negative
    }
}

struct Acc {
    checked: u64,
    max_error: f64,
    exact_failures: u64,
}

impl Acc {
    fn new() -> Self {
        Self { checked: 0, max_error: 0.0, exact_failures: 0 }
    }

    fn see(&mut self, err: f64) {
        self.checked += 1;
        // NaN counts as a failure
        self.max_error = if err.is_nan() { f64::NAN } else { self.max_error.max(err) };
    }

    fn finish(self, name: &'static str, tol: f64) -> SuiteResult {
        let passed = self.exact_failures == 0 && self.max_error <= tol;
        SuiteResult { name, passed, checked: self.checked, max_error: self.max_error }
    }
}

fn table() -> SuiteResult {
    let mut acc = Acc::new();
    for o in Orientation::BOTH {
        for mu in BasisIndex::ALL {
            for nu in BasisIndex::ALL {
                let cell = REFERENCE_TABLE[mu.get()][nu.get()];
                let got = basis_product(mu, nu, o);
                let err = match ReferenceEntry::parse(cell) {
                    Some(e) => {
                        let (sign, k) = e.in_zeta_basis(o.as_i8());
                        let mut c = [0.0; 8];
                        c[k as usize] = f64::from(sign);
                        got.max_abs_diff(&Multivector::new(c, o))
                    }
                    None => f64::INFINITY,
                };
                if err != 0.0 {
                    acc.exact_failures += 1;
                }
                acc.see(err);
            }
        }
    }
    // exact comparison; the tolerance does not apply
    acc.finish("table", f64::INFINITY)
}

fn associativity(cfg: &CheckConfig) -> SuiteResult {
    let mut acc = Acc::new();
    for o in Orientation::BOTH {
        for a in BasisIndex::ALL {
            for b in BasisIndex::ALL {
                for c in BasisIndex::ALL {
                    let (x, y, z) = (Multivector::basis(a, o), Multivector::basis(b, o), Multivector::basis(c, o));
                    if (x * y) * z != x * (y * z) {
                        acc.exact_failures += 1;
                    }
                }
            }
        }
    }
    let mut rng = rng_for(cfg, 1);
    for k in 0..cfg.samples {
        let o = orientation_of(k);
        let (x, y, z) =
            (random_multivector(&mut rng, o), random_multivector(&mut rng, o), random_multivector(&mut rng, o));
        let scale = (x.norm() * y.norm() * z.norm()).max(1.0);
        acc.see(((x * y) * z).max_abs_diff(&(x * (y * z))) / scale);
    }
    acc.finish("associativity", cfg.tol)
}

fn norm_composition(cfg: &CheckConfig) -> SuiteResult {
    let mut acc = Acc::new();
    let mut rng = rng_for(cfg, 2);
    for k in 0..cfg.samples {
        let o = orientation_of(k);
        let (x, y) = (random_s7(&mut rng, o), random_s7(&mut rng, o));
        acc.see(((x * y).norm() - x.norm() * y.norm()).abs());
    }
    acc.finish("norm_composition", cfg.tol)
}

fn conservation(cfg: &CheckConfig) -> SuiteResult {
    let mut acc = Acc::new();
    let mut rng = rng_for(cfg, 3);
    for k in 0..cfg.samples {
        let o = orientation_of(k);
        let err = match make_pair_general(random_unit_vector(&mut rng)) {
            Ok(p) => conservation_product(&p, o).max_abs_diff(&Multivector::scalar(-1.0, o)),
            Err(_) => f64::INFINITY,
        };
        acc.see(err);
    }
    acc.finish("conservation", cfg.tol)
}

fn s7_closure(cfg: &CheckConfig) -> SuiteResult {
    let mut acc = Acc::new();
    let mut rng = rng_for(cfg, 4);
    for k in 0..cfg.samples {
        let o = orientation_of(k);
        let xy = random_s7(&mut rng, o) * random_s7(&mut rng, o);
        acc.see((xy.norm() - 1.0).abs().max(xy.s7_orthogonality().abs()));
    }
    acc.finish("s7_closure", cfg.tol)
}

/// Runs every suite.
pub fn run_checks(cfg: &CheckConfig) -> CheckReport {
    let suites = vec![table(), associativity(cfg), norm_composition(cfg), conservation(cfg), s7_closure(cfg)];
    let all_passed = suites.iter().all(|s| s.passed);
    CheckReport { config: *cfg, suites, all_passed }
}
