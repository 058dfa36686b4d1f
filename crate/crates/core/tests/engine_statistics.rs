use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use septenary_core::engine::{flip_lambda, random_planar_direction, run, run_epr, run_ghz};
use septenary_core::{Experiment, Orientation, TrialConfig};

#[test]
fn coin_is_fair_over_a_million_draws() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 1_000_000;
    let sum: i64 = (0..n).map(|_| i64::from(flip_lambda(&mut rng).as_i8())).sum();
    let mean = sum as f64 / n as f64;
    assert!(mean.abs() <= 0.004, "{mean}");
}

#[test]
fn coin_sequences_repeat_for_a_seed() {
    let draw = |seed| {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..256).map(|_| flip_lambda(&mut rng)).collect::<Vec<Orientation>>()
    };
    assert_eq!(draw(11), draw(11));
    assert_ne!(draw(11), draw(12));
}

#[test]
fn planar_directions_are_unit_and_flat() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..10_000 {
        let v = random_planar_direction(&mut rng);
        assert!((v.norm() - 1.0).abs() <= 1e-12);
        assert_eq!(v.z, 0.0);
    }
}

#[test]
fn azimuths_pass_a_chi_square_test() {
    const BINS: usize = 36;
    // 99th percentile of chi-square with 35 degrees of freedom
    const CRITICAL: f64 = 57.342;
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let n = 100_000;
    let mut counts = [0u64; BINS];
    for _ in 0..n {
        let v = random_planar_direction(&mut rng);
        let t = v.y.atan2(v.x).rem_euclid(std::f64::consts::TAU);
        counts[((t / std::f64::consts::TAU * BINS as f64) as usize).min(BINS - 1)] += 1;
    }
    let expected = n as f64 / BINS as f64;
    let chi2: f64 = counts.iter().map(|&c| (c as f64 - expected).powi(2) / expected).sum();
    assert!(chi2 < CRITICAL, "{chi2}");
}

#[test]
fn identical_configs_give_identical_runs() {
    for exp in [Experiment::Epr, Experiment::Ghz] {
        let cfg = TrialConfig::new(exp, 10_000, 31);
        assert_eq!(run(&cfg).unwrap(), run(&cfg).unwrap());
    }
}

#[test]
fn arm_averages_shrink_like_root_m() {
    let m = 20_000u64;
    let bound = 5.0 / (m as f64).sqrt();
    let epr = run_epr(&TrialConfig::new(Experiment::Epr, m, 8)).unwrap().summary;
    let ghz = run_ghz(&TrialConfig::new(Experiment::Ghz, m, 8)).unwrap().summary;
    for v in epr.ave_outcomes.values().chain(ghz.ave_outcomes.values()) {
        assert!(v.abs() <= bound, "{v}");
    }
}

#[test]
fn outcome_products_and_correlations_are_separate_facts() {
    let r = run_epr(&TrialConfig::new(Experiment::Epr, 5_000, 3)).unwrap();
    assert!(r.records.iter().all(|e| e.outcomes[0] * e.outcomes[1] == -1));
    assert!(r.records.iter().any(|e| e.corr > 0.5));
    for e in &r.records {
        assert!((e.corr + e.angle_deg.to_radians().cos()).abs() <= 1e-9);
        assert!(e.corr.abs() <= 1.0 + 1e-9);
    }
}

#[test]
fn both_orientations_appear_in_every_large_run() {
    let r = run_ghz(&TrialConfig::new(Experiment::Ghz, 2_000, 4)).unwrap();
    assert!(r.records.iter().any(|e| e.lambda == Orientation::Positive));
    assert!(r.records.iter().any(|e| e.lambda == Orientation::Negative));
    assert!(r.records.iter().any(|e| e.corr > 0.0) && r.records.iter().any(|e| e.corr < 0.0));
}
