use septenary::parallel::run_parallel;
use septenary_core::engine::{run, simulate_batch};
use septenary_core::{Experiment, TrialConfig};

#[test]
fn thread_count_never_changes_results() {
    for exp in [Experiment::Epr, Experiment::Ghz] {
        let cfg = TrialConfig { batch_size: 1000, ..TrialConfig::new(exp, 25_001, 99) };
        let reference = run(&cfg).unwrap();
        for threads in [1, 2, 3, 8] {
            assert_eq!(run_parallel(&cfg, Some(threads)).unwrap(), reference, "{exp:?} {threads}");
        }
    }
}

#[test]
fn any_batch_can_be_recomputed_alone() {
    let cfg = TrialConfig { batch_size: 500, ..TrialConfig::new(Experiment::Ghz, 3000, 4) };
    let whole = run_parallel(&cfg, Some(4)).unwrap();
    let b = simulate_batch(&cfg, 4).unwrap();
    assert_eq!(&whole.records[2000..2500], &b.records[..]);
}

#[test]
fn summaries_serialize_identically() {
    let cfg = TrialConfig::new(Experiment::Epr, 10_000, 5);
    let a = serde_json::to_string(&run_parallel(&cfg, Some(1)).unwrap().summary).unwrap();
    let b = serde_json::to_string(&run_parallel(&cfg, Some(6)).unwrap().summary).unwrap();
    assert_eq!(a, b);
}
