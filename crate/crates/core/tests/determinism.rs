//! Results depend only on the seed, never on the thread count.

use cohlab::experiments::{self, DecompositionCheckConfig, ExperimentConfig, MeasureKind, TwirlInput};
use cohlab::report;

fn both<T, F>(f: F) -> (String, String)
where
    T: serde::Serialize + Send,
    F: Fn() -> T + Send + Sync,
{
    let one = experiments::with_threads(Some(1), &f).unwrap();
    let four = experiments::with_threads(Some(4), &f).unwrap();
    (report::to_json(&one).unwrap(), report::to_json(&four).unwrap())
}

#[test]
fn concentration_reports_match_across_thread_counts() {
    for kind in [MeasureKind::Cr, MeasureKind::L1, MeasureKind::Purity, MeasureKind::Trdist] {
        let config = ExperimentConfig {
            dim: 37,
            trials: 5000,
            master_seed: 99,
            epsilons: vec![0.01, 0.1, 1.0],
            histogram_bins: 17,
            measure_kind: kind,
        };
        let (a, b) = both(|| experiments::run_concentration(&config).unwrap());
        assert_eq!(a, b, "{kind:?}");
    }
}

#[test]
fn other_experiments_match_across_thread_counts() {
    let (a, b) = both(|| experiments::run_matrix_integral_check(4, 3000, 5, TwirlInput::BasisState(1)).unwrap());
    assert_eq!(a, b);
    let (a, b) = both(|| experiments::run_inequality_sweep(12, 3000, 5).unwrap());
    assert_eq!(a, b);
    let (a, b) = both(|| experiments::run_moment_check(7, 3000, 5).unwrap());
    assert_eq!(a, b);
    let (a, b) = both(|| experiments::run_subspace_floor(100_000, 0.9 * (100_000f64).ln(), 50, 5).unwrap());
    assert_eq!(a, b);
    let config = DecompositionCheckConfig {
        d: 100_000,
        eps: 0.9 * (100_000f64).ln(),
        n_ensembles: 3,
        m_out: 6,
        redecompositions: 2,
        master_seed: 5,
    };
    let (a, b) = both(|| experiments::run_decomposition_check(&config).unwrap());
    assert_eq!(a, b);
}

#[test]
fn different_seeds_differ() {
    let run = |seed| {
        experiments::run_concentration(&ExperimentConfig {
            dim: 10,
            trials: 100,
            master_seed: seed,
            epsilons: vec![],
            histogram_bins: 5,
            measure_kind: MeasureKind::Cr,
        })
        .unwrap()
        .empirical_mean
    };
    assert_eq!(run(1), run(1));
    assert_ne!(run(1), run(2));
}
