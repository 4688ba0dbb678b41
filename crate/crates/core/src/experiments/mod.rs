//! Reproducible Monte Carlo campaigns.
//!
//! Trial `i` of a campaign always draws from `RandomStream::new(master_seed, i)`
//! (or a tagged stream family for multi-stage experiments). Trials run on the
//! rayon pool in any order; their results are collected by trial index and
//! reduced serially with compensated sums, so reports are bit-identical for any
//! worker count.

mod concentration;
mod decomposition;
mod integral;
mod inequalities;
mod moments;
mod subspace;

pub use concentration::{
    reproduce_fig1, run_concentration, ConcentrationReport, ExperimentConfig, HistogramBin,
    MeasureKind, TailCenter, TailEntry,
};
pub use decomposition::{
    min_decomposition_average, run_decomposition_check, DecompositionCheckConfig,
    DecompositionCheckReport,
};
pub use integral::{run_matrix_integral_check, twirl_closed_form, MatrixIntegralReport, TwirlInput};
pub use inequalities::{
    check_state_inequalities, run_inequality_sweep, InequalityReport, StateInequalities,
};
pub use moments::{run_moment_check, run_unitary_ks_check, KsReport, MomentReport};
pub use subspace::{run_subspace_floor, SubspaceFloorReport};

use rayon::prelude::*;

use crate::summation::NeumaierSum;
use crate::{Error, Result};

/// Stream-family tags for multi-stage experiments.
pub(crate) mod tags {
    pub const SUBSPACE: u64 = 1;
    pub const SUBSPACE_STATES: u64 = 2;
    pub const ENSEMBLE: u64 = 3;
    pub const REDECOMPOSITION: u64 = 4;
    pub const UNITARIES: u64 = 5;
}

/// Trials per reduction chunk for experiments that accumulate matrices.
const CHUNK: u64 = 1024;

/// Evaluates `f(i)` for `i in 0..n` in parallel, returning results in index order.
pub(crate) fn par_trials<T, F>(n: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    (0..n).into_par_iter().map(f).collect()
}

/// Splits `0..n` into fixed chunks, folds each chunk serially and returns the
/// chunk results in order. Chunk boundaries do not depend on the pool size.
pub(crate) fn par_chunks<T, F>(n: u64, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(std::ops::Range<u64>) -> Result<T> + Sync + Send,
{
    let chunks = n.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|c| f(c * CHUNK..((c + 1) * CHUNK).min(n)))
        .collect()
}

/// Runs `f` on a dedicated pool of `threads` workers, or on the global pool
/// when `threads` is `None`.
pub fn with_threads<R, F>(threads: Option<usize>, f: F) -> Result<R>
where
    R: Send,
    F: FnOnce() -> R + Send,
{
    match threads {
        None => Ok(f()),
        Some(0) => Err(Error::InvalidArgument("thread count must be >= 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Numeric(format!("cannot build thread pool: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

/// Sample mean, unbiased variance and standard error of the mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleStats {
    pub mean: f64,
    pub variance: f64,
    pub stderr: f64,
    pub min: f64,
    pub max: f64,
}

impl SampleStats {
    /// Two-pass compensated statistics over `values` in slice order.
    pub fn from_values(values: &[f64]) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("no samples".into()));
        }
        let n = values.len() as f64;
        let mean = values.iter().copied().collect::<NeumaierSum>().value() / n;
        let variance = if values.len() > 1 {
            let ss: NeumaierSum = values.iter().map(|x| (x - mean) * (x - mean)).collect();
            ss.value() / (n - 1.0)
        } else {
            0.0
        };
        let (min, max) = values
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
        if !(mean.is_finite() && variance.is_finite()) {
            return Err(Error::Numeric("non-finite sample statistics".into()));
        }
        Ok(Self {
            mean,
            variance,
            stderr: (variance / n).sqrt(),
            min,
            max,
        })
    }
}
