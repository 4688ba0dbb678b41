use serde::{Deserialize, Serialize};

use super::{par_trials, SampleStats};
use crate::analytics::{self, BoundValue};
use crate::measures;
use crate::sampler::{sample_haar_pure, PureState};
use crate::{Error, RandomStream, Result};

/// Functional evaluated on each sampled state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum MeasureKind {
    /// Relative entropy of coherence C_r (nats).
    Cr,
    /// l1 norm of coherence.
    L1,
    /// Classical purity Tr[ρ_D²].
    Purity,
    /// Trace distance ‖ρ_D − I/d‖₁.
    Trdist,
}

impl MeasureKind {
    pub fn evaluate(self, psi: &PureState) -> f64 {
        match self {
            MeasureKind::Cr => measures::relative_entropy_coherence(psi),
            MeasureKind::L1 => measures::l1_coherence_pure(psi),
            MeasureKind::Purity => measures::classical_purity(psi),
            MeasureKind::Trdist => measures::trace_distance_diag_mm(psi),
        }
    }

    /// Closed-form Haar mean; `None` for l1, which has none.
    pub fn analytic_mean(self, d: u64) -> Result<Option<f64>> {
        Ok(match self {
            MeasureKind::Cr => Some(analytics::expected_cr(d)?),
            MeasureKind::L1 => None,
            MeasureKind::Purity => Some(analytics::expected_classical_purity(d)?),
            MeasureKind::Trdist => Some(analytics::expected_trace_distance(d)?),
        })
    }

    /// Lévy bound on `Pr{|F − E F| > ε}`, or `None` when no Lipschitz
    /// constant is available (l1 at any d, C_r below d = 3).
    pub fn levy_bound(self, d: u64, eps: f64) -> Result<Option<BoundValue>> {
        Ok(match self {
            MeasureKind::Cr if d >= 3 => Some(analytics::levy_bound_cr(d, eps)?),
            MeasureKind::Cr | MeasureKind::L1 => None,
            MeasureKind::Purity => Some(analytics::levy_bound_purity(d, eps)?),
            MeasureKind::Trdist => Some(analytics::levy_bound_trdist(d, eps)?),
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MeasureKind::Cr => "cr",
            MeasureKind::L1 => "l1",
            MeasureKind::Purity => "purity",
            MeasureKind::Trdist => "trdist",
        }
    }

    /// Whether values are entropies (nats).
    pub fn is_entropy(self) -> bool {
        self == MeasureKind::Cr
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub dim: u64,
    pub trials: u64,
    pub master_seed: u64,
    pub epsilons: Vec<f64>,
    pub histogram_bins: usize,
    pub measure_kind: MeasureKind,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::InvalidDimension("d must be >= 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::InvalidArgument("trials must be >= 1".into()));
        }
        if self.histogram_bins < 2 {
            return Err(Error::InvalidArgument("histogram needs at least 2 bins".into()));
        }
        if let Some(e) = self.epsilons.iter().find(|e| !(**e > 0.0) || !e.is_finite()) {
            return Err(Error::InvalidArgument(format!("epsilon {e} is not positive")));
        }
        if self.epsilons.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::InvalidArgument("epsilons must be strictly ascending".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_low: f64,
    pub bin_high: f64,
    pub count: u64,
}

/// Point about which tail frequencies are measured.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TailCenter {
    /// The closed-form Haar mean, as in the concentration theorems.
    Analytic,
    /// The sample mean; used only when no closed form exists.
    Empirical,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailEntry {
    pub epsilon: f64,
    pub empirical_tail_frequency: f64,
    /// `None` when no Lévy bound is available for this measure and dimension.
    pub levy_raw: Option<f64>,
    pub levy_effective: f64,
    pub levy_log_raw: Option<f64>,
    /// `frequency ≤ levy_effective`; a statistical check, reported not enforced.
    pub within_bound: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConcentrationReport {
    pub config: ExperimentConfig,
    pub empirical_mean: f64,
    pub empirical_stderr: f64,
    pub empirical_variance: f64,
    pub analytic_mean: Option<f64>,
    /// `√(d(d−1)²/(d+1))`, reported for l1 in place of a mean.
    pub typical_l1_upper: Option<f64>,
    pub observed_min: f64,
    pub observed_max: f64,
    pub histogram: Vec<HistogramBin>,
    pub tail_center: TailCenter,
    pub tails: Vec<TailEntry>,
    /// `mean / ln d` (C_r only, d ≥ 2).
    pub scaled_mean: Option<f64>,
    /// Variance of `C_r / ln d` (C_r only, d ≥ 2).
    pub scaled_variance: Option<f64>,
    /// Histogram of `C_r / ln d` on `[0, 1]` (C_r only, d ≥ 2).
    pub scaled_histogram: Option<Vec<HistogramBin>>,
    /// Non-fatal notes, e.g. a tail frequency above a non-vacuous bound.
    pub flags: Vec<String>,
}

/// Equal-width histogram of `values` on `[lo, hi]`; out-of-range values are
/// clamped into the end bins.
pub(crate) fn histogram(values: &[f64], lo: f64, hi: f64, bins: usize) -> Vec<HistogramBin> {
    let width = hi - lo;
    let mut counts = vec![0u64; bins];
    for &x in values {
        let pos = ((x - lo) / width * bins as f64).floor();
        let idx = if pos.is_nan() || pos < 0.0 {
            0
        } else {
            (pos as usize).min(bins - 1)
        };
        counts[idx] += 1;
    }
    counts
        .into_iter()
        .enumerate()
        .map(|(i, count)| HistogramBin {
            bin_low: lo + width * i as f64 / bins as f64,
            bin_high: if i + 1 == bins {
                hi
            } else {
                lo + width * (i + 1) as f64 / bins as f64
            },
            count,
        })
        .collect()
}

/// Samples `config.trials` Haar states and summarizes the chosen measure.
pub fn run_concentration(config: &ExperimentConfig) -> Result<ConcentrationReport> {
    config.validate()?;
    let d = config.dim;
    let kind = config.measure_kind;
    let values = par_trials(config.trials, |i| {
        let psi = sample_haar_pure(d as usize, RandomStream::new(config.master_seed, i))?;
        Ok(kind.evaluate(&psi))
    })?;
    let stats = SampleStats::from_values(&values)?;
    let analytic_mean = kind.analytic_mean(d)?;
    let mut flags = Vec::new();

    let (lo, hi) = if kind == MeasureKind::Cr && d >= 2 {
        (0.0, (d as f64).ln())
    } else if stats.max > stats.min {
        (stats.min, stats.max)
    } else {
        (stats.min - 0.5, stats.min + 0.5)
    };
    let hist = histogram(&values, lo, hi, config.histogram_bins);

    let (center, tail_center) = match analytic_mean {
        Some(m) => (m, TailCenter::Analytic),
        None => {
            if !config.epsilons.is_empty() {
                flags.push(format!(
                    "{} has no closed-form mean; tails measured around the empirical mean",
                    kind.as_str()
                ));
            }
            (stats.mean, TailCenter::Empirical)
        }
    };
    let n = values.len() as f64;
    let mut tails = Vec::with_capacity(config.epsilons.len());
    for &eps in &config.epsilons {
        let exceed = values.iter().filter(|&&x| (x - center).abs() > eps).count();
        let freq = exceed as f64 / n;
        let bound = kind.levy_bound(d, eps)?;
        let effective = bound.map_or(1.0, |b| b.effective);
        let within_bound = freq <= effective;
        if !within_bound {
            flags.push(format!(
                "tail frequency {freq} at epsilon {eps} exceeds the Levy bound {effective}"
            ));
        }
        tails.push(TailEntry {
            epsilon: eps,
            empirical_tail_frequency: freq,
            levy_raw: bound.map(|b| b.raw),
            levy_effective: effective,
            levy_log_raw: bound.map(|b| b.log_raw),
            within_bound,
        });
    }
    if tails.iter().any(|t| t.levy_raw.is_none()) {
        flags.push(format!(
            "no Lipschitz constant for {} at d = {d}; Levy bound reported as 1",
            kind.as_str()
        ));
    }

    let (scaled_mean, scaled_variance, scaled_histogram) = if kind == MeasureKind::Cr && d >= 2 {
        let ln_d = (d as f64).ln();
        let scaled: Vec<f64> = values.iter().map(|v| v / ln_d).collect();
        (
            Some(stats.mean / ln_d),
            Some(stats.variance / (ln_d * ln_d)),
            Some(histogram(&scaled, 0.0, 1.0, config.histogram_bins)),
        )
    } else {
        (None, None, None)
    };

    Ok(ConcentrationReport {
        config: config.clone(),
        empirical_mean: stats.mean,
        empirical_stderr: stats.stderr,
        empirical_variance: stats.variance,
        analytic_mean,
        typical_l1_upper: match kind {
            MeasureKind::L1 => Some(analytics::typical_l1_upper(d)?),
            _ => None,
        },
        observed_min: stats.min,
        observed_max: stats.max,
        histogram: hist,
        tail_center,
        tails,
        scaled_mean,
        scaled_variance,
        scaled_histogram,
        flags,
    })
}

/// One C_r report per dimension, with tails at `ε = 0.1 ln d`.
pub fn reproduce_fig1(
    dims: &[u64],
    trials: u64,
    master_seed: u64,
    bins: usize,
) -> Result<Vec<ConcentrationReport>> {
    if dims.is_empty() {
        return Err(Error::InvalidArgument("no dimensions given".into()));
    }
    dims.iter()
        .map(|&d| {
            let epsilons = if d >= 2 { vec![0.1 * (d as f64).ln()] } else { vec![] };
            run_concentration(&ExperimentConfig {
                dim: d,
                trials,
                master_seed,
                epsilons,
                histogram_bins: bins,
                measure_kind: MeasureKind::Cr,
            })
        })
        .collect()
}
