use serde::{Deserialize, Serialize};

use super::{par_trials, tags, SampleStats};
use crate::sampler::{sample_haar_pure, sample_haar_unitary};
use crate::{Error, RandomStream, Result};

/// First two moments of `p_1 = |ψ_1|²` against the Beta(1, d−1) values
/// `1/d` and `2/(d(d+1))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub d: u64,
    pub trials: u64,
    pub mean_p1: f64,
    pub stderr_p1: f64,
    pub expected_p1: f64,
    pub mean_p1_sq: f64,
    pub stderr_p1_sq: f64,
    pub expected_p1_sq: f64,
    pub master_seed: u64,
}

impl MomentReport {
    /// Both moments within `k` standard errors.
    pub fn within(&self, k: f64) -> bool {
        (self.mean_p1 - self.expected_p1).abs() <= k * self.stderr_p1
            && (self.mean_p1_sq - self.expected_p1_sq).abs() <= k * self.stderr_p1_sq
    }
}

pub fn run_moment_check(d: u64, trials: u64, master_seed: u64) -> Result<MomentReport> {
    if d == 0 || trials < 2 {
        return Err(Error::InvalidArgument("need d >= 1 and at least 2 trials".into()));
    }
    let p1 = par_trials(trials, |i| {
        let psi = sample_haar_pure(d as usize, RandomStream::new(master_seed, i))?;
        Ok(psi.amplitudes()[0].norm_sqr())
    })?;
    let sq: Vec<f64> = p1.iter().map(|p| p * p).collect();
    let s1 = SampleStats::from_values(&p1)?;
    let s2 = SampleStats::from_values(&sq)?;
    let df = d as f64;
    Ok(MomentReport {
        d,
        trials,
        mean_p1: s1.mean,
        stderr_p1: s1.stderr,
        expected_p1: 1.0 / df,
        mean_p1_sq: s2.mean,
        stderr_p1_sq: s2.stderr,
        expected_p1_sq: 2.0 / (df * (df + 1.0)),
        master_seed,
    })
}

/// Kolmogorov–Smirnov distance of `|U_11|` over Haar unitaries from the
/// law with density `2(d−1) r (1−r²)^{d−2}`, CDF `1 − (1−r²)^{d−1}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KsReport {
    pub d: u64,
    pub n: u64,
    pub ks_distance: f64,
    pub master_seed: u64,
}

pub fn run_unitary_ks_check(d: u64, n: u64, master_seed: u64) -> Result<KsReport> {
    if d < 2 || n == 0 {
        return Err(Error::InvalidArgument("need d >= 2 and n >= 1".into()));
    }
    let mut r = par_trials(n, |i| {
        let u = sample_haar_unitary(d as usize, RandomStream::family(master_seed, tags::UNITARIES, i))?;
        Ok(u.matrix()[(0, 0)].norm())
    })?;
    r.sort_by(f64::total_cmp);
    let cdf = |x: f64| 1.0 - (1.0 - x * x).max(0.0).powi(d as i32 - 1);
    let nf = n as f64;
    let ks_distance = r
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / nf).abs().max(((i + 1) as f64 / nf - f).abs())
        })
        .fold(0.0, f64::max);
    Ok(KsReport {
        d,
        n,
        ks_distance,
        master_seed,
    })
}
