use serde::{Deserialize, Serialize};

use super::{par_trials, tags, SampleStats};
use crate::analytics;
use crate::measures::relative_entropy_coherence;
use crate::sampler::{sample_pure_in_subspace, sample_random_subspace};
use crate::{Error, RandomStream, Result};

/// Sampled check of the coherent-subspace floor `C_r ≥ H_d − 1 − ε`.
///
/// States are sampled from one random subspace rather than enumerated over an
/// ε-net, so zero violations is a necessary check of the guarantee, not its
/// construction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubspaceFloorReport {
    pub d: u64,
    pub eps: f64,
    pub s: u64,
    pub below_nontrivial_scale: bool,
    pub threshold: f64,
    pub n_states: u64,
    pub min_observed_cr: f64,
    pub mean_observed_cr: f64,
    pub violations: u64,
    /// `ln` of the ε₀-net size bound with `ε₀ = ε/(√8 ln d)`.
    pub net_log_size: f64,
    pub master_seed: u64,
}

pub(crate) fn guaranteed_dimension(d: u64, eps: f64, min_s: u64) -> Result<analytics::SubspaceSize> {
    let size = analytics::subspace_dimension(d, eps)?;
    if size.s < min_s {
        return Err(Error::VacuousGuarantee {
            d: d as usize,
            s: size.s as usize,
        });
    }
    if size.s > d {
        return Err(Error::InvalidDimension(format!("s = {} exceeds d = {d}", size.s)));
    }
    Ok(size)
}

pub fn run_subspace_floor(d: u64, eps: f64, n_states: u64, master_seed: u64) -> Result<SubspaceFloorReport> {
    if n_states == 0 {
        return Err(Error::InvalidArgument("n_states must be >= 1".into()));
    }
    let size = guaranteed_dimension(d, eps, 1)?;
    let threshold = analytics::subspace_threshold(d, eps)?;
    let basis = sample_random_subspace(
        d as usize,
        size.s as usize,
        RandomStream::family(master_seed, tags::SUBSPACE, 0),
    )?;
    let values = par_trials(n_states, |i| {
        let psi = sample_pure_in_subspace(
            &basis,
            RandomStream::family(master_seed, tags::SUBSPACE_STATES, i),
        )?;
        Ok(relative_entropy_coherence(&psi))
    })?;
    let stats = SampleStats::from_values(&values)?;
    Ok(SubspaceFloorReport {
        d,
        eps,
        s: size.s,
        below_nontrivial_scale: size.below_nontrivial_scale,
        threshold,
        n_states,
        min_observed_cr: stats.min,
        mean_observed_cr: stats.mean,
        violations: values.iter().filter(|&&c| c < threshold).count() as u64,
        net_log_size: analytics::net_log_size(d, analytics::subspace_net_epsilon(d, eps)?)?,
        master_seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vacuous_parameters_error_out() {
        let d = 1000u64;
        let err = run_subspace_floor(d, 0.5 * (d as f64).ln(), 10, 1).unwrap_err();
        assert_eq!(err, Error::VacuousGuarantee { d: 1000, s: 0 });
        assert!(err.to_string().contains("32921"));
    }

    #[test]
    fn one_dimensional_subspace_has_a_single_value() {
        // smallest d with s = 1 at eps close to ln d
        let d = 17_000u64;
        let eps = 0.999 * (d as f64).ln();
        assert_eq!(analytics::subspace_dimension(d, eps).unwrap().s, 1);
        let r = run_subspace_floor(d, eps, 20, 3).unwrap();
        assert_eq!(r.s, 1);
        assert!((r.min_observed_cr - r.mean_observed_cr).abs() < 1e-9);
        assert_eq!(r.violations, 0);
    }
}
