use serde::{Deserialize, Serialize};

use super::par_trials;
use crate::analytics::l1_upper_bound_from_purity;
use crate::measures::{self, CoherenceProfile};
use crate::sampler::{sample_haar_pure, PureState};
use crate::{RandomStream, Result};

/// Rounding slack for the per-state inequalities.
const SLACK: f64 = 1e-12;

/// Per-state check of `C_l1 ≤ √(d(d−1)(1−P))`, `C_r ≥ (1−T) ln d − H₂(T)` and
/// `0 ≤ C_r ≤ ln d`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StateInequalities {
    pub profile: CoherenceProfile,
    pub l1_bound: f64,
    pub l1_holds: bool,
    pub fannes_holds: bool,
    pub range_holds: bool,
}

pub fn check_state_inequalities(psi: &PureState) -> Result<StateInequalities> {
    let d = psi.dim() as u64;
    let profile = measures::profile(psi);
    let l1_bound = l1_upper_bound_from_purity(d, profile.purity)?;
    let ln_d = (d as f64).ln();
    Ok(StateInequalities {
        profile,
        l1_bound,
        l1_holds: profile.c_l1 <= l1_bound + SLACK * l1_bound.max(1.0),
        fannes_holds: profile.c_r >= profile.fannes_floor - SLACK * ln_d.max(1.0),
        range_holds: profile.c_r >= 0.0 && profile.c_r <= ln_d + SLACK * ln_d.max(1.0),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InequalityReport {
    pub d: u64,
    pub trials: u64,
    pub master_seed: u64,
    pub l1_purity_violations: u64,
    pub fannes_violations: u64,
    pub range_violations: u64,
    /// Largest `C_l1 / bound` seen (1 means tight).
    pub max_l1_ratio: f64,
    /// Smallest `C_r − floor` seen.
    pub min_fannes_margin: f64,
}

impl InequalityReport {
    pub fn total_violations(&self) -> u64 {
        self.l1_purity_violations + self.fannes_violations + self.range_violations
    }
}

pub fn run_inequality_sweep(d: u64, trials: u64, master_seed: u64) -> Result<InequalityReport> {
    let checks = par_trials(trials, |i| {
        let psi = sample_haar_pure(d as usize, RandomStream::new(master_seed, i))?;
        check_state_inequalities(&psi)
    })?;
    let count = |f: fn(&StateInequalities) -> bool| checks.iter().filter(|c| !f(c)).count() as u64;
    Ok(InequalityReport {
        d,
        trials,
        master_seed,
        l1_purity_violations: count(|c| c.l1_holds),
        fannes_violations: count(|c| c.fannes_holds),
        range_violations: count(|c| c.range_holds),
        max_l1_ratio: checks
            .iter()
            .filter(|c| c.l1_bound > 0.0)
            .map(|c| c.profile.c_l1 / c.l1_bound)
            .fold(0.0, f64::max),
        min_fannes_margin: checks
            .iter()
            .map(|c| c.profile.c_r - c.profile.fannes_floor)
            .fold(f64::INFINITY, f64::min),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn adversarial_states() {
        let uniform = check_state_inequalities(&PureState::uniform(6).unwrap()).unwrap();
        assert!(uniform.l1_holds && uniform.fannes_holds && uniform.range_holds);
        // both inequalities are tight at the uniform superposition
        assert!((uniform.profile.c_l1 - uniform.l1_bound).abs() < 1e-12);
        assert!((uniform.profile.c_r - uniform.profile.fannes_floor).abs() < 1e-12);

        let basis = check_state_inequalities(&PureState::basis(6, 2).unwrap()).unwrap();
        assert!(basis.l1_holds && basis.fannes_holds && basis.range_holds);
        assert_eq!(basis.profile.c_l1, 0.0);
        assert_eq!(basis.l1_bound, 0.0);

        let q = PureState::from_real(&[0.25f64.sqrt(), 0.75f64.sqrt()]).unwrap();
        let q = check_state_inequalities(&q).unwrap();
        assert!(q.l1_holds && q.fannes_holds && q.range_holds);
        // d = 2: every real qubit state saturates the l1/purity relation
        assert!((q.profile.c_l1 - q.l1_bound).abs() < 1e-12);
    }

    #[test]
    fn small_sweep_has_no_violations() {
        let r = run_inequality_sweep(5, 2000, 8).unwrap();
        assert_eq!(r.total_violations(), 0);
        assert!(r.max_l1_ratio <= 1.0 + 1e-12);
        assert!(r.min_fannes_margin >= -1e-12);
    }
}
