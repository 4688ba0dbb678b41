//! Coherence functionals of pure states in the fixed reference basis.
//!
//! Conventions: natural logarithms, `0·ln 0 = 0` (probabilities below
//! [`PROB_FLOOR`] count as zero), and trace distance `‖ρ − σ‖₁` **without**
//! the factor 1/2 that much of the literature includes. The Fannes floor
//! converts back to the half-norm `T = ‖ρ_D − I/d‖₁ / 2` internally.

use serde::{Deserialize, Serialize};

use crate::sampler::{Decomposition, PureState};
use crate::summation::{sum, NeumaierSum};
use crate::{Error, Result};

/// Probabilities below this are treated as exactly zero in entropies.
pub const PROB_FLOOR: f64 = 1e-300;

/// Outcome distribution `p_i = |⟨i|ψ⟩|²` of a measurement in the reference basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagonalDistribution {
    probs: Vec<f64>,
}

impl DiagonalDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidDimension("distribution needs d >= 1".into()));
        }
        if let Some(p) = probs.iter().find(|p| !(**p >= 0.0)) {
            return Err(Error::InvalidArgument(format!("negative probability {p}")));
        }
        let total = sum(probs.iter().copied());
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("probabilities sum to {total}")));
        }
        Ok(Self { probs })
    }

    pub fn dim(&self) -> usize {
        self.probs.len()
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }
}

/// Every coherence quantity of a single pure state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CoherenceProfile {
    pub c_r: f64,
    pub c_l1: f64,
    pub purity: f64,
    pub trace_dist_mm: f64,
    pub fannes_floor: f64,
    /// `ln d − T ln(d−1) − H₂(T)`; never below `fannes_floor`.
    pub fannes_floor_sharp: f64,
}

pub fn diagonal_part(psi: &PureState) -> DiagonalDistribution {
    DiagonalDistribution {
        probs: psi.amplitudes().iter().map(|a| a.norm_sqr()).collect(),
    }
}

/// `−Σ p_i ln p_i` in nats.
pub fn shannon_entropy(p: &DiagonalDistribution) -> f64 {
    entropy_of(p.probs())
}

fn entropy_of(probs: &[f64]) -> f64 {
    let h = -sum(probs
        .iter()
        .filter(|&&p| p >= PROB_FLOOR)
        .map(|&p| p * p.ln()));
    h.max(0.0)
}

/// Binary entropy `H₂(t) = −t ln t − (1−t) ln(1−t)` in nats.
pub fn binary_entropy(t: f64) -> f64 {
    entropy_of(&[t, 1.0 - t])
}

/// Relative entropy of coherence `C_r(ψ) = S(ρ_D(ψ))` (the state's own
/// entropy vanishes).
pub fn relative_entropy_coherence(psi: &PureState) -> f64 {
    let probs: Vec<f64> = psi.amplitudes().iter().map(|a| a.norm_sqr()).collect();
    entropy_of(&probs)
}

/// `C_l1(ψ) = Σ_{i≠j} |ψ_i||ψ_j| = (Σ_i |ψ_i|)² − 1`.
pub fn l1_coherence_pure(psi: &PureState) -> f64 {
    let s = sum(psi.amplitudes().iter().map(|a| a.norm()));
    (s * s - 1.0).max(0.0)
}

/// Classical purity `Tr[ρ_D²] = Σ_i p_i²`.
pub fn classical_purity(psi: &PureState) -> f64 {
    sum(psi.amplitudes().iter().map(|a| {
        let p = a.norm_sqr();
        p * p
    }))
}

/// `‖ρ_D(ψ) − I/d‖₁ = Σ_i |p_i − 1/d|`.
pub fn trace_distance_diag_mm(psi: &PureState) -> f64 {
    let inv_d = 1.0 / psi.dim() as f64;
    sum(psi.amplitudes().iter().map(|a| (a.norm_sqr() - inv_d).abs()))
}

/// Coherence of formation of a pure state; its only decomposition is itself.
pub fn coherence_of_formation_pure(psi: &PureState) -> f64 {
    relative_entropy_coherence(psi)
}

/// `Σ_a p_a S(ρ_D(ψ_a))`, an upper bound on the coherence of formation of the
/// ensemble's density matrix.
pub fn decomposition_average_coherence(dec: &Decomposition) -> f64 {
    let mut acc = NeumaierSum::new();
    for (p, psi) in dec.iter() {
        if p > 0.0 {
            acc.add(p * relative_entropy_coherence(psi));
        }
    }
    acc.value()
}

/// Half trace distance `T = ‖ρ_D(ψ) − I/d‖₁ / 2`, clamped to `[0, 1]`.
fn half_trace_distance(psi: &PureState) -> f64 {
    (0.5 * trace_distance_diag_mm(psi)).clamp(0.0, 1.0)
}

/// Per-state floor `(1 − T) ln d − H₂(T)` on `C_r`; negative values are
/// vacuous. Returns 0 for `d = 1`.
pub fn fannes_floor(psi: &PureState) -> f64 {
    let d = psi.dim();
    if d < 2 {
        return 0.0;
    }
    let t = half_trace_distance(psi);
    (1.0 - t) * (d as f64).ln() - binary_entropy(t)
}

/// Sharper floor `ln d − T ln(d − 1) − H₂(T)`. Returns 0 for `d = 1`.
pub fn fannes_floor_sharp(psi: &PureState) -> f64 {
    let d = psi.dim();
    if d < 2 {
        return 0.0;
    }
    let t = half_trace_distance(psi);
    let df = d as f64;
    df.ln() - t * (df - 1.0).ln() - binary_entropy(t)
}

pub fn profile(psi: &PureState) -> CoherenceProfile {
    CoherenceProfile {
        c_r: relative_entropy_coherence(psi),
        c_l1: l1_coherence_pure(psi),
        purity: classical_purity(psi),
        trace_dist_mm: trace_distance_diag_mm(psi),
        fannes_floor: fannes_floor(psi),
        fannes_floor_sharp: fannes_floor_sharp(psi),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Complex64;

    const LN2: f64 = std::f64::consts::LN_2;

    fn quarter() -> PureState {
        PureState::from_real(&[0.25f64.sqrt(), 0.75f64.sqrt()]).unwrap()
    }

    /// Direct O(d²) evaluation of Σ_{i≠j} |ρ_ij| for ρ = |ψ⟩⟨ψ|.
    fn l1_double_sum(psi: &PureState) -> f64 {
        let a = psi.amplitudes();
        let mut acc = 0.0;
        for i in 0..a.len() {
            for j in 0..a.len() {
                if i != j {
                    acc += (a[i] * a[j].conj()).norm();
                }
            }
        }
        acc
    }

    #[test]
    fn diagonal_part_examples() {
        assert_eq!(diagonal_part(&PureState::basis(3, 0).unwrap()).probs(), &[1.0, 0.0, 0.0]);
        for p in diagonal_part(&PureState::uniform(4).unwrap()).probs() {
            assert!((p - 0.25).abs() < 1e-15);
        }
        let q = diagonal_part(&quarter());
        assert!((q.probs()[0] - 0.25).abs() < 1e-15 && (q.probs()[1] - 0.75).abs() < 1e-15);
    }

    #[test]
    fn shannon_entropy_examples() {
        let h = |v: Vec<f64>| shannon_entropy(&DiagonalDistribution::new(v).unwrap());
        assert_eq!(h(vec![1.0, 0.0, 0.0]), 0.0);
        assert!((h(vec![0.25; 4]) - 4f64.ln()).abs() < 1e-15);
        let oracle = -0.25 * 0.25f64.ln() - 0.75 * 0.75f64.ln();
        assert!((h(vec![0.25, 0.75]) - oracle).abs() < 1e-15);
        assert!((oracle - 0.562335).abs() < 1e-6);
    }

    #[test]
    fn underflowing_probabilities_count_as_zero() {
        let h = entropy_of(&[1.0, 1e-320]);
        assert_eq!(h, 0.0);
        assert!(h.is_finite());
    }

    #[test]
    fn distribution_validation() {
        assert!(DiagonalDistribution::new(vec![]).is_err());
        assert!(DiagonalDistribution::new(vec![0.5, 0.6]).is_err());
        assert!(DiagonalDistribution::new(vec![1.5, -0.5]).is_err());
    }

    #[test]
    fn relative_entropy_examples() {
        for d in [1, 2, 17] {
            assert_eq!(relative_entropy_coherence(&PureState::basis(d, d - 1).unwrap()), 0.0);
            let u = PureState::uniform(d).unwrap();
            assert!((relative_entropy_coherence(&u) - (d as f64).ln()).abs() < 1e-13);
        }
        assert!((relative_entropy_coherence(&quarter()) - 0.562335).abs() < 1e-6);
    }

    #[test]
    fn l1_examples() {
        assert_eq!(l1_coherence_pure(&PureState::basis(5, 2).unwrap()), 0.0);
        assert!((l1_coherence_pure(&PureState::uniform(4).unwrap()) - 3.0).abs() < 1e-14);
        let q = quarter();
        assert!((l1_double_sum(&q) - 2.0 * 0.25f64.sqrt() * 0.75f64.sqrt()).abs() < 1e-15);
        assert!((l1_coherence_pure(&q) - l1_double_sum(&q)).abs() < 1e-14);
        assert!((l1_coherence_pure(&q) - 0.866025).abs() < 1e-6);
    }

    #[test]
    fn l1_closed_form_matches_double_sum_on_complex_states() {
        for d in [2usize, 5, 16, 64] {
            let amps: Vec<Complex64> = (0..d)
                .map(|i| Complex64::new((i as f64 * 0.7).sin(), (i as f64 * 1.3).cos()))
                .collect();
            let psi = PureState::from_unnormalized(amps).unwrap();
            assert!((l1_coherence_pure(&psi) - l1_double_sum(&psi)).abs() < 1e-11 * d as f64);
        }
    }

    #[test]
    fn purity_examples() {
        assert_eq!(classical_purity(&PureState::basis(4, 1).unwrap()), 1.0);
        assert!((classical_purity(&PureState::uniform(4).unwrap()) - 0.25).abs() < 1e-15);
        assert!((classical_purity(&quarter()) - 0.625).abs() < 1e-15);
    }

    #[test]
    fn trace_distance_examples() {
        assert!(trace_distance_diag_mm(&PureState::uniform(7).unwrap()) < 1e-15);
        assert!((trace_distance_diag_mm(&PureState::basis(4, 0).unwrap()) - 1.5).abs() < 1e-15);
        assert!((trace_distance_diag_mm(&quarter()) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn formation_of_pure_state() {
        assert_eq!(coherence_of_formation_pure(&PureState::basis(3, 1).unwrap()), 0.0);
        let u = PureState::uniform(8).unwrap();
        assert!((coherence_of_formation_pure(&u) - 8f64.ln()).abs() < 1e-14);
        let q = quarter();
        assert_eq!(coherence_of_formation_pure(&q), relative_entropy_coherence(&q));
    }

    #[test]
    fn decomposition_average_examples() {
        let q = quarter();
        let pure = Decomposition::pure(q.clone());
        assert_eq!(decomposition_average_coherence(&pure), relative_entropy_coherence(&q));
        let incoherent = Decomposition::new(
            vec![0.5, 0.5],
            vec![PureState::basis(2, 0).unwrap(), PureState::basis(2, 1).unwrap()],
        )
        .unwrap();
        assert_eq!(decomposition_average_coherence(&incoherent), 0.0);
    }

    #[test]
    fn fannes_floor_examples() {
        let u = PureState::uniform(9).unwrap();
        assert!((fannes_floor(&u) - 9f64.ln()).abs() < 1e-13);
        assert!((relative_entropy_coherence(&u) - fannes_floor(&u)).abs() < 1e-13);

        let b = PureState::basis(2, 0).unwrap();
        let expected = 0.5 * LN2 - LN2;
        assert!((fannes_floor(&b) - expected).abs() < 1e-15);
        assert!((fannes_floor(&b) + 0.346574).abs() < 1e-6);

        assert_eq!(fannes_floor(&PureState::basis(1, 0).unwrap()), 0.0);
    }

    #[test]
    fn sharp_floor_dominates_weak_floor() {
        for psi in [quarter(), PureState::basis(5, 3).unwrap(), PureState::uniform(6).unwrap()] {
            let p = profile(&psi);
            assert!(p.fannes_floor_sharp >= p.fannes_floor - 1e-15);
            assert!(p.c_r >= p.fannes_floor_sharp - 1e-12);
        }
    }

    #[test]
    fn binary_entropy_endpoints() {
        assert_eq!(binary_entropy(0.0), 0.0);
        assert_eq!(binary_entropy(1.0), 0.0);
        assert!((binary_entropy(0.5) - LN2).abs() < 1e-15);
    }
}
