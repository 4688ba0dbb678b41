use rand::Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use super::subspace::guaranteed_dimension;
use super::{par_trials, tags};
use crate::analytics;
use crate::measures::decomposition_average_coherence;
use crate::sampler::{
    sample_pure_in_subspace, sample_random_decomposition, sample_random_subspace, Decomposition,
    SubspaceBasis,
};
use crate::{Error, RandomStream, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCheckConfig {
    pub d: u64,
    pub eps: f64,
    pub n_ensembles: u64,
    /// Size of each sampled re-decomposition.
    pub m_out: usize,
    /// Re-decompositions sampled per ensemble.
    pub redecompositions: u64,
    pub master_seed: u64,
}

/// Sampled check that decomposition averages of mixed states supported on the
/// coherent subspace stay above `H_d − 1 − ε`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCheckReport {
    pub config: DecompositionCheckConfig,
    pub s: u64,
    pub threshold: f64,
    pub ensemble_size: usize,
    /// Per ensemble: minimum average over the seed and its re-decompositions.
    pub ensemble_minima: Vec<f64>,
    pub min_average: f64,
    pub decompositions_evaluated: u64,
    /// Decomposition averages below the threshold.
    pub violations: u64,
}

/// Average coherence of `seed` and of `redecompositions` random
/// re-decompositions of it; returns `(minimum, all averages)`.
///
/// Re-decomposition `r` uses stream `family(master_seed, tag, index_base + r)`.
pub fn min_decomposition_average(
    seed: &Decomposition,
    m_out: usize,
    redecompositions: u64,
    master_seed: u64,
    index_base: u64,
) -> Result<(f64, Vec<f64>)> {
    let mut averages = vec![decomposition_average_coherence(seed)];
    for r in 0..redecompositions {
        let stream = RandomStream::family(master_seed, tags::REDECOMPOSITION, index_base + r);
        let dec = sample_random_decomposition(seed, m_out, stream)?;
        averages.push(decomposition_average_coherence(&dec));
    }
    let min = averages.iter().copied().fold(f64::INFINITY, f64::min);
    Ok((min, averages))
}

fn random_ensemble(basis: &SubspaceBasis, size: usize, stream: RandomStream) -> Result<Decomposition> {
    // Dirichlet(1, ..., 1) weights from normalized exponentials
    let mut rng = stream.rng();
    let raw: Vec<f64> = (0..size).map(|_| rng.sample::<f64, _>(Exp1)).collect();
    let total = crate::summation::sum(raw.iter().copied());
    let weights = raw.iter().map(|w| w / total).collect();
    let states = (0..size as u64)
        .map(|j| sample_pure_in_subspace(basis, stream.child(j)))
        .collect::<Result<Vec<_>>>()?;
    Decomposition::new(weights, states)
}

pub fn run_decomposition_check(config: &DecompositionCheckConfig) -> Result<DecompositionCheckReport> {
    if config.n_ensembles == 0 {
        return Err(Error::InvalidArgument("n_ensembles must be >= 1".into()));
    }
    let size = guaranteed_dimension(config.d, config.eps, 2)?;
    let threshold = analytics::subspace_threshold(config.d, config.eps)?;
    let ensemble_size = (size.s as usize).min(config.m_out);
    if ensemble_size == 0 {
        return Err(Error::InvalidArgument("m_out must be >= 1".into()));
    }
    let basis = sample_random_subspace(
        config.d as usize,
        size.s as usize,
        RandomStream::family(config.master_seed, tags::SUBSPACE, 0),
    )?;
    let per_ensemble = par_trials(config.n_ensembles, |e| {
        let seed = random_ensemble(
            &basis,
            ensemble_size,
            RandomStream::family(config.master_seed, tags::ENSEMBLE, e),
        )?;
        min_decomposition_average(
            &seed,
            config.m_out,
            config.redecompositions,
            config.master_seed,
            e * config.redecompositions,
        )
    })?;
    let violations = per_ensemble
        .iter()
        .flat_map(|(_, all)| all.iter())
        .filter(|&&a| a < threshold)
        .count() as u64;
    let ensemble_minima: Vec<f64> = per_ensemble.iter().map(|(m, _)| *m).collect();
    Ok(DecompositionCheckReport {
        config: *config,
        s: size.s,
        threshold,
        ensemble_size,
        min_average: ensemble_minima.iter().copied().fold(f64::INFINITY, f64::min),
        ensemble_minima,
        decompositions_evaluated: config.n_ensembles * (config.redecompositions + 1),
        violations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measures::relative_entropy_coherence;
    use crate::sampler::sample_haar_pure;

    #[test]
    fn pure_seed_minimum_is_its_coherence() {
        let psi = sample_haar_pure(40, RandomStream::new(1, 1)).unwrap();
        let (min, all) = min_decomposition_average(&Decomposition::pure(psi.clone()), 5, 6, 9, 0).unwrap();
        let cr = relative_entropy_coherence(&psi);
        assert_eq!(all.len(), 7);
        for a in all {
            assert!((a - cr).abs() < 1e-12);
        }
        assert!((min - cr).abs() < 1e-12);
    }

    #[test]
    fn degenerate_weights_behave_as_pure() {
        let psi = sample_haar_pure(30, RandomStream::new(2, 2)).unwrap();
        let other = sample_haar_pure(30, RandomStream::new(2, 3)).unwrap();
        let seed = Decomposition::new(vec![1.0, 0.0], vec![psi.clone(), other]).unwrap();
        let (min, _) = min_decomposition_average(&seed, 4, 5, 11, 0).unwrap();
        assert!((min - relative_entropy_coherence(&psi)).abs() < 1e-12);
    }

    #[test]
    fn small_subspace_is_rejected() {
        let d = 17_000u64;
        let cfg = DecompositionCheckConfig {
            d,
            eps: 0.999 * (d as f64).ln(),
            n_ensembles: 1,
            m_out: 4,
            redecompositions: 1,
            master_seed: 0,
        };
        assert!(matches!(
            run_decomposition_check(&cfg),
            Err(Error::VacuousGuarantee { s: 1, .. })
        ));
    }
}
