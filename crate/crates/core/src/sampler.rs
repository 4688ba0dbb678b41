//! Haar-random pure states, unitaries, subspaces and ensemble re-decompositions.
//!
//! Every sampler is a pure function of its [`RandomStream`]. Pure states are
//! drawn by normalizing a vector of `2d` independent standard normals, which is
//! exactly Haar distributed by rotation invariance of the Gaussian and costs
//! O(d). Unitaries and subspace frames come from a QR factorization of a
//! complex Ginibre matrix with `R` normalized to a positive real diagonal.

use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::linalg::{self, CMatrix};
use crate::{Complex64, Error, RandomStream, Result};

/// Tolerance on `Σ|ψ_i|² = 1`.
pub const NORM_TOL: f64 = 1e-12;
/// Tolerance on `Σ p_a = 1` for ensemble weights.
pub const WEIGHT_TOL: f64 = 1e-12;
/// Output vectors of a re-decomposition with squared norm below this are dropped.
pub const ZERO_WEIGHT_DROP: f64 = 1e-14;
/// Entrywise tolerance when checking that a re-decomposition reproduces ρ.
pub const RECONSTRUCTION_TOL: f64 = 1e-9;

/// Unit vector in `C^d`, expressed in the reference basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PureState {
    amplitudes: Vec<Complex64>,
}

impl PureState {
    /// Wraps amplitudes that are already normalized.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension("a pure state needs d >= 1".into()));
        }
        let n2 = linalg::norm_sqr(&amplitudes);
        if !((n2 - 1.0).abs() <= NORM_TOL) {
            return Err(Error::InvalidArgument(format!(
                "amplitudes have squared norm {n2}, expected 1"
            )));
        }
        Ok(Self { amplitudes })
    }

    /// Normalizes arbitrary nonzero amplitudes.
    pub fn from_unnormalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(Error::InvalidDimension("a pure state needs d >= 1".into()));
        }
        let n2 = linalg::norm_sqr(&amplitudes);
        if !(n2 > 0.0 && n2.is_finite()) {
            return Err(Error::Numeric(format!("cannot normalize vector with squared norm {n2}")));
        }
        let inv = n2.sqrt().recip();
        for a in &mut amplitudes {
            *a *= inv;
        }
        Ok(Self { amplitudes })
    }

    /// Real amplitudes, convenient for hand-written states.
    pub fn from_real(amplitudes: &[f64]) -> Result<Self> {
        Self::new(amplitudes.iter().map(|&x| Complex64::new(x, 0.0)).collect())
    }

    /// Reference basis vector `|index⟩` (zero-based).
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if dim == 0 || index >= dim {
            return Err(Error::InvalidDimension(format!(
                "basis index {index} out of range for d = {dim}"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); dim];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes: amps })
    }

    /// Uniform superposition `Σ_i |i⟩ / √d`, the maximally coherent state.
    pub fn uniform(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("a pure state needs d >= 1".into()));
        }
        let a = (dim as f64).sqrt().recip();
        Ok(Self {
            amplitudes: vec![Complex64::new(a, 0.0); dim],
        })
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        linalg::norm_sqr(&self.amplitudes)
    }

    /// `|⟨self|other⟩|`.
    pub fn overlap(&self, other: &PureState) -> f64 {
        linalg::inner(&self.amplitudes, &other.amplitudes).norm()
    }

    /// Euclidean distance `‖ψ − φ‖₂` between amplitude vectors.
    pub fn distance(&self, other: &PureState) -> f64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Applies `u` to the state.
    pub fn apply(&self, u: &UnitaryMatrix) -> Result<PureState> {
        if u.dim() != self.dim() {
            return Err(Error::InvalidDimension(format!(
                "unitary of dimension {} applied to state of dimension {}",
                u.dim(),
                self.dim()
            )));
        }
        let v = CMatrix::from_col_major(self.dim(), 1, self.amplitudes.clone())?;
        let out = u.matrix().matmul(&v);
        PureState::from_unnormalized(out.column(0).to_vec())
    }
}

/// A `d × d` unitary matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryMatrix {
    entries: CMatrix,
}

impl UnitaryMatrix {
    /// Accepts `m` when `‖m†m − I‖_F ≤ 1e-10·d`.
    pub fn new(m: CMatrix) -> Result<Self> {
        if m.rows() != m.cols() || m.rows() == 0 {
            return Err(Error::InvalidDimension(format!(
                "unitary must be square and nonempty, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let defect = m.orthonormality_defect();
        if defect > 1e-10 * m.rows() as f64 {
            return Err(Error::InvalidArgument(format!("matrix is not unitary (defect {defect:e})")));
        }
        Ok(Self { entries: m })
    }

    /// The discrete Fourier matrix `F_jk = ω^{jk}/√d`.
    pub fn fourier(dim: usize) -> Result<Self> {
        if dim == 0 {
            return Err(Error::InvalidDimension("d must be >= 1".into()));
        }
        let scale = (dim as f64).sqrt().recip();
        let m = CMatrix::from_fn(dim, dim, |j, k| {
            let angle = 2.0 * std::f64::consts::PI * ((j * k) % dim) as f64 / dim as f64;
            Complex64::from_polar(scale, angle)
        });
        Self::new(m)
    }

    pub fn dim(&self) -> usize {
        self.entries.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.entries
    }
}

/// Orthonormal frame of an `s`-dimensional subspace of `C^d`.
#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceBasis {
    columns: CMatrix,
}

impl SubspaceBasis {
    pub fn new(columns: CMatrix) -> Result<Self> {
        let (d, s) = (columns.rows(), columns.cols());
        if s == 0 || s > d {
            return Err(Error::InvalidDimension(format!(
                "subspace needs 1 <= s <= d, got s = {s}, d = {d}"
            )));
        }
        let defect = columns.orthonormality_defect();
        if defect > 1e-10 {
            return Err(Error::InvalidArgument(format!(
                "columns are not orthonormal (defect {defect:e})"
            )));
        }
        Ok(Self { columns })
    }

    pub fn ambient_dim(&self) -> usize {
        self.columns.rows()
    }

    pub fn sub_dim(&self) -> usize {
        self.columns.cols()
    }

    pub fn columns(&self) -> &CMatrix {
        &self.columns
    }

    /// Frame coordinates `c_j = ⟨col_j|ψ⟩`.
    pub fn coordinates(&self, psi: &PureState) -> Vec<Complex64> {
        (0..self.sub_dim())
            .map(|j| linalg::inner(self.columns.column(j), psi.amplitudes()))
            .collect()
    }

    /// Squared norm of the orthogonal projection of `ψ` onto the subspace.
    pub fn projection_norm_sqr(&self, psi: &PureState) -> f64 {
        self.coordinates(psi).iter().map(|c| c.norm_sqr()).sum()
    }

    /// `Σ_j c_j |col_j⟩`, normalized.
    pub fn embed(&self, coords: &[Complex64]) -> Result<PureState> {
        if coords.len() != self.sub_dim() {
            return Err(Error::InvalidDimension(format!(
                "{} coordinates for a subspace of dimension {}",
                coords.len(),
                self.sub_dim()
            )));
        }
        let mut out = vec![Complex64::new(0.0, 0.0); self.ambient_dim()];
        for (j, &c) in coords.iter().enumerate() {
            for (o, &x) in out.iter_mut().zip(self.columns.column(j)) {
                *o += c * x;
            }
        }
        PureState::from_unnormalized(out)
    }
}

/// Ensemble `{p_a, |ψ_a⟩}` representing `ρ = Σ_a p_a |ψ_a⟩⟨ψ_a|`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    weights: Vec<f64>,
    states: Vec<PureState>,
}

impl Decomposition {
    pub fn new(weights: Vec<f64>, states: Vec<PureState>) -> Result<Self> {
        if weights.is_empty() || weights.len() != states.len() {
            return Err(Error::InvalidArgument(format!(
                "{} weights for {} states",
                weights.len(),
                states.len()
            )));
        }
        let d = states[0].dim();
        if states.iter().any(|s| s.dim() != d) {
            return Err(Error::InvalidDimension("ensemble states differ in dimension".into()));
        }
        if let Some(w) = weights.iter().find(|w| !(**w >= 0.0) || !w.is_finite()) {
            return Err(Error::InvalidArgument(format!("negative or non-finite weight {w}")));
        }
        let total = crate::summation::sum(weights.iter().copied());
        if (total - 1.0).abs() > WEIGHT_TOL {
            return Err(Error::InvalidArgument(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self { weights, states })
    }

    pub fn pure(state: PureState) -> Self {
        Self {
            weights: vec![1.0],
            states: vec![state],
        }
    }

    pub fn size(&self) -> usize {
        self.weights.len()
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn states(&self) -> &[PureState] {
        &self.states
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &PureState)> {
        self.weights.iter().copied().zip(&self.states)
    }

    /// The `d × m` factor `A` with columns `√p_a |ψ_a⟩`, so that `ρ = A A†`.
    pub fn gram_factor(&self) -> CMatrix {
        let d = self.dim();
        let mut a = CMatrix::zeros(d, self.size());
        for (j, (p, s)) in self.iter().enumerate() {
            let w = p.sqrt();
            for (o, &x) in a.column_mut(j).iter_mut().zip(s.amplitudes()) {
                *o = x * w;
            }
        }
        a
    }

    /// Dense `ρ`; intended for small `d`.
    pub fn density_matrix(&self) -> CMatrix {
        let a = self.gram_factor();
        a.matmul(&a.adjoint())
    }
}

fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    // column-major fill order fixes the draw sequence
    let data = (0..rows * cols).map(|_| complex_normal(rng)).collect();
    CMatrix::from_col_major(rows, cols, data).expect("sizes agree")
}

/// Haar-random pure state in `C^d`.
pub fn sample_haar_pure(d: usize, stream: RandomStream) -> Result<PureState> {
    if d == 0 {
        return Err(Error::InvalidDimension("d must be >= 1".into()));
    }
    let mut rng = stream.rng();
    loop {
        let amps: Vec<Complex64> = (0..d).map(|_| complex_normal(&mut rng)).collect();
        // the all-zero draw has probability zero; redraw rather than divide by 0
        if linalg::norm_sqr(&amps) > 0.0 {
            return PureState::from_unnormalized(amps);
        }
    }
}

/// Haar-random unitary in `U(d)`.
pub fn sample_haar_unitary(d: usize, stream: RandomStream) -> Result<UnitaryMatrix> {
    if d == 0 {
        return Err(Error::InvalidDimension("d must be >= 1".into()));
    }
    let g = ginibre(d, d, &mut stream.rng());
    UnitaryMatrix::new(linalg::orthonormalize_columns(g)?)
}

/// Haar-random `s`-dimensional subspace of `C^d`.
pub fn sample_random_subspace(d: usize, s: usize, stream: RandomStream) -> Result<SubspaceBasis> {
    if s == 0 || s > d {
        return Err(Error::InvalidDimension(format!(
            "subspace needs 1 <= s <= d, got s = {s}, d = {d}"
        )));
    }
    let g = ginibre(d, s, &mut stream.rng());
    SubspaceBasis::new(linalg::orthonormalize_columns(g)?)
}

/// Haar-random pure state inside the span of `basis`.
pub fn sample_pure_in_subspace(basis: &SubspaceBasis, stream: RandomStream) -> Result<PureState> {
    let coords = sample_haar_pure(basis.sub_dim(), stream)?;
    basis.embed(coords.amplitudes())
}

/// Re-decomposes `seed` through a Haar-random isometry into `m_out` states.
pub fn sample_random_decomposition(
    seed: &Decomposition,
    m_out: usize,
    stream: RandomStream,
) -> Result<Decomposition> {
    if m_out < seed.size() {
        return Err(Error::InvalidArgument(format!(
            "m_out = {m_out} is smaller than the seed ensemble size {}",
            seed.size()
        )));
    }
    let w = sample_random_subspace(m_out, seed.size(), stream)?;
    decompose_with_isometry(seed, w.columns())
}

/// Ensemble mixing with an explicit isometry `W` (`m_out × m`, `W†W = I`):
/// `|φ_b⟩ = Σ_a W_ba √p_a |ψ_a⟩`, weights `q_b = ⟨φ_b|φ_b⟩`.
///
/// The result is checked to reproduce the seed's density matrix through the
/// seed's Gram data: with `A = [√p_a ψ_a]` and `B = [φ_b]`, both ensembles live
/// in `span(A)`, so `ρ' = ρ` exactly when `(A†B)(A†B)† = (A†A)²`.
pub fn decompose_with_isometry(seed: &Decomposition, w: &CMatrix) -> Result<Decomposition> {
    let m = seed.size();
    if w.cols() != m || w.rows() < m {
        return Err(Error::InvalidArgument(format!(
            "isometry must be m_out x {m} with m_out >= {m}, got {}x{}",
            w.rows(),
            w.cols()
        )));
    }
    let defect = w.orthonormality_defect();
    if defect > 1e-10 * w.rows() as f64 {
        return Err(Error::InvalidArgument(format!("W is not an isometry (defect {defect:e})")));
    }

    let d = seed.dim();
    let a = seed.gram_factor();
    let mut phis: Vec<Vec<Complex64>> = Vec::with_capacity(w.rows());
    let mut norms = Vec::with_capacity(w.rows());
    for b in 0..w.rows() {
        let mut phi = vec![Complex64::new(0.0, 0.0); d];
        for k in 0..m {
            let coef = w[(b, k)];
            if coef == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (o, &x) in phi.iter_mut().zip(a.column(k)) {
                *o += coef * x;
            }
        }
        let q = linalg::norm_sqr(&phi);
        if q >= ZERO_WEIGHT_DROP {
            norms.push(q);
            phis.push(phi);
        }
    }
    if phis.is_empty() {
        return Err(Error::Numeric("every re-decomposed vector has zero norm".into()));
    }

    let kept = CMatrix::from_col_major(d, phis.len(), phis.concat())?;
    let g = a.adjoint_matmul(&a);
    let cross = a.adjoint_matmul(&kept);
    let lhs = cross.matmul(&cross.adjoint());
    let rhs = g.matmul(&g);
    let err = lhs.max_abs_diff(&rhs);
    if err > RECONSTRUCTION_TOL {
        return Err(Error::Numeric(format!(
            "re-decomposition does not reproduce the density matrix (deviation {err:e})"
        )));
    }

    let total = crate::summation::sum(norms.iter().copied());
    let weights = norms.iter().map(|q| q / total).collect();
    let states = phis
        .into_iter()
        .map(PureState::from_unnormalized)
        .collect::<Result<Vec<_>>>()?;
    Decomposition::new(weights, states)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(i: u64) -> RandomStream {
        RandomStream::new(2024, i)
    }

    #[test]
    fn d1_state_is_a_phase() {
        let psi = sample_haar_pure(1, s(0)).unwrap();
        assert!((psi.amplitudes()[0].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zero_dimension_is_rejected() {
        assert!(matches!(sample_haar_pure(0, s(0)), Err(Error::InvalidDimension(_))));
        assert!(matches!(sample_haar_unitary(0, s(0)), Err(Error::InvalidDimension(_))));
        assert!(matches!(sample_random_subspace(3, 0, s(0)), Err(Error::InvalidDimension(_))));
        assert!(matches!(sample_random_subspace(3, 4, s(0)), Err(Error::InvalidDimension(_))));
    }

    #[test]
    fn sampled_states_are_unit_norm() {
        for (i, d) in [1usize, 2, 7, 100, 4096].into_iter().enumerate() {
            let psi = sample_haar_pure(d, s(i as u64)).unwrap();
            assert!((psi.norm_sqr() - 1.0).abs() < NORM_TOL);
        }
    }

    #[test]
    fn same_stream_same_state() {
        let a = sample_haar_pure(50, s(3)).unwrap();
        let b = sample_haar_pure(50, s(3)).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, sample_haar_pure(50, s(4)).unwrap());
    }

    #[test]
    fn d1_unitary_is_a_phase() {
        let u = sample_haar_unitary(1, s(1)).unwrap();
        assert!((u.matrix()[(0, 0)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unitary_d16_is_unitary() {
        let u = sample_haar_unitary(16, s(2)).unwrap();
        assert!(u.matrix().orthonormality_defect() <= 1e-10 * 16.0);
    }

    #[test]
    fn full_subspace_captures_every_state() {
        let basis = sample_random_subspace(4, 4, s(5)).unwrap();
        let psi = sample_haar_pure(4, s(6)).unwrap();
        assert!((basis.projection_norm_sqr(&psi) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn subspace_columns_orthonormal() {
        let basis = sample_random_subspace(8, 2, s(7)).unwrap();
        assert!(basis.columns().orthonormality_defect() < 1e-10);
    }

    #[test]
    fn subspace_state_lies_in_span() {
        let basis = sample_random_subspace(8, 2, s(8)).unwrap();
        let psi = sample_pure_in_subspace(&basis, s(9)).unwrap();
        assert!((psi.norm_sqr() - 1.0).abs() < 1e-12);
        assert!((basis.projection_norm_sqr(&psi) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn one_dimensional_subspace_returns_its_ray() {
        let basis = sample_random_subspace(6, 1, s(10)).unwrap();
        let ray = PureState::new(basis.columns().column(0).to_vec()).unwrap();
        for i in 0..5 {
            let psi = sample_pure_in_subspace(&basis, s(100 + i)).unwrap();
            assert!((psi.overlap(&ray) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn pure_seed_redecomposes_to_itself() {
        let psi = sample_haar_pure(5, s(11)).unwrap();
        let seed = Decomposition::pure(psi.clone());
        for m_out in [1, 3, 6] {
            let dec = sample_random_decomposition(&seed, m_out, s(12)).unwrap();
            for st in dec.states() {
                assert!((st.overlap(&psi) - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn identity_isometry_reproduces_seed() {
        let seed = Decomposition::new(
            vec![0.5, 0.5],
            vec![PureState::basis(2, 0).unwrap(), PureState::basis(2, 1).unwrap()],
        )
        .unwrap();
        let out = decompose_with_isometry(&seed, &CMatrix::identity(2)).unwrap();
        assert_eq!(out, seed);
    }

    #[test]
    fn redecomposition_rejects_small_m_out() {
        let seed = Decomposition::new(
            vec![0.5, 0.5],
            vec![PureState::basis(3, 0).unwrap(), PureState::basis(3, 1).unwrap()],
        )
        .unwrap();
        assert!(matches!(
            sample_random_decomposition(&seed, 1, s(0)),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn zero_weight_members_are_dropped() {
        // W sends all mass of a single pure seed to the first output
        let seed = Decomposition::pure(PureState::basis(3, 2).unwrap());
        let w = CMatrix::from_col_major(
            3,
            1,
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        )
        .unwrap();
        let out = decompose_with_isometry(&seed, &w).unwrap();
        assert_eq!(out.size(), 1);
        assert_eq!(out.weights(), &[1.0]);
    }

    #[test]
    fn decomposition_validates_weights() {
        let st = || PureState::basis(2, 0).unwrap();
        assert!(Decomposition::new(vec![0.6, 0.6], vec![st(), st()]).is_err());
        assert!(Decomposition::new(vec![1.5, -0.5], vec![st(), st()]).is_err());
        assert!(Decomposition::new(vec![1.0], vec![st(), st()]).is_err());
        assert!(Decomposition::new(
            vec![0.5, 0.5],
            vec![st(), PureState::basis(3, 0).unwrap()]
        )
        .is_err());
    }

    #[test]
    fn fourier_matrix_is_unitary() {
        let f = UnitaryMatrix::fourier(20).unwrap();
        assert!(f.matrix().orthonormality_defect() < 1e-12);
    }
}
