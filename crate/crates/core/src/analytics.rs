//! Closed-form expectations, Lévy concentration bounds and coherent-subspace
//! dimensions for Haar-random pure states.
//!
//! Bounds are returned as [`BoundValue`]s carrying the raw value, the value
//! capped at 1, and the natural log of the raw value computed directly in the
//! exponent domain, so nothing is lost when `raw` underflows.

use std::f64::consts::{E, LN_2, PI};

use serde::{Deserialize, Serialize};

use crate::measures::binary_entropy;
use crate::{quadrature, Error, Result};

pub use crate::special::{beta, digamma_integer, harmonic, EULER_GAMMA};

/// `1/K` in the coherent-subspace dimension `s = ⌊d K (ε/ln d)^{2.5}⌋`.
pub const SUBSPACE_K_INV: f64 = 16461.0;
/// Smallest ambient dimension for which a subspace with `s ≥ 2` is guaranteed.
pub const MIN_D_NONTRIVIAL_SUBSPACE: u64 = 32921;

/// Parameters of the generic Lévy bound on the `k`-sphere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LevyParams {
    pub sphere_dim_k: u64,
    pub epsilon: f64,
    pub lipschitz_eta: f64,
}

impl LevyParams {
    pub fn new(sphere_dim_k: u64, epsilon: f64, lipschitz_eta: f64) -> Result<Self> {
        if sphere_dim_k == 0 {
            return Err(Error::InvalidArgument("sphere dimension k must be >= 1".into()));
        }
        check_positive("epsilon", epsilon)?;
        if !(lipschitz_eta > 0.0) || lipschitz_eta.is_nan() {
            return Err(Error::InvalidArgument(format!(
                "Lipschitz constant must be positive, got {lipschitz_eta}"
            )));
        }
        Ok(Self {
            sphere_dim_k,
            epsilon,
            lipschitz_eta,
        })
    }

    /// Parameters for pure states in `C^d`, which live on the `(2d−1)`-sphere.
    pub fn for_pure_states(d: u64, epsilon: f64, lipschitz_eta: f64) -> Result<Self> {
        if d == 0 {
            return Err(Error::InvalidDimension("d must be >= 1".into()));
        }
        Self::new(2 * d - 1, epsilon, lipschitz_eta)
    }
}

/// A probability bound that may exceed 1 or underflow.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundValue {
    pub raw: f64,
    pub effective: f64,
    pub log_raw: f64,
}

impl BoundValue {
    pub fn from_log(log_raw: f64) -> Self {
        let raw = log_raw.exp();
        Self {
            raw,
            effective: raw.min(1.0),
            log_raw,
        }
    }

    /// The trivial bound `2`, used where no Lipschitz constant is available.
    pub fn vacuous() -> Self {
        Self::from_log(LN_2)
    }

    pub fn is_vacuous(&self) -> bool {
        self.effective >= 1.0
    }
}

/// Size of the coherent subspace together with the small-`d` warning flag.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubspaceSize {
    pub s: u64,
    /// `d < 32921`: the formula cannot give `s ≥ 2` for any admissible ε.
    pub below_nontrivial_scale: bool,
}

fn check_positive(name: &str, x: f64) -> Result<()> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::InvalidArgument(format!("{name} must be positive and finite, got {x}")));
    }
    Ok(())
}

fn check_dim(d: u64, min: u64) -> Result<()> {
    if d < min {
        return Err(Error::InvalidDimension(format!("d = {d}, need d >= {min}")));
    }
    Ok(())
}

/// `E_ψ C_r(ψ) = H_d − 1 = Σ_{k=2}^d 1/k`.
pub fn expected_cr(d: u64) -> Result<f64> {
    check_dim(d, 1)?;
    Ok(harmonic(d)? - 1.0)
}

/// `E_ψ C_r` through the Beta-function derivative:
/// `−d(d−1) (Ψ(2) − Ψ(d+1)) B(2, d−1)`.
pub fn expected_cr_via_beta(d: u64) -> Result<f64> {
    check_dim(d, 2)?;
    let df = d as f64;
    let dpsi = digamma_integer(2)? - digamma_integer(d + 1)?;
    Ok(-df * (df - 1.0) * dpsi * beta(2.0, df - 1.0)?)
}

/// `E_ψ C_r = −d(d−1) ∫₀¹ r (1−r)^{d−2} ln r dr` by adaptive quadrature.
/// Supported for `2 ≤ d ≤ 50`.
pub fn expected_cr_via_quadrature(d: u64) -> Result<f64> {
    if !(2..=50).contains(&d) {
        return Err(Error::Unsupported(format!(
            "quadrature route supports 2 <= d <= 50, got d = {d}"
        )));
    }
    let power = (d - 2) as i32;
    let integrand = |r: f64| {
        if r <= 0.0 {
            0.0
        } else {
            r * (1.0 - r).powi(power) * r.ln()
        }
    };
    let integral = quadrature::integrate(integrand, 0.0, 1.0, 1e-14)?;
    let df = d as f64;
    Ok(-df * (df - 1.0) * integral)
}

/// `E_ψ Tr[ρ_D(ψ)²] = 2/(d+1)`.
pub fn expected_classical_purity(d: u64) -> Result<f64> {
    check_dim(d, 1)?;
    Ok(2.0 / (d as f64 + 1.0))
}

/// `E_ψ ‖ρ_D(ψ) − I/d‖₁ = 2(1 − 1/d)^d`.
pub fn expected_trace_distance(d: u64) -> Result<f64> {
    check_dim(d, 1)?;
    let df = d as f64;
    Ok(2.0 * (df * (-1.0 / df).ln_1p()).exp())
}

/// `2 exp(−(k+1) ε² / (9 π³ η² ln 2))`.
pub fn levy_generic(params: &LevyParams) -> BoundValue {
    let k1 = params.sphere_dim_k as f64 + 1.0;
    let eta2 = params.lipschitz_eta * params.lipschitz_eta;
    let exponent = k1 * params.epsilon * params.epsilon / (9.0 * PI.powi(3) * eta2 * LN_2);
    BoundValue::from_log(LN_2 - exponent)
}

/// Exponent of the relative-entropy bound, `d ε² / (36 π³ ln 2 (ln d)²)`.
fn cr_exponent(d: u64, eps: f64) -> f64 {
    let ln_d = (d as f64).ln();
    d as f64 * eps * eps / (36.0 * PI.powi(3) * LN_2 * ln_d * ln_d)
}

/// `Pr{|C_r − (H_d − 1)| > ε} ≤ 2 exp(−d ε² / (36 π³ ln 2 (ln d)²))`, `d ≥ 3`.
pub fn levy_bound_cr(d: u64, eps: f64) -> Result<BoundValue> {
    check_dim(d, 3)?;
    check_positive("epsilon", eps)?;
    Ok(BoundValue::from_log(LN_2 - cr_exponent(d, eps)))
}

/// Ratio of the printed relative-entropy exponent to the generic exponent with
/// `k + 1 = 2d` and `η = √8 ln d`. Exactly 1 when the constants agree.
pub fn levy_cr_exponent_ratio(d: u64, eps: f64) -> Result<f64> {
    let generic = levy_generic(&LevyParams::new(2 * d - 1, eps, lipschitz_cr(d)?)?);
    Ok((LN_2 - levy_bound_cr(d, eps)?.log_raw) / (LN_2 - generic.log_raw))
}

fn eta2_exponent(d: u64, eps: f64) -> f64 {
    d as f64 * eps * eps / (18.0 * PI.powi(3) * LN_2)
}

/// `Pr{|P(Π(ψ)) − 2/(d+1)| > ε} ≤ 2 exp(−d ε² / (18 π³ ln 2))` (η = 2).
pub fn levy_bound_purity(d: u64, eps: f64) -> Result<BoundValue> {
    check_dim(d, 1)?;
    check_positive("epsilon", eps)?;
    Ok(BoundValue::from_log(LN_2 - eta2_exponent(d, eps)))
}

/// Trace distance to `I/d`; same functional form as [`levy_bound_purity`].
pub fn levy_bound_trdist(d: u64, eps: f64) -> Result<BoundValue> {
    levy_bound_purity(d, eps)
}

/// Lipschitz constant `√8 ln d` of `C_r`, valid for `d ≥ 3`.
pub fn lipschitz_cr(d: u64) -> Result<f64> {
    if d < 3 {
        return Err(Error::Unsupported(format!(
            "Lipschitz bound sqrt(8) ln d holds only for d >= 3, got d = {d}"
        )));
    }
    Ok(8f64.sqrt() * (d as f64).ln())
}

fn check_subspace_args(d: u64, eps: f64) -> Result<f64> {
    if d < 3 {
        return Err(Error::InvalidDimension(format!("subspace guarantee needs d >= 3, got {d}")));
    }
    let ln_d = (d as f64).ln();
    if !(eps > 0.0 && eps < ln_d) {
        return Err(Error::InvalidEpsilon { eps, ln_d });
    }
    Ok(ln_d)
}

/// `s = ⌊d (ε/ln d)^{2.5} / 16461⌋`; zero means no subspace is guaranteed.
pub fn subspace_dimension(d: u64, eps: f64) -> Result<SubspaceSize> {
    let ln_d = check_subspace_args(d, eps)?;
    let x = d as f64 * (eps / ln_d).powf(2.5) / SUBSPACE_K_INV;
    Ok(SubspaceSize {
        s: x.floor() as u64,
        below_nontrivial_scale: d < MIN_D_NONTRIVIAL_SUBSPACE,
    })
}

/// Coherence floor `H_d − 1 − ε` met by every state of the coherent subspace.
pub fn subspace_threshold(d: u64, eps: f64) -> Result<f64> {
    check_subspace_args(d, eps)?;
    Ok(expected_cr(d)? - eps)
}

/// Net resolution `ε₀ = ε / (√8 ln d)` used for the coherent-subspace argument.
pub fn subspace_net_epsilon(d: u64, eps: f64) -> Result<f64> {
    check_subspace_args(d, eps)?;
    Ok(eps / lipschitz_cr(d)?)
}

/// `ln` of the ε₀-net size bound `(5/ε₀)^{2d}`.
pub fn net_log_size(d: u64, eps0: f64) -> Result<f64> {
    check_dim(d, 1)?;
    if !(eps0 > 0.0 && eps0 < 1.0) {
        return Err(Error::InvalidArgument(format!("net resolution must lie in (0, 1), got {eps0}")));
    }
    Ok(2.0 * d as f64 * (5.0 / eps0).ln())
}

/// `C_l1(ψ) ≤ √(d(d−1)(1 − P))` given the classical purity `P`.
pub fn l1_upper_bound_from_purity(d: u64, purity: f64) -> Result<f64> {
    check_dim(d, 1)?;
    let df = d as f64;
    let slack = 1e-12;
    if !(purity >= 1.0 / df - slack && purity <= 1.0 + slack) {
        return Err(Error::InvalidArgument(format!(
            "purity {purity} outside [1/d, 1] for d = {d}"
        )));
    }
    Ok((df * (df - 1.0) * (1.0 - purity).max(0.0)).sqrt())
}

/// Typical-state l1 ceiling `√(d(d−1)²/(d+1))`.
pub fn typical_l1_upper(d: u64) -> Result<f64> {
    check_dim(d, 1)?;
    let df = d as f64;
    Ok((df * (df - 1.0) * (df - 1.0) / (df + 1.0)).sqrt())
}

/// `lim_d (1 − (1 − 1/d)^d) = 1 − 1/e`.
pub fn fannes_asymptote() -> f64 {
    1.0 - 1.0 / E
}

/// `(1 − 1/d)^d`, the typical half trace distance of `ρ_D` from `I/d`.
pub fn typical_half_trace_distance(d: u64) -> Result<f64> {
    Ok(0.5 * expected_trace_distance(d)?)
}

/// Typical-state coherence floor `(1 − T) ln d − H₂(T)` with `T = (1−1/d)^d`.
pub fn typical_fannes_floor(d: u64) -> Result<f64> {
    check_dim(d, 2)?;
    let t = typical_half_trace_distance(d)?;
    Ok((1.0 - t) * (d as f64).ln() - binary_entropy(t))
}
