//! Harmonic numbers, log-Gamma, Beta and digamma at the integers.

use crate::summation::NeumaierSum;
use crate::{Error, Result};

/// Euler–Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Largest `d` for which [`harmonic`] sums exactly.
pub const HARMONIC_EXACT_LIMIT: u64 = 1_000_000;

/// `H_d = Σ_{k=1}^d 1/k`.
///
/// Exact compensated summation (smallest terms first) up to
/// [`HARMONIC_EXACT_LIMIT`], Euler–Maclaurin `ln d + γ + 1/(2d) − 1/(12d²)`
/// beyond; the two agree to ~1e-16 at the switchover.
pub fn harmonic(d: u64) -> Result<f64> {
    if d == 0 {
        return Err(Error::InvalidArgument("harmonic number needs d >= 1".into()));
    }
    Ok(harmonic_from_zero(d))
}

fn harmonic_from_zero(d: u64) -> f64 {
    if d <= HARMONIC_EXACT_LIMIT {
        let mut acc = NeumaierSum::new();
        for k in (1..=d).rev() {
            acc.add(1.0 / k as f64);
        }
        acc.value()
    } else {
        harmonic_asymptotic(d)
    }
}

/// Euler–Maclaurin approximation of `H_d`.
pub fn harmonic_asymptotic(d: u64) -> f64 {
    let x = d as f64;
    x.ln() + EULER_GAMMA + 0.5 / x - 1.0 / (12.0 * x * x)
}

/// `Ψ(n) = H_{n−1} − γ` for integer `n ≥ 1`.
pub fn digamma_integer(n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("digamma has a pole at 0".into()));
    }
    Ok(harmonic_from_zero(n - 1) - EULER_GAMMA)
}

const LANCZOS_G: f64 = 7.0;
// published coefficients, kept digit-for-digit
#[allow(clippy::excessive_precision)]
const LANCZOS_COEF: [f64; 9] = [
    0.999_999_999_999_809_93,
    676.520_368_121_885_1,
    -1_259.139_216_722_402_8,
    771.323_428_777_653_13,
    -176.615_029_162_140_59,
    12.507_343_278_686_905,
    -0.138_571_095_265_720_12,
    9.984_369_578_019_571_6e-6,
    1.505_632_735_149_311_6e-7,
];

/// `ln Γ(x)` for `x > 0` (Lanczos, g = 7).
pub fn ln_gamma(x: f64) -> f64 {
    if x < 0.5 {
        // reflection: Γ(x)Γ(1−x) = π / sin(πx)
        let pi = std::f64::consts::PI;
        return (pi / (pi * x).sin()).ln() - ln_gamma(1.0 - x);
    }
    let x = x - 1.0;
    let mut a = LANCZOS_COEF[0];
    let t = x + LANCZOS_G + 0.5;
    for (i, &c) in LANCZOS_COEF.iter().enumerate().skip(1) {
        a += c / (x + i as f64);
    }
    0.5 * (2.0 * std::f64::consts::PI).ln() + (x + 0.5) * t.ln() - t + a.ln()
}

fn as_small_integer(x: f64) -> Option<u64> {
    (x.fract() == 0.0 && (1.0..=1e6).contains(&x)).then_some(x as u64)
}

/// `ln B(α, β)`.
pub fn ln_beta(alpha: f64, beta_arg: f64) -> Result<f64> {
    check_beta_args(alpha, beta_arg)?;
    Ok(ln_gamma(alpha) + ln_gamma(beta_arg) - ln_gamma(alpha + beta_arg))
}

/// `B(α, β) = Γ(α)Γ(β)/Γ(α+β)`.
///
/// Integer arguments with `min(α, β) ≤ 1000` use the finite product
/// `B(m, n) = (1/n) Π_{k=1}^{m−1} k/(n+k)`, which avoids the cancellation
/// between large log-Gamma values; everything else goes through log-Gamma.
pub fn beta(alpha: f64, beta_arg: f64) -> Result<f64> {
    check_beta_args(alpha, beta_arg)?;
    if let (Some(a), Some(b)) = (as_small_integer(alpha), as_small_integer(beta_arg)) {
        let (m, n) = (a.min(b), a.max(b));
        if m <= 1000 {
            let n = n as f64;
            let mut acc = 1.0 / n;
            for k in 1..m {
                let k = k as f64;
                acc *= k / (n + k);
            }
            return Ok(acc);
        }
    }
    Ok(ln_beta(alpha, beta_arg)?.exp())
}

fn check_beta_args(alpha: f64, beta_arg: f64) -> Result<()> {
    if !(alpha > 0.0 && beta_arg > 0.0) || !alpha.is_finite() || !beta_arg.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Beta function needs positive finite arguments, got ({alpha}, {beta_arg})"
        )));
    }
    Ok(())
}
