//! Convolution weights of discrete fractional derivatives.
//!
//! A discrete derivative of order `α` acts as `τ^{-α} Σ_j K_{n-j} v^j`. The
//! weights `K_j` are the Taylor coefficients of a generating function `K(ζ)`:
//!
//! * BDF-k convolution quadrature: `(Σ_{j=1}^k (1-ζ)^j / j)^α`, with `k = 1`
//!   the backward Euler (Grünwald–Letnikov) case `(1-ζ)^α`;
//! * L1 scheme: `(1-ζ)^2 ζ^{-1} Li_{α-1}(ζ) / Γ(2-α)`.

mod diagnostics;
mod polylog;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{check_order, param, Error, Result};
use crate::special::gamma;

pub use diagnostics::{
    bdf_no_root_margin, check_kernel_consistency, check_multiplier_criterion, check_multiplier_criterion_for_weights,
    criterion_grid, hardy_phi, l1_symbol_estimates, ConsistencyReport, DiagnosticRecord, HardyCoefficients,
    MultiplierReport, SymbolEstimates, CRITERION_EXCLUSION,
};
pub use polylog::{l1_circle_series, polylog_exp, polylog_on_circle, ExpPolylog};

/// Highest BDF order with a root-free symbol on the unit circle.
pub const MAX_BDF_ORDER: u8 = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum KernelScheme {
    /// Convolution quadrature generated by BDF-`k`; `Bdf(1)` is backward Euler.
    Bdf(u8),
    L1,
}

impl KernelScheme {
    pub const BACKWARD_EULER: KernelScheme = KernelScheme::Bdf(1);

    pub fn bdf(order: u8) -> Result<Self> {
        let scheme = KernelScheme::Bdf(order);
        scheme.validate()?;
        Ok(scheme)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            KernelScheme::Bdf(k) if !(1..=MAX_BDF_ORDER).contains(&k) => Err(param(
                "k",
                format!("BDF order must lie in 1..={MAX_BDF_ORDER}, got {k}"),
            )),
            _ => Ok(()),
        }
    }

    /// Every supported scheme: BE, BDF2..BDF6, L1.
    pub fn all() -> Vec<KernelScheme> {
        (1..=MAX_BDF_ORDER)
            .map(KernelScheme::Bdf)
            .chain(std::iter::once(KernelScheme::L1))
            .collect()
    }
}

impl fmt::Display for KernelScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KernelScheme::Bdf(1) => write!(f, "BE"),
            KernelScheme::Bdf(k) => write!(f, "BDF{k}"),
            KernelScheme::L1 => write!(f, "L1"),
        }
    }
}

impl FromStr for KernelScheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let upper = s.trim().to_ascii_uppercase();
        match upper.as_str() {
            "BE" | "BDF1" => Ok(KernelScheme::BACKWARD_EULER),
            "L1" => Ok(KernelScheme::L1),
            other => {
                let k = other
                    .strip_prefix("BDF")
                    .and_then(|d| d.parse::<u8>().ok())
                    .ok_or_else(|| param("scheme", format!("unknown scheme `{s}`")))?;
                KernelScheme::bdf(k)
            }
        }
    }
}

impl TryFrom<String> for KernelScheme {
    type Error = Error;
    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<KernelScheme> for String {
    fn from(s: KernelScheme) -> String {
        s.to_string()
    }
}

/// A discrete fractional derivative: scheme, order, step and weights.
///
/// The weights do not depend on `tau`; it only fixes the `τ^{-α}` prefactor.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelWeights {
    pub scheme: KernelScheme,
    pub alpha: f64,
    pub tau: f64,
    pub weights: Vec<f64>,
}

impl KernelWeights {
    /// The first `count` weights of `scheme`, with unit step.
    pub fn generate(scheme: KernelScheme, alpha: f64, count: usize) -> Result<Self> {
        match scheme {
            KernelScheme::Bdf(1) => be_cq_weights(alpha, count),
            KernelScheme::Bdf(k) => bdf_cq_weights(k, alpha, count),
            KernelScheme::L1 => l1_weights(alpha, count),
        }
    }

    pub fn with_step(mut self, tau: f64) -> Result<Self> {
        if !(tau > 0.0) || !tau.is_finite() {
            return Err(param("tau", format!("step must be positive, got {tau}")));
        }
        self.tau = tau;
        Ok(self)
    }

    /// `τ^{-α}`.
    pub fn prefactor(&self) -> f64 {
        self.tau.powf(-self.alpha)
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Partial sums `Σ_{j≤n} K_j`, accumulated with Kahan compensation.
    pub fn partial_sums(&self) -> Vec<f64> {
        let mut sum = 0.0;
        let mut carry = 0.0;
        self.weights
            .iter()
            .map(|&w| {
                let y = w - carry;
                let t = sum + y;
                carry = (t - sum) - y;
                sum = t;
                sum
            })
            .collect()
    }
}

fn check_count(count: usize) -> Result<()> {
    if count == 0 {
        Err(param("count", "need at least one weight"))
    } else {
        Ok(())
    }
}

/// Backward Euler CQ (Grünwald–Letnikov): coefficients of `(1-ζ)^α`.
pub fn be_cq_weights(alpha: f64, count: usize) -> Result<KernelWeights> {
    check_order(alpha)?;
    check_count(count)?;
    let mut weights = Vec::with_capacity(count);
    let mut w = 1.0;
    weights.push(w);
    for j in 1..count {
        w *= 1.0 - (alpha + 1.0) / j as f64;
        weights.push(w);
    }
    Ok(KernelWeights {
        scheme: KernelScheme::BACKWARD_EULER,
        alpha,
        tau: 1.0,
        weights,
    })
}

/// Monomial coefficients of `Σ_{j=1}^k (1-ζ)^j / j`.
pub fn bdf_polynomial(k: u8) -> Vec<f64> {
    let k = k as usize;
    let mut coeffs = vec![0.0; k + 1];
    for j in 1..=k {
        // (1-ζ)^j = Σ_i C(j,i) (-1)^i ζ^i
        let mut binom = 1.0;
        for (i, c) in coeffs.iter_mut().enumerate().take(j + 1) {
            let sign = if i % 2 == 0 { 1.0 } else { -1.0 };
            *c += sign * binom / j as f64;
            binom = binom * (j - i) as f64 / (i + 1) as f64;
        }
    }
    coeffs
}

/// Taylor coefficients of `p(ζ)^α` for a polynomial with `p(0) > 0`, by the
/// J. C. P. Miller recurrence
/// `n p_0 a_n = Σ_{i=1}^{min(n,deg)} ((α+1) i - n) p_i a_{n-i}`.
pub fn polynomial_power_series(poly: &[f64], alpha: f64, count: usize) -> Vec<f64> {
    assert!(poly[0] > 0.0, "constant term must be positive");
    let deg = poly.len() - 1;
    let mut a = Vec::with_capacity(count);
    if count == 0 {
        return a;
    }
    a.push(poly[0].powf(alpha));
    for n in 1..count {
        let nf = n as f64;
        let mut s = 0.0;
        for i in 1..=deg.min(n) {
            s += ((alpha + 1.0) * i as f64 - nf) * poly[i] * a[n - i];
        }
        a.push(s / (nf * poly[0]));
    }
    a
}

/// BDF-k convolution quadrature weights, `1 ≤ k ≤ 6`.
pub fn bdf_cq_weights(k: u8, alpha: f64, count: usize) -> Result<KernelWeights> {
    let scheme = KernelScheme::bdf(k)?;
    check_order(alpha)?;
    check_count(count)?;
    let poly = bdf_polynomial(k);
    Ok(KernelWeights {
        scheme,
        alpha,
        tau: 1.0,
        weights: polynomial_power_series(&poly, alpha, count),
    })
}

/// L1 weights: `K_0 = 1/Γ(2-α)`, and for `j ≥ 1`
/// `K_j = ((j+1)^{1-α} - 2 j^{1-α} + (j-1)^{1-α}) / Γ(2-α)`.
pub fn l1_weights(alpha: f64, count: usize) -> Result<KernelWeights> {
    check_order(alpha)?;
    check_count(count)?;
    let g = gamma(2.0 - alpha);
    let p = 1.0 - alpha;
    let weights = (0..count)
        .map(|j| {
            if j == 0 {
                1.0 / g
            } else {
                let jf = j as f64;
                ((jf + 1.0).powf(p) - 2.0 * jf.powf(p) + (jf - 1.0).powf(p)) / g
            }
        })
        .collect();
    Ok(KernelWeights {
        scheme: KernelScheme::L1,
        alpha,
        tau: 1.0,
        weights,
    })
}

/// Reduces `θ` to `[0, 2π)`.
fn reduce_angle(theta: f64) -> f64 {
    theta.rem_euclid(std::f64::consts::TAU)
}

fn check_angle(theta: f64) -> Result<f64> {
    if !theta.is_finite() {
        return Err(param("theta", "angle must be finite"));
    }
    let t = reduce_angle(theta);
    let dist = t.min(std::f64::consts::TAU - t);
    if dist < 1e-14 {
        return Err(Error::Domain(format!(
            "generating function is singular at ζ = 1 (θ = {theta})"
        )));
    }
    Ok(t)
}

/// `K(e^{-iθ})`. Fractional powers use the principal branch.
///
/// For the L1 scheme the polylogarithm is evaluated through its Hurwitz-zeta
/// circle representation rather than the slowly decaying weight series.
pub fn generating_function(scheme: KernelScheme, alpha: f64, tau: f64, theta: f64) -> Result<Complex64> {
    Ok(symbol_and_derivative(scheme, alpha, tau, theta)?.0)
}

/// `K(ζ)` and `K'(ζ)` at `ζ = e^{-iθ}`.
pub fn symbol_and_derivative(scheme: KernelScheme, alpha: f64, tau: f64, theta: f64) -> Result<(Complex64, Complex64)> {
    scheme.validate()?;
    check_order(alpha)?;
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(param("tau", format!("step must be positive, got {tau}")));
    }
    let theta = check_angle(theta)?;
    let zeta = Complex64::from_polar(1.0, -theta);
    let scale = tau.powf(-alpha);
    let one = Complex64::new(1.0, 0.0);
    match scheme {
        KernelScheme::Bdf(k) => {
            let w = one - zeta;
            let mut p = Complex64::new(0.0, 0.0);
            let mut dp = Complex64::new(0.0, 0.0);
            let mut wp = one; // (1-ζ)^{j-1}
            for j in 1..=k as usize {
                dp -= wp;
                wp *= w;
                p += wp / j as f64;
            }
            let value = p.powf(alpha) * scale;
            // d/dζ p^α = α p^{α-1} p'
            let deriv = value * alpha * dp / p;
            Ok((value, deriv))
        }
        KernelScheme::L1 => {
            let (g, dg_dtheta) = l1_circle_series(alpha, theta)?;
            let w = one - zeta;
            let front = w * w / zeta;
            let value = front * g * scale;
            // dζ/dθ = -iζ
            let dg = dg_dtheta / (-Complex64::i() * zeta);
            let dfront = -2.0 * w / zeta - w * w / (zeta * zeta);
            Ok((value, (dfront * g + front * dg) * scale))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn be_first_weight_is_one() {
        for alpha in [0.01, 0.5, 0.99] {
            assert_eq!(be_cq_weights(alpha, 1).unwrap().weights, vec![1.0]);
        }
    }

    #[test]
    fn be_half_order_matches_binomial_series() {
        // (1-ζ)^{1/2} = 1 - ζ/2 - ζ²/8 - ...
        let w = be_cq_weights(0.5, 3).unwrap().weights;
        assert!((w[0] - 1.0).abs() < 1e-16);
        assert!((w[1] + 0.5).abs() < 1e-16);
        assert!((w[2] + 0.125).abs() < 1e-16);
    }

    #[test]
    fn be_tends_to_first_difference() {
        let w = be_cq_weights(1.0 - 1e-12, 3).unwrap().weights;
        assert!((w[0] - 1.0).abs() < 1e-11);
        assert!((w[1] + 1.0).abs() < 1e-11);
        assert!(w[2].abs() < 1e-11);
    }

    #[test]
    fn bdf1_matches_backward_euler() {
        let a = bdf_cq_weights(1, 0.3, 50).unwrap();
        let b = be_cq_weights(0.3, 50).unwrap();
        for (x, y) in a.weights.iter().zip(&b.weights) {
            assert!((x - y).abs() <= 1e-14, "{x} vs {y}");
        }
    }

    #[test]
    fn bdf2_tends_to_difference_coefficients() {
        let w = bdf_cq_weights(2, 1.0 - 1e-12, 3).unwrap().weights;
        for (x, y) in w.iter().zip([1.5, -2.0, 0.5]) {
            assert!((x - y).abs() < 1e-10, "{x} vs {y}");
        }
    }

    #[test]
    fn bdf_polynomial_coefficients() {
        assert_eq!(bdf_polynomial(1), vec![1.0, -1.0]);
        let p2 = bdf_polynomial(2);
        for (x, y) in p2.iter().zip([1.5, -2.0, 0.5]) {
            assert!((x - y).abs() < 1e-15);
        }
        // value at ζ = 1 vanishes for every order
        for k in 1..=6 {
            let s: f64 = bdf_polynomial(k).iter().sum();
            assert!(s.abs() < 1e-13, "k={k}: {s}");
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(be_cq_weights(0.0, 3).is_err());
        assert!(be_cq_weights(1.0, 3).is_err());
        assert!(be_cq_weights(0.5, 0).is_err());
        assert!(bdf_cq_weights(0, 0.5, 3).is_err());
        assert!(bdf_cq_weights(7, 0.5, 3).is_err());
        assert!(l1_weights(f64::NAN, 3).is_err());
        assert!(KernelWeights::generate(KernelScheme::Bdf(9), 0.5, 3).is_err());
    }

    #[test]
    fn l1_first_weight() {
        let w = l1_weights(0.5, 1).unwrap().weights;
        // 1/Γ(3/2) = 2/√π
        assert!((w[0] - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-14);
    }

    #[test]
    fn l1_later_weights_are_negative() {
        for alpha in [0.05, 0.3, 0.7, 0.95] {
            let w = l1_weights(alpha, 500).unwrap().weights;
            assert!(w[1..].iter().all(|&x| x < 0.0), "alpha={alpha}");
        }
    }

    #[test]
    fn scheme_names_round_trip() {
        for s in KernelScheme::all() {
            assert_eq!(s.to_string().parse::<KernelScheme>().unwrap(), s);
        }
        assert_eq!("bdf1".parse::<KernelScheme>().unwrap(), KernelScheme::BACKWARD_EULER);
        assert!("BDF7".parse::<KernelScheme>().is_err());
        assert!("CN".parse::<KernelScheme>().is_err());
        let json = serde_json::to_string(&KernelScheme::Bdf(3)).unwrap();
        assert_eq!(json, "\"BDF3\"");
    }

    #[test]
    fn symbols_at_minus_one() {
        let tau = 0.01;
        for alpha in [0.2, 0.7] {
            let be = generating_function(KernelScheme::BACKWARD_EULER, alpha, tau, PI).unwrap();
            assert!((be.re - (2.0 / tau).powf(alpha)).abs() < 1e-12 * be.re);
            assert!(be.im.abs() < 1e-10);
            let bdf2 = generating_function(KernelScheme::Bdf(2), alpha, tau, PI).unwrap();
            let expected = 4f64.powf(alpha) * tau.powf(-alpha);
            assert!((bdf2.re - expected).abs() < 1e-12 * expected);
        }
    }

    #[test]
    fn symbol_rejects_zeta_one() {
        assert!(generating_function(KernelScheme::L1, 0.5, 0.1, 0.0).is_err());
        assert!(generating_function(KernelScheme::BACKWARD_EULER, 0.5, 0.1, 2.0 * PI).is_err());
        assert!(generating_function(KernelScheme::BACKWARD_EULER, 0.5, -0.1, 1.0).is_err());
    }

    #[test]
    fn symbol_derivatives_match_finite_differences() {
        for scheme in [KernelScheme::Bdf(1), KernelScheme::Bdf(4), KernelScheme::L1] {
            for theta in [0.05, 1.0, 2.5, 4.0] {
                let (_, d) = symbol_and_derivative(scheme, 0.6, 1.0, theta).unwrap();
                let h = 1e-6;
                let kp = generating_function(scheme, 0.6, 1.0, theta + h).unwrap();
                let km = generating_function(scheme, 0.6, 1.0, theta - h).unwrap();
                let dtheta = (kp - km) / (2.0 * h);
                let zeta = Complex64::from_polar(1.0, -theta);
                let fd = dtheta / (-Complex64::i() * zeta);
                assert!(
                    (fd - d).norm() < 1e-6 * d.norm().max(1.0),
                    "{scheme} θ={theta}: {fd} vs {d}"
                );
            }
        }
    }
}
