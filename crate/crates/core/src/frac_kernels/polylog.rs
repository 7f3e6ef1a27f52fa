//! Polylogarithm `Li_{α-1}` on and near the unit circle.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{check_order, param, Error, Result};
use crate::special::{gamma, hurwitz_zeta, riemann_zeta};

fn circle_argument(theta: f64) -> Result<f64> {
    if !(theta > 0.0 && theta < TAU) {
        return Err(Error::Domain(format!(
            "circle series needs θ strictly inside (0, 2π), got {theta}"
        )));
    }
    Ok(theta / TAU)
}

/// `G(θ) = Li_{α-1}(e^{-iθ}) / Γ(2-α)` and `dG/dθ` from
///
/// `G = (2π)^{α-2} (cos φ (A+B) - i sin φ (A-B))`, `φ = (2-α)π/2`,
///
/// with `A = ζ(2-α, θ/2π)` and `B = ζ(2-α, 1-θ/2π)` Hurwitz sums. The
/// derivative differentiates `A`, `B` termwise (exponent `α-3`).
pub fn l1_circle_series(alpha: f64, theta: f64) -> Result<(Complex64, Complex64)> {
    check_order(alpha)?;
    let x = circle_argument(theta)?;
    let s = 2.0 - alpha;
    let a = hurwitz_zeta(s, x)?;
    let b = hurwitz_zeta(s, 1.0 - x)?;
    let da = (alpha - 2.0) / TAU * hurwitz_zeta(s + 1.0, x)?;
    let db = -(alpha - 2.0) / TAU * hurwitz_zeta(s + 1.0, 1.0 - x)?;
    let phi = 0.5 * s * PI;
    let (sin, cos) = phi.sin_cos();
    let pre = TAU.powf(alpha - 2.0);
    let value = Complex64::new(cos * (a + b), -sin * (a - b)) * pre;
    let deriv = Complex64::new(cos * (da + db), -sin * (da - db)) * pre;
    Ok((value, deriv))
}

/// `Li_{α-1}(e^{-iθ})` for `θ ∈ (0, 2π)`.
pub fn polylog_on_circle(alpha: f64, theta: f64) -> Result<Complex64> {
    let (g, _) = l1_circle_series(alpha, theta)?;
    Ok(g * gamma(2.0 - alpha))
}

/// `Li_s(e^μ)` for non-integer `s` and `0 < |μ| < 2π` through
/// `Γ(1-s)(-μ)^{s-1} + Σ_k ζ(s-k) μ^k / k!`.
///
/// The coefficients depend only on `s` and are precomputed.
#[derive(Debug, Clone)]
pub struct ExpPolylog {
    s: f64,
    gamma_front: f64,
    coeffs: Vec<f64>,
}

/// Largest `|μ|` accepted; the series radius is `2π`.
pub const EXP_SERIES_RADIUS: f64 = 5.5;
const EXP_SERIES_TERMS: usize = 90;

impl ExpPolylog {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s == s.round() || s > 1.0 {
            return Err(param("s", format!("order must be non-integer and below 1, got {s}")));
        }
        let mut coeffs = Vec::with_capacity(EXP_SERIES_TERMS);
        let mut fact = 1.0;
        for k in 0..EXP_SERIES_TERMS {
            if k > 0 {
                fact *= k as f64;
            }
            coeffs.push(riemann_zeta(s - k as f64)? / fact);
        }
        Ok(Self {
            s,
            gamma_front: gamma(1.0 - s),
            coeffs,
        })
    }

    pub fn eval(&self, mu: Complex64) -> Result<Complex64> {
        let r = mu.norm();
        if !(r > 0.0) || r > EXP_SERIES_RADIUS || !r.is_finite() {
            return Err(Error::Domain(format!(
                "exponential polylog series needs 0 < |μ| ≤ {EXP_SERIES_RADIUS}, got {r}"
            )));
        }
        let mut sum = (-mu).powf(self.s - 1.0) * self.gamma_front;
        let mut pow = Complex64::new(1.0, 0.0);
        for (k, c) in self.coeffs.iter().enumerate() {
            let term = pow * *c;
            sum += term;
            if k > 8 && term.norm() < 1e-17 * sum.norm() {
                break;
            }
            pow *= mu;
        }
        Ok(sum)
    }
}

/// One-shot `Li_s(e^μ)`; see [`ExpPolylog`].
pub fn polylog_exp(s: f64, mu: Complex64) -> Result<Complex64> {
    ExpPolylog::new(s)?.eval(mu)
}
