//! Checks of the hypotheses behind the discrete fractional Grönwall
//! inequality and the L1 error analysis.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::polylog::ExpPolylog;
use super::{bdf_polynomial, symbol_and_derivative, KernelScheme, KernelWeights};
use crate::contour::Contour;
use crate::error::{check_order, param, Error, Result};
use crate::special::gamma;

/// Radius of the excluded neighbourhoods of `θ ∈ {0, π, 2π}`.
pub const CRITERION_EXCLUSION: f64 = 1e-3;

/// One line of a diagnostic report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticRecord {
    pub scheme: String,
    pub alpha: Option<f64>,
    pub tau: Option<f64>,
    pub metric_name: String,
    pub value: f64,
    pub sample_count: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MultiplierReport {
    pub scheme: KernelScheme,
    pub alpha: f64,
    pub tau: f64,
    pub sample_count: usize,
    /// `min |K(ζ)| τ^α / |1-ζ|^α`
    pub min_lower_ratio: f64,
    /// `max |(1-ζ)(1+ζ) K'(ζ)| / |K(ζ)|`
    pub max_upper_ratio: f64,
}

impl MultiplierReport {
    pub fn records(&self) -> Vec<DiagnosticRecord> {
        let rec = |name: &str, value| DiagnosticRecord {
            scheme: self.scheme.to_string(),
            alpha: Some(self.alpha),
            tau: Some(self.tau),
            metric_name: name.to_string(),
            value,
            sample_count: self.sample_count,
        };
        vec![
            rec("min_lower_ratio", self.min_lower_ratio),
            rec("max_upper_ratio", self.max_upper_ratio),
        ]
    }
}

/// `count` angles on `[ε, π-ε] ∪ [π+ε, 2π-ε]`, half on each arc, endpoints
/// included.
pub fn criterion_grid(count: usize) -> Vec<f64> {
    let eps = CRITERION_EXCLUSION;
    let per_arc = (count / 2).max(2);
    let mut out = Vec::with_capacity(2 * per_arc);
    for start in [eps, PI + eps] {
        let len = PI - 2.0 * eps;
        out.extend((0..per_arc).map(|i| start + len * i as f64 / (per_arc - 1) as f64));
    }
    out
}

fn criterion_ratios(zeta: Complex64, value: Complex64, deriv: Complex64, alpha: f64, tau: f64) -> (f64, f64) {
    let one = Complex64::new(1.0, 0.0);
    let lower = value.norm() * tau.powf(alpha) / (one - zeta).norm().powf(alpha);
    let upper = ((one - zeta) * (one + zeta) * deriv).norm() / value.norm();
    (lower, upper)
}

/// Samples the two multiplier bounds on the unit circle away from `±1`.
pub fn check_multiplier_criterion(
    scheme: KernelScheme,
    alpha: f64,
    tau: f64,
    sample_count: usize,
) -> Result<MultiplierReport> {
    if sample_count < 8 {
        return Err(param(
            "sample_count",
            format!("need at least 8 samples, got {sample_count}"),
        ));
    }
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let grid = criterion_grid(sample_count);
    for &theta in &grid {
        let (k, dk) = symbol_and_derivative(scheme, alpha, tau, theta)?;
        let zeta = Complex64::from_polar(1.0, -theta);
        let (l, u) = criterion_ratios(zeta, k, dk, alpha, tau);
        lo = lo.min(l);
        hi = hi.max(u);
    }
    Ok(MultiplierReport {
        scheme,
        alpha,
        tau,
        sample_count: grid.len(),
        min_lower_ratio: lo,
        max_upper_ratio: hi,
    })
}

/// Same bounds, with `K` and `K'` replaced by the truncated sums of an
/// explicit weight sequence.
pub fn check_multiplier_criterion_for_weights(
    weights: &KernelWeights,
    sample_count: usize,
) -> Result<MultiplierReport> {
    if sample_count < 8 {
        return Err(param(
            "sample_count",
            format!("need at least 8 samples, got {sample_count}"),
        ));
    }
    let (alpha, tau) = (weights.alpha, weights.tau);
    let scale = weights.prefactor();
    let mut lo = f64::INFINITY;
    let mut hi: f64 = 0.0;
    let grid = criterion_grid(sample_count);
    for &theta in &grid {
        let zeta = Complex64::from_polar(1.0, -theta);
        let mut value = Complex64::new(0.0, 0.0);
        let mut deriv = Complex64::new(0.0, 0.0);
        let mut pow = Complex64::new(1.0, 0.0); // ζ^j
        let mut prev = Complex64::new(0.0, 0.0); // ζ^{j-1}
        for (j, &w) in weights.weights.iter().enumerate() {
            value += pow * w;
            if j > 0 {
                deriv += prev * (w * j as f64);
            }
            prev = pow;
            pow = Complex64::from_polar(1.0, -theta * (j + 1) as f64);
        }
        let (l, u) = criterion_ratios(zeta, value * scale, deriv * scale, alpha, tau);
        lo = lo.min(l);
        hi = hi.max(u);
    }
    Ok(MultiplierReport {
        scheme: weights.scheme,
        alpha,
        tau,
        sample_count: grid.len(),
        min_lower_ratio: lo,
        max_upper_ratio: hi,
    })
}

/// Behaviour of a weight sequence at `ζ → 1`.
///
/// A consistent kernel has `K_0 > 0` and partial sums `Σ_{j≤n} K_j` that
/// decay like `n^{-α} / Γ(1-α)` (the symbol behaves like `(1-ζ)^α`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub scheme: KernelScheme,
    pub alpha: f64,
    pub first_weight: f64,
    pub tail_partial_sum: f64,
    pub expected_tail: f64,
    pub relative_defect: f64,
    pub sample_count: usize,
}

impl ConsistencyReport {
    pub const TOLERANCE: f64 = 0.05;

    pub fn passed(&self) -> bool {
        self.first_weight > 0.0 && self.tail_partial_sum > 0.0 && self.relative_defect <= Self::TOLERANCE
    }
}

pub fn check_kernel_consistency(weights: &KernelWeights) -> Result<ConsistencyReport> {
    if weights.len() < 2 {
        return Err(param("weights", "need at least two weights"));
    }
    let sums = weights.partial_sums();
    let n = weights.len() - 1;
    let tail = sums[n];
    let expected = (n as f64).powf(-weights.alpha) / gamma(1.0 - weights.alpha);
    Ok(ConsistencyReport {
        scheme: weights.scheme,
        alpha: weights.alpha,
        first_weight: weights.weights[0],
        tail_partial_sum: tail,
        expected_tail: expected,
        relative_defect: (tail / expected - 1.0).abs(),
        sample_count: weights.len(),
    })
}

/// `min_θ |Σ_{j=1}^k (1-e^{-iθ})^{j-1} / j|` over a grid of `2^17` angles.
pub fn bdf_no_root_margin(k: u8) -> Result<f64> {
    if k == 0 {
        return Err(param("k", "BDF order must be at least 1"));
    }
    const GRID: usize = 1 << 17;
    let mut margin = f64::INFINITY;
    for i in 0..GRID {
        let theta = TAU * i as f64 / GRID as f64;
        let w = Complex64::new(1.0, 0.0) - Complex64::from_polar(1.0, -theta);
        let mut q = Complex64::new(0.0, 0.0);
        let mut p = Complex64::new(1.0, 0.0);
        for j in 1..=k as usize {
            q += p / j as f64;
            p *= w;
        }
        margin = margin.min(q.norm());
    }
    // keep the polynomial helper and this sum in agreement at ζ = -1
    debug_assert!({
        let p = bdf_polynomial(k);
        let v: f64 = p.iter().enumerate().map(|(i, c)| c * (-1f64).powi(i as i32)).sum();
        v > 0.0
    });
    Ok(margin)
}

/// Coefficients `φ^n` of `(1-ζ)^{-α}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyCoefficients {
    pub alpha: f64,
    pub phi: Vec<f64>,
}

impl HardyCoefficients {
    /// Indices where `φ^n > (n+1)^{α-1}`.
    pub fn bound_violations(&self) -> Vec<usize> {
        self.phi
            .iter()
            .enumerate()
            .filter(|(n, &p)| !(p > 0.0 && p <= ((*n + 1) as f64).powf(self.alpha - 1.0)))
            .map(|(n, _)| n)
            .collect()
    }

    /// `max_n φ^n / (n+1)^{α-1}`.
    pub fn max_bound_ratio(&self) -> f64 {
        self.phi
            .iter()
            .enumerate()
            .map(|(n, p)| p / ((n + 1) as f64).powf(self.alpha - 1.0))
            .fold(0.0, f64::max)
    }
}

pub fn hardy_phi(alpha: f64, count: usize) -> Result<HardyCoefficients> {
    check_order(alpha)?;
    if count == 0 {
        return Err(param("count", "need at least one coefficient"));
    }
    let mut phi = Vec::with_capacity(count);
    let mut p = 1.0;
    phi.push(p);
    for n in 1..count {
        p *= 1.0 + (alpha - 1.0) / n as f64;
        phi.push(p);
    }
    Ok(HardyCoefficients { alpha, phi })
}

/// Empirical constants of the backward-Euler and L1 symbol estimates on a
/// truncated contour.
///
/// With `ξ = e^{-zτ}`, `μ = (1-ξ)/(τξ)` and
/// `β = (1-ξ)^2 Li_{α-1}(ξ) / (ξ τ^α Γ(2-α))`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SymbolEstimates {
    pub alpha: f64,
    pub tau: f64,
    pub sample_count: usize,
    /// `inf |μ| / |z|`
    pub mu_lower: f64,
    /// `sup |μ| / |z|`
    pub mu_upper: f64,
    /// `sup |μ - z| / (τ |z|^2)`
    pub mu_defect: f64,
    /// `inf |β| / (|z| τ^{1-α})`
    pub beta_lower: f64,
    /// `sup |β - z^α| / (|z|^2 τ^{2-α})`
    pub beta_defect: f64,
}

impl SymbolEstimates {
    pub fn metrics(&self) -> [(&'static str, f64); 5] {
        [
            ("mu_lower", self.mu_lower),
            ("mu_upper", self.mu_upper),
            ("mu_defect", self.mu_defect),
            ("beta_lower", self.beta_lower),
            ("beta_defect", self.beta_defect),
        ]
    }

    pub fn records(&self) -> Vec<DiagnosticRecord> {
        self.metrics()
            .iter()
            .map(|(name, value)| DiagnosticRecord {
                scheme: KernelScheme::L1.to_string(),
                alpha: Some(self.alpha),
                tau: Some(self.tau),
                metric_name: name.to_string(),
                value: *value,
                sample_count: self.sample_count,
            })
            .collect()
    }
}

pub fn l1_symbol_estimates(alpha: f64, tau: f64, contour: &Contour, samples: &[Complex64]) -> Result<SymbolEstimates> {
    check_order(alpha)?;
    if !(tau > 0.0) || !tau.is_finite() {
        return Err(param("tau", format!("step must be positive, got {tau}")));
    }
    if samples.is_empty() {
        return Err(param("samples", "need at least one contour sample"));
    }
    let polylog = ExpPolylog::new(alpha - 1.0)?;
    let g = gamma(2.0 - alpha);
    let one = Complex64::new(1.0, 0.0);
    let mut est = SymbolEstimates {
        alpha,
        tau,
        sample_count: samples.len(),
        mu_lower: f64::INFINITY,
        mu_upper: 0.0,
        mu_defect: 0.0,
        beta_lower: f64::INFINITY,
        beta_defect: 0.0,
    };
    for &z in samples {
        if !contour.contains(z, 1e-9) || z.im.abs() > (1.0 + 1e-12) / tau {
            return Err(param("samples", format!("{z} is not on the admissible contour")));
        }
        let zt = z * tau;
        let xi = (-zt).exp();
        let mu = (one - xi) / (xi * tau);
        let li = polylog.eval(-zt).map_err(|e| match e {
            Error::Domain(m) => param("samples", m),
            other => other,
        })?;
        let beta = (one - xi) * (one - xi) / (xi * tau.powf(alpha) * g) * li;
        let r = z.norm();
        est.mu_lower = est.mu_lower.min(mu.norm() / r);
        est.mu_upper = est.mu_upper.max(mu.norm() / r);
        est.mu_defect = est.mu_defect.max((mu - z).norm() / (tau * r * r));
        est.beta_lower = est.beta_lower.min(beta.norm() / (r * tau.powf(1.0 - alpha)));
        est.beta_defect = est
            .beta_defect
            .max((beta - z.powf(alpha)).norm() / (r * r * tau.powf(2.0 - alpha)));
    }
    Ok(est)
}
