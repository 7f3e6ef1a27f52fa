//! Hankel-type contour `Γ_{θ,δ}`: the arc `|z| = δ, |arg z| ≤ θ` joined to the
//! rays `ρ e^{±iθ}, ρ ≥ δ`, oriented with increasing imaginary part and cut
//! off at `|Im z| ≤ truncation`.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{param, Result};
use crate::quadrature::GaussLegendre;

/// Default ray angle `3π/4`.
pub const DEFAULT_ANGLE: f64 = 0.75 * PI;
pub const DEFAULT_NODES: usize = 200;
/// Rays are cut where `exp(Re(z) t)` falls below this.
pub const EXP_CUTOFF: f64 = 1e-16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Contour {
    pub angle: f64,
    pub radius: f64,
    /// Largest `|Im z|` kept on the rays.
    pub truncation: f64,
    /// Gauss–Legendre nodes per segment (arc, lower ray, upper ray).
    pub nodes: usize,
}

/// One quadrature node of `∫_Γ f(z) dz`: the point and `w · dz/ds`.
#[derive(Debug, Clone, Copy)]
pub struct ContourNode {
    pub z: Complex64,
    pub dz: Complex64,
}

impl Contour {
    pub fn new(angle: f64, radius: f64, truncation: f64, nodes: usize) -> Result<Self> {
        if !(angle > FRAC_PI_2 && angle < PI) {
            return Err(param("angle", format!("ray angle must lie in (π/2, π), got {angle}")));
        }
        if !(radius > 0.0) || !radius.is_finite() {
            return Err(param("radius", format!("arc radius must be positive, got {radius}")));
        }
        if !(truncation >= radius * angle.sin()) || !truncation.is_finite() {
            return Err(param(
                "truncation",
                format!(
                    "truncation {truncation} must reach the arc ends (≥ {})",
                    radius * angle.sin()
                ),
            ));
        }
        if nodes < 2 {
            return Err(param("nodes", "need at least two nodes per segment"));
        }
        Ok(Self {
            angle,
            radius,
            truncation,
            nodes,
        })
    }

    /// Contour adapted to time `t`: `θ = 3π/4`, `δ = 1/t`, rays cut where
    /// `exp(Re(z) t) < 1e-16`.
    pub fn for_time(t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(param("t", format!("time must be positive, got {t}")));
        }
        let angle = DEFAULT_ANGLE;
        let rho_max = -EXP_CUTOFF.ln() / (t * angle.cos().abs());
        Self::new(angle, 1.0 / t, rho_max * angle.sin(), DEFAULT_NODES)
    }

    /// The admissible `Γ^τ_{θ,δ}` of a step `τ`: same arc, rays cut at `|Im z| = 1/τ`.
    pub fn truncated_for_step(angle: f64, radius: f64, tau: f64) -> Result<Self> {
        Self::new(angle, radius, 1.0 / tau, DEFAULT_NODES)
    }

    pub fn with_nodes(self, nodes: usize) -> Self {
        Self { nodes, ..self }
    }

    /// Modulus at which the rays end.
    pub fn ray_end(&self) -> f64 {
        self.truncation / self.angle.sin()
    }

    /// Quadrature nodes for the whole contour with `n` nodes per segment.
    pub fn nodes_with(&self, n: usize) -> Vec<ContourNode> {
        let rule = GaussLegendre::cached(n);
        let (theta, delta, rho_max) = (self.angle, self.radius, self.ray_end());
        let up = Complex64::from_polar(1.0, theta);
        let down = up.conj();
        let mut out = Vec::with_capacity(3 * n);
        let half_ray = 0.5 * (rho_max - delta);
        let mid_ray = 0.5 * (rho_max + delta);
        // lower ray, traversed inward: z = ρ e^{-iθ}, dz = -e^{-iθ} dρ
        for (x, w) in rule.nodes.iter().zip(&rule.weights).rev() {
            let rho = mid_ray + half_ray * x;
            out.push(ContourNode {
                z: down * rho,
                dz: -down * (w * half_ray),
            });
        }
        // arc: z = δ e^{iφ}, φ ∈ [-θ, θ]
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let phi = theta * x;
            let z = Complex64::from_polar(delta, phi);
            out.push(ContourNode {
                z,
                dz: Complex64::i() * z * (w * theta),
            });
        }
        for (x, w) in rule.nodes.iter().zip(&rule.weights) {
            let rho = mid_ray + half_ray * x;
            out.push(ContourNode {
                z: up * rho,
                dz: up * (w * half_ray),
            });
        }
        out
    }

    /// `(2πi)^{-1} ∫_Γ f(z) dz` with `n` nodes per segment; also returns
    /// `(2π)^{-1} Σ |w f|`, the scale against which cancellation is judged.
    pub fn integrate_with<F>(&self, n: usize, mut f: F) -> (Complex64, f64)
    where
        F: FnMut(Complex64) -> Complex64,
    {
        let mut sum = Complex64::new(0.0, 0.0);
        let mut abs = 0.0;
        for node in self.nodes_with(n) {
            let term = f(node.z) * node.dz;
            abs += term.norm();
            sum += term;
        }
        let scale = 1.0 / (2.0 * PI);
        (sum / Complex64::new(0.0, 2.0 * PI), abs * scale)
    }

    /// Whether `z` lies on the (truncated) contour up to relative `tol`.
    pub fn contains(&self, z: Complex64, tol: f64) -> bool {
        let r = z.norm();
        let slack = tol * r.max(self.radius);
        if z.im.abs() > self.truncation + slack {
            return false;
        }
        if (r - self.radius).abs() <= slack && z.arg().abs() <= self.angle + tol {
            return true;
        }
        if r + slack < self.radius {
            return false;
        }
        (z.arg().abs() - self.angle).abs() * r <= slack
    }

    /// `count` points spread evenly by arclength over the whole contour,
    /// endpoints included.
    pub fn samples(&self, count: usize) -> Vec<Complex64> {
        let count = count.max(2);
        let ray = self.ray_end() - self.radius;
        let arc = 2.0 * self.angle * self.radius;
        let total = 2.0 * ray + arc;
        let up = Complex64::from_polar(1.0, self.angle);
        (0..count)
            .map(|i| {
                let s = total * i as f64 / (count - 1) as f64;
                if s < ray {
                    up.conj() * (self.ray_end() - s)
                } else if s < ray + arc {
                    let phi = -self.angle + (s - ray) / self.radius;
                    Complex64::from_polar(self.radius, phi)
                } else {
                    up * (self.radius + (s - ray - arc)).min(self.ray_end())
                }
            })
            .collect()
    }
}
