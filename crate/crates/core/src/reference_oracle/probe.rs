use serde::{Deserialize, Serialize};

use crate::error::Result;

use super::scalar::{scalar_e, scalar_f};

/// Suprema of the scaled solution-operator bounds over a `(λ, t)` grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoothingReport {
    pub alpha: f64,
    pub lambda_count: usize,
    pub t_count: usize,
    /// `sup t^{-α} |F|`
    pub f_scaled: f64,
    /// `sup t^{1-α} |E|`
    pub e_scaled: f64,
    /// `sup t |λ E|`
    pub lambda_e_scaled: f64,
    /// `sup |λ F|`
    pub lambda_f: f64,
}

impl SmoothingReport {
    pub fn metrics(&self) -> [(&'static str, f64); 4] {
        [
            ("sup_t^-a|F|", self.f_scaled),
            ("sup_t^(1-a)|E|", self.e_scaled),
            ("sup_t|lambda E|", self.lambda_e_scaled),
            ("sup_|lambda F|", self.lambda_f),
        ]
    }

    pub fn all_finite(&self) -> bool {
        self.metrics().iter().all(|(_, v)| v.is_finite())
    }
}

pub fn smoothing_probe(alpha: f64, lambdas: &[f64], times: &[f64]) -> Result<SmoothingReport> {
    let mut r = SmoothingReport {
        alpha,
        lambda_count: lambdas.len(),
        t_count: times.len(),
        f_scaled: 0.0,
        e_scaled: 0.0,
        lambda_e_scaled: 0.0,
        lambda_f: 0.0,
    };
    for &lambda in lambdas {
        for &t in times {
            let f = scalar_f(alpha, lambda, t)?;
            let e = scalar_e(alpha, lambda, t)?;
            r.f_scaled = r.f_scaled.max(t.powf(-alpha) * f.abs());
            r.e_scaled = r.e_scaled.max(t.powf(1.0 - alpha) * e.abs());
            r.lambda_e_scaled = r.lambda_e_scaled.max(t * (lambda * e).abs());
            r.lambda_f = r.lambda_f.max((lambda * f).abs());
        }
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special::gamma;

    fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
        (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
    }

    #[test]
    fn zero_eigenvalue_row_is_constant() {
        let r = smoothing_probe(0.4, &[0.0], &log_grid(1e-4, 1.0, 9)).unwrap();
        assert!((r.f_scaled - 1.0 / gamma(1.4)).abs() < 1e-10);
        assert_eq!(r.lambda_f, 0.0);
    }

    #[test]
    fn suprema_stable_under_refinement() {
        let mut lambdas = vec![0.0];
        lambdas.extend(log_grid(1e-2, 1e6, 9).iter().map(|l| -l));
        let coarse = smoothing_probe(0.6, &lambdas, &log_grid(1e-4, 1.0, 7)).unwrap();
        let mut fine_l = vec![0.0];
        fine_l.extend(log_grid(1e-2, 1e6, 17).iter().map(|l| -l));
        let fine = smoothing_probe(0.6, &fine_l, &log_grid(1e-4, 1.0, 13)).unwrap();
        assert!(coarse.all_finite() && fine.all_finite());
        for ((_, a), (_, b)) in coarse.metrics().iter().zip(fine.metrics().iter()) {
            assert!(*b <= 1.5 * a + 1e-12 && *b < 10.0, "{a} {b}");
        }
    }
}
