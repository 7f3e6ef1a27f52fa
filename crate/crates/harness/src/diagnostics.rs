use std::path::PathBuf;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use subdiff_core::contour::{Contour, DEFAULT_ANGLE};
use subdiff_core::frac_kernels::{
    bdf_no_root_margin, check_kernel_consistency, check_multiplier_criterion, check_multiplier_criterion_for_weights,
    hardy_phi, l1_symbol_estimates, ConsistencyReport, KernelScheme, KernelWeights, MultiplierReport, SymbolEstimates,
    MAX_BDF_ORDER,
};
use subdiff_core::reference_oracle::{smoothing_probe, SmoothingReport};

use crate::config::ExperimentConfig;
use crate::error::{io_error, Result};

pub const LOWER_RATIO_MIN: f64 = 0.05;
pub const UPPER_RATIO_MAX: f64 = 100.0;
/// Allowed relative change of a sampled extremum when the sampling is refined.
pub const REFINEMENT_DRIFT: f64 = 0.05;
pub const ROOT_MARGIN_MIN: f64 = 1e-3;
/// Step used for the multiplier sweep; the ratios do not depend on it.
pub const CRITERION_STEP: f64 = 0.01;
const CONSISTENCY_WEIGHTS: usize = 4000;
const SMOOTHING_TIMES: (f64, f64, usize) = (1e-4, 1.0, 9);
const SMOOTHING_LAMBDAS: (f64, f64, usize) = (1e-2, 1e6, 9);

fn drift(a: f64, b: f64) -> f64 {
    (b - a).abs() / a.abs().max(f64::MIN_POSITIVE)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MultiplierEntry {
    pub coarse: MultiplierReport,
    pub refined: MultiplierReport,
}

impl MultiplierEntry {
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let tag = format!("{} α={}", self.coarse.scheme, self.coarse.alpha);
        for r in [&self.coarse, &self.refined] {
            if !(r.min_lower_ratio >= LOWER_RATIO_MIN) {
                v.push(format!(
                    "{tag}: lower ratio {:.4} < {LOWER_RATIO_MIN} ({} samples)",
                    r.min_lower_ratio, r.sample_count
                ));
            }
            if !(r.max_upper_ratio <= UPPER_RATIO_MAX) {
                v.push(format!(
                    "{tag}: upper ratio {:.4} > {UPPER_RATIO_MAX} ({} samples)",
                    r.max_upper_ratio, r.sample_count
                ));
            }
        }
        let dl = drift(self.coarse.min_lower_ratio, self.refined.min_lower_ratio);
        let du = drift(self.coarse.max_upper_ratio, self.refined.max_upper_ratio);
        if !(dl <= REFINEMENT_DRIFT && du <= REFINEMENT_DRIFT) {
            v.push(format!(
                "{tag}: ratios drift by {dl:.3}/{du:.3} under sample refinement"
            ));
        }
        v
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HardyEntry {
    pub alpha: f64,
    pub max_index: usize,
    pub violations: usize,
    pub max_bound_ratio: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SymbolEntry {
    pub coarse: SymbolEstimates,
    pub refined: SymbolEstimates,
}

impl SymbolEntry {
    pub fn violations(&self) -> Vec<String> {
        let tag = format!("L1 symbol α={} τ={}", self.coarse.alpha, self.coarse.tau);
        let mut v = Vec::new();
        for ((name, a), (_, b)) in self.coarse.metrics().iter().zip(self.refined.metrics().iter()) {
            if !(a.is_finite() && b.is_finite() && *a > 0.0) {
                v.push(format!("{tag}: {name} not finite and positive ({a}, {b})"));
            } else if drift(*a, *b) > REFINEMENT_DRIFT {
                v.push(format!("{tag}: {name} drifts {a:.4} → {b:.4} under sample doubling"));
            }
        }
        v
    }
}

/// All diagnostic results of one configuration.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DiagnosticsSuite {
    pub multiplier: Vec<MultiplierEntry>,
    pub root_margins: Vec<(u8, f64)>,
    pub hardy: Vec<HardyEntry>,
    pub symbol: Vec<SymbolEntry>,
    pub smoothing: Vec<SmoothingReport>,
    pub consistency: Vec<ConsistencyReport>,
}

impl DiagnosticsSuite {
    pub fn violations(&self) -> Vec<String> {
        let mut v: Vec<String> = self.multiplier.iter().flat_map(|m| m.violations()).collect();
        for &(k, m) in &self.root_margins {
            if !(m > ROOT_MARGIN_MIN) {
                v.push(format!("BDF{k}: no-root margin {m:e} ≤ {ROOT_MARGIN_MIN}"));
            }
        }
        for h in &self.hardy {
            if h.violations > 0 {
                v.push(format!(
                    "Hardy α={}: {} indices exceed (n+1)^(α-1)",
                    h.alpha, h.violations
                ));
            }
        }
        v.extend(self.symbol.iter().flat_map(|s| s.violations()));
        for s in &self.smoothing {
            if !s.all_finite() {
                v.push(format!("smoothing α={}: unbounded probe", s.alpha));
            }
        }
        for c in &self.consistency {
            if !c.passed() {
                v.push(consistency_message(c));
            }
        }
        v
    }
}

fn consistency_message(c: &ConsistencyReport) -> String {
    format!(
        "{} α={}: kernel inconsistent (K_0 = {:.4}, tail sum {:.4e} vs {:.4e})",
        c.scheme, c.alpha, c.first_weight, c.tail_partial_sum, c.expected_tail
    )
}

fn log_grid((lo, hi, n): (f64, f64, usize)) -> Vec<f64> {
    (0..n).map(|i| lo * (hi / lo).powf(i as f64 / (n - 1) as f64)).collect()
}

/// Contour samples for the L1 symbol checks: `θ = 3π/4`, unit arc, `|Im z| ≤ 1/τ`.
pub fn symbol_contour(tau: f64) -> Result<Contour> {
    Ok(Contour::truncated_for_step(DEFAULT_ANGLE, 1.0, tau)?)
}

pub fn evaluate_diagnostics(config: &ExperimentConfig) -> Result<DiagnosticsSuite> {
    config.validate()?;
    let pairs: Vec<(KernelScheme, f64)> = config
        .diagnostic_scheme
        .iter()
        .flat_map(|&s| config.diagnostic_alpha.iter().map(move |&a| (s, a)))
        .collect();
    let samples = config.criterion_samples;
    let multiplier = pairs
        .par_iter()
        .map(|&(s, a)| {
            Ok(MultiplierEntry {
                coarse: check_multiplier_criterion(s, a, CRITERION_STEP, samples)?,
                refined: check_multiplier_criterion(s, a, CRITERION_STEP, 10 * samples)?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let root_margins = (1..=MAX_BDF_ORDER)
        .map(|k| Ok((k, bdf_no_root_margin(k)?)))
        .collect::<Result<Vec<_>>>()?;
    let hardy = config
        .diagnostic_alpha
        .iter()
        .map(|&a| {
            let h = hardy_phi(a, config.hardy_terms + 1)?;
            Ok(HardyEntry {
                alpha: a,
                max_index: config.hardy_terms,
                violations: h.bound_violations().len(),
                max_bound_ratio: h.max_bound_ratio(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let symbol_jobs: Vec<(f64, f64)> = config
        .diagnostic_alpha
        .iter()
        .flat_map(|&a| config.symbol_steps.iter().map(move |&t| (a, t)))
        .collect();
    let symbol = symbol_jobs
        .par_iter()
        .map(|&(a, tau)| {
            let c = symbol_contour(tau)?;
            Ok(SymbolEntry {
                coarse: l1_symbol_estimates(a, tau, &c, &c.samples(config.symbol_samples))?,
                refined: l1_symbol_estimates(a, tau, &c, &c.samples(2 * config.symbol_samples))?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let mut lambdas = vec![0.0];
    lambdas.extend(log_grid(SMOOTHING_LAMBDAS).into_iter().map(|l| -l));
    let times = log_grid(SMOOTHING_TIMES)
        .into_iter()
        .map(|t| t * config.final_time)
        .collect::<Vec<_>>();
    let smoothing = config
        .diagnostic_alpha
        .par_iter()
        .map(|&a| Ok(smoothing_probe(a, &lambdas, &times)?))
        .collect::<Result<Vec<_>>>()?;
    let consistency = pairs
        .iter()
        .map(|&(s, a)| {
            Ok(check_kernel_consistency(&KernelWeights::generate(
                s,
                a,
                CONSISTENCY_WEIGHTS,
            )?)?)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(DiagnosticsSuite {
        multiplier,
        root_margins,
        hardy,
        symbol,
        smoothing,
        consistency,
    })
}

/// Criterion and consistency violations of an explicit weight sequence.
pub fn kernel_violations(weights: &KernelWeights, sample_count: usize) -> Result<Vec<String>> {
    let r = check_multiplier_criterion_for_weights(weights, sample_count)?;
    let mut v = MultiplierEntry {
        coarse: r.clone(),
        refined: r,
    }
    .violations();
    let c = check_kernel_consistency(weights)?;
    if !c.passed() {
        v.push(consistency_message(&c));
    }
    Ok(v)
}

#[derive(Debug, Clone)]
pub struct DiagnosticsOutcome {
    pub files: Vec<PathBuf>,
    pub violations: Vec<String>,
}

/// Runs every diagnostic and writes one JSON report each, plus a summary.
pub fn run_diagnostics(config: &ExperimentConfig) -> Result<DiagnosticsOutcome> {
    let suite = evaluate_diagnostics(config)?;
    let violations = suite.violations();
    let dir = &config.out_dir;
    std::fs::create_dir_all(dir).map_err(|e| io_error(dir, e))?;
    let records: Vec<_> = suite
        .multiplier
        .iter()
        .flat_map(|m| [m.coarse.records(), m.refined.records()].concat())
        .collect();
    let symbol_records: Vec<_> = suite
        .symbol
        .iter()
        .flat_map(|s| [s.coarse.records(), s.refined.records()].concat())
        .collect();
    let reports: Vec<(&str, serde_json::Value)> = vec![
        ("multiplier_criterion", serde_json::to_value(&records)?),
        ("bdf_no_root_margin", serde_json::to_value(&suite.root_margins)?),
        ("hardy_bound", serde_json::to_value(&suite.hardy)?),
        ("l1_symbol_estimates", serde_json::to_value(&symbol_records)?),
        ("smoothing_probe", serde_json::to_value(&suite.smoothing)?),
        ("kernel_consistency", serde_json::to_value(&suite.consistency)?),
        (
            "diagnostics_summary",
            serde_json::json!({ "passed": violations.is_empty(), "violations": violations }),
        ),
    ];
    let mut files = Vec::new();
    for (name, value) in reports {
        let path = dir.join(format!("{name}.json"));
        let mut body = serde_json::to_string_pretty(&value)?;
        body.push('\n');
        std::fs::write(&path, body).map_err(|e| io_error(&path, e))?;
        files.push(path);
    }
    Ok(DiagnosticsOutcome { files, violations })
}
