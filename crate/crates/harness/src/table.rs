use serde::{Deserialize, Serialize};
use subdiff_core::frac_kernels::KernelScheme;

use crate::cases::Case;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StudyKind {
    Spatial,
    Temporal,
    Linear,
}

impl StudyKind {
    pub fn name(self) -> &'static str {
        match self {
            StudyKind::Spatial => "spatial",
            StudyKind::Temporal => "temporal",
            StudyKind::Linear => "linear",
        }
    }

    /// Symbol of the refinement parameter.
    pub fn parameter(self) -> &'static str {
        match self {
            StudyKind::Spatial => "h",
            StudyKind::Temporal | StudyKind::Linear => "tau",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    /// `M` for spatial studies, `N` for temporal ones.
    pub level: usize,
    /// `h` or `τ`.
    pub refinement_param: f64,
    pub error: f64,
    /// Rate against the previous row; `None` on the first row or when undefined.
    pub pair_rate: Option<f64>,
}

/// Errors of one `(case, scheme, α)` combination over the refinement levels.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSeries {
    pub case: Case,
    pub scheme: KernelScheme,
    pub alpha: f64,
    pub rows: Vec<ConvergenceRow>,
    /// Least-squares slope of `log e` against `log` of the refinement parameter.
    pub fitted_rate: Option<f64>,
}

fn rate(coarse: (f64, f64), fine: (f64, f64)) -> Option<f64> {
    let (pc, ec) = coarse;
    let (pf, ef) = fine;
    let r = (ec / ef).ln() / (pc / pf).ln();
    (ec > 0.0 && ef > 0.0 && r.is_finite()).then_some(r)
}

/// Slope of the least-squares line through `(log x, log y)`.
pub fn fitted_slope(points: &[(f64, f64)]) -> Option<f64> {
    if points.len() < 2 || points.iter().any(|&(x, y)| !(x > 0.0 && y > 0.0)) {
        return None;
    }
    let n = points.len() as f64;
    let lx: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ly: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx) * (x - mx)).sum();
    let s = sxy / sxx;
    s.is_finite().then_some(s)
}

impl ConvergenceSeries {
    /// Rows ordered from coarse to fine.
    pub fn new(case: Case, scheme: KernelScheme, alpha: f64, levels: &[(usize, f64, f64)]) -> Self {
        let mut rows = Vec::with_capacity(levels.len());
        for (i, &(level, param, error)) in levels.iter().enumerate() {
            let pair_rate = (i > 0)
                .then(|| rate((levels[i - 1].1, levels[i - 1].2), (param, error)))
                .flatten();
            rows.push(ConvergenceRow {
                level,
                refinement_param: param,
                error,
                pair_rate,
            });
        }
        let pts: Vec<(f64, f64)> = levels.iter().map(|&(_, p, e)| (p, e)).collect();
        Self {
            case,
            scheme,
            alpha,
            rows,
            fitted_rate: fitted_slope(&pts),
        }
    }

    pub fn pair_rates(&self) -> Vec<Option<f64>> {
        self.rows.iter().skip(1).map(|r| r.pair_rate).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceTable {
    pub kind: StudyKind,
    pub series: Vec<ConvergenceSeries>,
}

impl ConvergenceTable {
    pub fn new(kind: StudyKind) -> Self {
        Self {
            kind,
            series: Vec::new(),
        }
    }

    pub fn row_count(&self) -> usize {
        self.series.iter().map(|s| s.rows.len()).sum()
    }

    pub fn find(&self, scheme: KernelScheme, alpha: f64) -> Option<&ConvergenceSeries> {
        self.series.iter().find(|s| s.scheme == scheme && s.alpha == alpha)
    }
}
