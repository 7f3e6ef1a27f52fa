use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use subdiff_core::frac_kernels::KernelScheme;
use subdiff_core::time_stepping::InitialProjection;

use crate::cases::Case;
use crate::error::{io_error, value_error, HarnessError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Markdown,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Markdown => "md",
        }
    }
}

impl fmt::Display for OutputFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
            OutputFormat::Markdown => "markdown",
        })
    }
}

impl FromStr for OutputFormat {
    type Err = HarnessError;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "markdown" | "md" => Ok(OutputFormat::Markdown),
            other => Err(value_error(
                "format",
                format!("expected csv, json or markdown, got `{other}`"),
            )),
        }
    }
}

/// Every knob of a run. The text form is one `key = value` per line, list
/// values comma separated, `#` starting a comment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub case: Case,
    pub alpha: Vec<f64>,
    pub scheme: Vec<KernelScheme>,
    pub kappa: f64,
    pub final_time: f64,
    pub spatial_levels: Vec<usize>,
    pub spatial_reference: usize,
    pub spatial_steps: usize,
    pub temporal_steps: Vec<usize>,
    pub temporal_reference: usize,
    pub temporal_mesh: usize,
    pub initial_projection: InitialProjection,
    pub out_dir: PathBuf,
    pub format: Vec<OutputFormat>,
    pub diagnostic_alpha: Vec<f64>,
    pub diagnostic_scheme: Vec<KernelScheme>,
    pub criterion_samples: usize,
    pub hardy_terms: usize,
    pub symbol_samples: usize,
    pub symbol_steps: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            case: Case::A,
            alpha: vec![0.4, 0.6, 0.8],
            scheme: vec![KernelScheme::BACKWARD_EULER, KernelScheme::L1],
            kappa: 0.1,
            final_time: 1.0,
            spatial_levels: vec![4, 8, 16, 32],
            spatial_reference: 64,
            spatial_steps: 200,
            temporal_steps: vec![40, 80, 160, 320, 640],
            temporal_reference: 10240,
            temporal_mesh: 10,
            initial_projection: InitialProjection::Ritz,
            out_dir: PathBuf::from("results"),
            format: vec![OutputFormat::Csv, OutputFormat::Json, OutputFormat::Markdown],
            diagnostic_alpha: vec![0.4, 0.6, 0.8],
            diagnostic_scheme: KernelScheme::all(),
            criterion_samples: 10_000,
            hardy_terms: 100_000,
            symbol_samples: 1_000,
            symbol_steps: vec![1e-2, 1e-3],
        }
    }
}

fn list<T: FromStr>(key: &str, value: &str) -> Result<Vec<T>>
where
    T::Err: fmt::Display,
{
    value
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| value_error(key, format!("`{s}`: {e}"))))
        .collect()
}

fn scalar<T: FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    value
        .trim()
        .parse::<T>()
        .map_err(|e| value_error(key, format!("`{}`: {e}", value.trim())))
}

impl ExperimentConfig {
    pub const KEYS: [&'static str; 20] = [
        "case",
        "alpha",
        "scheme",
        "kappa",
        "final_time",
        "spatial_levels",
        "spatial_reference",
        "spatial_steps",
        "temporal_steps",
        "temporal_reference",
        "temporal_mesh",
        "initial_projection",
        "out_dir",
        "format",
        "diagnostic_alpha",
        "diagnostic_scheme",
        "criterion_samples",
        "hardy_terms",
        "symbol_samples",
        "symbol_steps",
    ];

    /// Sets one field from its text form. Keys may use `-` for `_`.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('-', "_");
        let k = key.as_str();
        match k {
            "case" => self.case = value.parse()?,
            "alpha" => self.alpha = list(k, value)?,
            "scheme" => self.scheme = list(k, value)?,
            "kappa" => self.kappa = scalar(k, value)?,
            "final_time" => self.final_time = scalar(k, value)?,
            "spatial_levels" => self.spatial_levels = list(k, value)?,
            "spatial_reference" => self.spatial_reference = scalar(k, value)?,
            "spatial_steps" => self.spatial_steps = scalar(k, value)?,
            "temporal_steps" => self.temporal_steps = list(k, value)?,
            "temporal_reference" => self.temporal_reference = scalar(k, value)?,
            "temporal_mesh" => self.temporal_mesh = scalar(k, value)?,
            "initial_projection" => self.initial_projection = scalar(k, value)?,
            "out_dir" => self.out_dir = PathBuf::from(value.trim()),
            "format" => self.format = list(k, value)?,
            "diagnostic_alpha" => self.diagnostic_alpha = list(k, value)?,
            "diagnostic_scheme" => self.diagnostic_scheme = list(k, value)?,
            "criterion_samples" => self.criterion_samples = scalar(k, value)?,
            "hardy_terms" => self.hardy_terms = scalar(k, value)?,
            "symbol_samples" => self.symbol_samples = scalar(k, value)?,
            "symbol_steps" => self.symbol_steps = list(k, value)?,
            _ => return Err(value_error(k, "unknown key")),
        }
        Ok(())
    }

    /// Applies `key = value` lines on top of `self`.
    pub fn apply_text(&mut self, text: &str) -> Result<()> {
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| HarnessError::Config {
                line: i + 1,
                reason: format!("expected `key = value`, got `{line}`"),
            })?;
            self.set(key, value).map_err(|e| HarnessError::Config {
                line: i + 1,
                reason: e.to_string(),
            })?;
        }
        Ok(())
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut c = Self::default();
        c.apply_text(text)?;
        Ok(c)
    }

    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| io_error(path, e))?;
        Self::from_text(&text)
    }

    /// The text form; [`ExperimentConfig::from_text`] reads it back unchanged.
    pub fn to_text(&self) -> String {
        fn join<T: fmt::Display>(v: &[T]) -> String {
            v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ")
        }
        let values = [
            self.case.to_string(),
            join(&self.alpha),
            join(&self.scheme),
            self.kappa.to_string(),
            self.final_time.to_string(),
            join(&self.spatial_levels),
            self.spatial_reference.to_string(),
            self.spatial_steps.to_string(),
            join(&self.temporal_steps),
            self.temporal_reference.to_string(),
            self.temporal_mesh.to_string(),
            self.initial_projection.to_string(),
            self.out_dir.display().to_string(),
            join(&self.format),
            join(&self.diagnostic_alpha),
            join(&self.diagnostic_scheme),
            self.criterion_samples.to_string(),
            self.hardy_terms.to_string(),
            self.symbol_samples.to_string(),
            join(&self.symbol_steps),
        ];
        Self::KEYS
            .iter()
            .zip(values)
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    pub fn validate(&self) -> Result<()> {
        let order = |key: &str, a: &[f64]| -> Result<()> {
            if a.is_empty() {
                return Err(value_error(key, "list is empty"));
            }
            match a.iter().find(|&&x| !(x > 0.0 && x < 1.0)) {
                Some(x) => Err(value_error(key, format!("order {x} outside (0, 1)"))),
                None => Ok(()),
            }
        };
        order("alpha", &self.alpha)?;
        order("diagnostic_alpha", &self.diagnostic_alpha)?;
        for s in self.scheme.iter().chain(&self.diagnostic_scheme) {
            s.validate()?;
        }
        if self.scheme.is_empty() {
            return Err(value_error("scheme", "list is empty"));
        }
        if !(self.kappa > 0.0) {
            return Err(value_error("kappa", "must be positive"));
        }
        if !(self.final_time > 0.0) {
            return Err(value_error("final_time", "must be positive"));
        }
        refinement("spatial_levels", &self.spatial_levels, self.spatial_reference, 2)?;
        refinement("temporal_steps", &self.temporal_steps, self.temporal_reference, 1)?;
        if self.spatial_steps == 0 {
            return Err(value_error("spatial_steps", "must be positive"));
        }
        if self.temporal_mesh < 2 {
            return Err(value_error("temporal_mesh", "need at least 2 subdivisions"));
        }
        if self.criterion_samples < 8 {
            return Err(value_error("criterion_samples", "need at least 8"));
        }
        if self.symbol_steps.iter().any(|&t| !(t > 0.0)) {
            return Err(value_error("symbol_steps", "steps must be positive"));
        }
        Ok(())
    }
}

/// Levels must be at least `min`, and the reference strictly finer than
/// and a multiple of each.
fn refinement(key: &str, levels: &[usize], reference: usize, min: usize) -> Result<()> {
    if levels.is_empty() {
        return Err(value_error(key, "list is empty"));
    }
    for &l in levels {
        if l < min {
            return Err(value_error(key, format!("level {l} below {min}")));
        }
        if reference <= l {
            return Err(value_error(
                key,
                format!("reference {reference} is not finer than level {l}"),
            ));
        }
        if !reference.is_multiple_of(l) {
            return Err(value_error(
                key,
                format!("reference {reference} is not a multiple of level {l}"),
            ));
        }
    }
    Ok(())
}
