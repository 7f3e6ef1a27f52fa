use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::config::{ExperimentConfig, OutputFormat};
use crate::error::{io_error, Result};
use crate::table::ConvergenceTable;

pub const CSV_HEADER: &str = "case,scheme,alpha,level,refinement_param,error,pair_rate";

fn opt(v: Option<f64>) -> String {
    v.map_or_else(|| "NaN".to_string(), |r| r.to_string())
}

pub fn render_csv(table: &ConvergenceTable) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for s in &table.series {
        for r in &s.rows {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{}",
                s.case,
                s.scheme,
                s.alpha,
                r.level,
                r.refinement_param,
                r.error,
                opt(r.pair_rate)
            );
        }
    }
    out
}

#[derive(Serialize)]
struct JsonDocument<'a> {
    config: &'a ExperimentConfig,
    table: &'a ConvergenceTable,
}

pub fn render_json(table: &ConvergenceTable, config: &ExperimentConfig) -> Result<String> {
    let mut s = serde_json::to_string_pretty(&JsonDocument { config, table })?;
    s.push('\n');
    Ok(s)
}

/// One row per `(scheme, α)`, one column per refinement level, then the rates.
pub fn render_markdown(table: &ConvergenceTable) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "### {} errors\n", table.kind.name());
    let Some(first) = table.series.first() else {
        return out;
    };
    let letter = match table.kind {
        crate::table::StudyKind::Spatial => "M",
        _ => "N",
    };
    let mut header = String::from("| scheme | α |");
    let mut rule = String::from("|---|---|");
    for r in &first.rows {
        let _ = write!(header, " {letter}={} |", r.level);
        rule.push_str("---|");
    }
    header.push_str(" rate (last pair) |");
    rule.push_str("---|");
    let _ = writeln!(out, "{header}\n{rule}");
    for s in &table.series {
        let mut line = format!("| {} | {} |", s.scheme, s.alpha);
        for r in &s.rows {
            let _ = write!(line, " {:.3e} |", r.error);
        }
        let fitted = s.fitted_rate.map_or("NaN".into(), |v| format!("{v:.2}"));
        let last = s
            .rows
            .last()
            .and_then(|r| r.pair_rate)
            .map_or("NaN".into(), |v| format!("{v:.2}"));
        let _ = writeln!(line, " ≈ {fitted} ({last}) |");
        out.push_str(&line);
    }
    out
}

pub fn file_stem(table: &ConvergenceTable, config: &ExperimentConfig) -> String {
    format!("{}_case_{}", table.kind.name(), config.case)
}

/// Writes one file per requested format into `out_dir`; returns the paths written.
pub fn emit_outputs(
    table: &ConvergenceTable,
    config: &ExperimentConfig,
    formats: &[OutputFormat],
    out_dir: &Path,
) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(out_dir).map_err(|e| io_error(out_dir, e))?;
    let stem = file_stem(table, config);
    let mut written = Vec::new();
    for &f in formats {
        let body = match f {
            OutputFormat::Csv => render_csv(table),
            OutputFormat::Json => render_json(table, config)?,
            OutputFormat::Markdown => render_markdown(table),
        };
        let path = out_dir.join(format!("{stem}.{}", f.extension()));
        std::fs::write(&path, body).map_err(|e| io_error(&path, e))?;
        written.push(path);
    }
    Ok(written)
}
