use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use subdiff_harness::diagnostics::run_diagnostics;
use subdiff_harness::linear_check::run_linear_check;
use subdiff_harness::output::emit_outputs;
use subdiff_harness::study::{run_spatial_study, run_temporal_study};
use subdiff_harness::{ConvergenceTable, ExperimentConfig, StudyKind};

/// Rate studies and kernel diagnostics for time-fractional subdiffusion.
#[derive(Parser, Debug)]
#[command(name = "subdiff", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Mesh refinement at fixed step count.
    Spatial(Overrides),
    /// Step refinement at fixed mesh.
    Temporal(Overrides),
    /// Multiplier criterion, root margins, Hardy bound, symbol and smoothing probes.
    Diagnostics(Overrides),
    /// First-order check of the linear scheme against the modal reference.
    LinearCheck(Overrides),
}

#[derive(Args, Debug, Default)]
struct Overrides {
    /// Flat `key = value` file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    case: Option<String>,
    /// Comma separated orders.
    #[arg(long)]
    alpha: Option<String>,
    /// Comma separated schemes (BE, BDF2..BDF6, L1).
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long)]
    kappa: Option<String>,
    #[arg(long)]
    final_time: Option<String>,
    #[arg(long)]
    spatial_levels: Option<String>,
    #[arg(long)]
    spatial_reference: Option<String>,
    #[arg(long)]
    spatial_steps: Option<String>,
    #[arg(long)]
    temporal_steps: Option<String>,
    #[arg(long)]
    temporal_reference: Option<String>,
    #[arg(long)]
    temporal_mesh: Option<String>,
    #[arg(long)]
    initial_projection: Option<String>,
    #[arg(long)]
    out_dir: Option<String>,
    /// Comma separated output formats (csv, json, markdown).
    #[arg(long)]
    format: Option<String>,
    #[arg(long)]
    diagnostic_alpha: Option<String>,
    #[arg(long)]
    diagnostic_scheme: Option<String>,
    #[arg(long)]
    criterion_samples: Option<String>,
    #[arg(long)]
    hardy_terms: Option<String>,
    #[arg(long)]
    symbol_samples: Option<String>,
    #[arg(long)]
    symbol_steps: Option<String>,
}

impl Overrides {
    fn pairs(&self) -> [(&'static str, &Option<String>); 20] {
        [
            ("case", &self.case),
            ("alpha", &self.alpha),
            ("scheme", &self.scheme),
            ("kappa", &self.kappa),
            ("final_time", &self.final_time),
            ("spatial_levels", &self.spatial_levels),
            ("spatial_reference", &self.spatial_reference),
            ("spatial_steps", &self.spatial_steps),
            ("temporal_steps", &self.temporal_steps),
            ("temporal_reference", &self.temporal_reference),
            ("temporal_mesh", &self.temporal_mesh),
            ("initial_projection", &self.initial_projection),
            ("out_dir", &self.out_dir),
            ("format", &self.format),
            ("diagnostic_alpha", &self.diagnostic_alpha),
            ("diagnostic_scheme", &self.diagnostic_scheme),
            ("criterion_samples", &self.criterion_samples),
            ("hardy_terms", &self.hardy_terms),
            ("symbol_samples", &self.symbol_samples),
            ("symbol_steps", &self.symbol_steps),
        ]
    }

    fn resolve(&self) -> subdiff_harness::Result<ExperimentConfig> {
        let mut config = match &self.config {
            Some(path) => ExperimentConfig::from_file(path)?,
            None => ExperimentConfig::default(),
        };
        for (key, value) in self.pairs() {
            if let Some(v) = value {
                config.set(key, v)?;
            }
        }
        config.validate()?;
        Ok(config)
    }
}

fn report(table: &ConvergenceTable, config: &ExperimentConfig) -> subdiff_harness::Result<bool> {
    for path in emit_outputs(table, config, &config.format, &config.out_dir)? {
        println!("wrote {}", path.display());
    }
    let mut ok = true;
    for s in &table.series {
        let fitted = s.fitted_rate;
        let (target, lo, hi) = match table.kind {
            StudyKind::Spatial => (2.0, 2.0 - 0.15, 2.0 + 0.15),
            StudyKind::Temporal => (s.alpha, s.alpha - 0.08, s.alpha + 0.08),
            StudyKind::Linear => (1.0, 0.9, f64::INFINITY),
        };
        let pass = fitted.is_some_and(|r| r >= lo && r <= hi);
        ok &= pass;
        println!(
            "{} {} α={} fitted rate {} (target {target}) {}",
            table.kind.name(),
            s.scheme,
            s.alpha,
            fitted.map_or("NaN".into(), |r| format!("{r:.3}")),
            if pass { "ok" } else { "VIOLATION" }
        );
    }
    Ok(ok)
}

fn overrides(command: &Command) -> &Overrides {
    match command {
        Command::Spatial(o) | Command::Temporal(o) | Command::Diagnostics(o) | Command::LinearCheck(o) => o,
    }
}

fn run(command: &Command, c: &ExperimentConfig) -> subdiff_harness::Result<bool> {
    match command {
        Command::Spatial(_) => report(&run_spatial_study(c)?, c),
        Command::Temporal(_) => report(&run_temporal_study(c)?, c),
        Command::LinearCheck(_) => report(&run_linear_check(c)?, c),
        Command::Diagnostics(_) => {
            let out = run_diagnostics(c)?;
            for path in &out.files {
                println!("wrote {}", path.display());
            }
            for v in &out.violations {
                println!("VIOLATION {v}");
            }
            Ok(out.violations.is_empty())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let config = match overrides(&cli.command).resolve() {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match run(&cli.command, &config) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
