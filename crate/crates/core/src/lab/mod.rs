//! Experiment harness, CSV output and the command line front end.
//!
//! Each experiment is described by a JSON [`ExperimentConfig`]. Replicate
//! `rep` of grid point `g` is generated from
//! `derive_seed(derive_seed(base_seed, g), rep)`, so every row can be
//! replayed on its own from the `seed` column. Replicates run in parallel and
//! rows are emitted in `(grid, rep, ...)` order regardless of completion
//! order; apart from `runtime_ms` the CSV is byte-identical across runs.

mod certificate_runs;
pub mod cli;
mod config;
mod gap;
mod table;
mod threshold;

pub use certificate_runs::{run_certificate_experiment, CertificateRow};
pub use config::{EstimatorSpec, ExperimentConfig, ExperimentKind, GridPoint};
pub use gap::{run_gap_experiment, GapRow};
pub use table::{fmt_float, strip_column, Table};
pub use threshold::{
    run_threshold_sweep, signal_level, ThresholdBlock, ThresholdOutput, ThresholdRow, ThresholdSummary,
};

use std::path::Path;

use crate::error::Result;

/// Runs whichever experiment `cfg` names and returns its CSV table.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Table> {
    cfg.validate()?;
    Ok(match cfg.experiment {
        ExperimentKind::Gap => Table::from_rows(gap::HEADER, &run_gap_experiment(cfg)?),
        ExperimentKind::Certificate => Table::from_rows(certificate_runs::HEADER, &run_certificate_experiment(cfg)?),
        ExperimentKind::Threshold => run_threshold_sweep(cfg)?.table(),
    })
}

/// Loads a config file, runs it and writes the CSV to `out` (or to the
/// config's `output` path).
pub fn run_config_file(config: &Path, out: Option<&Path>, seed: Option<u64>) -> Result<Table> {
    let mut cfg = ExperimentConfig::read(config)?;
    if let Some(seed) = seed {
        cfg.base_seed = seed;
    }
    let table = run_experiment(&cfg)?;
    if let Some(path) = out.map(Path::to_path_buf).or_else(|| cfg.output.clone()) {
        table.write(&path)?;
    }
    Ok(table)
}
