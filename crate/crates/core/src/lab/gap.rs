use std::time::Instant;

use rayon::prelude::*;

use super::config::{EstimatorSpec, ExperimentConfig};
use super::table::{fmt_opt, Record};
use crate::error::Result;
use crate::estimators::{avg_estimate, lp_estimate, max_estimate, scan_estimate_with, ScanOptions};
use crate::models::{generate, NoisyMatrix};
use crate::sdp::{solve, SdpStatus, SolverOptions};
use crate::sos_program::{assemble_basic, assemble_level};

pub(crate) const HEADER: &[&str] = &[
    "model",
    "d",
    "s_star",
    "beta_star",
    "noise",
    "estimator",
    "level",
    "rep",
    "seed",
    "estimate",
    "abs_error",
    "runtime_ms",
    "error",
];

#[derive(Debug, Clone, PartialEq)]
pub struct GapRow {
    pub model: String,
    pub d: usize,
    pub s_star: usize,
    pub beta_star: f64,
    pub noise: String,
    pub estimator: EstimatorSpec,
    pub rep: usize,
    pub seed: u64,
    pub estimate: Option<f64>,
    pub abs_error: Option<f64>,
    pub runtime_ms: f64,
    /// Set when the cell failed; estimate and error are then empty.
    pub error: Option<String>,
}

impl Record for GapRow {
    fn record(&self) -> Vec<String> {
        vec![
            self.model.clone(),
            self.d.to_string(),
            self.s_star.to_string(),
            super::fmt_float(self.beta_star),
            self.noise.clone(),
            self.estimator.name().to_string(),
            self.estimator.level().map(|l| l.to_string()).unwrap_or_default(),
            self.rep.to_string(),
            self.seed.to_string(),
            fmt_opt(self.estimate),
            fmt_opt(self.abs_error),
            format!("{:.3}", self.runtime_ms),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

fn estimate(
    x: &NoisyMatrix,
    s_star: usize,
    spec: EstimatorSpec,
    scan: &ScanOptions,
    solver: &SolverOptions,
) -> Result<f64> {
    let from_sdp = |sol: crate::sdp::SdpSolution| match sol.status {
        SdpStatus::Optimal => Ok(sol.value),
        SdpStatus::MaxIterReached => Err(crate::error::Error::Format(format!(
            "solver hit max_iter with primal residual {:e}",
            sol.primal_residual
        ))),
    };
    match spec {
        EstimatorSpec::Scan => Ok(scan_estimate_with(x, s_star, scan)?.value),
        EstimatorSpec::Avg => avg_estimate(x, s_star),
        EstimatorSpec::Max => Ok(max_estimate(x)),
        EstimatorSpec::Lp => lp_estimate(x, s_star),
        EstimatorSpec::SosBasic => from_sdp(solve(&assemble_basic(x, s_star)?, solver)?),
        EstimatorSpec::SosLevel(ell) => from_sdp(solve(&assemble_level(x, s_star, ell)?, solver)?),
    }
}

/// Every selected estimator on every replicate of every grid point. A failed
/// cell becomes a row with the `error` column set; no rows are dropped.
pub fn run_gap_experiment(cfg: &ExperimentConfig) -> Result<Vec<GapRow>> {
    cfg.validate()?;
    let scan = ScanOptions { strategy: cfg.scan_strategy, ..ScanOptions::default() };
    let solver = SolverOptions::from(cfg.solver);
    let tasks: Vec<(usize, usize)> =
        (0..cfg.grid.len()).flat_map(|g| (0..cfg.replicates).map(move |r| (g, r))).collect();
    let chunks: Vec<Vec<GapRow>> = tasks
        .par_iter()
        .map(|&(g, rep)| {
            let point = &cfg.grid[g];
            let seed = cfg.replicate_seed(g, rep);
            let params = point.params(seed);
            let instance = generate(&params);
            cfg.estimators
                .iter()
                .map(|&spec| {
                    let start = Instant::now();
                    let outcome = instance.as_ref().map_err(|e| e.to_string()).and_then(|inst| {
                        estimate(&inst.matrix, point.s_star, spec, &scan, &solver).map_err(|e| e.to_string())
                    });
                    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
                    let (estimate, error) = match outcome {
                        Ok(v) => (Some(v), None),
                        Err(e) => (None, Some(e)),
                    };
                    GapRow {
                        model: params.model_label().to_string(),
                        d: point.d,
                        s_star: point.s_star,
                        beta_star: point.beta_star,
                        noise: params.noise_label(),
                        estimator: spec,
                        rep,
                        seed,
                        estimate,
                        abs_error: estimate.map(|v| (v - point.beta_star).abs()),
                        runtime_ms,
                        error,
                    }
                })
                .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}
