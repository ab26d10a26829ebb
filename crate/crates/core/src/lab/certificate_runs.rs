use std::time::Instant;

use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::table::{fmt_opt, Record};
use crate::certificate::{certify, format_ratio, PositivityMode};
use crate::error::{Error, Result};
use crate::models::{generate, ModelKind};
use crate::sdp::{solve, SdpStatus, SolverOptions};
use crate::sos_program::assemble_level;

pub(crate) const HEADER: &[&str] = &[
    "model",
    "d",
    "s_star",
    "ell",
    "rep",
    "seed",
    "eta_empty",
    "rowsum_violation_zero",
    "min_eig",
    "psd",
    "objective",
    "objective_exact",
    "sdp_value",
    "runtime_ms",
    "error",
];

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateRow {
    pub model: String,
    pub d: usize,
    pub s_star: usize,
    pub ell: usize,
    pub rep: usize,
    pub seed: u64,
    pub eta_empty: Option<u64>,
    pub normalization_ok: Option<bool>,
    pub rowsum_violation_zero: Option<bool>,
    pub min_eig: Option<f64>,
    pub psd: Option<bool>,
    pub objective: Option<f64>,
    /// Exact objective as `"p/q"`.
    pub objective_exact: Option<String>,
    pub sdp_value: Option<f64>,
    pub runtime_ms: f64,
    pub error: Option<String>,
}

fn fmt_bool(b: Option<bool>) -> String {
    b.map(|b| b.to_string()).unwrap_or_default()
}

impl Record for CertificateRow {
    fn record(&self) -> Vec<String> {
        vec![
            self.model.clone(),
            self.d.to_string(),
            self.s_star.to_string(),
            self.ell.to_string(),
            self.rep.to_string(),
            self.seed.to_string(),
            self.eta_empty.map(|e| e.to_string()).unwrap_or_default(),
            fmt_bool(self.rowsum_violation_zero),
            fmt_opt(self.min_eig),
            fmt_bool(self.psd),
            fmt_opt(self.objective),
            self.objective_exact.clone().unwrap_or_default(),
            fmt_opt(self.sdp_value),
            format!("{:.3}", self.runtime_ms),
            self.error.clone().unwrap_or_default(),
        ]
    }
}

/// Null instances (two-point noise with sign positivity, or a block model
/// with binary positivity), certified at each configured level. A missing
/// clique is recorded in the `error` column with `eta_empty = 0`.
pub fn run_certificate_experiment(cfg: &ExperimentConfig) -> Result<Vec<CertificateRow>> {
    cfg.validate()?;
    let solver = SolverOptions::from(cfg.solver);
    let tasks: Vec<(usize, usize)> =
        (0..cfg.grid.len()).flat_map(|g| (0..cfg.replicates).map(move |r| (g, r))).collect();
    let chunks: Vec<Vec<CertificateRow>> = tasks
        .par_iter()
        .map(|&(g, rep)| {
            let point = &cfg.grid[g];
            let seed = cfg.replicate_seed(g, rep);
            let params = point.params(seed);
            let mode = match point.kind {
                ModelKind::Sbm { .. } => PositivityMode::BinaryOne,
                ModelKind::Submatrix { .. } => PositivityMode::SignPositive,
            };
            let instance = generate(&params);
            cfg.levels
                .iter()
                .map(|&ell| {
                    let start = Instant::now();
                    let mut row = CertificateRow {
                        model: params.model_label().to_string(),
                        d: point.d,
                        s_star: point.s_star,
                        ell,
                        rep,
                        seed,
                        eta_empty: None,
                        normalization_ok: None,
                        rowsum_violation_zero: None,
                        min_eig: None,
                        psd: None,
                        objective: None,
                        objective_exact: None,
                        sdp_value: None,
                        runtime_ms: 0.0,
                        error: None,
                    };
                    let x = match &instance {
                        Ok(inst) => &inst.matrix,
                        Err(e) => {
                            row.error = Some(e.to_string());
                            return row;
                        }
                    };
                    match certify(x, mode, point.s_star, ell) {
                        Ok(c) => {
                            let r = &c.report;
                            row.eta_empty = r.eta_empty;
                            row.normalization_ok = Some(r.normalization_ok);
                            row.rowsum_violation_zero = Some(r.normalization_ok && r.rowsum_max_violation.is_zero());
                            row.min_eig = Some(r.min_eigenvalue);
                            row.psd = Some(r.psd);
                            row.objective = r.objective.as_ref().and_then(|o| o.to_f64());
                            row.objective_exact = r.objective.as_ref().map(format_ratio);
                        }
                        Err(e @ Error::CertificateUndefined(_)) => {
                            row.eta_empty = Some(0);
                            row.error = Some(e.to_string());
                        }
                        Err(e) => row.error = Some(e.to_string()),
                    }
                    if cfg.solve_sdp {
                        match assemble_level(x, point.s_star, ell).and_then(|p| solve(&p, &solver)) {
                            Ok(sol) if sol.status == SdpStatus::Optimal => row.sdp_value = Some(sol.value),
                            Ok(sol) => {
                                row.error.get_or_insert(format!(
                                    "solver hit max_iter with primal residual {:e}",
                                    sol.primal_residual
                                ));
                            }
                            Err(e) => {
                                row.error.get_or_insert(e.to_string());
                            }
                        }
                    }
                    row.runtime_ms = start.elapsed().as_secs_f64() * 1e3;
                    row
                })
                .collect()
        })
        .collect();
    Ok(chunks.into_iter().flatten().collect())
}
