use std::time::Instant;

use rayon::prelude::*;

use super::config::ExperimentConfig;
use super::table::{fmt_float, Record, Table};
use crate::error::Result;
use crate::estimators::{scan_estimate_with, ScanOptions};
use crate::models::generate;

const HEADER: &[&str] = &[
    "d",
    "s_star",
    "c",
    "rep",
    "seed",
    "hypothesis",
    "scan_value",
    "reject",
    "runtime_ms",
    "type1_error",
    "type2_error",
    "total_error",
];

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdRow {
    pub d: usize,
    pub s_star: usize,
    pub c: f64,
    pub rep: usize,
    pub seed: u64,
    /// 0 for the null instance, 1 for the planted one.
    pub hypothesis: u8,
    pub scan_value: f64,
    pub reject: bool,
    pub runtime_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThresholdSummary {
    pub d: usize,
    pub s_star: usize,
    pub c: f64,
    pub type1_error: f64,
    pub type2_error: f64,
}

impl ThresholdSummary {
    pub fn total_error(&self) -> f64 {
        self.type1_error + self.type2_error
    }
}

impl Record for ThresholdRow {
    fn record(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            self.s_star.to_string(),
            fmt_float(self.c),
            self.rep.to_string(),
            self.seed.to_string(),
            self.hypothesis.to_string(),
            fmt_float(self.scan_value),
            u8::from(self.reject).to_string(),
            format!("{:.3}", self.runtime_ms),
            String::new(),
            String::new(),
            String::new(),
        ]
    }
}

impl Record for ThresholdSummary {
    fn record(&self) -> Vec<String> {
        vec![
            self.d.to_string(),
            self.s_star.to_string(),
            fmt_float(self.c),
            "summary".to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
            fmt_float(self.type1_error),
            fmt_float(self.type2_error),
            fmt_float(self.total_error()),
        ]
    }
}

/// Rows of one `(grid point, c)` pair and their error summary.
#[derive(Debug, Clone)]
pub struct ThresholdBlock {
    pub rows: Vec<ThresholdRow>,
    pub summary: ThresholdSummary,
}

#[derive(Debug, Clone)]
pub struct ThresholdOutput {
    pub blocks: Vec<ThresholdBlock>,
}

impl ThresholdOutput {
    pub fn rows(&self) -> impl Iterator<Item = &ThresholdRow> {
        self.blocks.iter().flat_map(|b| &b.rows)
    }

    pub fn summaries(&self) -> impl Iterator<Item = &ThresholdSummary> {
        self.blocks.iter().map(|b| &b.summary)
    }

    /// Data rows of each block followed by its summary row.
    pub fn table(&self) -> Table {
        let mut table = Table::from_rows::<ThresholdRow>(HEADER, &[]);
        for block in &self.blocks {
            table.rows.extend(block.rows.iter().map(Record::record));
            table.rows.push(block.summary.record());
        }
        table
    }
}

/// Signal level `c · sqrt(log(d/s*) / s*)` probed by the sweep.
pub fn signal_level(c: f64, d: usize, s_star: usize) -> f64 {
    c * ((d as f64 / s_star as f64).ln() / s_star as f64).sqrt()
}

/// Paired null / planted instances from the same seed, tested with
/// `1(scan > level / 2)`. The null instance does not depend on `c` and is
/// shared by all multipliers of a replicate.
pub fn run_threshold_sweep(cfg: &ExperimentConfig) -> Result<ThresholdOutput> {
    cfg.validate()?;
    let scan = ScanOptions { strategy: cfg.scan_strategy, ..ScanOptions::default() };
    let tasks: Vec<(usize, usize)> =
        (0..cfg.grid.len()).flat_map(|g| (0..cfg.replicates).map(move |r| (g, r))).collect();

    // Per task: (null row template, one planted row per multiplier).
    let per_task: Vec<(ThresholdRow, Vec<ThresholdRow>)> = tasks
        .par_iter()
        .map(|&(g, rep)| -> Result<_> {
            let point = &cfg.grid[g];
            let seed = cfg.replicate_seed(g, rep);
            let start = Instant::now();
            let mut null_params = point.params(seed);
            null_params.beta_star = 0.0;
            let null_value = scan_estimate_with(&generate(&null_params)?.matrix, point.s_star, &scan)?.value;
            let null_ms = start.elapsed().as_secs_f64() * 1e3;
            let null_row = ThresholdRow {
                d: point.d,
                s_star: point.s_star,
                c: 0.0,
                rep,
                seed,
                hypothesis: 0,
                scan_value: null_value,
                reject: false,
                runtime_ms: null_ms,
            };
            let planted = cfg
                .multipliers
                .iter()
                .map(|&c| {
                    let start = Instant::now();
                    let level = signal_level(c, point.d, point.s_star);
                    let mut params = point.params(seed);
                    params.beta_star = level;
                    let value = scan_estimate_with(&generate(&params)?.matrix, point.s_star, &scan)?.value;
                    Ok(ThresholdRow {
                        c,
                        hypothesis: 1,
                        scan_value: value,
                        reject: value > level / 2.0,
                        runtime_ms: start.elapsed().as_secs_f64() * 1e3,
                        ..null_row.clone()
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok((null_row, planted))
        })
        .collect::<Result<_>>()?;

    let mut blocks = Vec::new();
    for (g, point) in cfg.grid.iter().enumerate() {
        let block = &per_task[g * cfg.replicates..(g + 1) * cfg.replicates];
        for (k, &c) in cfg.multipliers.iter().enumerate() {
            let level = signal_level(c, point.d, point.s_star);
            let (mut false_alarms, mut misses) = (0usize, 0usize);
            let mut rows = Vec::with_capacity(2 * cfg.replicates);
            for (null, planted) in block {
                let null_row = ThresholdRow { c, reject: null.scan_value > level / 2.0, ..null.clone() };
                false_alarms += usize::from(null_row.reject);
                misses += usize::from(!planted[k].reject);
                rows.push(null_row);
                rows.push(planted[k].clone());
            }
            let n = cfg.replicates as f64;
            let summary = ThresholdSummary {
                d: point.d,
                s_star: point.s_star,
                c,
                type1_error: false_alarms as f64 / n,
                type2_error: misses as f64 / n,
            };
            blocks.push(ThresholdBlock { rows, summary });
        }
    }
    Ok(ThresholdOutput { blocks })
}
