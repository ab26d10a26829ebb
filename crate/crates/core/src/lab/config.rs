use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::ScanStrategy;
use crate::models::{ModelKind, ModelParams};
use crate::rng::derive_seed;
use crate::sdp::SolverOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Gap,
    Certificate,
    Threshold,
}

/// One model setting; the seed is supplied per replicate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GridPoint {
    #[serde(flatten)]
    pub kind: ModelKind,
    pub d: usize,
    pub s_star: usize,
    #[serde(default)]
    pub beta_star: f64,
}

impl GridPoint {
    pub fn params(&self, seed: u64) -> ModelParams {
        ModelParams { kind: self.kind, d: self.d, s_star: self.s_star, beta_star: self.beta_star, seed }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EstimatorSpec {
    Scan,
    Avg,
    Max,
    Lp,
    SosBasic,
    SosLevel(usize),
}

impl EstimatorSpec {
    pub fn name(&self) -> &'static str {
        match self {
            EstimatorSpec::Scan => "scan",
            EstimatorSpec::Avg => "avg",
            EstimatorSpec::Max => "max",
            EstimatorSpec::Lp => "lp",
            EstimatorSpec::SosBasic => "sos_basic",
            EstimatorSpec::SosLevel(_) => "sos_level",
        }
    }

    pub fn level(&self) -> Option<usize> {
        match self {
            EstimatorSpec::SosBasic => Some(1),
            EstimatorSpec::SosLevel(l) => Some(*l),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverConfig {
    pub tol: f64,
    pub max_iter: usize,
    pub step: f64,
}

impl Default for SolverConfig {
    fn default() -> Self {
        let o = SolverOptions::default();
        SolverConfig { tol: o.tol, max_iter: o.max_iter, step: o.step }
    }
}

impl From<SolverConfig> for SolverOptions {
    fn from(c: SolverConfig) -> Self {
        SolverOptions { tol: c.tol, max_iter: c.max_iter, step: c.step, ..SolverOptions::default() }
    }
}

fn default_replicates() -> usize {
    1
}

fn default_levels() -> Vec<usize> {
    vec![1]
}

fn default_strategy() -> ScanStrategy {
    ScanStrategy::BranchAndBound
}

/// JSON experiment description. Fields that only one experiment reads are
/// ignored by the others.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub grid: Vec<GridPoint>,
    /// Gap experiment: estimators run on every instance.
    #[serde(default)]
    pub estimators: Vec<EstimatorSpec>,
    #[serde(default = "default_replicates")]
    pub replicates: usize,
    #[serde(default)]
    pub base_seed: u64,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default = "default_strategy")]
    pub scan_strategy: ScanStrategy,
    /// Certificate experiment: levels ℓ to certify at.
    #[serde(default = "default_levels")]
    pub levels: Vec<usize>,
    /// Certificate experiment: also solve the level-ℓ program.
    #[serde(default)]
    pub solve_sdp: bool,
    /// Threshold sweep: signal multipliers `c`.
    #[serde(default)]
    pub multipliers: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(experiment: ExperimentKind, grid: Vec<GridPoint>) -> Self {
        ExperimentConfig {
            experiment,
            grid,
            estimators: Vec::new(),
            replicates: 1,
            base_seed: 0,
            solver: SolverConfig::default(),
            scan_strategy: ScanStrategy::BranchAndBound,
            levels: vec![1],
            solve_sdp: false,
            multipliers: Vec::new(),
            output: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParams(m.to_string()));
        if self.replicates == 0 {
            return bad("replicates must be >= 1");
        }
        if self.grid.is_empty() {
            return bad("grid is empty");
        }
        for point in &self.grid {
            point.params(0).validate()?;
        }
        match self.experiment {
            ExperimentKind::Gap if self.estimators.is_empty() => return bad("gap experiment needs estimators"),
            ExperimentKind::Certificate if self.levels.contains(&0) || self.levels.is_empty() => {
                return bad("certificate experiment needs levels >= 1")
            }
            ExperimentKind::Threshold => {
                if self.multipliers.is_empty() || self.multipliers.iter().any(|c| !(c.is_finite() && *c >= 0.0)) {
                    return bad("threshold sweep needs finite multipliers >= 0");
                }
                if self.grid.iter().any(|p| !matches!(p.kind, ModelKind::Submatrix { .. })) {
                    return bad("threshold sweep runs on submatrix models only");
                }
            }
            _ => {}
        }
        if self.estimators.iter().any(|e| matches!(e, EstimatorSpec::SosLevel(0))) {
            return bad("sos_level needs a level >= 1");
        }
        if !(self.solver.tol > 0.0 && self.solver.step > 0.0 && self.solver.max_iter > 0) {
            return bad("solver options must be positive");
        }
        Ok(())
    }

    /// Seed of replicate `rep` at grid point `grid_index`.
    pub fn replicate_seed(&self, grid_index: usize, rep: usize) -> u64 {
        derive_seed(derive_seed(self.base_seed, grid_index as u64), rep as u64)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_gap_config() {
        let text = r#"{
            "experiment": "gap",
            "grid": [{"kind": "submatrix", "noise": {"law": "gaussian", "sigma": 1.0}, "d": 12, "s_star": 3, "beta_star": 0.0}],
            "estimators": ["scan", "avg", "max", "lp", "sos_basic", {"sos_level": 2}],
            "replicates": 4,
            "base_seed": 9
        }"#;
        let cfg = ExperimentConfig::from_json(text).unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.estimators[5], EstimatorSpec::SosLevel(2));
        assert_eq!(cfg.scan_strategy, ScanStrategy::BranchAndBound);
        let back = ExperimentConfig::from_json(&cfg.to_json().unwrap()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn rejects_bad_configs() {
        let point = GridPoint { kind: ModelKind::Sbm { beta_tilde: 0.5 }, d: 10, s_star: 3, beta_star: 0.5 };
        let mut cfg = ExperimentConfig::new(ExperimentKind::Gap, vec![point]);
        assert!(cfg.validate().is_err());
        cfg.estimators = vec![EstimatorSpec::Max];
        cfg.validate().unwrap();
        cfg.replicates = 0;
        assert!(cfg.validate().is_err());
        cfg.replicates = 1;
        cfg.experiment = ExperimentKind::Threshold;
        cfg.multipliers = vec![1.0];
        assert!(cfg.validate().is_err());
        cfg.experiment = ExperimentKind::Certificate;
        cfg.grid[0].s_star = 11;
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn replicate_seeds_are_distinct() {
        let cfg = ExperimentConfig::new(ExperimentKind::Gap, vec![]);
        assert_ne!(cfg.replicate_seed(0, 1), cfg.replicate_seed(1, 0));
        assert_ne!(cfg.replicate_seed(0, 0), cfg.replicate_seed(0, 1));
    }
}
