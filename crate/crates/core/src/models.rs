//! Planted sparse principal submatrix and stochastic block model instances.

use std::collections::BTreeSet;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::{rng_from_seed, LabRng};

pub const UPPER_TRI_FORMAT: &str = "upper-tri-row-major";

/// Symmetric `d x d` matrix with zero diagonal, stored as its strict upper
/// triangle in row-major order: `(0,1), (0,2), ..., (0,d-1), (1,2), ...`.
#[derive(Debug, Clone, PartialEq)]
pub struct NoisyMatrix {
    d: usize,
    entries: Vec<f64>,
}

#[inline]
fn pair_offset(d: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < d);
    i * d - i * (i + 1) / 2 + (j - i - 1)
}

impl NoisyMatrix {
    pub fn zeros(d: usize) -> Result<Self> {
        Self::from_upper(d, vec![0.0; d * d.saturating_sub(1) / 2])
    }

    pub fn from_upper(d: usize, entries: Vec<f64>) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidParams(format!("matrix side must be >= 2, got {d}")));
        }
        if entries.len() != d * (d - 1) / 2 {
            return Err(Error::Format(format!(
                "expected {} upper-triangle entries for d = {d}, got {}",
                d * (d - 1) / 2,
                entries.len()
            )));
        }
        if let Some(bad) = entries.iter().find(|v| !v.is_finite()) {
            return Err(Error::Format(format!("non-finite entry {bad}")));
        }
        Ok(NoisyMatrix { d, entries })
    }

    /// Builds the matrix from `f(i, j)` evaluated on pairs `i < j`.
    pub fn from_fn(d: usize, mut f: impl FnMut(usize, usize) -> f64) -> Result<Self> {
        let mut entries = Vec::with_capacity(d * d.saturating_sub(1) / 2);
        for i in 0..d {
            for j in i + 1..d {
                entries.push(f(i, j));
            }
        }
        Self::from_upper(d, entries)
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn entries(&self) -> &[f64] {
        &self.entries
    }

    /// Entry `(i, j)`; the diagonal reads as zero.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.entries[pair_offset(self.d, i, j)],
            std::cmp::Ordering::Greater => self.entries[pair_offset(self.d, j, i)],
            std::cmp::Ordering::Equal => 0.0,
        }
    }

    /// Iterates `(i, j, X_ij)` over `i < j` in storage order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        let d = self.d;
        (0..d)
            .flat_map(move |i| (i + 1..d).map(move |j| (i, j)))
            .zip(self.entries.iter().copied())
            .map(|((i, j), v)| (i, j, v))
    }

    pub fn to_dense(&self) -> Vec<Vec<f64>> {
        (0..self.d).map(|i| (0..self.d).map(|j| self.get(i, j)).collect()).collect()
    }

    pub fn scaled(&self, c: f64) -> NoisyMatrix {
        NoisyMatrix { d: self.d, entries: self.entries.iter().map(|v| v * c).collect() }
    }

    /// Relabels vertices: entry `(perm[i], perm[j])` of the result is `X_ij`.
    pub fn permuted(&self, perm: &[usize]) -> NoisyMatrix {
        assert_eq!(perm.len(), self.d, "permutation length must equal d");
        let mut inv = vec![0usize; self.d];
        for (i, &p) in perm.iter().enumerate() {
            inv[p] = i;
        }
        NoisyMatrix::from_fn(self.d, |a, b| self.get(inv[a], inv[b])).expect("same shape")
    }

    pub fn max_entry(&self) -> f64 {
        self.entries.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_binary(&self) -> bool {
        self.entries.iter().all(|&v| v == 0.0 || v == 1.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "law", rename_all = "lowercase")]
pub enum Noise {
    /// `N(0, sigma^2)` added to the mean; `sigma = 0` is the noiseless mode.
    Gaussian { sigma: f64 },
    /// Symmetric two-point law: each entry is `+nu` or `-nu` with probability 1/2.
    Rademacher { nu: f64 },
}

impl Default for Noise {
    fn default() -> Self {
        Noise::Gaussian { sigma: 1.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ModelKind {
    Submatrix { noise: Noise },
    Sbm { beta_tilde: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    #[serde(flatten)]
    pub kind: ModelKind,
    pub d: usize,
    pub s_star: usize,
    pub beta_star: f64,
    pub seed: u64,
}

impl ModelParams {
    pub fn submatrix(d: usize, s_star: usize, beta_star: f64, noise: Noise, seed: u64) -> Self {
        ModelParams { kind: ModelKind::Submatrix { noise }, d, s_star, beta_star, seed }
    }

    pub fn sbm(d: usize, s_star: usize, beta_star: f64, beta_tilde: f64, seed: u64) -> Self {
        ModelParams { kind: ModelKind::Sbm { beta_tilde }, d, s_star, beta_star, seed }
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidParams(msg));
        if self.d < 2 {
            return bad(format!("d must be >= 2, got {}", self.d));
        }
        if self.s_star < 2 || self.s_star > self.d {
            return bad(format!("need 2 <= s_star <= d, got s_star = {} with d = {}", self.s_star, self.d));
        }
        if !(self.beta_star.is_finite() && self.beta_star >= 0.0) {
            return bad(format!("beta_star must be finite and >= 0, got {}", self.beta_star));
        }
        match self.kind {
            ModelKind::Submatrix { noise: Noise::Gaussian { sigma } } => {
                if !(sigma.is_finite() && sigma >= 0.0) {
                    return bad(format!("sigma must be finite and >= 0, got {sigma}"));
                }
            }
            ModelKind::Submatrix { noise: Noise::Rademacher { nu } } => {
                if !(nu.is_finite() && nu > 0.0) {
                    return bad(format!("nu must be finite and > 0, got {nu}"));
                }
            }
            ModelKind::Sbm { beta_tilde } => {
                if !(0.0..=1.0).contains(&self.beta_star) {
                    return bad(format!("sbm needs beta_star <= 1, got {}", self.beta_star));
                }
                if !(beta_tilde >= 0.0 && beta_tilde <= self.beta_star) {
                    return bad(format!("sbm needs 0 <= beta_tilde <= beta_star, got beta_tilde = {beta_tilde}"));
                }
            }
        }
        Ok(())
    }

    /// Short label used in CSV output.
    pub fn model_label(&self) -> &'static str {
        match self.kind {
            ModelKind::Submatrix { .. } => "submatrix",
            ModelKind::Sbm { .. } => "sbm",
        }
    }

    pub fn noise_label(&self) -> String {
        match self.kind {
            ModelKind::Submatrix { noise: Noise::Gaussian { sigma } } => format!("gaussian({sigma})"),
            ModelKind::Submatrix { noise: Noise::Rademacher { nu } } => format!("rademacher({nu})"),
            ModelKind::Sbm { beta_tilde } => format!("beta_tilde({beta_tilde})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlantedInstance {
    pub matrix: NoisyMatrix,
    /// Sorted, zero-based planted support.
    pub support: Vec<usize>,
    pub params: ModelParams,
}

fn check_support(params: &ModelParams, support: &[usize]) -> Result<BTreeSet<usize>> {
    let set: BTreeSet<usize> = support.iter().copied().collect();
    if set.len() != support.len() {
        return Err(Error::InvalidSupport(format!("duplicate indices in {support:?}")));
    }
    if set.len() != params.s_star {
        return Err(Error::InvalidSupport(format!(
            "support has {} elements, expected s_star = {}",
            set.len(),
            params.s_star
        )));
    }
    if let Some(&out) = set.iter().find(|&&i| i >= params.d) {
        return Err(Error::InvalidSupport(format!("index {out} outside 0..{}", params.d)));
    }
    Ok(set)
}

/// The entrywise mean of the model given the planted support.
pub fn mean_matrix(params: &ModelParams, support: &[usize]) -> Result<NoisyMatrix> {
    let set = check_support(params, support)?;
    let outside = match params.kind {
        ModelKind::Sbm { beta_tilde } => beta_tilde,
        ModelKind::Submatrix { .. } => 0.0,
    };
    NoisyMatrix::from_fn(params.d, |i, j| if set.contains(&i) && set.contains(&j) { params.beta_star } else { outside })
}

/// Uniform `s`-subset of `0..d` from a seeded partial Fisher-Yates shuffle.
fn sample_support(rng: &mut LabRng, d: usize, s: usize) -> Vec<usize> {
    let mut labels: Vec<usize> = (0..d).collect();
    let (chosen, _) = labels.partial_shuffle(rng, s);
    let mut support = chosen.to_vec();
    support.sort_unstable();
    support
}

pub fn gen_submatrix(params: &ModelParams) -> Result<PlantedInstance> {
    params.validate()?;
    let noise = match params.kind {
        ModelKind::Submatrix { noise } => noise,
        ModelKind::Sbm { .. } => return Err(Error::InvalidParams("gen_submatrix called with sbm parameters".into())),
    };
    if let Noise::Rademacher { .. } = noise {
        if params.beta_star != 0.0 {
            return Err(Error::RademacherWithSignal(params.beta_star));
        }
    }
    let mut rng = rng_from_seed(params.seed);
    let support = sample_support(&mut rng, params.d, params.s_star);
    let mean = mean_matrix(params, &support)?;
    let entries = mean
        .entries
        .iter()
        .map(|&theta| match noise {
            Noise::Gaussian { sigma: 0.0 } => theta,
            Noise::Gaussian { sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                theta + sigma * z
            }
            Noise::Rademacher { nu } => {
                if rng.random::<bool>() {
                    nu
                } else {
                    -nu
                }
            }
        })
        .collect();
    Ok(PlantedInstance { matrix: NoisyMatrix::from_upper(params.d, entries)?, support, params: *params })
}

pub fn gen_sbm(params: &ModelParams) -> Result<PlantedInstance> {
    params.validate()?;
    if !matches!(params.kind, ModelKind::Sbm { .. }) {
        return Err(Error::InvalidParams("gen_sbm called with submatrix parameters".into()));
    }
    let mut rng = rng_from_seed(params.seed);
    let support = sample_support(&mut rng, params.d, params.s_star);
    let mean = mean_matrix(params, &support)?;
    let entries = mean.entries.iter().map(|&p| if rng.random::<f64>() < p { 1.0 } else { 0.0 }).collect();
    Ok(PlantedInstance { matrix: NoisyMatrix::from_upper(params.d, entries)?, support, params: *params })
}

/// Dispatches on the model kind.
pub fn generate(params: &ModelParams) -> Result<PlantedInstance> {
    match params.kind {
        ModelKind::Submatrix { .. } => gen_submatrix(params),
        ModelKind::Sbm { .. } => gen_sbm(params),
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GroundTruth {
    pub support: Vec<usize>,
    pub params: ModelParams,
}

/// On-disk matrix format.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MatrixFile {
    pub d: usize,
    pub format: String,
    pub entries: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ground_truth: Option<GroundTruth>,
}

impl MatrixFile {
    pub fn from_matrix(matrix: &NoisyMatrix) -> Self {
        MatrixFile {
            d: matrix.d,
            format: UPPER_TRI_FORMAT.to_string(),
            entries: matrix.entries.clone(),
            ground_truth: None,
        }
    }

    pub fn from_instance(instance: &PlantedInstance) -> Self {
        MatrixFile {
            ground_truth: Some(GroundTruth { support: instance.support.clone(), params: instance.params }),
            ..Self::from_matrix(&instance.matrix)
        }
    }

    pub fn matrix(&self) -> Result<NoisyMatrix> {
        if self.format != UPPER_TRI_FORMAT {
            return Err(Error::Format(format!("unsupported matrix format {:?}", self.format)));
        }
        NoisyMatrix::from_upper(self.d, self.entries.clone())
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()? + "\n")?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn gaussian(d: usize, s: usize, beta: f64, sigma: f64, seed: u64) -> ModelParams {
        ModelParams::submatrix(d, s, beta, Noise::Gaussian { sigma }, seed)
    }

    #[test]
    fn mean_matrix_submatrix() {
        let p = gaussian(4, 2, 1.0, 1.0, 0);
        let m = mean_matrix(&p, &[0, 1]).unwrap();
        assert_eq!(m.get(0, 1), 1.0);
        assert_eq!(m.get(1, 0), 1.0);
        let others: f64 = m.pairs().filter(|&(i, j, _)| (i, j) != (0, 1)).map(|t| t.2.abs()).sum();
        assert_eq!(others, 0.0);

        let zero = mean_matrix(&gaussian(3, 3, 0.0, 1.0, 0), &[0, 1, 2]).unwrap();
        assert!(zero.entries().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn mean_matrix_sbm() {
        let p = ModelParams::sbm(3, 2, 0.9, 0.1, 0);
        let m = mean_matrix(&p, &[1, 2]).unwrap();
        assert_eq!(m.get(1, 2), 0.9);
        assert_eq!(m.get(0, 1), 0.1);
        assert_eq!(m.get(0, 2), 0.1);
    }

    #[test]
    fn mean_matrix_rejects_bad_support() {
        let p = gaussian(4, 2, 1.0, 1.0, 0);
        assert!(matches!(mean_matrix(&p, &[0]), Err(Error::InvalidSupport(_))));
        assert!(matches!(mean_matrix(&p, &[0, 4]), Err(Error::InvalidSupport(_))));
        assert!(matches!(mean_matrix(&p, &[1, 1]), Err(Error::InvalidSupport(_))));
    }

    #[test]
    fn noiseless_mode_is_exact() {
        let p = gaussian(4, 2, 5.0, 0.0, 7);
        let inst = gen_submatrix(&p).unwrap();
        assert_eq!(inst.matrix, mean_matrix(&p, &inst.support).unwrap());
    }

    #[test]
    fn rademacher_entries_are_two_point() {
        let p = ModelParams::submatrix(3, 2, 0.0, Noise::Rademacher { nu: 1.0 }, 1);
        let inst = gen_submatrix(&p).unwrap();
        assert!(inst.matrix.entries().iter().all(|&v| v == 1.0 || v == -1.0));
    }

    #[test]
    fn rademacher_with_signal_is_rejected() {
        let p = ModelParams::submatrix(5, 2, 0.5, Noise::Rademacher { nu: 1.0 }, 1);
        assert!(matches!(gen_submatrix(&p), Err(Error::RademacherWithSignal(_))));
    }

    #[test]
    fn invalid_params() {
        assert!(gen_submatrix(&gaussian(4, 1, 1.0, 1.0, 0)).is_err());
        assert!(gen_submatrix(&gaussian(4, 5, 1.0, 1.0, 0)).is_err());
        assert!(gen_submatrix(&gaussian(4, 2, 1.0, -1.0, 0)).is_err());
        assert!(gen_sbm(&ModelParams::sbm(4, 2, 0.5, 0.7, 0)).is_err());
        assert!(gen_sbm(&ModelParams::sbm(4, 2, 1.5, 0.7, 0)).is_err());
        assert!(gen_sbm(&gaussian(4, 2, 1.0, 1.0, 0)).is_err());
    }

    #[test]
    fn gaussian_null_mean_is_centered() {
        // 780 entries; the 4/sqrt(780) band should hold for at least 95% of seeds.
        let mut hits = 0;
        for seed in 0..200 {
            let inst = gen_submatrix(&gaussian(40, 3, 0.0, 1.0, seed)).unwrap();
            let mean: f64 = inst.matrix.entries().iter().sum::<f64>() / 780.0;
            if mean.abs() <= 4.0 / 780f64.sqrt() {
                hits += 1;
            }
        }
        assert!(hits >= 190, "{hits}/200");
    }

    #[test]
    fn sbm_deterministic_probabilities() {
        let k4 = gen_sbm(&ModelParams::sbm(4, 2, 1.0, 1.0, 3)).unwrap();
        assert!(k4.matrix.entries().iter().all(|&v| v == 1.0));

        let tri = gen_sbm(&ModelParams::sbm(5, 3, 1.0, 0.0, 3)).unwrap();
        for (i, j, v) in tri.matrix.pairs() {
            let inside = tri.support.contains(&i) && tri.support.contains(&j);
            assert_eq!(v, if inside { 1.0 } else { 0.0 });
        }
        assert_eq!(tri.matrix.entries().iter().sum::<f64>(), 3.0);
    }

    #[test]
    fn sbm_edge_count_concentrates() {
        let band = 4.0 * (780.0f64 * 0.25).sqrt();
        let mut hits = 0;
        for seed in 0..200 {
            let inst = gen_sbm(&ModelParams::sbm(40, 5, 0.5, 0.5, seed)).unwrap();
            assert!(inst.matrix.is_binary());
            let edges: f64 = inst.matrix.entries().iter().sum();
            if (edges - 390.0).abs() <= band {
                hits += 1;
            }
        }
        assert!(hits >= 190, "{hits}/200");
    }

    #[test]
    fn generation_is_deterministic() {
        let p = gaussian(12, 4, 1.5, 1.0, 99);
        assert_eq!(gen_submatrix(&p).unwrap(), gen_submatrix(&p).unwrap());
        let q = ModelParams::sbm(12, 4, 0.8, 0.2, 99);
        assert_eq!(gen_sbm(&q).unwrap(), gen_sbm(&q).unwrap());
        assert_ne!(gen_submatrix(&p).unwrap(), gen_submatrix(&p.with_seed(100)).unwrap());
    }

    #[test]
    fn accessors_and_relabeling() {
        let m = NoisyMatrix::from_upper(3, vec![4.0, 0.0, 2.0]).unwrap();
        assert_eq!(m.get(2, 1), 2.0);
        assert_eq!(m.get(1, 1), 0.0);
        let p = m.permuted(&[2, 0, 1]);
        assert_eq!(p.get(2, 0), 4.0);
        assert_eq!(p.get(0, 1), 2.0);
        assert!(NoisyMatrix::from_upper(3, vec![1.0]).is_err());
        assert!(NoisyMatrix::from_upper(1, vec![]).is_err());
    }

    #[test]
    fn json_preserves_ground_truth() {
        let inst = gen_submatrix(&gaussian(6, 3, 1.0, 1.0, 4)).unwrap();
        let file = MatrixFile::from_instance(&inst);
        let back = MatrixFile::from_json(&file.to_json().unwrap()).unwrap();
        assert_eq!(back.matrix().unwrap(), inst.matrix);
        let gt = back.ground_truth.unwrap();
        assert_eq!(gt.support, inst.support);
        assert_eq!(gt.params, inst.params);
    }
}
