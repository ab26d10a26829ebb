//! Expansivity-based pseudo-moment certificates.
//!
//! Given a positivity pattern on the vertices, the expansivity `η(S)` counts
//! the `2ℓ`-cliques of the pattern containing `S`. The certificate assigns
//!
//! ```text
//! Ẽ[x_S] = η(S) / η(∅) · (s*)_k / (2ℓ)_k,     k = |S| <= 2ℓ,
//! ```
//!
//! with `(a)_k` the falling factorial. Every clique of size `2ℓ` contains
//! exactly `2ℓ - |S|` one-element extensions of each of its subsets `S`, so
//! `Σ_{i∉S} η(S ∪ {i}) = (2ℓ - |S|) η(S)`, which turns into the cardinality
//! rows of the level-ℓ program. Feasibility of the linear part is therefore
//! exact and is checked here in rational arithmetic; positive
//! semidefiniteness is checked numerically.
//!
//! The diagonal of the shifted matrix (`X + ν I`, or `A + I`) is positive by
//! construction and never stored: clique tests only look at off-diagonal
//! entries.

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::models::NoisyMatrix;
use crate::sdp::extreme_eigenvalues;
use crate::sos_program::{moment_matrix, PseudoExpectation, SubsetIndexer};

/// Default cap on `C(d, 2ℓ)`, the number of candidate cliques.
pub const DEFAULT_CLIQUE_BUDGET: u64 = 10_000_000;

/// Relative tolerance of the numerical PSD verdict.
pub const PSD_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PositivityMode {
    /// Edge iff `X_ij > 0`.
    SignPositive,
    /// Edge iff `X_ij = 1`; input must be `{0, 1}`-valued.
    BinaryOne,
}

/// Undirected graph on `0..d` stored as adjacency bitsets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PositivityGraph {
    d: usize,
    words: usize,
    adj: Vec<u64>,
}

impl PositivityGraph {
    pub fn empty(d: usize) -> Self {
        let words = d.div_ceil(64).max(1);
        PositivityGraph { d, words, adj: vec![0; d * words] }
    }

    pub fn from_edges(d: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = Self::empty(d);
        for &(i, j) in edges {
            g.add_edge(i, j);
        }
        g
    }

    pub fn add_edge(&mut self, i: usize, j: usize) {
        assert!(i < self.d && j < self.d, "edge ({i}, {j}) outside 0..{}", self.d);
        if i == j {
            return;
        }
        self.adj[i * self.words + j / 64] |= 1 << (j % 64);
        self.adj[j * self.words + i / 64] |= 1 << (i % 64);
    }

    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adj[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.adj[i * self.words..(i + 1) * self.words]
    }

    /// Sorted edge list, `i < j`.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.d {
            for j in i + 1..self.d {
                if self.has_edge(i, j) {
                    out.push((i, j));
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|w| w.count_ones() as usize).sum::<usize>() / 2
    }
}

pub fn positivity_graph(x: &NoisyMatrix, mode: PositivityMode) -> Result<PositivityGraph> {
    let mut g = PositivityGraph::empty(x.d());
    for (i, j, v) in x.pairs() {
        let edge = match mode {
            PositivityMode::SignPositive => v > 0.0,
            PositivityMode::BinaryOne => {
                if v != 0.0 && v != 1.0 {
                    return Err(Error::NotBinary(i, j, v));
                }
                v == 1.0
            }
        };
        if edge {
            g.add_edge(i, j);
        }
    }
    Ok(g)
}

/// `η(S)` for every set `|S| <= 2ℓ`, indexed by a [`SubsetIndexer`].
#[derive(Debug, Clone)]
pub struct ExpansivityTable {
    ell: usize,
    idx: SubsetIndexer,
    counts: Vec<u64>,
}

impl ExpansivityTable {
    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn indexer(&self) -> &SubsetIndexer {
        &self.idx
    }

    /// `η(∅)`, the number of `2ℓ`-cliques.
    pub fn clique_count(&self) -> u64 {
        self.counts[0]
    }

    pub fn eta(&self, subset: &[usize]) -> u64 {
        self.counts[self.idx.var_index(subset)]
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }
}

pub fn expansivity_table(g: &PositivityGraph, ell: usize) -> Result<ExpansivityTable> {
    expansivity_table_with_budget(g, ell, DEFAULT_CLIQUE_BUDGET)
}

/// Enumerates every `2ℓ`-clique once and credits all `2^{2ℓ}` of its subsets.
/// Work is split by the clique's smallest vertex; integer counts are merged
/// by addition, so the result does not depend on scheduling.
pub fn expansivity_table_with_budget(g: &PositivityGraph, ell: usize, clique_budget: u64) -> Result<ExpansivityTable> {
    if ell == 0 {
        return Err(Error::InvalidParams("level must be >= 1".into()));
    }
    let size = 2 * ell;
    let d = g.d();
    match binomial(d as u64, size as u64) {
        Some(c) if c <= clique_budget => {}
        _ => {
            return Err(Error::TooLarge(format!("C({d}, {size}) candidate cliques exceeds the budget {clique_budget}")))
        }
    }
    let idx = SubsetIndexer::new(d, ell)?;
    let var_count = idx.var_count();

    let counts = (0..d)
        .into_par_iter()
        .map(|first| {
            let mut local = vec![0u64; var_count];
            let mut clique = vec![first];
            let cand: Vec<u64> =
                g.row(first).iter().enumerate().map(|(w, &bits)| bits & above_mask(first, w)).collect();
            extend_cliques(g, &idx, size, &mut clique, &cand, &mut local)?;
            Ok::<_, Error>(local)
        })
        .try_reduce(
            || vec![0u64; var_count],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x = x.checked_add(y).ok_or_else(|| Error::Overflow("expansivity count".into()))?;
                }
                Ok(a)
            },
        )?;
    Ok(ExpansivityTable { ell, idx, counts })
}

/// Bits of word `w` for vertices strictly greater than `v`.
fn above_mask(v: usize, w: usize) -> u64 {
    let lo = w * 64;
    if v < lo {
        u64::MAX
    } else if v + 1 >= lo + 64 {
        0
    } else {
        u64::MAX << (v + 1 - lo)
    }
}

fn extend_cliques(
    g: &PositivityGraph,
    idx: &SubsetIndexer,
    size: usize,
    clique: &mut Vec<usize>,
    cand: &[u64],
    counts: &mut [u64],
) -> Result<()> {
    if clique.len() == size {
        return credit_subsets(idx, clique, counts);
    }
    let needed = size - clique.len();
    if cand.iter().map(|w| w.count_ones() as usize).sum::<usize>() < needed {
        return Ok(());
    }
    for (w, &bits) in cand.iter().enumerate() {
        let mut rest = bits;
        while rest != 0 {
            let v = w * 64 + rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let next: Vec<u64> =
                cand.iter().zip(g.row(v)).enumerate().map(|(k, (&c, &r))| c & r & above_mask(v, k)).collect();
            clique.push(v);
            extend_cliques(g, idx, size, clique, &next, counts)?;
            clique.pop();
        }
    }
    Ok(())
}

fn credit_subsets(idx: &SubsetIndexer, clique: &[usize], counts: &mut [u64]) -> Result<()> {
    let mut subset = Vec::with_capacity(clique.len());
    for mask in 0u32..(1 << clique.len()) {
        subset.clear();
        subset.extend(clique.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &v)| v));
        let slot = &mut counts[idx.var_index(&subset)];
        *slot = slot.checked_add(1).ok_or_else(|| Error::Overflow("expansivity count".into()))?;
    }
    Ok(())
}

fn falling(a: usize, k: usize) -> BigInt {
    if k > a {
        return BigInt::zero();
    }
    (0..k).fold(BigInt::one(), |acc, i| acc * BigInt::from(a - i))
}

/// `Ẽ[x_S] = η(S)/η(∅) · (s*)_k / (2ℓ)_k` for every `|S| <= 2ℓ`.
pub fn build_certificate(table: &ExpansivityTable, s_star: usize, ell: usize) -> Result<PseudoExpectation> {
    if ell != table.ell {
        return Err(Error::InvalidParams(format!("table is for level {}, asked for level {ell}", table.ell)));
    }
    if s_star < 2 {
        return Err(Error::InvalidParams(format!("s_star must be >= 2, got {s_star}")));
    }
    let eta_empty = table.clique_count();
    if eta_empty == 0 {
        return Err(Error::CertificateUndefined(2 * ell));
    }
    let idx = &table.idx;
    let factors: Vec<BigRational> = (0..=2 * ell)
        .map(|k| BigRational::new(falling(s_star, k), BigInt::from(eta_empty) * falling(2 * ell, k)))
        .collect();
    let mut pe = PseudoExpectation::new(idx, s_star);
    for (k, factor) in factors.iter().enumerate() {
        for v in idx.size_range(k) {
            let eta = table.counts[v];
            let value = if eta == 0 { BigRational::zero() } else { factor * BigInt::from(eta) };
            pe.set_index(v, value);
        }
    }
    Ok(pe)
}

/// Outcome of checking a pseudo-expectation against the level-ℓ program.
#[derive(Debug, Clone, PartialEq)]
pub struct FeasibilityReport {
    pub normalization_ok: bool,
    /// `max_S |Σ_{i∉S} Ẽ[x_{S∪{i}}] - (s* - |S|) Ẽ[x_S]|`, exact.
    pub rowsum_max_violation: BigRational,
    pub min_eigenvalue: f64,
    pub max_eigenvalue: f64,
    pub psd: bool,
    /// Filled by [`certify`], which knows the data matrix.
    pub objective: Option<BigRational>,
    /// Filled by [`certify`], which knows the clique count.
    pub eta_empty: Option<u64>,
}

/// Exact linear checks only: normalization and the cardinality rows.
pub fn exact_feasibility(pe: &PseudoExpectation, idx: &SubsetIndexer, s_star: usize) -> Result<(bool, BigRational)> {
    let normalization_ok = pe.get(idx, &[])?.is_one();
    let d = idx.d();
    let mut worst = BigRational::zero();
    let mut grown = Vec::with_capacity(2 * idx.ell());
    let mut failure = None;
    idx.for_each_var(2 * idx.ell() - 1, |_, set| {
        if failure.is_some() {
            return;
        }
        let mut total = BigRational::zero();
        for i in (0..d).filter(|i| set.binary_search(i).is_err()) {
            grown.clear();
            grown.extend_from_slice(set);
            grown.insert(grown.partition_point(|&e| e < i), i);
            match pe.get(idx, &grown) {
                Ok(v) => total += v,
                Err(e) => {
                    failure = Some(e);
                    return;
                }
            }
        }
        let base = match pe.get(idx, set) {
            Ok(v) => v,
            Err(e) => {
                failure = Some(e);
                return;
            }
        };
        let coeff = BigRational::from_integer(BigInt::from(s_star as i64 - set.len() as i64));
        let violation = (total - coeff * base).abs();
        if violation > worst {
            worst = violation;
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    Ok((normalization_ok, worst))
}

/// Exact linear checks plus the numerical PSD verdict
/// `λ_min >= -1e-8 · max(1, λ_max)` on the set-indexed moment matrix.
pub fn verify_certificate(pe: &PseudoExpectation, d: usize, s_star: usize, ell: usize) -> Result<FeasibilityReport> {
    if pe.d() != d || pe.ell() != ell {
        return Err(Error::InvalidParams(format!(
            "pseudo-expectation is for d = {}, level {}; asked to verify d = {d}, level {ell}",
            pe.d(),
            pe.ell()
        )));
    }
    let idx = SubsetIndexer::new(d, ell)?;
    let (normalization_ok, rowsum_max_violation) = exact_feasibility(pe, &idx, s_star)?;
    let m: DMatrix<f64> = moment_matrix(pe, &idx)?;
    let (min_eigenvalue, max_eigenvalue) = extreme_eigenvalues(&m)?;
    Ok(FeasibilityReport {
        normalization_ok,
        rowsum_max_violation,
        min_eigenvalue,
        max_eigenvalue,
        psd: min_eigenvalue >= -PSD_TOLERANCE * max_eigenvalue.max(1.0),
        objective: None,
        eta_empty: None,
    })
}

/// `(2/(s*(s*-1))) Σ_{i<j} X_ij Ẽ[x_{ij}]` exactly. Matrix entries are
/// converted from their binary64 values without rounding.
pub fn certificate_objective(x: &NoisyMatrix, pe: &PseudoExpectation, s_star: usize) -> Result<BigRational> {
    if s_star < 2 {
        return Err(Error::InvalidParams(format!("s_star must be >= 2, got {s_star}")));
    }
    if pe.d() != x.d() {
        return Err(Error::InvalidParams("pseudo-expectation and matrix disagree on d".into()));
    }
    let idx = SubsetIndexer::new(pe.d(), pe.ell())?;
    let mut total = BigRational::zero();
    for (i, j, v) in x.pairs() {
        let e = pe.get(&idx, &[i, j])?;
        if v == 0.0 || e.is_zero() {
            continue;
        }
        let xij = BigRational::from_float(v).ok_or_else(|| Error::Format(format!("non-finite entry {v}")))?;
        total += xij * e;
    }
    Ok(total * BigRational::new(BigInt::from(2), BigInt::from(s_star * (s_star - 1))))
}

/// Everything produced for one matrix: table, certificate and report.
#[derive(Debug, Clone)]
pub struct Certified {
    pub table: ExpansivityTable,
    pub pe: PseudoExpectation,
    pub report: FeasibilityReport,
}

/// Positivity graph, expansivity table, certificate, verification and exact
/// objective in one call.
pub fn certify(x: &NoisyMatrix, mode: PositivityMode, s_star: usize, ell: usize) -> Result<Certified> {
    if s_star < 2 || s_star > x.d() {
        return Err(Error::InvalidParams(format!("need 2 <= s_star <= d, got s_star = {s_star} with d = {}", x.d())));
    }
    let g = positivity_graph(x, mode)?;
    let table = expansivity_table(&g, ell)?;
    let pe = build_certificate(&table, s_star, ell)?;
    let mut report = verify_certificate(&pe, x.d(), s_star, ell)?;
    report.objective = Some(certificate_objective(x, &pe, s_star)?);
    report.eta_empty = Some(table.clique_count());
    Ok(Certified { table, pe, report })
}

/// `"p/q"`, always with an explicit denominator.
pub fn format_ratio(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// JSON form of a [`FeasibilityReport`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportJson {
    pub eta_empty: Option<u64>,
    pub normalization_ok: bool,
    pub rowsum_max_violation: String,
    pub min_eigenvalue: f64,
    pub psd: bool,
    pub objective: Option<String>,
    pub objective_float: Option<f64>,
}

impl From<&FeasibilityReport> for ReportJson {
    fn from(r: &FeasibilityReport) -> Self {
        ReportJson {
            eta_empty: r.eta_empty,
            normalization_ok: r.normalization_ok,
            rowsum_max_violation: format_ratio(&r.rowsum_max_violation),
            min_eigenvalue: r.min_eigenvalue,
            psd: r.psd,
            objective: r.objective.as_ref().map(format_ratio),
            objective_float: r.objective.as_ref().and_then(|o| o.to_f64()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::next_combination;
    use proptest::prelude::*;

    fn q(p: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(d))
    }

    fn complete(d: usize) -> PositivityGraph {
        let mut g = PositivityGraph::empty(d);
        for i in 0..d {
            for j in i + 1..d {
                g.add_edge(i, j);
            }
        }
        g
    }

    fn path3() -> PositivityGraph {
        PositivityGraph::from_edges(3, &[(0, 1), (1, 2)])
    }

    /// Direct count: for each S, the number of 2ℓ-supersets that are cliques.
    fn eta_oracle(g: &PositivityGraph, subset: &[usize], size: usize) -> u64 {
        let mut comb: Vec<usize> = (0..size).collect();
        let mut count = 0;
        if size > g.d() {
            return 0;
        }
        loop {
            let contains = subset.iter().all(|s| comb.contains(s));
            let clique = comb.iter().all(|&a| comb.iter().all(|&b| a == b || g.has_edge(a, b)));
            if contains && clique {
                count += 1;
            }
            if !next_combination(&mut comb, g.d()) {
                return count;
            }
        }
    }

    #[test]
    fn positivity_graph_modes() {
        let x = NoisyMatrix::from_upper(3, vec![1.0, -1.0, 1.0]).unwrap();
        let g = positivity_graph(&x, PositivityMode::SignPositive).unwrap();
        assert_eq!(g.edges(), vec![(0, 1), (1, 2)]);
        assert!(matches!(positivity_graph(&x, PositivityMode::BinaryOne), Err(Error::NotBinary(..))));

        let k5 = NoisyMatrix::from_fn(5, |_, _| 1.0).unwrap();
        assert_eq!(positivity_graph(&k5, PositivityMode::BinaryOne).unwrap().edge_count(), 10);
        let zero = NoisyMatrix::zeros(4).unwrap();
        assert_eq!(positivity_graph(&zero, PositivityMode::SignPositive).unwrap().edge_count(), 0);
    }

    #[test]
    fn complete_graph_counts() {
        let t = expansivity_table(&complete(4), 1).unwrap();
        assert_eq!(t.clique_count(), 6);
        for i in 0..4 {
            assert_eq!(t.eta(&[i]), 3);
            for j in i + 1..4 {
                assert_eq!(t.eta(&[i, j]), 1);
            }
        }
    }

    #[test]
    fn path_counts() {
        let t = expansivity_table(&path3(), 1).unwrap();
        assert_eq!(t.clique_count(), 2);
        assert_eq!((t.eta(&[0]), t.eta(&[1]), t.eta(&[2])), (1, 2, 1));
        assert_eq!((t.eta(&[0, 1]), t.eta(&[1, 2]), t.eta(&[0, 2])), (1, 1, 0));
        assert_eq!(expansivity_table(&PositivityGraph::empty(5), 1).unwrap().clique_count(), 0);
    }

    #[test]
    fn budget_and_level_guards() {
        assert!(matches!(expansivity_table_with_budget(&complete(30), 2, 100), Err(Error::TooLarge(_))));
        assert!(expansivity_table(&complete(4), 0).is_err());
    }

    #[test]
    fn k4_certificate_values() {
        let t = expansivity_table(&complete(4), 1).unwrap();
        let pe = build_certificate(&t, 2, 1).unwrap();
        let idx = t.indexer();
        assert_eq!(pe.get(idx, &[]).unwrap(), &q(1, 1));
        assert_eq!(pe.get(idx, &[2]).unwrap(), &q(1, 2));
        assert_eq!(pe.get(idx, &[1, 3]).unwrap(), &q(1, 6));

        let m = moment_matrix(&pe, idx).unwrap();
        for k in 0..5 {
            assert_eq!(m[(0, k)], if k == 0 { 1.0 } else { 0.5 });
            assert_eq!(m[(k, k)], if k == 0 { 1.0 } else { 0.5 });
        }
        assert!((m[(1, 2)] - 1.0 / 6.0).abs() < 1e-15);

        let report = verify_certificate(&pe, 4, 2, 1).unwrap();
        assert!(report.normalization_ok);
        assert!(report.rowsum_max_violation.is_zero());
        assert!(report.min_eigenvalue.abs() < 1e-12);
        assert!(report.psd);

        let ones = NoisyMatrix::from_fn(4, |_, _| 1.0).unwrap();
        assert_eq!(certificate_objective(&ones, &pe, 2).unwrap(), q(1, 1));
        assert!((crate::sos_program::objective_value(&ones, &pe, 2).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn path_certificate_values() {
        let t = expansivity_table(&path3(), 1).unwrap();
        let pe = build_certificate(&t, 2, 1).unwrap();
        let idx = t.indexer();
        assert_eq!(pe.get(idx, &[0]).unwrap(), &q(1, 2));
        assert_eq!(pe.get(idx, &[1]).unwrap(), &q(1, 1));
        assert_eq!(pe.get(idx, &[2]).unwrap(), &q(1, 2));
        assert_eq!(pe.get(idx, &[0, 1]).unwrap(), &q(1, 2));
        assert_eq!(pe.get(idx, &[1, 2]).unwrap(), &q(1, 2));
        assert_eq!(pe.get(idx, &[0, 2]).unwrap(), &q(0, 1));
        let report = verify_certificate(&pe, 3, 2, 1).unwrap();
        assert!(report.rowsum_max_violation.is_zero());
        assert!(report.psd);
        assert!(report.min_eigenvalue > -1e-12);
    }

    #[test]
    fn perturbation_is_reported_exactly() {
        let t = expansivity_table(&complete(4), 1).unwrap();
        let mut pe = build_certificate(&t, 2, 1).unwrap();
        let idx = t.indexer();
        let bumped = pe.get(idx, &[0, 1]).unwrap() + q(1, 100);
        pe.set(idx, &[0, 1], bumped);
        let report = verify_certificate(&pe, 4, 2, 1).unwrap();
        assert_eq!(report.rowsum_max_violation, q(1, 100));
    }

    #[test]
    fn undefined_without_cliques() {
        let t = expansivity_table(&path3(), 2).unwrap();
        assert_eq!(t.clique_count(), 0);
        assert!(matches!(build_certificate(&t, 2, 2), Err(Error::CertificateUndefined(4))));
        let t1 = expansivity_table(&path3(), 1).unwrap();
        assert!(build_certificate(&t1, 2, 2).is_err());
        assert!(build_certificate(&t1, 1, 1).is_err());
    }

    #[test]
    fn complete_graph_closed_form() {
        for (d, s, ell) in [(5, 2, 1), (6, 3, 1), (6, 3, 2), (7, 5, 2), (8, 4, 2), (9, 7, 3)] {
            let t = expansivity_table(&complete(d), ell).unwrap();
            let pe = build_certificate(&t, s, ell).unwrap();
            let idx = t.indexer();
            idx.for_each_var(2 * ell, |v, set| {
                let k = set.len();
                let expect = BigRational::new(falling(s, k), falling(d, k));
                assert_eq!(pe.get_index(v).unwrap(), &expect, "d={d} s={s} ell={ell} set={set:?}");
            });
        }
    }

    #[test]
    fn missing_values_are_reported() {
        let idx = SubsetIndexer::new(3, 1).unwrap();
        let mut pe = PseudoExpectation::new(&idx, 2);
        pe.set(&idx, &[], BigRational::one());
        assert!(matches!(verify_certificate(&pe, 3, 2, 1), Err(Error::MissingValue(_))));
        let x = NoisyMatrix::zeros(3).unwrap();
        assert!(matches!(certificate_objective(&x, &pe, 2), Err(Error::MissingValue(_))));
    }

    #[test]
    fn report_json_uses_fractions() {
        let k4 = NoisyMatrix::from_fn(4, |_, _| 1.0).unwrap();
        let c = certify(&k4, PositivityMode::BinaryOne, 2, 1).unwrap();
        let json = ReportJson::from(&c.report);
        assert_eq!(json.objective.as_deref(), Some("1/1"));
        assert_eq!(json.rowsum_max_violation, "0/1");
        assert_eq!(json.eta_empty, Some(6));
        assert_eq!(json.objective_float, Some(1.0));
    }

    fn random_graph() -> impl Strategy<Value = PositivityGraph> {
        (4usize..=11, 0.2f64..0.95, any::<u64>()).prop_map(|(d, p, seed)| {
            use rand::Rng;
            let mut rng = crate::rng::rng_from_seed(seed);
            let mut g = PositivityGraph::empty(d);
            for i in 0..d {
                for j in i + 1..d {
                    if rng.random::<f64>() < p {
                        g.add_edge(i, j);
                    }
                }
            }
            g
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn table_matches_direct_count(g in random_graph(), ell in 1usize..=2) {
            let t = expansivity_table(&g, ell).unwrap();
            let mut ok = true;
            t.indexer().for_each_var(2 * ell, |v, set| {
                ok &= t.counts()[v] == eta_oracle(&g, set, 2 * ell);
            });
            prop_assert!(ok);
        }

        #[test]
        fn table_invariants(g in random_graph(), ell in 1usize..=2) {
            let t = expansivity_table(&g, ell).unwrap();
            let idx = t.indexer();
            let d = g.d();
            let mut ok = true;
            idx.for_each_var(2 * ell, |v, set| {
                let eta = t.counts()[v];
                let is_clique = set.iter().all(|&a| set.iter().all(|&b| a == b || g.has_edge(a, b)));
                if !is_clique { ok &= eta == 0; }
                for drop in 0..set.len() {
                    let mut sub = set.to_vec();
                    sub.remove(drop);
                    ok &= eta <= t.eta(&sub);
                }
                if set.len() < 2 * ell {
                    let grown: u64 = (0..d).filter(|i| !set.contains(i)).map(|i| {
                        let mut s = set.to_vec();
                        s.push(i);
                        s.sort_unstable();
                        t.eta(&s)
                    }).sum();
                    ok &= grown == (2 * ell - set.len()) as u64 * eta;
                }
            });
            prop_assert!(ok);
        }

        #[test]
        fn certificates_are_exactly_feasible(g in random_graph(), ell in 1usize..=2, s in 2usize..=6) {
            let t = expansivity_table(&g, ell).unwrap();
            prop_assume!(t.clique_count() > 0 && s <= g.d());
            let pe = build_certificate(&t, s, ell).unwrap();
            let idx = t.indexer();
            let (norm, worst) = exact_feasibility(&pe, idx, s).unwrap();
            prop_assert!(norm);
            prop_assert!(worst.is_zero());
            let singles: BigRational = (0..g.d()).map(|i| pe.get(idx, &[i]).unwrap().clone()).sum();
            prop_assert_eq!(singles.clone(), BigRational::from_integer(BigInt::from(s)));
            let mut pairs = singles;
            for i in 0..g.d() {
                for j in 0..g.d() {
                    if i != j {
                        let (a, b) = (i.min(j), i.max(j));
                        pairs += pe.get(idx, &[a, b]).unwrap();
                    }
                }
            }
            prop_assert_eq!(pairs, BigRational::from_integer(BigInt::from(s * s)));
        }

        #[test]
        fn genuine_moment_regime_is_psd(g in random_graph(), ell in 1usize..=2, s in 2usize..=4) {
            prop_assume!(s <= 2 * ell);
            let t = expansivity_table(&g, ell).unwrap();
            prop_assume!(t.clique_count() > 0);
            let pe = build_certificate(&t, s, ell).unwrap();
            let report = verify_certificate(&pe, g.d(), s, ell).unwrap();
            prop_assert!(report.min_eigenvalue >= -1e-10, "{}", report.min_eigenvalue);
        }

        #[test]
        fn binary_objective_is_one(g in random_graph(), ell in 1usize..=2, s in 2usize..=5) {
            let x = NoisyMatrix::from_fn(g.d(), |i, j| if g.has_edge(i, j) { 1.0 } else { 0.0 }).unwrap();
            let t = expansivity_table(&g, ell).unwrap();
            prop_assume!(t.clique_count() > 0 && s <= g.d());
            let pe = build_certificate(&t, s, ell).unwrap();
            prop_assert_eq!(certificate_objective(&x, &pe, s).unwrap(), BigRational::one());
        }
    }
}
