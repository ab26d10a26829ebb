//! Level-ℓ sum-of-squares relaxation of the scan problem.
//!
//! Moments are indexed by vertex sets rather than by ordered collections:
//! since `v_i^2 = v_i` and monomials commute, every collection `C` collapses
//! to the set of its distinct elements, and the moment matrix has one row per
//! set of size at most ℓ. Cell `(S1, S2)` carries the variable `y_{S1 ∪ S2}`,
//! so the symmetry and idempotency constraints hold by construction and only
//! the cardinality constraints remain as explicit linear equalities.

use nalgebra::DMatrix;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::combinatorics::{sorted_union, BinomialTable};
use crate::error::{Error, Result};
use crate::models::NoisyMatrix;

/// Default cap on the number of moment variables (sets of size <= 2ℓ).
pub const DEFAULT_VAR_BUDGET: u64 = 10_000_000;

/// Bijection between vertex sets and contiguous indices, ordered by size and
/// then lexicographically. Rows cover sets of size `<= ell`, variables cover
/// sets of size `<= 2 ell`; row `r` and variable `r` name the same set.
#[derive(Debug, Clone)]
pub struct SubsetIndexer {
    d: usize,
    ell: usize,
    binom: BinomialTable,
    /// `offsets[k]` = number of sets of size `< k`.
    offsets: Vec<u64>,
    rows: Vec<Vec<usize>>,
}

impl SubsetIndexer {
    pub fn new(d: usize, ell: usize) -> Result<Self> {
        Self::with_budget(d, ell, DEFAULT_VAR_BUDGET)
    }

    pub fn with_budget(d: usize, ell: usize, max_vars: u64) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidParams("level must be >= 1".into()));
        }
        if d == 0 {
            return Err(Error::InvalidParams("d must be >= 1".into()));
        }
        let top = 2 * ell;
        let binom = BinomialTable::new(d, top);
        let mut offsets = vec![0u64; top + 2];
        for k in 0..=top {
            let c = binom.get(d, k);
            offsets[k + 1] = offsets[k].checked_add(c).filter(|&v| v <= max_vars).ok_or_else(|| {
                Error::TooLarge(format!("more than {max_vars} moment variables for d = {d}, level {ell}"))
            })?;
        }
        let row_count = offsets[ell + 1] as usize;
        let mut rows = Vec::with_capacity(row_count);
        for k in 0..=ell.min(d) {
            let mut comb: Vec<usize> = (0..k).collect();
            loop {
                rows.push(comb.clone());
                if !crate::combinatorics::next_combination(&mut comb, d) {
                    break;
                }
            }
        }
        debug_assert_eq!(rows.len(), row_count);
        Ok(SubsetIndexer { d, ell, binom, offsets, rows })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    /// Number of sets of size `<= ell` (moment matrix side).
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    /// Number of sets of size `<= 2 ell`.
    pub fn var_count(&self) -> usize {
        self.offsets[2 * self.ell + 1] as usize
    }

    pub fn row_subset(&self, r: usize) -> &[usize] {
        &self.rows[r]
    }

    /// Index of a sorted, duplicate-free set of size `<= 2 ell`.
    #[inline]
    pub fn var_index(&self, subset: &[usize]) -> usize {
        debug_assert!(subset.len() <= 2 * self.ell);
        debug_assert!(subset.windows(2).all(|w| w[0] < w[1]));
        (self.offsets[subset.len()] + self.binom.lex_rank(self.d, subset)) as usize
    }

    pub fn var_subset(&self, v: usize) -> Vec<usize> {
        let v = v as u64;
        let k = self.offsets.partition_point(|&o| o <= v) - 1;
        self.binom.lex_unrank(self.d, k, v - self.offsets[k])
    }

    /// Variable index range of sets with exactly `k` elements.
    pub fn size_range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k] as usize..self.offsets[k + 1] as usize
    }

    /// Calls `f(index, set)` for every set of size `<= max_size` in index order.
    pub fn for_each_var(&self, max_size: usize, mut f: impl FnMut(usize, &[usize])) {
        let mut idx = 0usize;
        for k in 0..=max_size.min(2 * self.ell).min(self.d) {
            let mut comb: Vec<usize> = (0..k).collect();
            loop {
                f(idx, &comb);
                idx += 1;
                if !crate::combinatorics::next_combination(&mut comb, self.d) {
                    break;
                }
            }
        }
    }

    /// Dense `row_count x row_count` map from cells to `var_index(S_r ∪ S_c)`.
    pub fn entry_map(&self) -> Vec<usize> {
        let n = self.row_count();
        let mut map = vec![0usize; n * n];
        let mut union = Vec::with_capacity(2 * self.ell);
        for r in 0..n {
            for c in r..n {
                sorted_union(&self.rows[r], &self.rows[c], &mut union);
                let v = self.var_index(&union);
                map[r * n + c] = v;
                map[c * n + r] = v;
            }
        }
        map
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LinearConstraint {
    pub terms: Vec<(usize, f64)>,
    pub rhs: f64,
}

/// Maximize `objective · y / scale` subject to the linear equalities and the
/// moment matrix `M(y)` (cell `(r, c)` equals `y[entry_map[r * dim + c]]`)
/// being positive semidefinite.
#[derive(Debug, Clone)]
pub struct SosProgram {
    pub dim: usize,
    pub var_count: usize,
    pub objective: Vec<(usize, f64)>,
    pub constraints: Vec<LinearConstraint>,
    pub entry_map: Vec<usize>,
    pub scale: f64,
}

impl SosProgram {
    #[inline]
    pub fn cell_var(&self, r: usize, c: usize) -> usize {
        self.entry_map[r * self.dim + c]
    }

    /// Checks the structural invariants: symmetric entry map, every variable
    /// reachable, and exactly one normalization row `y_v = 1`.
    pub fn validate(&self) -> Result<()> {
        let n = self.dim;
        if self.entry_map.len() != n * n {
            return Err(Error::Format("entry map has wrong size".into()));
        }
        let mut seen = vec![false; self.var_count];
        for r in 0..n {
            for c in 0..n {
                let v = self.cell_var(r, c);
                if v >= self.var_count {
                    return Err(Error::Format(format!("cell ({r}, {c}) maps to unknown variable {v}")));
                }
                if v != self.cell_var(c, r) {
                    return Err(Error::Format(format!("entry map not symmetric at ({r}, {c})")));
                }
                seen[v] = true;
            }
        }
        if let Some(v) = seen.iter().position(|s| !s) {
            return Err(Error::Format(format!("variable {v} does not appear in the moment matrix")));
        }
        for con in &self.constraints {
            if let Some(&(v, _)) = con.terms.iter().find(|(v, _)| *v >= self.var_count) {
                return Err(Error::Format(format!("constraint references unknown variable {v}")));
            }
        }
        for &(v, _) in &self.objective {
            if v >= self.var_count {
                return Err(Error::Format(format!("objective references unknown variable {v}")));
            }
        }
        let normalizations =
            self.constraints.iter().filter(|c| c.terms.len() == 1 && c.terms[0].1 == 1.0 && c.rhs == 1.0).count();
        if normalizations != 1 {
            return Err(Error::Format(format!("expected one normalization row, found {normalizations}")));
        }
        Ok(())
    }

    /// Objective at `y`, divided by `scale`.
    pub fn value_at(&self, y: &[f64]) -> f64 {
        self.objective.iter().map(|&(v, c)| c * y[v]).sum::<f64>() / self.scale
    }

    /// Largest absolute equality violation at `y`.
    pub fn max_violation(&self, y: &[f64]) -> f64 {
        self.constraints
            .iter()
            .map(|con| (con.terms.iter().map(|&(v, a)| a * y[v]).sum::<f64>() - con.rhs).abs())
            .fold(0.0, f64::max)
    }

    pub fn matrix_at(&self, y: &[f64]) -> DMatrix<f64> {
        DMatrix::from_fn(self.dim, self.dim, |r, c| y[self.cell_var(r, c)])
    }

    pub fn dump(&self) -> ProgramDump {
        let mut entry_map = Vec::with_capacity(self.dim * (self.dim + 1) / 2);
        for r in 0..self.dim {
            for c in r..self.dim {
                entry_map.push((r, c, self.cell_var(r, c)));
            }
        }
        ProgramDump {
            dim: self.dim,
            var_count: self.var_count,
            scale: self.scale,
            objective: self.objective.clone(),
            constraints: self.constraints.clone(),
            entry_map,
        }
    }
}

/// JSON form of a program; `entry_map` lists the upper triangle as
/// `(row, col, var)` triples.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProgramDump {
    pub dim: usize,
    pub var_count: usize,
    pub scale: f64,
    pub objective: Vec<(usize, f64)>,
    pub constraints: Vec<LinearConstraint>,
    pub entry_map: Vec<(usize, usize, usize)>,
}

impl ProgramDump {
    pub fn into_program(self) -> Result<SosProgram> {
        let n = self.dim;
        let mut entry_map = vec![usize::MAX; n * n];
        for (r, c, v) in self.entry_map {
            if r >= n || c >= n {
                return Err(Error::Format(format!("cell ({r}, {c}) outside a {n}x{n} matrix")));
            }
            entry_map[r * n + c] = v;
            entry_map[c * n + r] = v;
        }
        let program = SosProgram {
            dim: n,
            var_count: self.var_count,
            objective: self.objective,
            constraints: self.constraints,
            entry_map,
            scale: self.scale,
        };
        program.validate()?;
        Ok(program)
    }
}

fn check_level_params(x: &NoisyMatrix, s_star: usize, ell: usize) -> Result<()> {
    if s_star < 2 || s_star > x.d() {
        return Err(Error::InvalidParams(format!("need 2 <= s_star <= d, got s_star = {s_star} with d = {}", x.d())));
    }
    if ell == 0 {
        return Err(Error::InvalidParams("level must be >= 1".into()));
    }
    Ok(())
}

fn pair_objective(x: &NoisyMatrix, mut pair_var: impl FnMut(usize, usize) -> usize) -> Vec<(usize, f64)> {
    x.pairs().filter(|&(_, _, v)| v != 0.0).map(|(i, j, v)| (pair_var(i, j), 2.0 * v)).collect()
}

/// The level-`ell` program over set moments `y_S`, `|S| <= 2 ell`.
///
/// Constraints: `y_∅ = 1`, and for every `S` with `|S| <= 2 ell - 1` the
/// cardinality row `Σ_{i∉S} y_{S∪{i}} = (s* - |S|) y_S`.
pub fn assemble_level(x: &NoisyMatrix, s_star: usize, ell: usize) -> Result<SosProgram> {
    assemble_level_truncated(x, s_star, ell, (2 * ell).saturating_sub(1))
}

/// As [`assemble_level`] but keeping cardinality rows only for
/// `|S| <= max_row_size`. With `ell = 1` and `max_row_size = 0` this is the
/// set-indexed counterpart of [`assemble_basic`].
pub fn assemble_level_truncated(x: &NoisyMatrix, s_star: usize, ell: usize, max_row_size: usize) -> Result<SosProgram> {
    check_level_params(x, s_star, ell)?;
    let idx = SubsetIndexer::new(x.d(), ell)?;
    let max_row_size = max_row_size.min(2 * ell - 1);

    let mut constraints = vec![LinearConstraint { terms: vec![(0, 1.0)], rhs: 1.0 }];
    let mut grown = Vec::with_capacity(2 * ell);
    idx.for_each_var(max_row_size, |v, set| {
        let mut terms = Vec::with_capacity(x.d() - set.len() + 1);
        for i in (0..x.d()).filter(|i| set.binary_search(i).is_err()) {
            grown.clear();
            grown.extend_from_slice(set);
            let pos = grown.partition_point(|&e| e < i);
            grown.insert(pos, i);
            terms.push((idx.var_index(&grown), 1.0));
        }
        let coeff = s_star as f64 - set.len() as f64;
        if coeff != 0.0 {
            terms.push((v, -coeff));
        }
        constraints.push(LinearConstraint { terms, rhs: 0.0 });
    });

    let objective = pair_objective(x, |i, j| idx.var_index(&[i, j]));
    Ok(SosProgram {
        dim: idx.row_count(),
        var_count: idx.var_count(),
        objective,
        constraints,
        entry_map: idx.entry_map(),
        scale: (s_star * (s_star - 1)) as f64,
    })
}

/// The basic `(d+1) x (d+1)` relaxation with explicit constraints
/// `Π_00 = 1`, `Σ_i Π_i0 = s*`, `Π_ii = Π_i0`.
///
/// Variables: `0` is `Π_00`, `1..=d` are `Π_i0`, `d+1..=2d` are `Π_ii`, and
/// the off-diagonal `Π_ij` (`i < j`) follow in upper-triangle order.
pub fn assemble_basic(x: &NoisyMatrix, s_star: usize) -> Result<SosProgram> {
    check_level_params(x, s_star, 1)?;
    let d = x.d();
    let n = d + 1;
    let pair_base = 1 + 2 * d;
    let pair_var = |i: usize, j: usize| {
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        pair_base + i * d - i * (i + 1) / 2 + (j - i - 1)
    };
    let mut entry_map = vec![0usize; n * n];
    for r in 0..n {
        for c in 0..n {
            entry_map[r * n + c] = match (r, c) {
                (0, 0) => 0,
                (0, k) | (k, 0) => k,
                (a, b) if a == b => d + a,
                (a, b) => pair_var(a - 1, b - 1),
            };
        }
    }
    let mut constraints = vec![
        LinearConstraint { terms: vec![(0, 1.0)], rhs: 1.0 },
        LinearConstraint { terms: (1..=d).map(|k| (k, 1.0)).collect(), rhs: s_star as f64 },
    ];
    for k in 1..=d {
        constraints.push(LinearConstraint { terms: vec![(d + k, 1.0), (k, -1.0)], rhs: 0.0 });
    }
    Ok(SosProgram {
        dim: n,
        var_count: pair_base + d * (d - 1) / 2,
        objective: pair_objective(x, pair_var),
        constraints,
        entry_map,
        scale: (s_star * (s_star - 1)) as f64,
    })
}

/// Exact rational values `Ẽ[x_S]` for sets `|S| <= 2 ell`.
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoExpectation {
    d: usize,
    ell: usize,
    s_star: usize,
    values: Vec<Option<BigRational>>,
}

impl PseudoExpectation {
    /// Empty table sized for `idx`.
    pub fn new(idx: &SubsetIndexer, s_star: usize) -> Self {
        PseudoExpectation { d: idx.d(), ell: idx.ell(), s_star, values: vec![None; idx.var_count()] }
    }

    /// The moments of the point mass on `support`: `Ẽ[x_T] = 1(T ⊆ support)`.
    pub fn integral(idx: &SubsetIndexer, support: &[usize]) -> Self {
        let mut pe = Self::new(idx, support.len());
        idx.for_each_var(2 * idx.ell(), |v, set| {
            let inside = set.iter().all(|i| support.contains(i));
            pe.values[v] = Some(if inside { BigRational::one() } else { BigRational::zero() });
        });
        pe
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn ell(&self) -> usize {
        self.ell
    }

    pub fn s_star(&self) -> usize {
        self.s_star
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn set_index(&mut self, v: usize, value: BigRational) {
        self.values[v] = Some(value);
    }

    pub fn get_index(&self, v: usize) -> Option<&BigRational> {
        self.values[v].as_ref()
    }

    pub fn set(&mut self, idx: &SubsetIndexer, subset: &[usize], value: BigRational) {
        self.values[idx.var_index(subset)] = Some(value);
    }

    pub fn get(&self, idx: &SubsetIndexer, subset: &[usize]) -> Result<&BigRational> {
        self.values[idx.var_index(subset)].as_ref().ok_or_else(|| Error::MissingValue(subset.to_vec()))
    }

    fn check_indexer(&self, idx: &SubsetIndexer) -> Result<()> {
        if idx.d() != self.d || idx.ell() != self.ell {
            return Err(Error::InvalidParams(format!(
                "indexer (d = {}, level {}) does not match pseudo-expectation (d = {}, level {})",
                idx.d(),
                idx.ell(),
                self.d,
                self.ell
            )));
        }
        Ok(())
    }

    /// Values as floats in variable order, for feeding into a [`SosProgram`].
    pub fn to_f64(&self, idx: &SubsetIndexer) -> Result<Vec<f64>> {
        self.check_indexer(idx)?;
        self.values
            .iter()
            .enumerate()
            .map(|(v, val)| {
                val.as_ref()
                    .map(|r| r.to_f64().unwrap_or(f64::NAN))
                    .ok_or_else(|| Error::MissingValue(idx.var_subset(v)))
            })
            .collect()
    }
}

/// Set-indexed moment matrix `M_{S_r, S_c} = Ẽ[x_{S_r ∪ S_c}]` as floats.
pub fn moment_matrix(pe: &PseudoExpectation, idx: &SubsetIndexer) -> Result<DMatrix<f64>> {
    pe.check_indexer(idx)?;
    let n = idx.row_count();
    let mut m = DMatrix::zeros(n, n);
    let mut union = Vec::with_capacity(2 * idx.ell());
    for r in 0..n {
        for c in r..n {
            sorted_union(idx.row_subset(r), idx.row_subset(c), &mut union);
            let value = pe.get(idx, &union)?.to_f64().unwrap_or(f64::NAN);
            m[(r, c)] = value;
            m[(c, r)] = value;
        }
    }
    Ok(m)
}

/// `(2 / (s*(s*-1))) Σ_{i<j} X_ij Ẽ[x_{ij}]` in floating point.
pub fn objective_value(x: &NoisyMatrix, pe: &PseudoExpectation, s_star: usize) -> Result<f64> {
    if pe.d != x.d() {
        return Err(Error::InvalidParams("pseudo-expectation and matrix disagree on d".into()));
    }
    if s_star < 2 {
        return Err(Error::InvalidParams(format!("s_star must be >= 2, got {s_star}")));
    }
    let idx = SubsetIndexer::new(pe.d, pe.ell)?;
    let mut total = 0.0;
    for (i, j, xij) in x.pairs() {
        total += xij * pe.get(&idx, &[i, j])?.to_f64().unwrap_or(f64::NAN);
    }
    Ok(2.0 * total / (s_star * (s_star - 1)) as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::next_combination;
    use crate::estimators::{scan_estimate, ScanStrategy};
    use crate::models::{gen_submatrix, ModelParams, Noise};
    use num_bigint::BigInt;

    fn ratio(p: i64, q: i64) -> BigRational {
        BigRational::new(BigInt::from(p), BigInt::from(q))
    }

    #[test]
    fn indexer_counts_and_order() {
        let idx = SubsetIndexer::new(4, 1).unwrap();
        assert_eq!((idx.row_count(), idx.var_count()), (5, 11));
        let idx = SubsetIndexer::new(10, 2).unwrap();
        assert_eq!((idx.row_count(), idx.var_count()), (56, 386));
        let idx = SubsetIndexer::new(2, 1).unwrap();
        let rows: Vec<&[usize]> = (0..idx.row_count()).map(|r| idx.row_subset(r)).collect();
        assert_eq!(rows, vec![&[][..], &[0][..], &[1][..]]);
        assert_eq!(idx.var_count(), 4);
        assert!(matches!(SubsetIndexer::with_budget(40, 3, 1000), Err(Error::TooLarge(_))));
        assert!(SubsetIndexer::new(4, 0).is_err());
    }

    #[test]
    fn indexer_is_a_bijection() {
        let idx = SubsetIndexer::new(7, 2).unwrap();
        let mut seen = 0;
        idx.for_each_var(4, |v, set| {
            assert_eq!(idx.var_index(set), v);
            assert_eq!(idx.var_subset(v), set);
            seen += 1;
        });
        assert_eq!(seen, idx.var_count());
        for r in 0..idx.row_count() {
            assert_eq!(idx.var_index(idx.row_subset(r)), r);
        }
    }

    #[test]
    fn level_program_counts() {
        let x = NoisyMatrix::from_fn(4, |_, _| 1.0).unwrap();
        let p = assemble_level(&x, 2, 1).unwrap();
        assert_eq!((p.dim, p.var_count, p.constraints.len()), (5, 11, 6));
        p.validate().unwrap();

        let x = NoisyMatrix::zeros(10).unwrap();
        let p = assemble_level(&x, 3, 2).unwrap();
        assert_eq!((p.dim, p.var_count, p.constraints.len()), (56, 386, 177));
        p.validate().unwrap();
        assert!(p.objective.is_empty());

        assert!(assemble_level(&x, 1, 1).is_err());
        assert!(assemble_level(&x, 11, 1).is_err());
        assert!(assemble_level(&x, 3, 0).is_err());
    }

    #[test]
    fn basic_program_shape() {
        let x = NoisyMatrix::from_upper(3, vec![1.0, 2.0, 3.0]).unwrap();
        let p = assemble_basic(&x, 2).unwrap();
        p.validate().unwrap();
        assert_eq!((p.dim, p.var_count, p.constraints.len()), (4, 10, 5));
        // Integral point for support {0, 2}: Π = v vᵀ with v = (1, 1, 0, 1).
        let v = [1.0, 1.0, 0.0, 1.0];
        let mut y = vec![0.0; p.var_count];
        for r in 0..4 {
            for c in 0..4 {
                y[p.cell_var(r, c)] = v[r] * v[c];
            }
        }
        assert_eq!(p.max_violation(&y), 0.0);
        assert_eq!(p.value_at(&y), 2.0);
    }

    /// Writes `objective` as a combination of constraint rows by least
    /// squares; a zero residual means the objective is constant on the
    /// feasible affine set and equal to `w · rhs`.
    fn constant_objective(p: &SosProgram) -> Option<f64> {
        let m = p.constraints.len();
        let a = DMatrix::from_fn(m, p.var_count, |r, v| {
            p.constraints[r].terms.iter().filter(|t| t.0 == v).map(|t| t.1).sum()
        });
        let mut c = nalgebra::DVector::zeros(p.var_count);
        for &(v, coeff) in &p.objective {
            c[v] += coeff;
        }
        let at = a.transpose();
        let w = at.clone().svd(true, true).solve(&c, 1e-12).ok()?;
        let residual = (&at * &w - &c).norm();
        let b = nalgebra::DVector::from_iterator(m, p.constraints.iter().map(|con| con.rhs));
        (residual < 1e-9).then(|| w.dot(&b) / p.scale)
    }

    #[test]
    fn all_ones_objective_is_constant() {
        let x = NoisyMatrix::from_fn(4, |_, _| 1.0).unwrap();
        let p = assemble_level(&x, 2, 1).unwrap();
        let value = constant_objective(&p).expect("objective in the row space");
        assert!((value - 1.0).abs() < 1e-9);
    }

    #[test]
    fn integral_points_are_feasible_at_every_level() {
        let p = ModelParams::submatrix(7, 3, 1.0, Noise::Gaussian { sigma: 1.0 }, 5);
        let x = gen_submatrix(&p).unwrap().matrix;
        for ell in 1..=2 {
            let program = assemble_level(&x, 3, ell).unwrap();
            let idx = SubsetIndexer::new(7, ell).unwrap();
            let mut support: Vec<usize> = (0..3).collect();
            loop {
                let pe = PseudoExpectation::integral(&idx, &support);
                let y = pe.to_f64(&idx).unwrap();
                assert_eq!(program.max_violation(&y), 0.0);
                let mut avg = 0.0;
                for &i in &support {
                    for &j in &support {
                        avg += x.get(i, j);
                    }
                }
                avg /= 6.0;
                assert!((program.value_at(&y) - avg).abs() < 1e-12);
                assert!((objective_value(&x, &pe, 3).unwrap() - avg).abs() < 1e-12);
                let m = moment_matrix(&pe, &idx).unwrap();
                assert_eq!(m, program.matrix_at(&y));
                if !next_combination(&mut support, 7) {
                    break;
                }
            }
        }
        let scan = scan_estimate(&x, 3, ScanStrategy::Exhaustive).unwrap();
        let idx = SubsetIndexer::new(7, 2).unwrap();
        let pe = PseudoExpectation::integral(&idx, &scan.support);
        assert!((objective_value(&x, &pe, 3).unwrap() - scan.value).abs() < 1e-12);
    }

    #[test]
    fn moment_matrix_examples() {
        let idx = SubsetIndexer::new(2, 1).unwrap();
        let mut pe = PseudoExpectation::new(&idx, 2);
        idx.for_each_var(2, |v, _| pe.set_index(v, BigRational::zero()));
        pe.set(&idx, &[], BigRational::one());
        let m = moment_matrix(&pe, &idx).unwrap();
        assert_eq!(m, DMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![1.0, 0.0, 0.0])));
        assert_eq!(objective_value(&NoisyMatrix::from_upper(2, vec![3.0]).unwrap(), &pe, 2).unwrap(), 0.0);

        let mut partial = PseudoExpectation::new(&idx, 2);
        partial.set(&idx, &[], BigRational::one());
        assert!(matches!(moment_matrix(&partial, &idx), Err(Error::MissingValue(_))));

        let other = SubsetIndexer::new(3, 1).unwrap();
        assert!(moment_matrix(&pe, &other).is_err());
        assert_eq!(ratio(1, 2).to_f64(), Some(0.5));
    }

    #[test]
    fn dump_roundtrip() {
        let x = NoisyMatrix::from_upper(3, vec![1.0, -2.0, 0.5]).unwrap();
        let p = assemble_level(&x, 2, 1).unwrap();
        let text = serde_json::to_string(&p.dump()).unwrap();
        let back: ProgramDump = serde_json::from_str(&text).unwrap();
        let q = back.into_program().unwrap();
        assert_eq!(q.entry_map, p.entry_map);
        assert_eq!(q.constraints, p.constraints);
        assert_eq!(q.objective, p.objective);
    }
}
