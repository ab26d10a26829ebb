//! Estimators of the planted signal strength.
//!
//! All estimators normalize by `s*(s*-1)`, the number of ordered off-diagonal
//! cells in an `s* x s*` principal submatrix.

use serde::{Deserialize, Serialize};

use crate::combinatorics::binomial;
use crate::error::{Error, Result};
use crate::models::NoisyMatrix;

/// Default cap on the number of subsets the exhaustive scan may visit.
pub const DEFAULT_EXHAUSTIVE_LIMIT: u64 = 100_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScanStrategy {
    Exhaustive,
    BranchAndBound,
}

#[derive(Debug, Clone, Copy)]
pub struct ScanOptions {
    pub strategy: ScanStrategy,
    pub exhaustive_limit: u64,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { strategy: ScanStrategy::BranchAndBound, exhaustive_limit: DEFAULT_EXHAUSTIVE_LIMIT }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScanResult {
    pub value: f64,
    /// Sorted maximizing support; lexicographically smallest among ties.
    pub support: Vec<usize>,
    /// Number of complete subsets evaluated.
    pub subsets_examined: u64,
}

fn check_sparsity(x: &NoisyMatrix, s_star: usize) -> Result<()> {
    if s_star < 2 || s_star > x.d() {
        return Err(Error::InvalidParams(format!("need 2 <= s_star <= d, got s_star = {s_star} with d = {}", x.d())));
    }
    Ok(())
}

#[inline]
fn normalizer(s_star: usize) -> f64 {
    (s_star * (s_star - 1)) as f64
}

pub fn scan_estimate(x: &NoisyMatrix, s_star: usize, strategy: ScanStrategy) -> Result<ScanResult> {
    scan_estimate_with(x, s_star, &ScanOptions { strategy, ..ScanOptions::default() })
}

/// Maximum average off-diagonal entry over all `s_star x s_star` principal
/// submatrices.
///
/// Both strategies walk the same lexicographic depth-first tree and build
/// subset sums with the same sequence of floating point additions, so they
/// agree bit for bit. Branch-and-bound only skips subtrees whose upper bound
/// cannot beat the incumbent.
pub fn scan_estimate_with(x: &NoisyMatrix, s_star: usize, opts: &ScanOptions) -> Result<ScanResult> {
    check_sparsity(x, s_star)?;
    if opts.strategy == ScanStrategy::Exhaustive {
        let count = binomial(x.d() as u64, s_star as u64);
        match count {
            Some(c) if c <= opts.exhaustive_limit => {}
            _ => {
                return Err(Error::TooLarge(format!(
                    "C({}, {s_star}) subsets exceeds the exhaustive limit {}",
                    x.d(),
                    opts.exhaustive_limit
                )))
            }
        }
    }
    let mut search = Search::new(x, s_star, opts.strategy == ScanStrategy::BranchAndBound);
    search.descend(0, 0.0);
    let value = 2.0 * search.best_sum / normalizer(s_star);
    Ok(ScanResult { value, support: search.best, subsets_examined: search.leaves })
}

struct Search<'a> {
    x: &'a NoisyMatrix,
    d: usize,
    s: usize,
    prune: bool,
    chosen: Vec<usize>,
    /// Row `k` holds, for every `c`, the sum of `X_{a,c}` over the first `k`
    /// chosen vertices, accumulated in pick order. Rows are recomputed from
    /// their parent, never restored by subtraction, so sums depend only on
    /// the path.
    gains: Vec<f64>,
    /// `pair_max[m]` = largest entry with both endpoints `>= m`.
    pair_max: Vec<f64>,
    scratch: Vec<f64>,
    best_sum: f64,
    best: Vec<usize>,
    leaves: u64,
}

impl<'a> Search<'a> {
    fn new(x: &'a NoisyMatrix, s: usize, prune: bool) -> Self {
        let d = x.d();
        let mut pair_max = vec![f64::NEG_INFINITY; d + 1];
        for m in (0..d).rev() {
            let row = (m + 1..d).map(|j| x.get(m, j)).fold(f64::NEG_INFINITY, f64::max);
            pair_max[m] = pair_max[m + 1].max(row);
        }
        Search {
            x,
            d,
            s,
            prune,
            chosen: Vec::with_capacity(s),
            gains: vec![0.0; (s + 1) * d],
            pair_max,
            scratch: Vec::with_capacity(d),
            best_sum: f64::NEG_INFINITY,
            best: Vec::new(),
            leaves: 0,
        }
    }

    /// Admissible bound on the pair sum of any completion of `chosen` using
    /// vertices `>= start`: the `r` largest gains into the current set, plus
    /// `C(r, 2)` copies of the largest entry among the candidates themselves.
    fn upper_bound(&mut self, start: usize, internal: f64) -> f64 {
        let r = self.s - self.chosen.len();
        self.scratch.clear();
        let depth = self.chosen.len();
        self.scratch.extend_from_slice(&self.gains[depth * self.d + start..(depth + 1) * self.d]);
        let n = self.scratch.len();
        if r < n {
            self.scratch.select_nth_unstable_by(r - 1, |a, b| b.total_cmp(a));
        }
        let top: f64 = self.scratch[..r].iter().sum();
        let among = if r >= 2 { (r * (r - 1) / 2) as f64 * self.pair_max[start] } else { 0.0 };
        internal + top + among
    }

    fn descend(&mut self, start: usize, internal: f64) {
        let depth = self.chosen.len();
        if depth == self.s {
            self.leaves += 1;
            if internal > self.best_sum {
                self.best_sum = internal;
                self.best = self.chosen.clone();
            }
            return;
        }
        if self.prune && self.best_sum.is_finite() && depth > 0 {
            let bound = self.upper_bound(start, internal);
            let slack = 1e-9 * (1.0 + bound.abs() + self.best_sum.abs());
            if bound + slack <= self.best_sum {
                return;
            }
        }
        let last = self.d - (self.s - depth);
        let (base, d) = (depth * self.d, self.d);
        for c in start..=last {
            let next_internal = internal + self.gains[base + c];
            if depth + 1 < self.s {
                for j in 0..d {
                    self.gains[base + d + j] = self.gains[base + j] + self.x.get(c, j);
                }
            }
            self.chosen.push(c);
            self.descend(c + 1, next_internal);
            self.chosen.pop();
        }
    }
}

/// Sum of all off-diagonal entries (both triangles) divided by `s*(s*-1)`.
pub fn avg_estimate(x: &NoisyMatrix, s_star: usize) -> Result<f64> {
    if s_star < 2 {
        return Err(Error::InvalidParams(format!("s_star must be >= 2, got {s_star}")));
    }
    let upper: f64 = x.entries().iter().sum();
    Ok(2.0 * upper / normalizer(s_star))
}

/// Largest off-diagonal entry.
pub fn max_estimate(x: &NoisyMatrix) -> f64 {
    x.max_entry()
}

/// Closed-form optimum of the linear programming relaxation of the scan
/// problem: `s*/(s*-1)` times the largest entry.
pub fn lp_estimate(x: &NoisyMatrix, s_star: usize) -> Result<f64> {
    if s_star < 2 {
        return Err(Error::InvalidParams(format!("s_star must be >= 2, got {s_star}")));
    }
    Ok(s_star as f64 / (s_star - 1) as f64 * max_estimate(x))
}
