//! Binomial coefficients and lexicographic ranking of k-subsets.

/// Table of binomial coefficients `C(n, k)` for `n <= max_n`, `k <= max_k`.
///
/// Entries that do not fit in a `u64` saturate at `u64::MAX`; callers that
/// size allocations from the table check against their own budgets first.
#[derive(Debug, Clone)]
pub struct BinomialTable {
    max_n: usize,
    max_k: usize,
    table: Vec<u64>,
}

impl BinomialTable {
    pub fn new(max_n: usize, max_k: usize) -> Self {
        let width = max_k + 1;
        let mut table = vec![0u64; (max_n + 1) * width];
        for n in 0..=max_n {
            table[n * width] = 1;
            for k in 1..=max_k.min(n) {
                let a = table[(n - 1) * width + k - 1];
                let b = if k < n { table[(n - 1) * width + k] } else { 0 };
                table[n * width + k] = a.saturating_add(b);
            }
        }
        BinomialTable { max_n, max_k, table }
    }

    #[inline]
    pub fn get(&self, n: usize, k: usize) -> u64 {
        if k > n {
            return 0;
        }
        debug_assert!(n <= self.max_n && k <= self.max_k);
        self.table[n * (self.max_k + 1) + k]
    }

    /// Lexicographic rank of a strictly increasing subset of `{0..n-1}`
    /// among all subsets of the same size.
    #[inline]
    pub fn lex_rank(&self, n: usize, subset: &[usize]) -> u64 {
        let k = subset.len();
        let mut acc = 0u64;
        for (i, &c) in subset.iter().enumerate() {
            acc += self.get(n - 1 - c, k - i);
        }
        self.get(n, k) - 1 - acc
    }

    /// Inverse of [`lex_rank`](Self::lex_rank).
    pub fn lex_unrank(&self, n: usize, k: usize, mut rank: u64) -> Vec<usize> {
        let mut out = Vec::with_capacity(k);
        let mut next = 0usize;
        for i in 0..k {
            let remaining = k - i;
            loop {
                let block = self.get(n - 1 - next, remaining - 1);
                if rank < block {
                    break;
                }
                rank -= block;
                next += 1;
            }
            out.push(next);
            next += 1;
        }
        out
    }
}

/// Exact binomial coefficient, `None` on `u64` overflow.
pub fn binomial(n: u64, k: u64) -> Option<u64> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
        if acc > u128::from(u64::MAX) {
            return None;
        }
    }
    Some(acc as u64)
}

/// Falling factorial `a (a-1) ... (a-k+1)`; zero when `k > a`.
pub fn falling_factorial(a: u64, k: u64) -> Option<u64> {
    if k > a {
        return Some(0);
    }
    (0..k).try_fold(1u64, |acc, i| acc.checked_mul(a - i))
}

/// Advance `comb` (strictly increasing, values `< n`) to the next k-subset in
/// lexicographic order. Returns `false` once the last subset has been passed.
pub fn next_combination(comb: &mut [usize], n: usize) -> bool {
    let k = comb.len();
    if k == 0 {
        return false;
    }
    let mut i = k;
    while i > 0 {
        i -= 1;
        if comb[i] < n - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// Sorted union of two sorted, duplicate-free slices.
pub fn sorted_union(a: &[usize], b: &[usize], out: &mut Vec<usize>) {
    out.clear();
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                out.push(a[i]);
                i += 1;
                j += 1;
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(40, 2), Some(780));
        assert_eq!(binomial(10, 4), Some(210));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(200, 100), None);
        let t = BinomialTable::new(10, 4);
        assert_eq!(t.get(10, 4), 210);
        assert_eq!(t.get(3, 4), 0);
    }

    #[test]
    fn falling_factorials() {
        assert_eq!(falling_factorial(5, 0), Some(1));
        assert_eq!(falling_factorial(5, 2), Some(20));
        assert_eq!(falling_factorial(2, 3), Some(0));
    }

    #[test]
    fn lex_rank_roundtrip_enumerates_in_order() {
        let n = 7;
        let t = BinomialTable::new(n, 4);
        for k in 0..=4 {
            let mut comb: Vec<usize> = (0..k).collect();
            let mut expected = 0u64;
            loop {
                assert_eq!(t.lex_rank(n, &comb), expected);
                assert_eq!(t.lex_unrank(n, k, expected), comb);
                expected += 1;
                if !next_combination(&mut comb, n) {
                    break;
                }
            }
            assert_eq!(expected, t.get(n, k));
        }
    }

    #[test]
    fn union_merges() {
        let mut out = Vec::new();
        sorted_union(&[0, 2, 5], &[1, 2, 6], &mut out);
        assert_eq!(out, vec![0, 1, 2, 5, 6]);
    }
}
