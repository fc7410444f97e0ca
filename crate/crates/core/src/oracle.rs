//! Exhaustive reference solvers for desk-scale instances.
//!
//! Nothing here calls into the diameter or dispersion algorithms; tests
//! compare those algorithms against these functions.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::context::{FrequencyTable, MedianContext};
use crate::dataset::Sym;
use crate::error::{Error, Result};
use crate::metrics::hamming;

/// Size caps checked before any enumeration starts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerationLimits {
    pub max_candidates: u64,
    pub max_tuples: u64,
    pub max_states: u64,
}

impl Default for EnumerationLimits {
    fn default() -> Self {
        EnumerationLimits { max_candidates: 100_000, max_tuples: 10_000_000, max_states: 10_000_000 }
    }
}

/// Optimal value with the pool indices realizing it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Optimum {
    pub value: u64,
    pub witness: Vec<usize>,
}

fn product_size(sizes: impl IntoIterator<Item = usize>) -> u128 {
    sizes.into_iter().fold(1u128, |acc, s| acc.saturating_mul(s as u128))
}

/// C(n, r) saturating at u128::MAX.
pub fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc = 1u128;
    for i in 0..r {
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

fn cap(what: &'static str, needed: u128, limit: u64) -> Result<()> {
    if needed > limit as u128 {
        Err(Error::CapExceeded { what, needed, cap: limit as u128 })
    } else {
        Ok(())
    }
}

/// Iterates the mixed-radix product of `choices`, last index fastest.
fn product<F: FnMut(&[Sym])>(choices: &[Vec<Sym>], mut visit: F) {
    let d = choices.len();
    if choices.iter().any(Vec::is_empty) {
        return;
    }
    let mut digit = vec![0usize; d];
    let mut cur: Vec<Sym> = choices.iter().map(|c| c[0]).collect();
    loop {
        visit(&cur);
        let mut i = d;
        loop {
            if i == 0 {
                return;
            }
            i -= 1;
            digit[i] += 1;
            if digit[i] < choices[i].len() {
                cur[i] = choices[i][digit[i]];
                break;
            }
            digit[i] = 0;
            cur[i] = choices[i][0];
        }
    }
}

/// All strings of length `d` over `sigma` symbols, in lexicographic order.
pub fn all_strings(d: usize, sigma: usize, limits: &EnumerationLimits) -> Result<Vec<Vec<Sym>>> {
    cap("full string space", product_size(std::iter::repeat_n(sigma, d)), limits.max_candidates)?;
    let choices = vec![(0..sigma as Sym).collect::<Vec<_>>(); d];
    let mut out = Vec::new();
    product(&choices, |s| out.push(s.to_vec()));
    Ok(out)
}

/// Every exact median: the product of the majority sets.
pub fn enumerate_exact_medians(freq: &FrequencyTable, limits: &EnumerationLimits) -> Result<Vec<Vec<Sym>>> {
    cap("exact median enumeration", product_size(freq.majority_sizes()), limits.max_candidates)?;
    let choices: Vec<Vec<Sym>> = (0..freq.d()).map(|i| freq.majority_set(i).to_vec()).collect();
    let mut out = Vec::new();
    product(&choices, |s| out.push(s.to_vec()));
    Ok(out)
}

/// Every string within `(1+ε)·opt`, found by depth-first search with the
/// remaining budget. Sorted lexicographically.
pub fn enumerate_approx_medians(
    ctx: &MedianContext,
    budget: &Budget,
    limits: &EnumerationLimits,
) -> Result<Vec<Vec<Sym>>> {
    let slack = budget.slack();
    let options: Vec<Vec<(u64, Sym)>> = (0..ctx.d())
        .map(|i| {
            let mut o: Vec<(u64, Sym)> = (0..ctx.sigma() as Sym)
                .map(|a| (ctx.per_char_cost(i, a), a))
                .filter(|&(c, _)| c <= slack)
                .collect();
            o.sort_unstable();
            o
        })
        .collect();

    struct Search<'a> {
        options: &'a [Vec<(u64, Sym)>],
        cur: Vec<Sym>,
        out: Vec<Vec<Sym>>,
        limit: u64,
        overflow: bool,
    }
    impl Search<'_> {
        fn go(&mut self, i: usize, left: u64) {
            if self.overflow {
                return;
            }
            if i == self.options.len() {
                if self.out.len() as u64 >= self.limit {
                    self.overflow = true;
                    return;
                }
                self.out.push(self.cur.clone());
                return;
            }
            for &(c, a) in &self.options[i] {
                if c > left {
                    break;
                }
                self.cur[i] = a;
                self.go(i + 1, left - c);
            }
        }
    }

    let mut search = Search {
        options: &options,
        cur: ctx.w().to_vec(),
        out: Vec::new(),
        limit: limits.max_candidates,
        overflow: false,
    };
    search.go(0, slack);
    if search.overflow {
        return Err(Error::CapExceeded {
            what: "approximate median enumeration",
            needed: limits.max_candidates as u128 + 1,
            cap: limits.max_candidates as u128,
        });
    }
    let mut out = search.out;
    out.sort();
    Ok(out)
}

fn distance_matrix(pool: &[Vec<Sym>]) -> Vec<Vec<u64>> {
    pool.iter().map(|a| pool.iter().map(|b| hamming(a, b) as u64).collect()).collect()
}

/// Largest pairwise distance in the pool.
pub fn brute_diameter(pool: &[Vec<Sym>]) -> Optimum {
    let mut best = Optimum { value: 0, witness: vec![0; pool.len().min(2)] };
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            let h = hamming(&pool[i], &pool[j]) as u64;
            if h > best.value {
                best = Optimum { value: h, witness: vec![i, j] };
            }
        }
    }
    best
}

/// Maximum sum dispersion over k-multisets of the pool.
pub fn brute_sumdp_k(pool: &[Vec<Sym>], k: usize, limits: &EnumerationLimits) -> Result<Optimum> {
    if pool.is_empty() || k == 0 {
        return Err(Error::InvalidParameter("need a nonempty pool and k >= 1".into()));
    }
    let m = pool.len() as u64;
    cap("k-multiset enumeration", binomial(m + k as u64 - 1, k as u64), limits.max_tuples)?;
    let dist = distance_matrix(pool);
    let mut best = Optimum { value: 0, witness: vec![0; k] };
    let mut cur = Vec::with_capacity(k);

    fn go(dist: &[Vec<u64>], k: usize, start: usize, acc: u64, cur: &mut Vec<usize>, best: &mut Optimum) {
        if cur.len() == k {
            if acc > best.value {
                *best = Optimum { value: acc, witness: cur.clone() };
            }
            return;
        }
        for j in start..dist.len() {
            let add: u64 = cur.iter().map(|&p| dist[p][j]).sum();
            cur.push(j);
            go(dist, k, j, acc + add, cur, best);
            cur.pop();
        }
    }
    go(&dist, k, 0, 0, &mut cur, &mut best);
    Ok(best)
}

/// Maximum min dispersion over k-subsets of the pool. A pool smaller than
/// `k` forces a duplicate, so the value is 0.
pub fn brute_mindp_k(pool: &[Vec<Sym>], k: usize, limits: &EnumerationLimits) -> Result<Optimum> {
    if pool.is_empty() || k < 2 {
        return Err(Error::InvalidParameter("need a nonempty pool and k >= 2".into()));
    }
    if pool.len() < k {
        return Ok(Optimum { value: 0, witness: (0..k).map(|r| r % pool.len()).collect() });
    }
    cap("k-subset enumeration", binomial(pool.len() as u64, k as u64), limits.max_tuples)?;
    let dist = distance_matrix(pool);
    let ceiling = brute_diameter(pool).value;
    let mut best = Optimum { value: 0, witness: (0..k).collect() };
    let mut cur = Vec::with_capacity(k);

    fn go(
        dist: &[Vec<u64>],
        k: usize,
        start: usize,
        acc: u64,
        ceiling: u64,
        cur: &mut Vec<usize>,
        best: &mut Optimum,
    ) {
        if cur.len() == k {
            if acc > best.value {
                *best = Optimum { value: acc, witness: cur.clone() };
            }
            return;
        }
        let n = dist.len();
        for j in start..=n - (k - cur.len()) {
            let m = cur.iter().map(|&p| dist[p][j]).min().unwrap_or(u64::MAX).min(acc);
            if m <= best.value {
                continue;
            }
            cur.push(j);
            go(dist, k, j + 1, m, ceiling, cur, best);
            cur.pop();
            if best.value == ceiling {
                return;
            }
        }
    }
    go(&dist, k, 0, u64::MAX, ceiling, &mut cur, &mut best);
    Ok(best)
}

/// Largest code in `[s_1] × … × [s_d]` with pairwise distance at least `t`.
pub fn brute_max_code_size(sizes: &[usize], t: usize, limits: &EnumerationLimits) -> Result<u64> {
    if sizes.contains(&0) {
        return Err(Error::InvalidParameter("alphabet sizes must be positive".into()));
    }
    let total = product_size(sizes.iter().copied());
    cap("code space", total, limits.max_candidates)?;
    if t <= 1 {
        return Ok(total as u64);
    }
    if t > sizes.len() {
        return Ok(1);
    }
    let choices: Vec<Vec<Sym>> = sizes.iter().map(|&s| (0..s as Sym).collect()).collect();
    let mut points = Vec::new();
    product(&choices, |p| points.push(p.to_vec()));
    // Translating a code coordinatewise keeps distances, so some optimum contains the origin.
    let origin = &points[0];
    let far: Vec<&Vec<Sym>> = points.iter().filter(|p| hamming(p, origin) >= t).collect();
    let adj: Vec<Vec<bool>> =
        far.iter().map(|a| far.iter().map(|b| hamming(a, b) >= t).collect()).collect();
    Ok(1 + max_clique(&adj) as u64)
}

/// Maximum clique size, branch and bound with a greedy colouring bound.
pub fn max_clique(adj: &[Vec<bool>]) -> usize {
    let n = adj.len();
    if n == 0 {
        return 0;
    }
    let words = n.div_ceil(64);
    let mut order: Vec<usize> = (0..n).collect();
    let degree: Vec<usize> = adj.iter().map(|r| r.iter().filter(|&&b| b).count()).collect();
    order.sort_by(|&a, &b| degree[b].cmp(&degree[a]).then(a.cmp(&b)));
    // Relabel so that bit positions follow the degree order.
    let mut bits = vec![vec![0u64; words]; n];
    for (x, &u) in order.iter().enumerate() {
        for (y, &v) in order.iter().enumerate() {
            if u != v && adj[u][v] {
                bits[x][y / 64] |= 1 << (y % 64);
            }
        }
    }
    let mut all = vec![0u64; words];
    for v in 0..n {
        all[v / 64] |= 1 << (v % 64);
    }
    let mut best = 0;
    expand(&bits, 0, all, &mut best);
    best
}

fn expand(bits: &[Vec<u64>], size: usize, mut cand: Vec<u64>, best: &mut usize) {
    // Greedy colouring of the candidates; colour classes are independent sets.
    let mut order = Vec::new();
    let mut colour = Vec::new();
    let mut uncoloured = cand.clone();
    let mut c = 0;
    while uncoloured.iter().any(|&w| w != 0) {
        c += 1;
        let mut q = uncoloured.clone();
        while let Some(v) = first_bit(&q) {
            q[v / 64] &= !(1 << (v % 64));
            uncoloured[v / 64] &= !(1 << (v % 64));
            for (qw, bw) in q.iter_mut().zip(&bits[v]) {
                *qw &= !bw;
            }
            order.push(v);
            colour.push(c);
        }
    }
    for idx in (0..order.len()).rev() {
        if size + colour[idx] <= *best {
            return;
        }
        let v = order[idx];
        let next: Vec<u64> = cand.iter().zip(&bits[v]).map(|(a, b)| a & b).collect();
        if next.iter().all(|&w| w == 0) {
            *best = (*best).max(size + 1);
        } else {
            expand(bits, size + 1, next, best);
        }
        cand[v / 64] &= !(1 << (v % 64));
    }
}

fn first_bit(words: &[u64]) -> Option<usize> {
    words.iter().enumerate().find(|(_, &w)| w != 0).map(|(i, &w)| i * 64 + w.trailing_zeros() as usize)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Rational;
    use crate::dataset::Dataset;

    fn ctx(rows: &[&str]) -> MedianContext {
        MedianContext::build(&Dataset::from_strs(rows, None).unwrap())
    }

    #[test]
    fn exact_median_pools() {
        let lim = EnumerationLimits::default();
        let c = ctx(&["aa", "ab", "ba", "bb"]);
        assert_eq!(enumerate_exact_medians(c.freq(), &lim).unwrap().len(), 4);
        let c = ctx(&["ab", "ab", "cb"]);
        assert_eq!(enumerate_exact_medians(c.freq(), &lim).unwrap(), vec![c.w().to_vec()]);
        let c = ctx(&["ab", "ba"]);
        assert_eq!(
            enumerate_exact_medians(c.freq(), &lim).unwrap(),
            vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]
        );
        let tight = EnumerationLimits { max_candidates: 3, ..lim };
        assert!(matches!(enumerate_exact_medians(c.freq(), &tight), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn approx_pool_of_intro_instance() {
        let rows: Vec<String> = (0..10).map(|r| if r < 6 { "1111".into() } else { "0000".into() }).collect();
        let rows: Vec<&str> = rows.iter().map(String::as_str).collect();
        let c = ctx(&rows);
        let b = Budget::new(Rational::new(1, 2).unwrap(), c.opt());
        let pool = enumerate_approx_medians(&c, &b, &EnumerationLimits::default()).unwrap();
        assert_eq!(pool.len(), 16);
        assert!(pool.contains(&vec![0, 0, 0, 0]) && pool.contains(&vec![1, 1, 1, 1]));
        let zero = Budget::new(Rational::zero(), c.opt());
        assert_eq!(enumerate_approx_medians(&c, &zero, &EnumerationLimits::default()).unwrap(), vec![vec![1; 4]]);
    }

    #[test]
    fn pool_optima() {
        let lim = EnumerationLimits::default();
        let one = vec![vec![0u32, 0]];
        assert_eq!(brute_diameter(&one).value, 0);
        assert_eq!(brute_sumdp_k(&one, 3, &lim).unwrap().value, 0);
        assert_eq!(brute_mindp_k(&one, 2, &lim).unwrap().value, 0);
        let pool = vec![vec![0u32, 0], vec![0, 1], vec![1, 1]];
        assert_eq!(brute_sumdp_k(&pool, 2, &lim).unwrap().value, 2);
        assert_eq!(brute_mindp_k(&pool, 2, &lim).unwrap().value, 2);
        assert_eq!(brute_mindp_k(&pool, 3, &lim).unwrap().value, 1);
        let four = vec![vec![0u32, 0], vec![0, 1], vec![1, 0], vec![1, 1]];
        assert_eq!(brute_diameter(&four).value, 2);
        assert_eq!(brute_mindp_k(&four, 3, &lim).unwrap().value, 1);
        // {aa, bb} repeated is best for four picks: 2·2 pairs at distance 2.
        assert_eq!(brute_sumdp_k(&four, 4, &lim).unwrap().value, 8);
    }

    #[test]
    fn code_sizes() {
        let lim = EnumerationLimits::default();
        assert_eq!(brute_max_code_size(&[2; 4], 3, &lim).unwrap(), 2);
        assert_eq!(brute_max_code_size(&[2; 4], 0, &lim).unwrap(), 16);
        assert_eq!(brute_max_code_size(&[2; 4], 5, &lim).unwrap(), 1);
        assert_eq!(brute_max_code_size(&[2; 4], 2, &lim).unwrap(), 8);
        assert_eq!(brute_max_code_size(&[3; 3], 3, &lim).unwrap(), 3);
        assert_eq!(brute_max_code_size(&[2; 5], 3, &lim).unwrap(), 4);
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(2, 5), 0);
        assert_eq!(binomial(200, 3), 1_313_400);
    }

    #[test]
    fn clique_on_small_graphs() {
        let tri = vec![vec![false, true, true], vec![true, false, true], vec![true, true, false]];
        assert_eq!(max_clique(&tri), 3);
        let empty = vec![vec![false; 4]; 4];
        assert_eq!(max_clique(&empty), 1);
    }
}
