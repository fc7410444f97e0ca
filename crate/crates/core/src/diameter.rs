//! Two medians at maximum Hamming distance.

use serde::{Deserialize, Serialize};

use crate::budget::Budget;
use crate::context::MedianContext;
use crate::dataset::Sym;
use crate::metrics::hamming;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DiameterBranch {
    Exact,
    #[serde(rename = "greedy_SR")]
    GreedySR,
    #[serde(rename = "partitioned_T1T2")]
    PartitionedT1T2,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiameterResult {
    pub pair: (Vec<Sym>, Vec<Sym>),
    pub diameter: usize,
    pub costs: (u64, u64),
    pub branch: DiameterBranch,
}

impl DiameterResult {
    fn new(ctx: &MedianContext, y: Vec<Sym>, z: Vec<Sym>, branch: DiameterBranch) -> Self {
        let costs = (ctx.opt() + ctx.deviation_cost(&y), ctx.opt() + ctx.deviation_cost(&z));
        let diameter = hamming(&y, &z);
        DiameterResult { pair: (y, z), diameter, costs, branch }
    }
}

/// A 2-partition of an index set with its part sums, `sums.0 <= sums.1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionResult {
    pub parts: (Vec<usize>, Vec<usize>),
    pub sums: (u64, u64),
}

impl PartitionResult {
    pub fn difference(&self) -> u64 {
        self.sums.1 - self.sums.0
    }
}

/// Two exact medians at maximum distance: `w`, and `w` moved to another
/// majority symbol on every tie index.
pub fn exact_diameter_pair(ctx: &MedianContext) -> DiameterResult {
    let freq = ctx.freq();
    let y = ctx.w().to_vec();
    let mut z = y.clone();
    for i in freq.tie_indices() {
        z[i] = freq.majority_set(i)[1];
    }
    DiameterResult::new(ctx, y, z, DiameterBranch::Exact)
}

/// Splits `indices` into two parts whose `weights` sums are as close as
/// possible, by subset-sum over targets up to half the total.
pub fn min_diff_partition(indices: &[usize], weights: &[u64]) -> PartitionResult {
    let item: Vec<u64> = indices.iter().map(|&i| weights[i]).collect();
    let total: u64 = item.iter().sum();
    let target = (total / 2) as usize;
    let words = target / 64 + 1;

    // rows[j] marks sums reachable with the first j items.
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(item.len() + 1);
    let mut first = vec![0u64; words];
    first[0] = 1;
    rows.push(first);
    for &w in &item {
        let prev = rows.last().unwrap();
        let mut next = prev.clone();
        if (w as usize) <= target {
            shift_or(&mut next, prev, w as usize);
        }
        mask_to(&mut next, target);
        rows.push(next);
    }
    let reach = |row: &[u64], s: usize| row[s / 64] >> (s % 64) & 1 == 1;
    let last = rows.last().unwrap();
    let mut best = target;
    while !reach(last, best) {
        best -= 1;
    }

    let mut low = Vec::new();
    let mut high = Vec::new();
    let mut s = best;
    for j in (0..item.len()).rev() {
        let w = item[j] as usize;
        if w <= s && reach(&rows[j], s - w) {
            low.push(indices[j]);
            s -= w;
        } else {
            high.push(indices[j]);
        }
    }
    low.reverse();
    high.reverse();
    PartitionResult { parts: (low, high), sums: (best as u64, total - best as u64) }
}

fn shift_or(dst: &mut [u64], src: &[u64], by: usize) {
    let (word, bit) = (by / 64, by % 64);
    for i in (word..dst.len()).rev() {
        let mut v = src[i - word] << bit;
        if bit > 0 && i > word {
            v |= src[i - word - 1] >> (64 - bit);
        }
        dst[i] |= v;
    }
}

fn mask_to(row: &mut [u64], target: usize) {
    let bit = target % 64 + 1;
    if bit < 64 {
        let last = row.len() - 1;
        row[last] &= (1u64 << bit) - 1;
    }
}

/// The maximum-distance pair of `(1+ε)`-approximate medians.
///
/// Indices are taken cheapest first into two greedy deviation sets; when
/// one more index might still fit across the pair, a balanced partition
/// decides whether it does.
pub fn approx_diameter_pair(ctx: &MedianContext, budget: &Budget) -> DiameterResult {
    let d = ctx.d();
    let weights = ctx.weights();
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by_key(|&i| (weights[i], i));

    let take = |from: usize| -> usize {
        let mut sum = 0u64;
        let mut end = from;
        while end < d && budget.fits(sum + weights[order[end]]) {
            sum += weights[order[end]];
            end += 1;
        }
        end
    };
    let s_end = take(0);
    let r_end = take(s_end);
    let s = ctx.deviate(&order[..s_end]);
    let r = ctx.deviate(&order[s_end..r_end]);

    if r_end < d {
        let t = &order[..=r_end];
        let total: u64 = t.iter().map(|&i| weights[i]).sum();
        if budget.fits_scaled(total, 2) {
            let split = min_diff_partition(t, weights);
            if budget.fits(split.sums.0) && budget.fits(split.sums.1) {
                let z = ctx.deviate(&split.parts.0);
                let y = ctx.deviate(&split.parts.1);
                return DiameterResult::new(ctx, y, z, DiameterBranch::PartitionedT1T2);
            }
        }
    }
    DiameterResult::new(ctx, s, r, DiameterBranch::GreedySR)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Rational;
    use crate::dataset::Dataset;

    fn ctx(rows: &[&str]) -> MedianContext {
        MedianContext::build(&Dataset::from_strs(rows, None).unwrap())
    }

    fn exhaustive_diff(w: &[u64]) -> u64 {
        let total: u64 = w.iter().sum();
        (0u32..1 << w.len())
            .map(|mask| {
                let part: u64 = (0..w.len()).filter(|&j| mask >> j & 1 == 1).map(|j| w[j]).sum();
                part.abs_diff(total - part)
            })
            .min()
            .unwrap()
    }

    #[test]
    fn exact_pairs() {
        let r = exact_diameter_pair(&ctx(&["aa", "ab", "ba", "bb"]));
        assert_eq!(r.diameter, 2);
        assert_eq!(r.pair, (vec![0, 0], vec![1, 1]));
        assert_eq!(exact_diameter_pair(&ctx(&["ab", "ab"])).diameter, 0);
        let r = exact_diameter_pair(&ctx(&["ab", "ba"]));
        assert_eq!(r.diameter, 2);
        assert_eq!(r.costs, (2, 2));
    }

    #[test]
    fn partition_examples() {
        let p = min_diff_partition(&[0, 1, 2], &[1, 2, 3]);
        assert_eq!(p.sums, (3, 3));
        let p = min_diff_partition(&[], &[]);
        assert_eq!(p.parts, (vec![], vec![]));
        assert_eq!(p.difference(), 0);
        let p = min_diff_partition(&[0, 1], &[5, 1]);
        assert_eq!(p.difference(), 4);
        assert_eq!(p.parts, (vec![1], vec![0]));
    }

    #[test]
    fn partition_matches_exhaustive_on_wide_words() {
        let w: Vec<u64> = vec![97, 64, 130, 1, 200, 63, 65, 128, 255, 3];
        let idx: Vec<usize> = (0..w.len()).collect();
        let p = min_diff_partition(&idx, &w);
        assert_eq!(p.difference(), exhaustive_diff(&w));
        let sum0: u64 = p.parts.0.iter().map(|&i| w[i]).sum();
        assert_eq!(sum0, p.sums.0);
    }

    #[test]
    fn zero_budget_collapses_to_ties() {
        let c = ctx(&["aab", "bab", "abb"]);
        let b = Budget::new(Rational::zero(), c.opt());
        let r = approx_diameter_pair(&c, &b);
        assert_eq!(r.diameter, exact_diameter_pair(&c).diameter);
    }

    #[test]
    fn intro_instance_deviates_everywhere() {
        let rows: Vec<String> = (0..10).map(|r| if r < 6 { "1111".into() } else { "0000".into() }).collect();
        let rows: Vec<&str> = rows.iter().map(String::as_str).collect();
        let c = ctx(&rows);
        let b = Budget::new(Rational::new(1, 2).unwrap(), c.opt());
        let r = approx_diameter_pair(&c, &b);
        assert_eq!(r.diameter, 4);
        assert_eq!(r.branch, DiameterBranch::GreedySR);
        assert_eq!(r.pair, (vec![0; 4], vec![1; 4]));
    }

    #[test]
    fn failed_partition_falls_back() {
        // Three columns of weight 2 (4 vs 2 votes), opt = 6, ε = 1/2 gives ε·opt = 3.
        let rows = ["aaa", "aaa", "aaa", "aaa", "bbb", "bbb"];
        let c = ctx(&rows);
        assert_eq!(c.weights(), &[2, 2, 2]);
        let b = Budget::new(Rational::new(1, 2).unwrap(), c.opt());
        let r = approx_diameter_pair(&c, &b);
        assert_eq!(r.diameter, 2);
        assert_eq!(r.branch, DiameterBranch::GreedySR);
    }

    #[test]
    fn partition_branch_is_taken() {
        // Weights 2, 2, 3, 3 under budget 5: greedy reaches only three
        // indices, the partition {2, 3} / {3, 2} uses all four.
        let rows = ["aaaa", "aaaa", "aaaa", "aaaa", "aaaa", "bbbb", "bbbb", "bbcc"];
        let c = ctx(&rows);
        assert_eq!(c.weights(), &[2, 2, 3, 3]);
        let b = Budget::new(Rational::new(5, 12).unwrap(), c.opt());
        let r = approx_diameter_pair(&c, &b);
        assert!(b.admits_cost(r.costs.0) && b.admits_cost(r.costs.1));
        assert_eq!(r.diameter, 4);
        assert_eq!(r.branch, DiameterBranch::PartitionedT1T2);
    }
}
