//! Ordered multisets of candidate strings with cached costs and counts.

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Rational};
use crate::context::MedianContext;
use crate::dataset::Sym;
use crate::error::{Error, Result};
use crate::metrics;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CandidateSet {
    members: Vec<Vec<Sym>>,
    costs: Vec<u64>,
    sigma: usize,
    char_counts: Vec<u32>,
}

impl CandidateSet {
    /// Validates members against the context and caches their median costs.
    pub fn new(ctx: &MedianContext, members: Vec<Vec<Sym>>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::InvalidParameter("candidate set is empty".into()));
        }
        let mut costs = Vec::with_capacity(members.len());
        for m in &members {
            costs.push(ctx.median_cost(m)?);
        }
        let sigma = ctx.sigma();
        let mut char_counts = vec![0u32; ctx.d() * sigma];
        for m in &members {
            for (i, &a) in m.iter().enumerate() {
                char_counts[i * sigma + a as usize] += 1;
            }
        }
        Ok(CandidateSet { members, costs, sigma, char_counts })
    }

    /// `k` copies of the majority string.
    pub fn copies_of_w(ctx: &MedianContext, k: usize) -> Result<Self> {
        CandidateSet::new(ctx, vec![ctx.w().to_vec(); k])
    }

    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[Vec<Sym>] {
        &self.members
    }

    pub fn into_members(self) -> Vec<Vec<Sym>> {
        self.members
    }

    pub fn costs(&self) -> &[u64] {
        &self.costs
    }

    pub fn max_cost(&self) -> u64 {
        self.costs.iter().copied().max().unwrap_or(0)
    }

    /// Number of members holding `a` at index `i`.
    pub fn char_count(&self, i: usize, a: Sym) -> u32 {
        self.char_counts[i * self.sigma + a as usize]
    }

    /// Sum dispersion through the per-index count identity.
    pub fn sum_dispersion(&self) -> u64 {
        let k = self.k() as u64;
        let twice: u64 = self.char_counts.iter().map(|&l| l as u64 * (k - l as u64)).sum();
        twice / 2
    }

    /// Minimum pairwise distance; 0 for a single member.
    pub fn min_dispersion(&self) -> usize {
        metrics::min_dispersion(&self.members).unwrap_or(0)
    }

    pub fn diameter(&self) -> usize {
        metrics::diameter(&self.members)
    }

    /// Whether all members are within `(1+ε)·opt`.
    pub fn all_within(&self, budget: &Budget) -> bool {
        self.costs.iter().all(|&c| budget.admits_cost(c))
    }
}

/// The cost guarantee a solution carries: every member costs at most
/// `(1 + epsilon)·opt`. Exact medians have `epsilon = 0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CostClass {
    pub label: String,
    pub epsilon: Rational,
}

impl CostClass {
    pub fn exact() -> Self {
        CostClass { label: "exact median".into(), epsilon: Rational::zero() }
    }

    pub fn approx(label: impl Into<String>, epsilon: Rational) -> Self {
        CostClass { label: label.into(), epsilon }
    }

    pub fn admits(&self, opt: u64, cost: u64) -> bool {
        Budget::new(self.epsilon, opt).admits_cost(cost)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;

    #[test]
    fn count_identity_matches_pairs() {
        let ds = Dataset::from_strs(&["ab", "ba", "aa"], None).unwrap();
        let ctx = MedianContext::build(&ds);
        let set = CandidateSet::new(&ctx, vec![vec![0, 0], vec![0, 1], vec![1, 1], vec![1, 1]]).unwrap();
        assert_eq!(set.sum_dispersion(), metrics::sum_dispersion(set.members()));
        assert_eq!(set.char_count(1, 1), 3);
        assert_eq!(set.min_dispersion(), 0);
        assert_eq!(set.costs()[0], ds.direct_cost(&[0, 0]).unwrap());
    }

    #[test]
    fn rejects_bad_members() {
        let ds = Dataset::from_strs(&["ab"], None).unwrap();
        let ctx = MedianContext::build(&ds);
        assert!(CandidateSet::new(&ctx, vec![]).is_err());
        assert!(CandidateSet::new(&ctx, vec![vec![0]]).is_err());
    }

    #[test]
    fn cost_classes() {
        assert!(CostClass::exact().admits(5, 5));
        assert!(!CostClass::exact().admits(5, 6));
        let c = CostClass::approx("(1+2ε)", Rational::new(1, 5).unwrap());
        assert!(c.admits(5, 6));
        assert!(!c.admits(5, 7));
    }
}
