//! Per-index frequencies, the majority string and deviation costs.

use crate::budget::Budget;
use crate::dataset::{Dataset, Sym};
use crate::error::{Error, Result};

/// Per-index symbol counts and majority sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    n: usize,
    d: usize,
    sigma: usize,
    counts: Vec<u32>,
    majority: Vec<Vec<Sym>>,
}

impl FrequencyTable {
    pub fn new(dataset: &Dataset) -> Self {
        let (n, d, sigma) = (dataset.n(), dataset.d(), dataset.sigma());
        let mut counts = vec![0u32; d * sigma];
        for row in dataset.rows() {
            for (i, &a) in row.iter().enumerate() {
                counts[i * sigma + a as usize] += 1;
            }
        }
        let majority = (0..d)
            .map(|i| {
                let col = &counts[i * sigma..(i + 1) * sigma];
                let top = *col.iter().max().unwrap();
                (0..sigma as Sym).filter(|&a| col[a as usize] == top).collect()
            })
            .collect();
        FrequencyTable { n, d, sigma, counts, majority }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sigma(&self) -> usize {
        self.sigma
    }

    pub fn count(&self, i: usize, a: Sym) -> u32 {
        self.counts[i * self.sigma + a as usize]
    }

    /// Counts at index `i`, one entry per symbol.
    pub fn column(&self, i: usize) -> &[u32] {
        &self.counts[i * self.sigma..(i + 1) * self.sigma]
    }

    /// Γ_i: the symbols of maximum count at `i`, in symbol order.
    pub fn majority_set(&self, i: usize) -> &[Sym] {
        &self.majority[i]
    }

    pub fn majority_sizes(&self) -> Vec<usize> {
        self.majority.iter().map(Vec::len).collect()
    }

    /// Indices whose majority set has at least two symbols.
    pub fn tie_indices(&self) -> Vec<usize> {
        (0..self.d).filter(|&i| self.majority[i].len() >= 2).collect()
    }

    /// Whether `s` is an exact median, i.e. takes a majority symbol everywhere.
    pub fn is_exact_median(&self, s: &[Sym]) -> bool {
        s.len() == self.d && s.iter().enumerate().all(|(i, a)| self.majority[i].contains(a))
    }
}

/// Majority string, second-choice string, opt and deviation weights.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MedianContext {
    freq: FrequencyTable,
    w: Vec<Sym>,
    w_hat: Vec<Sym>,
    opt: u64,
    weight: Vec<u64>,
}

impl MedianContext {
    pub fn build(dataset: &Dataset) -> Self {
        MedianContext::from_freq(FrequencyTable::new(dataset))
    }

    pub fn from_freq(freq: FrequencyTable) -> Self {
        let (n, d, sigma) = (freq.n, freq.d, freq.sigma);
        let mut w = Vec::with_capacity(d);
        let mut w_hat = Vec::with_capacity(d);
        let mut weight = Vec::with_capacity(d);
        let mut opt = 0u64;
        for i in 0..d {
            let col = freq.column(i);
            let top = freq.majority_set(i)[0];
            // First maximum among the other symbols; with one symbol there is no alternative.
            let mut second = None;
            for a in 0..sigma as Sym {
                if a != top && second.is_none_or(|b: Sym| col[a as usize] > col[b as usize]) {
                    second = Some(a);
                }
            }
            let second = second.unwrap_or(top);
            let top_count = col[top as usize] as u64;
            opt += n as u64 - top_count;
            w.push(top);
            w_hat.push(second);
            weight.push(if second == top { n as u64 } else { top_count - col[second as usize] as u64 });
        }
        MedianContext { freq, w, w_hat, opt, weight }
    }

    pub fn freq(&self) -> &FrequencyTable {
        &self.freq
    }

    pub fn n(&self) -> usize {
        self.freq.n
    }

    pub fn d(&self) -> usize {
        self.freq.d
    }

    pub fn sigma(&self) -> usize {
        self.freq.sigma
    }

    /// The majority string.
    pub fn w(&self) -> &[Sym] {
        &self.w
    }

    /// The second-choice string.
    pub fn w_hat(&self) -> &[Sym] {
        &self.w_hat
    }

    pub fn opt(&self) -> u64 {
        self.opt
    }

    /// Cost of placing `w_hat[i]` at `i`.
    pub fn weight(&self, i: usize) -> u64 {
        self.weight[i]
    }

    pub fn weights(&self) -> &[u64] {
        &self.weight
    }

    /// Extra cost of placing `a` at index `i` instead of `w_i`.
    pub fn per_char_cost(&self, i: usize, a: Sym) -> u64 {
        (self.freq.count(i, self.w[i]) - self.freq.count(i, a)) as u64
    }

    /// Median objective through the offset formula.
    pub fn median_cost(&self, s: &[Sym]) -> Result<u64> {
        self.check(s)?;
        Ok(self.opt + self.deviation_cost(s))
    }

    /// Σ over deviating indices of the per-character cost. Assumes a valid string.
    pub fn deviation_cost(&self, s: &[Sym]) -> u64 {
        s.iter()
            .enumerate()
            .filter(|&(i, &a)| a != self.w[i])
            .map(|(i, &a)| self.per_char_cost(i, a))
            .sum()
    }

    pub fn is_approx_median(&self, budget: &Budget, s: &[Sym]) -> Result<bool> {
        self.check(s)?;
        Ok(budget.fits(self.deviation_cost(s)))
    }

    /// `w` with `w_hat` substituted at the given indices.
    pub fn deviate(&self, indices: &[usize]) -> Vec<Sym> {
        let mut s = self.w.clone();
        for &i in indices {
            s[i] = self.w_hat[i];
        }
        s
    }

    pub fn check(&self, s: &[Sym]) -> Result<()> {
        if s.len() != self.d() {
            return Err(Error::LengthMismatch { expected: self.d(), found: s.len() });
        }
        match s.iter().find(|&&a| a as usize >= self.sigma()) {
            Some(&a) => Err(Error::UnknownSymbol(a)),
            None => Ok(()),
        }
    }
}
