//! `k` medians with maximum sum of pairwise distances.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Rational};
use crate::candidate::CandidateSet;
use crate::context::MedianContext;
use crate::dataset::Sym;
use crate::diameter::approx_diameter_pair;
use crate::error::{Error, Result};
use crate::metrics::hamming;
use crate::oracle::{self, EnumerationLimits};

/// Turning one more copy of `w_i` into `symbol`, when `majority_count`
/// candidates hold `w_i` and this makes `target_count` holders of `symbol`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModOp {
    pub index: usize,
    pub symbol: Sym,
    pub target_count: u32,
    pub majority_count: u32,
    pub cost: u64,
}

impl ModOp {
    /// Increase of the sum dispersion caused by the op.
    pub fn gain(&self) -> i64 {
        self.majority_count as i64 - self.target_count as i64
    }

    /// Compares gain per unit cost; zero-cost ops rank above every finite
    /// density and among themselves by gain.
    pub fn cmp_density(&self, other: &ModOp) -> Ordering {
        match (self.cost == 0, other.cost == 0) {
            (true, true) => self.gain().cmp(&other.gain()),
            (true, false) => Ordering::Greater,
            (false, true) => Ordering::Less,
            (false, false) => {
                (self.gain() as i128 * other.cost as i128).cmp(&(other.gain() as i128 * self.cost as i128))
            }
        }
    }

    fn list_order(&self, other: &ModOp) -> Ordering {
        other
            .cmp_density(self)
            .then(self.cost.cmp(&other.cost))
            .then(self.index.cmp(&other.index))
            .then(self.symbol.cmp(&other.symbol))
            .then(self.target_count.cmp(&other.target_count))
            .then(other.majority_count.cmp(&self.majority_count))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpList {
    pub ops: Vec<ModOp>,
    pub preprocessed: bool,
}

/// All ops with positive gain, sorted by density.
pub fn enumerate_ops(ctx: &MedianContext, k: usize) -> OpList {
    let k = k as u32;
    let mut ops = Vec::new();
    for i in 0..ctx.d() {
        for a in 0..ctx.sigma() as Sym {
            if a == ctx.w()[i] {
                continue;
            }
            let cost = ctx.per_char_cost(i, a);
            for r in 1..=k {
                for l in r + 1..=k {
                    if r - 1 + l <= k {
                        ops.push(ModOp { index: i, symbol: a, target_count: r, majority_count: l, cost });
                    }
                }
            }
        }
    }
    ops.sort_by(ModOp::list_order);
    OpList { ops, preprocessed: false }
}

impl OpList {
    /// Keeps, per index, the chain obtained by walking the majority count
    /// down from `k` and taking at every level the densest op consistent
    /// with the symbols already placed.
    pub fn preprocess(self, ctx: &MedianContext, k: usize) -> OpList {
        if self.preprocessed {
            return self;
        }
        let mut buckets: BTreeMap<(usize, u32), Vec<ModOp>> = BTreeMap::new();
        for op in self.ops {
            buckets.entry((op.index, op.majority_count)).or_default().push(op);
        }
        let mut kept = Vec::new();
        let mut placed = vec![0u32; ctx.sigma()];
        for i in 0..ctx.d() {
            placed.iter_mut().for_each(|c| *c = 0);
            for l in (1..=k as u32).rev() {
                let Some(bucket) = buckets.get(&(i, l)) else { break };
                let Some(op) = bucket.iter().find(|op| op.target_count == placed[op.symbol as usize] + 1) else {
                    break;
                };
                placed[op.symbol as usize] += 1;
                kept.push(*op);
            }
        }
        kept.sort_by(ModOp::list_order);
        OpList { ops: kept, preprocessed: true }
    }
}

pub fn build_oplist(ctx: &MedianContext, k: usize) -> OpList {
    enumerate_ops(ctx, k).preprocess(ctx, k)
}

/// Applies a prefix of the op list: each `(symbol, index)` pair, cheapest
/// first, goes to the lowest-cost candidates that still hold `w_i` there and
/// can afford it. Infeasible when some pair finds too few such candidates.
pub fn cost_greedy_assign(
    ctx: &MedianContext,
    budget: &Budget,
    k: usize,
    prefix: &[ModOp],
) -> (CandidateSet, bool) {
    let mut demand: BTreeMap<(u64, usize, Sym), usize> = BTreeMap::new();
    for op in prefix {
        *demand.entry((op.cost, op.index, op.symbol)).or_default() += 1;
    }
    let w = ctx.w();
    let mut members = vec![w.to_vec(); k];
    let mut spent = vec![0u64; k];
    let mut feasible = true;
    for (&(cost, i, a), &h) in &demand {
        let mut open: Vec<usize> =
            (0..k).filter(|&r| members[r][i] == w[i] && budget.fits(spent[r] + cost)).collect();
        open.sort_by_key(|&r| (spent[r], r));
        if open.len() < h {
            feasible = false;
        }
        for &r in open.iter().take(h) {
            members[r][i] = a;
            spent[r] += cost;
        }
    }
    let set = CandidateSet::new(ctx, members).expect("members are built from the context");
    (set, feasible)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SearchMode {
    Binary,
    Linear,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixSearch {
    pub set: CandidateSet,
    pub value: u64,
    pub prefix_len: usize,
    pub list_len: usize,
    pub mode: SearchMode,
}

/// `k` approximate medians from the longest feasible prefix of the op list.
pub fn sum_dispersion_approx_k(
    ctx: &MedianContext,
    budget: &Budget,
    k: usize,
    mode: SearchMode,
) -> Result<PrefixSearch> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let list = build_oplist(ctx, k);
    let feasible = |j: usize| cost_greedy_assign(ctx, budget, k, &list.ops[..j]).1;
    let best = match mode {
        SearchMode::Binary => {
            let (mut lo, mut hi) = (0, list.ops.len());
            while lo < hi {
                let mid = (lo + hi).div_ceil(2);
                if feasible(mid) {
                    lo = mid;
                } else {
                    hi = mid - 1;
                }
            }
            lo
        }
        SearchMode::Linear => (0..=list.ops.len()).rev().find(|&j| feasible(j)).unwrap_or(0),
    };
    let (set, _) = cost_greedy_assign(ctx, budget, k, &list.ops[..best]);
    let value = set.sum_dispersion();
    Ok(PrefixSearch { set, value, prefix_len: best, list_len: list.ops.len(), mode })
}

/// Feasibility of every prefix length, for checking monotonicity.
pub fn prefix_feasibility(ctx: &MedianContext, budget: &Budget, k: usize) -> Vec<bool> {
    let list = build_oplist(ctx, k);
    (0..=list.ops.len()).map(|j| cost_greedy_assign(ctx, budget, k, &list.ops[..j]).1).collect()
}

/// `k` exact medians with maximum sum dispersion: on each tie index the
/// majority symbols are spread as evenly as possible, in blocks.
pub fn sum_dispersion_exact_k(ctx: &MedianContext, k: usize) -> Result<CandidateSet> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let freq = ctx.freq();
    let mut members = vec![ctx.w().to_vec(); k];
    for i in freq.tie_indices() {
        let gamma = freq.majority_set(i);
        let m = gamma.len();
        let (base, extra) = (k / m, k % m);
        let mut r = 0;
        for (j, &a) in gamma.iter().enumerate() {
            let count = base + usize::from(j < extra);
            for _ in 0..count {
                members[r][i] = a;
                r += 1;
            }
        }
    }
    CandidateSet::new(ctx, members)
}

/// Same counts as [`sum_dispersion_exact_k`] but with pairwise distinct
/// members, when there are at least `⌈log2 k⌉` tie indices.
pub fn sum_dispersion_exact_distinct(ctx: &MedianContext, k: usize) -> Result<CandidateSet> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    let freq = ctx.freq();
    let ties = freq.tie_indices();
    let need = usize::BITS - (k - 1).leading_zeros();
    if ties.len() < need as usize {
        return Err(Error::Unavailable(format!(
            "distinct members need {need} tie indices, the instance has {}",
            ties.len()
        )));
    }
    let mut members = vec![ctx.w().to_vec(); k];
    // Members stay grouped so that equal prefixes are contiguous; a running
    // position cycles through the majority set, which keeps counts balanced
    // and splits every group of two or more.
    for i in ties {
        let gamma = freq.majority_set(i);
        for (pos, m) in members.iter_mut().enumerate() {
            m[i] = gamma[pos % gamma.len()];
        }
        members.sort();
    }
    let set = CandidateSet::new(ctx, members)?;
    Ok(set)
}

/// Max-sum greedy over an explicit pool: farthest pair first, then the
/// point with the largest distance sum to the chosen ones. Repeats allowed.
pub fn sum_dispersion_small_dstar(
    ctx: &MedianContext,
    pool: &[Vec<Sym>],
    k: usize,
    limits: &EnumerationLimits,
) -> Result<CandidateSet> {
    let picks = greedy_sum_indices(pool, k, limits)?;
    CandidateSet::new(ctx, picks.into_iter().map(|p| pool[p].clone()).collect())
}

pub(crate) fn farthest_pair(pool: &[Vec<Sym>], limits: &EnumerationLimits) -> Result<(usize, usize)> {
    let m = pool.len() as u64;
    let pairs = oracle::binomial(m, 2);
    if pairs > limits.max_tuples as u128 {
        return Err(Error::CapExceeded { what: "pairwise scan of the pool", needed: pairs, cap: limits.max_tuples as u128 });
    }
    let mut best = (0, 0, 0);
    for i in 0..pool.len() {
        for j in i + 1..pool.len() {
            let h = hamming(&pool[i], &pool[j]);
            if h > best.2 {
                best = (i, j, h);
            }
        }
    }
    if best.2 == 0 && pool.len() > 1 {
        best = (0, 1, 0);
    }
    Ok((best.0, best.1))
}

fn greedy_sum_indices(pool: &[Vec<Sym>], k: usize, limits: &EnumerationLimits) -> Result<Vec<usize>> {
    if pool.is_empty() {
        return Err(Error::InvalidParameter("candidate pool is empty".into()));
    }
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if pool.len() == 1 || k == 1 {
        return Ok(vec![0; k]);
    }
    let (a, b) = farthest_pair(pool, limits)?;
    let mut chosen = vec![a, b];
    let mut score: Vec<u64> =
        pool.iter().map(|p| (hamming(p, &pool[a]) + hamming(p, &pool[b])) as u64).collect();
    while chosen.len() < k {
        let (next, _) = score.iter().enumerate().fold((0, 0), |acc, (p, &s)| if s > acc.1 { (p, s) } else { acc });
        chosen.push(next);
        for (p, s) in score.iter_mut().enumerate() {
            *s += hamming(&pool[p], &pool[next]) as u64;
        }
    }
    Ok(chosen)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SumDispersionReport {
    pub set: CandidateSet,
    pub value: u64,
    pub d_star: usize,
    pub strategy: String,
    pub guarantee: String,
    pub notes: Vec<String>,
}

/// Picks the density algorithm when the diameter is large relative to
/// `1/δ`, and enumeration plus greedy otherwise.
pub fn sum_dispersion_dispatch(
    ctx: &MedianContext,
    budget: &Budget,
    k: usize,
    delta: Rational,
    mode: SearchMode,
    limits: &EnumerationLimits,
) -> Result<SumDispersionReport> {
    if k == 0 {
        return Err(Error::InvalidParameter("k must be at least 1".into()));
    }
    if delta.is_zero() {
        return Err(Error::InvalidParameter("delta must be positive".into()));
    }
    let d_star = approx_diameter_pair(ctx, budget).diameter;
    if d_star == 0 {
        let set = CandidateSet::copies_of_w(ctx, k)?;
        return Ok(SumDispersionReport {
            set,
            value: 0,
            d_star,
            strategy: "trivial".into(),
            guarantee: "D* = 0, every approximate median equals w; v = v* = 0".into(),
            notes: vec![],
        });
    }
    let mut notes = Vec::new();
    if !delta.times_ge(d_star as u64, 4) {
        let attempt = oracle::enumerate_approx_medians(ctx, budget, limits)
            .and_then(|pool| sum_dispersion_small_dstar(ctx, &pool, k, limits));
        match attempt {
            Ok(set) => {
                let value = set.sum_dispersion();
                return Ok(SumDispersionReport {
                    set,
                    value,
                    d_star,
                    strategy: "enumeration+greedy".into(),
                    guarantee: format!("D* = {d_star} < 4/δ = 4/({delta}); greedy over all approximate medians: v >= v*/2"),
                    notes,
                });
            }
            Err(Error::CapExceeded { what, needed, cap }) => {
                notes.push(format!("{what} needs {needed} > cap {cap}; fell back to the density algorithm"));
            }
            Err(e) => return Err(e),
        }
    }
    let found = sum_dispersion_approx_k(ctx, budget, k, mode)?;
    let guarantee = if notes.is_empty() {
        format!("D* = {d_star} >= 4/δ = 4/({delta}); v >= (1 - 4/{d_star}) v* >= (1 - {delta}) v*")
    } else {
        format!("D* = {d_star} < 4/δ; v >= (1 - 4/{d_star}) v* only (weaker than (1 - {delta}) v*)")
    };
    Ok(SumDispersionReport {
        value: found.value,
        set: found.set,
        d_star,
        strategy: "density-greedy".into(),
        guarantee,
        notes,
    })
}
