//! `k` medians with maximum minimum pairwise distance.

use std::collections::HashMap;

use num_rational::Ratio;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::budget::{Budget, Rational};
use crate::candidate::{CandidateSet, CostClass};
use crate::context::{FrequencyTable, MedianContext};
use crate::dataset::Sym;
use crate::diameter::approx_diameter_pair;
use crate::error::{Error, Result};
use crate::lpround;
use crate::metrics::hamming;
use crate::oracle::{self, EnumerationLimits};
use crate::rng;
use crate::sumdisp::farthest_pair;

/// Best `k`-tuple found by a dynamic program over columns.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DpOutcome {
    pub value: usize,
    pub members: Vec<Vec<Sym>>,
    /// States stored, summed over columns and decision passes.
    pub states: u64,
}

struct Column {
    index: usize,
    /// Every assignment of one symbol per candidate, with its per-candidate costs.
    assignments: Vec<(Vec<Sym>, Vec<u64>)>,
}

fn column(index: usize, options: &[(Sym, u64)], k: usize) -> Column {
    let mut assignments = Vec::new();
    let mut digit = vec![0usize; k];
    loop {
        let syms = digit.iter().map(|&j| options[j].0).collect();
        let costs = digit.iter().map(|&j| options[j].1).collect();
        assignments.push((syms, costs));
        let mut r = k;
        loop {
            if r == 0 {
                return Column { index, assignments };
            }
            r -= 1;
            digit[r] += 1;
            if digit[r] < options.len() {
                break;
            }
            digit[r] = 0;
        }
    }
}

/// Largest `T` such that some choice of one assignment per column puts every
/// pair at distance `≥ T`, found by binary search over decision DPs.
fn run_dp(
    w: &[Sym],
    columns: &[Column],
    k: usize,
    slack: Option<u64>,
    limits: &EnumerationLimits,
) -> Result<DpOutcome> {
    let pairs: Vec<(usize, usize)> = (0..k).flat_map(|r| (r + 1..k).map(move |s| (r, s))).collect();
    let mut stored = 0u64;
    let mut best = (0, vec![w.to_vec(); k]);
    let (mut lo, mut hi) = (0, columns.len());
    while lo < hi {
        let target = (lo + hi).div_ceil(2);
        match reach(w, columns, &pairs, k, slack, target, limits, &mut stored)? {
            Some(members) => {
                lo = crate::metrics::min_dispersion(&members)?;
                best = (lo, members);
            }
            None => hi = target - 1,
        }
    }
    Ok(DpOutcome { value: best.0, members: best.1, states: stored })
}

/// One decision pass. A state is the vector of pairwise distances capped at
/// `target`, plus the per-candidate spent budget when `slack` is given; for
/// equal distances only budget vectors not dominated by another are kept.
#[allow(clippy::too_many_arguments)]
fn reach(
    w: &[Sym],
    columns: &[Column],
    pairs: &[(usize, usize)],
    k: usize,
    slack: Option<u64>,
    target: usize,
    limits: &EnumerationLimits,
    stored: &mut u64,
) -> Result<Option<Vec<Vec<Sym>>>> {
    struct Entry {
        spent: Vec<u32>,
        parent: u32,
        assign: u32,
    }
    let target = target as u32;
    let adjacent: Vec<usize> = (0..k - 1).map(|r| pairs.iter().position(|&p| p == (r, r + 1)).unwrap()).collect();
    let mut layer: Vec<(Vec<u32>, Vec<u32>)> = vec![(vec![0; pairs.len()], vec![0; k])];
    let mut trail: Vec<Vec<(u32, u32)>> = Vec::with_capacity(columns.len());
    for (c, col) in columns.iter().enumerate() {
        let left = (columns.len() - c - 1) as u32;
        let mut groups: HashMap<Vec<u32>, Vec<Entry>> = HashMap::new();
        for (parent, (dist, spent)) in layer.iter().enumerate() {
            'assign: for (a, (syms, costs)) in col.assignments.iter().enumerate() {
                // Candidates equal so far stay in nondecreasing symbol order.
                for r in 0..k - 1 {
                    if dist[adjacent[r]] == 0 && syms[r] > syms[r + 1] {
                        continue 'assign;
                    }
                }
                let mut nd = dist.clone();
                for (q, &(r, s)) in pairs.iter().enumerate() {
                    nd[q] = (nd[q] + u32::from(syms[r] != syms[s])).min(target);
                    if nd[q] + left < target {
                        continue 'assign;
                    }
                }
                let mut ns = spent.clone();
                if let Some(slack) = slack {
                    for r in 0..k {
                        let v = ns[r] as u64 + costs[r];
                        if v > slack {
                            continue 'assign;
                        }
                        ns[r] = v as u32;
                    }
                }
                let front = groups.entry(nd).or_default();
                if front.iter().any(|e| e.spent.iter().zip(&ns).all(|(x, y)| x <= y)) {
                    continue;
                }
                front.retain(|e| !e.spent.iter().zip(&ns).all(|(x, y)| y <= x));
                front.push(Entry { spent: ns, parent: parent as u32, assign: a as u32 });
            }
        }
        let mut next = Vec::new();
        let mut back = Vec::new();
        let mut keys: Vec<_> = groups.into_iter().collect();
        keys.sort_unstable_by(|a, b| a.0.cmp(&b.0));
        for (dist, front) in keys {
            for e in front {
                next.push((dist.clone(), e.spent));
                back.push((e.parent, e.assign));
            }
        }
        *stored += next.len() as u64;
        if *stored > limits.max_states {
            return Err(Error::CapExceeded {
                what: "min dispersion DP states",
                needed: *stored as u128,
                cap: limits.max_states as u128,
            });
        }
        if next.is_empty() {
            return Ok(None);
        }
        trail.push(back);
        layer = next;
    }
    let Some(mut state) = layer.iter().position(|(d, _)| d.iter().all(|&x| x >= target)) else {
        return Ok(None);
    };
    let mut members = vec![w.to_vec(); k];
    for (col, back) in columns.iter().zip(&trail).rev() {
        let (parent, a) = back[state];
        let syms = &col.assignments[a as usize].0;
        for r in 0..k {
            members[r][col.index] = syms[r];
        }
        state = parent as usize;
    }
    Ok(Some(members))
}

/// Exact optimum over `k`-tuples of exact medians.
pub fn min_disp_dp_exact(freq: &FrequencyTable, w: &[Sym], k: usize, limits: &EnumerationLimits) -> Result<DpOutcome> {
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    let columns: Vec<Column> = freq
        .tie_indices()
        .into_iter()
        .map(|i| {
            let options: Vec<(Sym, u64)> = freq.majority_set(i).iter().map(|&a| (a, 0)).collect();
            column(i, &options, k)
        })
        .collect();
    run_dp(w, &columns, k, None, limits)
}

/// Exact optimum over `k`-tuples of `(1+ε)`-approximate medians.
pub fn min_disp_dp_approx(ctx: &MedianContext, budget: &Budget, k: usize, limits: &EnumerationLimits) -> Result<DpOutcome> {
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    let slack = budget.slack();
    if slack > u32::MAX as u64 {
        return Err(Error::InvalidParameter("budget too large for the DP state".into()));
    }
    let columns: Vec<Column> = (0..ctx.d())
        .filter_map(|i| {
            let options: Vec<(Sym, u64)> = (0..ctx.sigma() as Sym)
                .map(|a| (a, ctx.per_char_cost(i, a)))
                .filter(|&(_, c)| c <= slack)
                .collect();
            (options.len() >= 2).then(|| column(i, &options, k))
        })
        .collect();
    run_dp(ctx.w(), &columns, k, Some(slack), limits)
}

/// Parameters shared by the samplers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub k: usize,
    pub delta: Rational,
    pub eta: Rational,
    pub seed: u64,
}

impl SampleConfig {
    pub fn new(k: usize, delta: Rational, eta: Rational, seed: u64) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter("k must be at least 2".into()));
        }
        if delta.is_zero() || delta > Rational::integer(1) {
            return Err(Error::InvalidParameter(format!("delta must lie in (0, 1], got {delta}")));
        }
        if eta.is_zero() || eta >= Rational::integer(1) {
            return Err(Error::InvalidParameter(format!("eta must lie in (0, 1), got {eta}")));
        }
        Ok(SampleConfig { k, delta, eta, seed })
    }

    /// ⌈log2(1/η)⌉.
    pub fn trials(&self) -> usize {
        let (num, den) = (self.eta.numer() as u128, self.eta.denom() as u128);
        let mut n = 0;
        while (num << n) < den {
            n += 1;
        }
        n.max(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SampleOutcome {
    pub set: CandidateSet,
    pub min_dispersion: usize,
    pub best_trial: usize,
    pub trials: usize,
}

fn best_of_trials<F>(ctx: &MedianContext, cfg: &SampleConfig, mut draw: F) -> Result<SampleOutcome>
where
    F: FnMut(&mut rand_chacha::ChaCha8Rng) -> Vec<Sym>,
{
    let trials = cfg.trials();
    let mut best: Option<(usize, usize, Vec<Vec<Sym>>)> = None;
    for t in 0..trials {
        let members: Vec<Vec<Sym>> = (0..cfg.k)
            .map(|r| draw(&mut rng::derived(cfg.seed, &[t as u64, r as u64])))
            .collect();
        let value = crate::metrics::min_dispersion(&members)?;
        if best.as_ref().is_none_or(|b| value > b.0) {
            best = Some((value, t, members));
        }
    }
    let (value, t, members) = best.expect("at least one trial");
    Ok(SampleOutcome { set: CandidateSet::new(ctx, members)?, min_dispersion: value, best_trial: t, trials })
}

/// Best of `N` trials of `k` uniform draws from the majority sets.
pub fn sample_exact_medians(ctx: &MedianContext, cfg: &SampleConfig) -> Result<SampleOutcome> {
    let freq = ctx.freq();
    best_of_trials(ctx, cfg, |rng| {
        (0..ctx.d())
            .map(|i| {
                let g = freq.majority_set(i);
                g[rng.gen_range(0..g.len())]
            })
            .collect()
    })
}

/// Best of `N` trials where each member flips a fair coin per index on
/// which the maximum-distance pair deviates from `w`. Members cost at most
/// `(1+2ε)·opt`.
pub fn sample_approx_medians(ctx: &MedianContext, budget: &Budget, cfg: &SampleConfig) -> Result<SampleOutcome> {
    let pair = approx_diameter_pair(ctx, budget);
    let w = ctx.w();
    let deviated: Vec<(usize, Sym)> = (0..ctx.d())
        .filter_map(|i| {
            if pair.pair.0[i] != w[i] {
                Some((i, pair.pair.0[i]))
            } else if pair.pair.1[i] != w[i] {
                Some((i, pair.pair.1[i]))
            } else {
                None
            }
        })
        .collect();
    best_of_trials(ctx, cfg, |rng| {
        let mut s = w.to_vec();
        for &(i, a) in &deviated {
            if rng.gen_bool(0.5) {
                s[i] = a;
            }
        }
        s
    })
}

/// Max-min greedy over a pool; `duplicated` flags a pool smaller than `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GreedyOutcome {
    pub picks: Vec<usize>,
    pub min_dispersion: usize,
    pub duplicated: bool,
}

/// Farthest pair, then repeatedly the pool point farthest from the chosen set.
pub fn greedy_dispersion(pool: &[Vec<Sym>], k: usize, limits: &EnumerationLimits) -> Result<GreedyOutcome> {
    if pool.is_empty() {
        return Err(Error::InvalidParameter("candidate pool is empty".into()));
    }
    if k < 2 {
        return Err(Error::InvalidParameter("k must be at least 2".into()));
    }
    if pool.len() == 1 {
        return Ok(GreedyOutcome { picks: vec![0; k], min_dispersion: 0, duplicated: true });
    }
    let (a, b) = farthest_pair(pool, limits)?;
    let mut picks = vec![a, b];
    let mut nearest: Vec<usize> = pool.iter().map(|p| hamming(p, &pool[a]).min(hamming(p, &pool[b]))).collect();
    while picks.len() < k {
        let (next, _) = nearest.iter().enumerate().fold((0, 0), |acc, (p, &v)| if v > acc.1 { (p, v) } else { acc });
        picks.push(next);
        for (p, v) in nearest.iter_mut().enumerate() {
            *v = (*v).min(hamming(&pool[p], &pool[next]));
        }
    }
    let chosen: Vec<&Vec<Sym>> = picks.iter().map(|&p| &pool[p]).collect();
    let min_dispersion = crate::metrics::min_dispersion(&chosen.iter().map(|s| s.as_slice()).collect::<Vec<_>>())?;
    Ok(GreedyOutcome { picks, min_dispersion, duplicated: k > pool.len() })
}

/// Σ_ℓ (|Γ_ℓ| − 1)/|Γ_ℓ| as an exact fraction.
pub fn plotkin_sum(sizes: &[usize]) -> Result<Ratio<u128>> {
    let mut acc = Ratio::from_integer(0u128);
    for &s in sizes {
        if s == 0 {
            return Err(Error::InvalidParameter("alphabet sizes must be positive".into()));
        }
        let term = Ratio::new(s as u128 - 1, s as u128);
        acc = num_traits::CheckedAdd::checked_add(&acc, &term)
            .ok_or_else(|| Error::InvalidParameter("Plotkin sum overflows".into()))?;
    }
    Ok(acc)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "case", rename_all = "snake_case")]
pub enum PlotkinBound {
    /// `t` equals the sum: `|C| ≤ 2·Σ|Γ_ℓ|`.
    AtSum { bound: u64 },
    /// `t` exceeds the sum: `|C| ≤ ⌊t/(t − sum)⌋`.
    AboveSum { bound: u64 },
    Inapplicable,
}

impl PlotkinBound {
    pub fn bound(&self) -> Option<u64> {
        match *self {
            PlotkinBound::AtSum { bound } | PlotkinBound::AboveSum { bound } => Some(bound),
            PlotkinBound::Inapplicable => None,
        }
    }
}

/// Upper bound on the size of a code with minimum distance `t`.
pub fn plotkin_bound(sizes: &[usize], t: u64) -> Result<PlotkinBound> {
    let sum = plotkin_sum(sizes)?;
    let (p, q) = (*sum.numer(), *sum.denom());
    let tq = (t as u128).checked_mul(q).ok_or_else(|| Error::InvalidParameter("t too large".into()))?;
    Ok(match tq.cmp(&p) {
        std::cmp::Ordering::Less => PlotkinBound::Inapplicable,
        std::cmp::Ordering::Equal => PlotkinBound::AtSum { bound: 2 * sizes.iter().sum::<usize>() as u64 },
        std::cmp::Ordering::Greater => PlotkinBound::AboveSum { bound: (tq / (tq - p)) as u64 },
    })
}

/// `4(1+ε)·opt/n`, an upper bound on the best achievable min dispersion.
pub fn tstar_upper_bound(ctx: &MedianContext, budget: &Budget) -> Result<Rational> {
    let e = budget.epsilon();
    let num = 4 * ctx.opt() as u128 * (e.numer() as u128 + e.denom() as u128);
    let den = e.denom() as u128 * ctx.n() as u128;
    Rational::reduced(num, den)
}

/// Bounds reported alongside a min dispersion solution.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub alphabet_sizes: Vec<usize>,
    pub plotkin_sum: String,
    pub t: u64,
    pub max_code_size: PlotkinBound,
    pub tstar_upper: Rational,
}

impl BoundCertificate {
    pub fn new(ctx: &MedianContext, budget: &Budget, sizes: Vec<usize>, t: u64) -> Result<Self> {
        let sum = plotkin_sum(&sizes)?;
        Ok(BoundCertificate {
            plotkin_sum: format!("{sum}"),
            max_code_size: plotkin_bound(&sizes, t)?,
            tstar_upper: tstar_upper_bound(ctx, budget)?,
            alphabet_sizes: sizes,
            t,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinDispersionReport {
    pub set: CandidateSet,
    pub value: usize,
    pub d_star: usize,
    pub strategy: String,
    pub guarantee: String,
    pub cost_class: CostClass,
    pub certificate: Option<BoundCertificate>,
    pub notes: Vec<String>,
}

/// `x ≥ 2·log2(k) + 1 + extra` with `x` an exact fraction. Exact when `k`
/// is a power of two.
fn exceeds_log_threshold(x: Ratio<u128>, k: usize, extra: u128) -> bool {
    if k.is_power_of_two() {
        let log = k.trailing_zeros() as u128;
        let rhs = Ratio::from_integer(2 * log + 1 + extra);
        return x >= rhs;
    }
    let xf = *x.numer() as f64 / *x.denom() as f64;
    xf >= 2.0 * (k as f64).log2() + 1.0 + extra as f64
}

fn check_params(k: usize, delta: Rational, eta: Rational) -> Result<()> {
    SampleConfig::new(k, delta, eta, 0).map(|_| ())
}

fn k_at_most_inverse_delta(k: usize, delta: Rational) -> bool {
    delta.times_le(k as u64, 1)
}

/// `D*·δ²/4` as an exact fraction.
fn scaled_dstar(d_star: usize, delta: Rational) -> Ratio<u128> {
    let (p, q) = (delta.numer() as u128, delta.denom() as u128);
    Ratio::new(d_star as u128 * p * p, 4 * q * q)
}

fn from_greedy(ctx: &MedianContext, pool: &[Vec<Sym>], k: usize, limits: &EnumerationLimits) -> Result<(CandidateSet, bool)> {
    let g = greedy_dispersion(pool, k, limits)?;
    let set = CandidateSet::new(ctx, g.picks.iter().map(|&p| pool[p].clone()).collect())?;
    Ok((set, g.duplicated))
}

fn cap_note(e: &Error, then: &str) -> Option<String> {
    match e {
        Error::CapExceeded { what, needed, cap } => Some(format!("{what} needs {needed} > cap {cap}; {then}")),
        _ => None,
    }
}

/// Chooses among DP, sampling and enumeration plus greedy for exact medians.
pub fn min_dispersion_dispatch_exact(
    ctx: &MedianContext,
    k: usize,
    delta: Rational,
    eta: Rational,
    seed: u64,
    limits: &EnumerationLimits,
) -> Result<MinDispersionReport> {
    check_params(k, delta, eta)?;
    let freq = ctx.freq();
    let d_star = freq.tie_indices().len();
    let exact_budget = Budget::new(Rational::zero(), ctx.opt());
    let certify = |t: usize| BoundCertificate::new(ctx, &exact_budget, freq.majority_sizes(), t as u64);
    let report = |set: CandidateSet, strategy: &str, guarantee: String, notes: Vec<String>| -> Result<MinDispersionReport> {
        let value = set.min_dispersion();
        Ok(MinDispersionReport {
            value,
            d_star,
            strategy: strategy.into(),
            guarantee,
            cost_class: CostClass::exact(),
            certificate: Some(certify(value)?),
            set,
            notes,
        })
    };
    if d_star == 0 {
        return report(CandidateSet::copies_of_w(ctx, k)?, "trivial", "unique median; t* = 0".into(), vec![]);
    }
    let mut notes = Vec::new();
    if k_at_most_inverse_delta(k, delta) {
        match min_disp_dp_exact(freq, ctx.w(), k, limits) {
            Ok(dp) => {
                let set = CandidateSet::new(ctx, dp.members)?;
                return report(set, "dp", format!("k = {k} <= 1/δ = 1/({delta}); exact optimum t*"), notes);
            }
            Err(e) => notes.push(cap_note(&e, "skipped the DP").ok_or(e)?),
        }
    }
    let sum = plotkin_sum(&freq.majority_sizes())?;
    let sampler = |notes: Vec<String>| -> Result<MinDispersionReport> {
        let cfg = SampleConfig::new(k, delta, eta, seed)?;
        let out = sample_exact_medians(ctx, &cfg)?;
        let target = Ratio::new(delta.denom() as u128 - delta.numer() as u128, delta.denom() as u128) * sum;
        let g = format!(
            "minDp >= (1-2δ) t* with probability >= 1-η (δ = {delta}, η = {eta}, {} trials); sampling target (1-δ)Σ = {target}, t* <= kΣ/(k-1) = {}",
            cfg.trials(),
            sum * Ratio::new(k as u128, k as u128 - 1)
        );
        report(out.set, "sample", g, notes)
    };
    if exceeds_log_threshold(scaled_dstar(d_star, delta), k, 0) {
        return sampler(notes);
    }
    match oracle::enumerate_exact_medians(freq, limits).and_then(|pool| from_greedy(ctx, &pool, k, limits)) {
        Ok((set, dup)) => {
            if dup {
                notes.push("fewer exact medians than k; duplicates used".into());
            }
            report(set, "enumeration+greedy", "minDp >= t*/2 over all exact medians".into(), notes)
        }
        Err(e) => {
            notes.push(cap_note(&e, "fell back to sampling without a formal guarantee").ok_or(e)?);
            sampler(notes)
        }
    }
}

/// Chooses among DP, enumeration plus greedy, the LP pipeline and sampling
/// for `(1+ε)`-approximate medians.
#[allow(clippy::too_many_arguments)]
pub fn min_dispersion_dispatch_approx(
    ctx: &MedianContext,
    budget: &Budget,
    k: usize,
    delta: Rational,
    eta: Rational,
    seed: u64,
    allow_lp: bool,
    limits: &EnumerationLimits,
) -> Result<MinDispersionReport> {
    check_params(k, delta, eta)?;
    let eps = budget.epsilon();
    let d_star = approx_diameter_pair(ctx, budget).diameter;
    let base = CostClass::approx("(1+ε)-approximate", eps);
    let certify = |t: usize| BoundCertificate::new(ctx, budget, ctx.freq().majority_sizes(), t as u64);
    let report = |set: CandidateSet, strategy: &str, guarantee: String, cost_class: CostClass, notes: Vec<String>| -> Result<MinDispersionReport> {
        let value = set.min_dispersion();
        Ok(MinDispersionReport {
            value,
            d_star,
            strategy: strategy.into(),
            guarantee,
            cost_class,
            certificate: Some(certify(value)?),
            set,
            notes,
        })
    };
    if d_star == 0 {
        return report(CandidateSet::copies_of_w(ctx, k)?, "trivial", "D* = 0; t* = 0".into(), base, vec![]);
    }
    let mut notes = Vec::new();
    if k_at_most_inverse_delta(k, delta) {
        match min_disp_dp_approx(ctx, budget, k, limits) {
            Ok(dp) => {
                let set = CandidateSet::new(ctx, dp.members)?;
                return report(set, "dp", format!("k = {k} <= 1/δ = 1/({delta}); exact optimum t*"), base, notes);
            }
            Err(e) => notes.push(cap_note(&e, "skipped the DP").ok_or(e)?),
        }
    }
    let scaled = scaled_dstar(d_star, delta);
    let greedy = |notes: &mut Vec<String>, why: &str| -> Result<Option<MinDispersionReport>> {
        match oracle::enumerate_approx_medians(ctx, budget, limits).and_then(|pool| from_greedy(ctx, &pool, k, limits)) {
            Ok((set, dup)) => {
                if dup {
                    notes.push("fewer approximate medians than k; duplicates used".into());
                }
                let g = format!("{why}; minDp >= t*/2 over all (1+ε)-approximate medians");
                Ok(Some(report(set, "enumeration+greedy", g, base.clone(), notes.clone())?))
            }
            Err(e) => {
                notes.push(cap_note(&e, "continuing with the next strategy").ok_or(e)?);
                Ok(None)
            }
        }
    };
    let small = scaled <= Ratio::from_integer(1);
    if small {
        if let Some(r) = greedy(&mut notes, &format!("D* = {d_star} <= 4/δ²"))? {
            return Ok(r);
        }
    }
    if allow_lp {
        match lpround::lp_min_dispersion(ctx, budget, k, delta, eta, seed) {
            Ok(lp) => {
                let class = CostClass::approx("(1+ε+δ)-approximate", eps.checked_add(&delta)?);
                let g = format!(
                    "LP rounding: minDp >= (1-δ)/2 t* w.h.p. when t* >= ((8+4δ)/δ)·sqrt(d)(2 log k + 2); precondition {} (t* <= {})",
                    if lp.precondition_plausible { "plausible" } else { "not met" },
                    lp.tstar_upper
                );
                return report(lp.set, "lp", g, class, notes);
            }
            Err(Error::Infeasible(msg)) => notes.push(format!("LP rounding found no feasible trial ({msg}); fell back to sampling")),
            Err(e) => return Err(e),
        }
    }
    if !small && !exceeds_log_threshold(scaled, k, 0) {
        if let Some(mut r) = greedy(&mut notes, &format!("D* = {d_star} lies between 4/δ² and (4/δ²)(2 log k + 1)"))? {
            r.notes.push("gap region between the small and large D* cases; resolved by enumeration".into());
            return Ok(r);
        }
    }
    let cfg = SampleConfig::new(k, delta, eta, seed)?;
    let out = sample_approx_medians(ctx, budget, &cfg)?;
    let class = CostClass::approx("(1+2ε)-approximate", eps.scale(2)?);
    let g = format!(
        "minDp >= (1-δ) D*/2 = {} >= (1-δ)/2 t* with probability >= 1-η (δ = {delta}, η = {eta}, {} trials)",
        Ratio::new((delta.denom() - delta.numer()) as u128 * d_star as u128, 2 * delta.denom() as u128),
        cfg.trials()
    );
    report(out.set, "sample", g, class, notes)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataset::Dataset;
    use crate::diameter::exact_diameter_pair;

    fn ctx(rows: &[&str]) -> MedianContext {
        MedianContext::build(&Dataset::from_strs(rows, None).unwrap())
    }

    fn r(n: u64, d: u64) -> Rational {
        Rational::new(n, d).unwrap()
    }

    #[test]
    fn exact_dp_examples() {
        let lim = EnumerationLimits::default();
        let c = ctx(&["ab", "ba"]);
        let dp = min_disp_dp_exact(c.freq(), c.w(), 2, &lim).unwrap();
        assert_eq!(dp.value, 2);
        assert_eq!(dp.value, exact_diameter_pair(&c).diameter);
        let c = ctx(&["ab", "ab"]);
        assert_eq!(min_disp_dp_exact(c.freq(), c.w(), 3, &lim).unwrap().value, 0);
        let c = ctx(&["aa", "ab", "ba", "bb"]);
        let dp = min_disp_dp_exact(c.freq(), c.w(), 3, &lim).unwrap();
        assert_eq!(dp.value, 1);
        assert_eq!(crate::metrics::min_dispersion(&dp.members).unwrap(), 1);
        let tight = EnumerationLimits { max_states: 2, ..lim };
        assert!(matches!(min_disp_dp_exact(c.freq(), c.w(), 3, &tight), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn approx_dp_matches_diameter_for_pairs() {
        let lim = EnumerationLimits::default();
        let c = ctx(&["aaaa", "aaaa", "aaaa", "aaaa", "aaaa", "bbbb", "bbbb", "bbcc"]);
        let b = Budget::new(r(5, 12), c.opt());
        let dp = min_disp_dp_approx(&c, &b, 2, &lim).unwrap();
        assert_eq!(dp.value, approx_diameter_pair(&c, &b).diameter);
        for m in &dp.members {
            assert!(c.is_approx_median(&b, m).unwrap());
        }
        let zero = Budget::new(Rational::zero(), c.opt());
        assert_eq!(
            min_disp_dp_approx(&c, &zero, 3, &lim).unwrap().value,
            min_disp_dp_exact(c.freq(), c.w(), 3, &lim).unwrap().value
        );
    }

    #[test]
    fn sampler_trials_and_feasibility() {
        let cfg = SampleConfig::new(4, r(1, 2), r(1, 8), 3).unwrap();
        assert_eq!(cfg.trials(), 3);
        assert_eq!(SampleConfig::new(4, r(1, 2), r(1, 5), 3).unwrap().trials(), 3);
        assert_eq!(SampleConfig::new(4, r(1, 2), r(1, 2), 3).unwrap().trials(), 1);
        assert!(SampleConfig::new(1, r(1, 2), r(1, 2), 3).is_err());
        assert!(SampleConfig::new(2, r(1, 2), r(1, 1), 3).is_err());
        let c = ctx(&["ab", "ab"]);
        let out = sample_exact_medians(&c, &cfg).unwrap();
        assert_eq!(out.min_dispersion, 0);
        let c = ctx(&["abab", "baba", "aabb"]);
        let out = sample_exact_medians(&c, &cfg).unwrap();
        assert!(out.set.members().iter().all(|m| c.freq().is_exact_median(m)));
        assert_eq!(out, sample_exact_medians(&c, &cfg).unwrap());
    }

    #[test]
    fn greedy_examples() {
        let lim = EnumerationLimits::default();
        let pool = vec![vec![0, 0], vec![0, 1], vec![1, 1]];
        let g = greedy_dispersion(&pool, 2, &lim).unwrap();
        assert_eq!(g.picks, vec![0, 2]);
        assert_eq!(greedy_dispersion(&pool, 3, &lim).unwrap().min_dispersion, 1);
        let g = greedy_dispersion(&pool, 4, &lim).unwrap();
        assert!(g.duplicated);
        assert_eq!(g.min_dispersion, 0);
    }

    #[test]
    fn plotkin_examples() {
        assert_eq!(plotkin_bound(&[2; 4], 2).unwrap(), PlotkinBound::AtSum { bound: 16 });
        assert_eq!(plotkin_bound(&[2; 4], 3).unwrap(), PlotkinBound::AboveSum { bound: 3 });
        assert_eq!(plotkin_bound(&[2; 4], 1).unwrap(), PlotkinBound::Inapplicable);
        assert_eq!(plotkin_sum(&[2, 3]).unwrap(), Ratio::new(7, 6));
    }

    #[test]
    fn tstar_examples() {
        let rows: Vec<String> = (0..10).map(|r| if r < 6 { "1111".into() } else { "0000".into() }).collect();
        let rows: Vec<&str> = rows.iter().map(String::as_str).collect();
        let c = ctx(&rows);
        let b = Budget::new(r(1, 2), c.opt());
        assert_eq!(tstar_upper_bound(&c, &b).unwrap(), r(48, 5));
        let c = ctx(&["ab", "ab"]);
        assert!(tstar_upper_bound(&c, &Budget::new(r(1, 2), 0)).unwrap().is_zero());
    }

    #[test]
    fn exact_dispatch_branches() {
        let lim = EnumerationLimits::default();
        let c = ctx(&["ab", "ba"]);
        let rep = min_dispersion_dispatch_exact(&c, 2, r(1, 2), r(1, 8), 0, &lim).unwrap();
        assert_eq!((rep.strategy.as_str(), rep.value), ("dp", 2));
        // k = 2 exceeds 1/δ = 1, so the DP is not eligible.
        let rep = min_dispersion_dispatch_exact(&c, 2, Rational::integer(1), r(1, 8), 0, &lim).unwrap();
        assert_eq!((rep.strategy.as_str(), rep.value), ("enumeration+greedy", 2));
        let wide = |d: usize| {
            let a: String = "a".repeat(d);
            let b: String = "b".repeat(d);
            MedianContext::build(&Dataset::from_strs(&[a, b], None).unwrap())
        };
        let rep = min_dispersion_dispatch_exact(&wide(100), 4, r(1, 2), r(1, 8), 0, &lim).unwrap();
        assert_eq!(rep.strategy, "sample");
        let rep = min_dispersion_dispatch_exact(&wide(80), 4, r(1, 2), r(1, 8), 0, &lim).unwrap();
        assert_eq!((rep.strategy.as_str(), rep.notes.len()), ("sample", 0));
        // Just under the threshold: enumeration is attempted, overflows the cap, sampling takes over.
        let rep = min_dispersion_dispatch_exact(&wide(79), 4, r(1, 2), r(1, 8), 0, &lim).unwrap();
        assert_eq!((rep.strategy.as_str(), rep.notes.len()), ("sample", 1));
        let rep = min_dispersion_dispatch_exact(&wide(10), 4, r(1, 2), r(1, 8), 0, &lim).unwrap();
        assert_eq!(rep.strategy, "enumeration+greedy");
    }

    #[test]
    fn approx_dispatch_branches() {
        let lim = EnumerationLimits::default();
        let c = ctx(&["ab", "ba"]);
        let b = Budget::new(Rational::zero(), c.opt());
        let rep = min_dispersion_dispatch_approx(&c, &b, 2, r(1, 2), r(1, 8), 0, false, &lim).unwrap();
        assert_eq!(rep.strategy, "dp");
        let c = ctx(&["aaaa", "bbbb"]);
        let b = Budget::new(Rational::zero(), c.opt());
        let rep = min_dispersion_dispatch_approx(&c, &b, 3, r(1, 2), r(1, 8), 0, false, &lim).unwrap();
        assert_eq!((rep.d_star, rep.strategy.as_str()), (4, "enumeration+greedy"));
        let a = "a".repeat(200);
        let bb = "b".repeat(200);
        let c = MedianContext::build(&Dataset::from_strs(&[a, bb], None).unwrap());
        let b = Budget::new(r(1, 4), c.opt());
        let rep = min_dispersion_dispatch_approx(&c, &b, 4, r(1, 2), r(1, 8), 0, false, &lim).unwrap();
        assert_eq!(rep.strategy, "sample");
        assert_eq!(rep.cost_class.epsilon, r(1, 2));
        assert!(rep.set.costs().iter().all(|&x| rep.cost_class.admits(c.opt(), x)));
    }
}
