#![allow(dead_code)]

use diverse_medians::metrics::hamming;
use diverse_medians::{Dataset, Rational, Sym};
use proptest::prelude::*;

pub fn dataset(max_n: usize, max_d: usize, sigmas: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Dataset> {
    (1..=max_n, 1..=max_d, sigmas).prop_flat_map(|(n, d, sigma)| {
        prop::collection::vec(prop::collection::vec(0..sigma as Sym, d), n)
            .prop_map(move |rows| Dataset::from_ids(rows, sigma).unwrap())
    })
}

pub fn epsilon() -> impl Strategy<Value = Rational> {
    (0u64..=6, 1u64..=4).prop_map(|(p, q)| Rational::new(p, q).unwrap())
}

pub fn every_string(d: usize, sigma: usize) -> Vec<Vec<Sym>> {
    let mut out: Vec<Vec<Sym>> = vec![vec![]];
    for _ in 0..d {
        out = out
            .into_iter()
            .flat_map(|p| {
                (0..sigma as Sym).map(move |a| {
                    let mut q = p.clone();
                    q.push(a);
                    q
                })
            })
            .collect();
    }
    out
}

pub fn direct_cost(ds: &Dataset, s: &[Sym]) -> u64 {
    ds.rows().iter().map(|x| hamming(x, s) as u64).sum()
}

pub fn brute_opt(ds: &Dataset) -> u64 {
    every_string(ds.d(), ds.sigma()).iter().map(|s| direct_cost(ds, s)).min().unwrap()
}

/// Cost `≤ (1+ε)·opt`, decided by cross-multiplication.
pub fn admits(opt: u64, eps: Rational, cost: u64) -> bool {
    cost >= opt && cost as u128 * eps.denom() as u128 <= (eps.numer() as u128 + eps.denom() as u128) * opt as u128
}

/// All `(1+ε)`-approximate medians, sorted, by filtering the whole space.
pub fn pool(ds: &Dataset, eps: Rational) -> Vec<Vec<Sym>> {
    let opt = brute_opt(ds);
    every_string(ds.d(), ds.sigma()).into_iter().filter(|s| admits(opt, eps, direct_cost(ds, s))).collect()
}

pub fn column_counts(ds: &Dataset, i: usize) -> Vec<usize> {
    let mut c = vec![0; ds.sigma()];
    for x in ds.rows() {
        c[x[i] as usize] += 1;
    }
    c
}

/// Whether `s` has a most frequent symbol at every index.
pub fn is_exact_median(ds: &Dataset, s: &[Sym]) -> bool {
    (0..ds.d()).all(|i| {
        let c = column_counts(ds, i);
        c[s[i] as usize] == *c.iter().max().unwrap()
    })
}

/// Largest minimum pairwise distance over `k`-subsets of the pool, 0 if the
/// pool is smaller than `k`.
pub fn naive_mindp(pool: &[Vec<Sym>], k: usize) -> usize {
    fn go(pool: &[Vec<Sym>], k: usize, start: usize, chosen: &mut Vec<usize>, best: &mut usize) {
        if chosen.len() == k {
            let mut m = usize::MAX;
            for a in 0..k {
                for b in a + 1..k {
                    m = m.min(hamming(&pool[chosen[a]], &pool[chosen[b]]));
                }
            }
            *best = (*best).max(m);
            return;
        }
        for p in start..pool.len() {
            chosen.push(p);
            go(pool, k, p + 1, chosen, best);
            chosen.pop();
        }
    }
    let mut best = 0;
    go(pool, k, 0, &mut Vec::new(), &mut best);
    best
}

/// Largest sum of pairwise distances over `k`-multisets of the pool.
pub fn naive_sumdp(pool: &[Vec<Sym>], k: usize) -> u64 {
    fn go(pool: &[Vec<Sym>], k: usize, start: usize, chosen: &mut Vec<usize>, best: &mut u64) {
        if chosen.len() == k {
            let mut s = 0;
            for a in 0..k {
                for b in a + 1..k {
                    s += hamming(&pool[chosen[a]], &pool[chosen[b]]) as u64;
                }
            }
            *best = (*best).max(s);
            return;
        }
        for p in start..pool.len() {
            chosen.push(p);
            go(pool, k, p, chosen, best);
            chosen.pop();
        }
    }
    let mut best = 0;
    go(pool, k, 0, &mut Vec::new(), &mut best);
    best
}
