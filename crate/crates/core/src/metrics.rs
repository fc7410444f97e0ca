//! Hamming distance and the two dispersion measures.

use crate::dataset::Sym;
use crate::error::{Error, Result};

/// Number of mismatching positions. Panics on unequal lengths.
pub fn hamming(s: &[Sym], t: &[Sym]) -> usize {
    assert_eq!(s.len(), t.len(), "hamming on strings of unequal length");
    s.iter().zip(t).filter(|(a, b)| a != b).count()
}

/// Sum of distances over unordered pairs.
pub fn sum_dispersion<S: AsRef<[Sym]>>(set: &[S]) -> u64 {
    let mut total = 0u64;
    for (i, a) in set.iter().enumerate() {
        for b in &set[i + 1..] {
            total += hamming(a.as_ref(), b.as_ref()) as u64;
        }
    }
    total
}

/// Minimum distance over unordered pairs; duplicates give 0.
pub fn min_dispersion<S: AsRef<[Sym]>>(set: &[S]) -> Result<usize> {
    if set.len() < 2 {
        return Err(Error::InvalidParameter("min dispersion needs at least two strings".into()));
    }
    let mut best = usize::MAX;
    for (i, a) in set.iter().enumerate() {
        for b in &set[i + 1..] {
            best = best.min(hamming(a.as_ref(), b.as_ref()));
            if best == 0 {
                return Ok(0);
            }
        }
    }
    Ok(best)
}

/// Largest pairwise distance; 0 for fewer than two strings.
pub fn diameter<S: AsRef<[Sym]>>(set: &[S]) -> usize {
    let mut best = 0;
    for (i, a) in set.iter().enumerate() {
        for b in &set[i + 1..] {
            best = best.max(hamming(a.as_ref(), b.as_ref()));
        }
    }
    best
}
