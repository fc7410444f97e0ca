//! Exact rational parameters and the cost budget they induce.

use std::fmt;
use std::str::FromStr;

use num_rational::Ratio;
use num_traits::{CheckedAdd, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Nonnegative exact rational, always reduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rational(Ratio<u64>);

impl Rational {
    pub fn new(num: u64, den: u64) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        Ok(Rational(Ratio::new(num, den)))
    }

    /// Reduces a wide fraction, failing if the reduced parts exceed 64 bits.
    pub fn reduced(num: u128, den: u128) -> Result<Self> {
        if den == 0 {
            return Err(Error::InvalidParameter("zero denominator".into()));
        }
        let r = Ratio::new(num, den);
        let num = u64::try_from(*r.numer()).map_err(|_| overflow())?;
        let den = u64::try_from(*r.denom()).map_err(|_| overflow())?;
        Rational::new(num, den)
    }

    pub fn integer(v: u64) -> Self {
        Rational(Ratio::from_integer(v))
    }

    pub fn zero() -> Self {
        Rational(Ratio::zero())
    }

    pub fn numer(&self) -> u64 {
        *self.0.numer()
    }

    pub fn denom(&self) -> u64 {
        *self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        self.numer() as f64 / self.denom() as f64
    }

    /// `self * m`, failing on overflow.
    pub fn scale(&self, m: u64) -> Result<Self> {
        let num = self.numer().checked_mul(m).ok_or_else(overflow)?;
        Rational::new(num, self.denom())
    }

    pub fn checked_add(&self, other: &Rational) -> Result<Self> {
        self.0.checked_add(&other.0).map(Rational).ok_or_else(overflow)
    }

    /// `v * self <= bound` decided exactly.
    pub fn times_le(&self, v: u64, bound: u64) -> bool {
        (v as u128) * (self.numer() as u128) <= (bound as u128) * (self.denom() as u128)
    }

    /// `v * self >= bound` decided exactly.
    pub fn times_ge(&self, v: u64, bound: u64) -> bool {
        (v as u128) * (self.numer() as u128) >= (bound as u128) * (self.denom() as u128)
    }

    /// Floor of `self * v`.
    pub fn floor_times(&self, v: u64) -> u64 {
        ((v as u128 * self.numer() as u128) / self.denom() as u128) as u64
    }
}

fn overflow() -> Error {
    Error::InvalidParameter("rational parameter overflows 64-bit arithmetic".into())
}

impl fmt::Display for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.denom() == 1 {
            write!(f, "{}", self.numer())
        } else {
            write!(f, "{}/{}", self.numer(), self.denom())
        }
    }
}

/// Accepts `p/q`, an integer, or a plain decimal such as `0.125`.
impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidParameter(format!("cannot parse {s:?} as a nonnegative rational"));
        let digits = |t: &str| -> Result<u64> {
            if t.is_empty() || !t.bytes().all(|b| b.is_ascii_digit()) {
                return Err(bad());
            }
            t.parse::<u64>().map_err(|_| bad())
        };
        if let Some((p, q)) = s.split_once('/') {
            let q = digits(q.trim())?;
            if q == 0 {
                return Err(Error::InvalidParameter(format!("zero denominator in {s:?}")));
            }
            return Rational::new(digits(p.trim())?, q);
        }
        if let Some((whole, frac)) = s.split_once('.') {
            if whole.is_empty() && frac.is_empty() {
                return Err(bad());
            }
            let whole = if whole.is_empty() { 0 } else { digits(whole)? };
            let frac_digits = frac.len() as u32;
            let frac = if frac.is_empty() { 0 } else { digits(frac)? };
            let den = 10u64.checked_pow(frac_digits).ok_or_else(bad)?;
            let num = whole.checked_mul(den).and_then(|v| v.checked_add(frac)).ok_or_else(bad)?;
            return Rational::new(num, den);
        }
        Ok(Rational::integer(digits(s)?))
    }
}

impl Serialize for Rational {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        ser.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(de)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// The budget `ε·opt` on total deviation weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    epsilon: Rational,
    opt: u64,
}

impl Budget {
    pub fn new(epsilon: Rational, opt: u64) -> Self {
        Budget { epsilon, opt }
    }

    pub fn epsilon(&self) -> Rational {
        self.epsilon
    }

    pub fn opt(&self) -> u64 {
        self.opt
    }

    /// `(p·opt, q)`: a weight sum `W` fits iff `q·W ≤ p·opt`.
    pub fn threshold(&self) -> (u128, u128) {
        (self.epsilon.numer() as u128 * self.opt as u128, self.epsilon.denom() as u128)
    }

    /// Whether a deviation weight sum fits.
    pub fn fits(&self, weight: u64) -> bool {
        let (num, den) = self.threshold();
        den * weight as u128 <= num
    }

    /// Whether a weight sum fits `factor` times the budget.
    pub fn fits_scaled(&self, weight: u64, factor: u64) -> bool {
        let (num, den) = self.threshold();
        den * weight as u128 <= num * factor as u128
    }

    /// Largest integer deviation weight that fits.
    pub fn slack(&self) -> u64 {
        let (num, den) = self.threshold();
        (num / den) as u64
    }

    /// Whether a full median cost lies within `(1+ε)·opt`.
    pub fn admits_cost(&self, cost: u64) -> bool {
        cost >= self.opt && self.fits(cost - self.opt)
    }

    /// The same opt with a different ε.
    pub fn with_epsilon(&self, epsilon: Rational) -> Budget {
        Budget { epsilon, opt: self.opt }
    }
}
