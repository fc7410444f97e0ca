//! Datasets of equal-length strings over an interned alphabet.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Interned symbol id. Ids follow the alphabet order, so comparing ids
/// compares symbols in the global tie-break order.
pub type Sym = u32;

/// Ordered set of symbols.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Alphabet {
    symbols: Vec<String>,
    #[serde(skip)]
    lookup: HashMap<String, Sym>,
}

impl Alphabet {
    /// Builds an alphabet in the given order. Duplicate symbols are rejected.
    pub fn new<I, S>(symbols: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut out = Alphabet { symbols: Vec::new(), lookup: HashMap::new() };
        for s in symbols {
            let s = s.into();
            if out.lookup.contains_key(&s) {
                return Err(Error::InvalidParameter(format!("duplicate alphabet symbol {s:?}")));
            }
            out.lookup.insert(s.clone(), out.symbols.len() as Sym);
            out.symbols.push(s);
        }
        if out.symbols.is_empty() {
            return Err(Error::InvalidParameter("alphabet is empty".into()));
        }
        Ok(out)
    }

    /// Alphabet made of the distinct symbols found in `rows`, sorted.
    pub fn infer<S: AsRef<str>>(rows: &[Vec<S>]) -> Result<Self> {
        let mut seen: Vec<&str> = rows.iter().flatten().map(|s| s.as_ref()).collect();
        seen.sort_unstable();
        seen.dedup();
        Alphabet::new(seen)
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    pub fn id(&self, symbol: &str) -> Option<Sym> {
        self.lookup.get(symbol).copied()
    }

    pub fn symbol(&self, id: Sym) -> &str {
        &self.symbols[id as usize]
    }

    pub fn symbols(&self) -> &[String] {
        &self.symbols
    }

    /// Renders an id sequence by concatenating the symbols.
    pub fn render(&self, s: &[Sym]) -> String {
        s.iter().map(|&a| self.symbol(a)).collect()
    }

    /// Parses a string symbol-per-char. Only meaningful for single-char alphabets.
    pub fn parse(&self, s: &str) -> Result<Vec<Sym>> {
        s.chars()
            .enumerate()
            .map(|(pos, c)| {
                let mut buf = [0u8; 4];
                self.id(c.encode_utf8(&mut buf)).ok_or_else(|| Error::ForeignSymbol {
                    row: 0,
                    position: pos,
                    symbol: c.to_string(),
                })
            })
            .collect()
    }
}

/// `n` strings of common length `d` over an alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dataset {
    alphabet: Alphabet,
    rows: Vec<Vec<Sym>>,
    d: usize,
}

impl Dataset {
    /// Validates and interns tokenized rows. With no alphabet one is inferred.
    pub fn from_tokens<S: AsRef<str>>(rows: &[Vec<S>], alphabet: Option<Alphabet>) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::InvalidParameter("strings must have length at least 1".into()));
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::RaggedLength { row, expected: d, found: r.len() });
            }
        }
        let alphabet = match alphabet {
            Some(a) => a,
            None => Alphabet::infer(rows)?,
        };
        let mut interned = Vec::with_capacity(rows.len());
        for (row, r) in rows.iter().enumerate() {
            let mut out = Vec::with_capacity(d);
            for (position, s) in r.iter().enumerate() {
                let s = s.as_ref();
                let id = alphabet.id(s).ok_or_else(|| Error::ForeignSymbol {
                    row,
                    position,
                    symbol: s.to_string(),
                })?;
                out.push(id);
            }
            interned.push(out);
        }
        Ok(Dataset { alphabet, rows: interned, d })
    }

    /// One symbol per character.
    pub fn from_strs<S: AsRef<str>>(rows: &[S], alphabet: Option<Alphabet>) -> Result<Self> {
        let tokens: Vec<Vec<String>> =
            rows.iter().map(|r| r.as_ref().chars().map(String::from).collect()).collect();
        Dataset::from_tokens(&tokens, alphabet)
    }

    /// Builds directly from interned rows over an alphabet of `sigma` symbols
    /// named `0`, `1`, ...
    pub fn from_ids(rows: Vec<Vec<Sym>>, sigma: usize) -> Result<Self> {
        let names: Vec<String> = (0..sigma).map(|a| a.to_string()).collect();
        let alphabet = Alphabet::new(names)?;
        if rows.is_empty() {
            return Err(Error::EmptyDataset);
        }
        let d = rows[0].len();
        if d == 0 {
            return Err(Error::InvalidParameter("strings must have length at least 1".into()));
        }
        for (row, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::RaggedLength { row, expected: d, found: r.len() });
            }
            if let Some((position, &a)) = r.iter().enumerate().find(|(_, &a)| a as usize >= sigma) {
                return Err(Error::ForeignSymbol { row, position, symbol: a.to_string() });
            }
        }
        Ok(Dataset { alphabet, rows, d })
    }

    pub fn n(&self) -> usize {
        self.rows.len()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn sigma(&self) -> usize {
        self.alphabet.len()
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn rows(&self) -> &[Vec<Sym>] {
        &self.rows
    }

    /// Σ_x H(x, s), straight from the definition.
    pub fn direct_cost(&self, s: &[Sym]) -> Result<u64> {
        self.check(s)?;
        Ok(self.rows.iter().map(|x| crate::metrics::hamming(x, s) as u64).sum())
    }

    /// Length and symbol range check for a candidate string.
    pub fn check(&self, s: &[Sym]) -> Result<()> {
        if s.len() != self.d {
            return Err(Error::LengthMismatch { expected: self.d, found: s.len() });
        }
        match s.iter().find(|&&a| a as usize >= self.sigma()) {
            Some(&a) => Err(Error::UnknownSymbol(a)),
            None => Ok(()),
        }
    }
}
