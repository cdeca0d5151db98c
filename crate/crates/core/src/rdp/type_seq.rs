use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{Error, Result};

/// Runs at least this long are written with a bracketed exponent.
const RUN_COMPRESS_MIN: usize = 3;

/// The type `(p_1, p_2, ...)` of a pair or configuration.
///
/// Entries are positive; trailing zeros are dropped on construction and the
/// empty sequence is the type of a smooth pair. Renders with bracketed
/// exponents for repeated runs, e.g. `(2,1^[4])` for `(2,1,1,1,1)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TypeSequence(Vec<u64>);

impl TypeSequence {
    pub fn new(mut entries: Vec<u64>) -> Result<Self> {
        while entries.last() == Some(&0) {
            entries.pop();
        }
        if entries.contains(&0) {
            return Err(Error::Domain(format!(
                "type sequence {entries:?} has an interior zero"
            )));
        }
        Ok(TypeSequence(entries))
    }

    pub fn empty() -> Self {
        TypeSequence(Vec::new())
    }

    pub fn entries(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `p_i` with 1-based indexing; zero past the end.
    pub fn get(&self, i: usize) -> u64 {
        assert!(i >= 1, "type entries are indexed from 1");
        self.0.get(i - 1).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }

    pub fn first(&self) -> u64 {
        self.0.first().copied().unwrap_or(0)
    }

    pub fn is_non_increasing(&self) -> bool {
        self.0.windows(2).all(|w| w[0] >= w[1])
    }

    /// Componentwise sum, zero-extending the shorter operand.
    pub fn add(&self, other: &TypeSequence) -> TypeSequence {
        let len = self.len().max(other.len());
        let entries = (1..=len).map(|i| self.get(i) + other.get(i)).collect();
        TypeSequence(entries)
    }

    pub fn scale(&self, factor: u64) -> TypeSequence {
        if factor == 0 {
            return TypeSequence::empty();
        }
        TypeSequence(self.0.iter().map(|p| p * factor).collect())
    }

    /// Componentwise `self <= other`.
    pub fn fits_within(&self, other: &TypeSequence) -> bool {
        self.len() <= other.len() && self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    /// `self` prepended with a first entry.
    pub fn prepend(&self, first: u64) -> Result<TypeSequence> {
        let mut entries = Vec::with_capacity(self.len() + 1);
        entries.push(first);
        entries.extend_from_slice(&self.0);
        TypeSequence::new(entries)
    }

    /// `sum_k p_k / (k (k + 1))` in exact arithmetic.
    pub fn weighted_sum(&self) -> Rational {
        self.weighted_sum_to(self.len())
    }

    /// The weighted sum over the first `limit` entries only.
    pub fn weighted_sum_to(&self, limit: usize) -> Rational {
        self.0
            .iter()
            .take(limit)
            .zip(1u64..)
            .map(|(&p, k)| Rational::from(p as i64) * Rational::harmonic_weight(k))
            .sum()
    }

    /// Maximal runs `(value, length)`.
    pub fn runs(&self) -> Vec<(u64, usize)> {
        let mut out: Vec<(u64, usize)> = Vec::new();
        for &p in &self.0 {
            match out.last_mut() {
                Some((v, n)) if *v == p => *n += 1,
                _ => out.push((p, 1)),
            }
        }
        out
    }
}

impl fmt::Display for TypeSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        for (v, n) in self.runs() {
            if n >= RUN_COMPRESS_MIN {
                parts.push(format!("{v}^[{n}]"));
            } else {
                parts.extend(std::iter::repeat_n(v.to_string(), n));
            }
        }
        write!(f, "({})", parts.join(","))
    }
}

impl FromStr for TypeSequence {
    type Err = Error;

    /// Accepts `(9,9,1)`, `(2,1^[4])`, `(2,1^{[4]})` and the bare `9,9,1`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid type sequence {s:?}"));
        let body = s.trim();
        let body = body
            .strip_prefix('(')
            .and_then(|b| b.strip_suffix(')'))
            .unwrap_or(body)
            .trim();
        if body.is_empty() {
            return Ok(TypeSequence::empty());
        }
        let mut entries = Vec::new();
        for token in body.split(',') {
            let token = token.trim();
            let (value, count) = match token.split_once('^') {
                Some((v, e)) => {
                    let e = e.trim().trim_start_matches('{').trim_end_matches('}');
                    let e = e
                        .strip_prefix('[')
                        .and_then(|e| e.strip_suffix(']'))
                        .ok_or_else(bad)?;
                    (v.trim(), e.trim().parse::<usize>().map_err(|_| bad())?)
                }
                None => (token, 1),
            };
            let value = value.parse::<u64>().map_err(|_| bad())?;
            entries.extend(std::iter::repeat_n(value, count));
        }
        TypeSequence::new(entries)
    }
}

impl Serialize for TypeSequence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TypeSequence {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
