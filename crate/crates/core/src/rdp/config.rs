use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{Error, Result};

use super::{RdpPair, TypeSequence};

/// A finite multiset of classified pairs, one per singular point on the curve.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Configuration {
    counts: BTreeMap<RdpPair, u64>,
}

/// Aggregated invariants of a configuration: type and the scalar invariants
/// are additive, the order is the lcm of the local orders.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigInvariants {
    #[serde(rename = "type")]
    pub type_seq: TypeSequence,
    pub order: u64,
    pub delta: Rational,
    pub sigma: u64,
    pub deficiency: i64,
}

impl Configuration {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (RdpPair, u64)>) -> Self {
        let mut c = Configuration::new();
        for (p, m) in pairs {
            c.add(p, m);
        }
        c
    }

    pub fn add(&mut self, pair: RdpPair, multiplicity: u64) {
        if multiplicity > 0 {
            *self.counts.entry(pair).or_insert(0) += multiplicity;
        }
    }

    pub fn with(mut self, pair: RdpPair, multiplicity: u64) -> Self {
        self.add(pair, multiplicity);
        self
    }

    /// Remove one copy of `pair`, returning whether it was present.
    pub fn remove_one(&mut self, pair: &RdpPair) -> bool {
        match self.counts.get_mut(pair) {
            Some(m) if *m > 1 => {
                *m -= 1;
                true
            }
            Some(_) => {
                self.counts.remove(pair);
                true
            }
            None => false,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn multiplicity(&self, pair: &RdpPair) -> u64 {
        self.counts.get(pair).copied().unwrap_or(0)
    }

    /// Distinct pairs with their multiplicities, in canonical order.
    pub fn iter(&self) -> impl Iterator<Item = (&RdpPair, u64)> {
        self.counts.iter().map(|(p, &m)| (p, m))
    }

    /// Number of points, counted with multiplicity.
    pub fn point_count(&self) -> u64 {
        self.counts.values().sum()
    }

    pub fn type_seq(&self) -> TypeSequence {
        self.iter().fold(TypeSequence::empty(), |acc, (p, m)| {
            acc.add(&p.type_seq().scale(m))
        })
    }

    pub fn order(&self) -> Result<u64> {
        self.iter().try_fold(1u64, |acc, (p, _)| {
            let o = p.order();
            let l = acc / acc.gcd(&o);
            l.checked_mul(o)
                .ok_or(Error::Overflow("configuration order"))
        })
    }

    pub fn delta(&self) -> Rational {
        self.iter()
            .map(|(p, m)| p.delta() * Rational::from(m as i64))
            .sum()
    }

    pub fn sigma(&self) -> u64 {
        self.iter().map(|(p, m)| p.sigma() * m).sum()
    }

    pub fn deficiency(&self) -> i64 {
        self.iter().map(|(p, m)| p.deficiency() * m as i64).sum()
    }

    pub fn invariants(&self) -> Result<ConfigInvariants> {
        Ok(ConfigInvariants {
            type_seq: self.type_seq(),
            order: self.order()?,
            delta: self.delta(),
            sigma: self.sigma(),
            deficiency: self.deficiency(),
        })
    }

    /// Sum of the A-species Miyaoka contributions; fails on D or E members.
    pub fn miyaoka_sum(&self) -> Result<Rational> {
        let mut total = Rational::zero();
        for (p, m) in self.iter() {
            total += &(p.miyaoka_contribution()? * Rational::from(m as i64));
        }
        Ok(total)
    }
}

impl fmt::Display for Configuration {
    /// `8*A:2:1 + A:3:1`; the empty configuration renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .iter()
            .map(|(p, m)| {
                if m == 1 {
                    p.to_string()
                } else {
                    format!("{m}*{p}")
                }
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl FromStr for Configuration {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut c = Configuration::new();
        if s.is_empty() || s == "0" {
            return Ok(c);
        }
        for term in s.split('+') {
            let term = term.trim();
            let (m, pair) = match term.split_once('*') {
                Some((m, p)) => (
                    m.trim()
                        .parse::<u64>()
                        .map_err(|_| Error::Parse(format!("invalid multiplicity in {term:?}")))?,
                    p,
                ),
                None => (1, term),
            };
            c.add(pair.parse()?, m);
        }
        Ok(c)
    }
}

impl Serialize for Configuration {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Configuration {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
