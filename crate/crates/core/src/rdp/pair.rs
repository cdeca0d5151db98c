use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::Rational;
use crate::error::{domain, Error, Result};

use super::phi::{canonical_k, phi};
use super::TypeSequence;

/// A classified rational double point surface-curve pair.
///
/// The variant order (A, D first, D last, E6, E7) is the canonical sort
/// order used when rendering configurations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RdpPair {
    /// `A(n, k)` with `1 <= k <= (n + 1) / 2`.
    A {
        n: u32,
        k: u32,
    },
    /// `D(n, 1)`, `n >= 4`.
    DFirst {
        n: u32,
    },
    /// `D(n, n)`, `n >= 5`.
    DLast {
        n: u32,
    },
    E6,
    E7,
}

/// Order, self-intersection defect, resolution size and deficiency of a pair.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalarInvariants {
    pub order: u64,
    pub delta: Rational,
    pub sigma: u64,
    pub deficiency: i64,
}

impl RdpPair {
    /// `A(n, k)`, reflecting `k > (n + 1) / 2` to `n - k + 1`.
    pub fn a(n: u32, k: u32) -> Result<Self> {
        if n == 0 || k == 0 || k > n {
            return Err(domain(format!(
                "A(n,k) needs 1 <= k <= n, got n={n}, k={k}"
            )));
        }
        let k = canonical_k(n as u64, k as u64) as u32;
        Ok(RdpPair::A { n, k })
    }

    pub fn d_first(n: u32) -> Result<Self> {
        if n < 4 {
            return Err(domain(format!("D(n,1) needs n >= 4, got n={n}")));
        }
        Ok(RdpPair::DFirst { n })
    }

    pub fn d_last(n: u32) -> Result<Self> {
        if n < 5 {
            return Err(domain(format!("D(n,n) needs n >= 5, got n={n}")));
        }
        Ok(RdpPair::DLast { n })
    }

    /// The type `(p_1, p_2, ...)`.
    pub fn type_seq(&self) -> TypeSequence {
        let entries = match *self {
            RdpPair::A { n, k } => {
                return phi(n as u64, k as u64).expect("validated A pair lies in phi's domain")
            }
            RdpPair::DFirst { .. } => vec![2],
            RdpPair::DLast { n } if n % 2 == 0 => vec![(n / 2) as u64],
            RdpPair::DLast { n } => {
                let mut v = vec![((n - 1) / 2) as u64];
                v.extend(std::iter::repeat_n(1, (n - 1) as usize));
                v
            }
            RdpPair::E6 => vec![2, 2],
            RdpPair::E7 => vec![3],
        };
        TypeSequence::new(entries).expect("table entries are positive")
    }

    /// Least `m` with `mC` Cartier near the point.
    pub fn order(&self) -> u64 {
        match *self {
            RdpPair::A { n, k } => {
                let m = n as u64 + 1;
                m / m.gcd(&(k as u64))
            }
            RdpPair::DFirst { .. } => 2,
            RdpPair::DLast { n } if n % 2 == 0 => 2,
            RdpPair::DLast { .. } => 4,
            RdpPair::E6 => 3,
            RdpPair::E7 => 2,
        }
    }

    pub fn delta(&self) -> Rational {
        let q = |p: u64, r: u64| Rational::new(p, r).expect("nonzero denominator");
        match *self {
            RdpPair::A { n, k } => {
                let (n, k) = (n as u64, k as u64);
                q(k * (n - k + 1), n + 1)
            }
            RdpPair::DFirst { .. } => Rational::one(),
            RdpPair::DLast { n } => q(n as u64, 4),
            RdpPair::E6 => q(4, 3),
            RdpPair::E7 => q(3, 2),
        }
    }

    /// Number of exceptional curves in the minimal resolution.
    pub fn sigma(&self) -> u64 {
        match *self {
            RdpPair::A { n, .. } | RdpPair::DFirst { n } | RdpPair::DLast { n } => n as u64,
            RdpPair::E6 => 6,
            RdpPair::E7 => 7,
        }
    }

    /// `sigma - (p_1 + p_2 + ...)`; negative only for `D(n,n)` with odd `n`.
    pub fn deficiency(&self) -> i64 {
        self.sigma() as i64 - self.type_seq().total() as i64
    }

    pub fn scalar_invariants(&self) -> ScalarInvariants {
        ScalarInvariants {
            order: self.order(),
            delta: self.delta(),
            sigma: self.sigma(),
            deficiency: self.deficiency(),
        }
    }

    /// The pair obtained by blowing up along the curve; `None` when the
    /// blowup is smooth along the strict transform.
    pub fn blowup(&self) -> Option<RdpPair> {
        match *self {
            RdpPair::A { n, k } => {
                if 2 * k == n + 1 {
                    None
                } else if n - k + 1 < 2 * k {
                    Some(RdpPair::A {
                        n: n - k,
                        k: n - 2 * k + 1,
                    })
                } else {
                    Some(RdpPair::A { n: n - k, k })
                }
            }
            RdpPair::DFirst { .. } => None,
            RdpPair::DLast { n } if n % 2 == 0 => None,
            RdpPair::DLast { n } => Some(RdpPair::A { n: n - 1, k: 1 }),
            RdpPair::E6 => Some(RdpPair::A { n: 3, k: 2 }),
            RdpPair::E7 => None,
        }
    }

    /// The contribution `(n + 1) - 1/(n + 1)` of an `A_n` point to the
    /// orbifold Miyaoka bound. Only the A species is supported.
    pub fn miyaoka_contribution(&self) -> Result<Rational> {
        match *self {
            RdpPair::A { n, .. } => {
                let m = n as i64 + 1;
                Ok(Rational::from(m) - Rational::new(1, m)?)
            }
            other => Err(Error::Unsupported(format!(
                "Miyaoka contribution of {other} (only A species are supported)"
            ))),
        }
    }

    pub fn is_a(&self) -> bool {
        matches!(self, RdpPair::A { .. })
    }
}

impl fmt::Display for RdpPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RdpPair::A { n, k } => write!(f, "A:{n}:{k}"),
            RdpPair::DFirst { n } => write!(f, "D1:{n}"),
            RdpPair::DLast { n } => write!(f, "Dn:{n}"),
            RdpPair::E6 => write!(f, "E6"),
            RdpPair::E7 => write!(f, "E7"),
        }
    }
}

impl FromStr for RdpPair {
    type Err = Error;

    /// Descriptors `A:n:k`, `D1:n`, `Dn:n`, `E6`, `E7`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("invalid pair descriptor {s:?}"));
        let parts: Vec<&str> = s.trim().split(':').map(str::trim).collect();
        let num = |t: &str| t.parse::<u32>().map_err(|_| bad());
        match parts.as_slice() {
            ["A", n, k] => RdpPair::a(num(n)?, num(k)?),
            ["D1", n] => RdpPair::d_first(num(n)?),
            ["Dn", n] => RdpPair::d_last(num(n)?),
            ["E6"] => Ok(RdpPair::E6),
            ["E7"] => Ok(RdpPair::E7),
            _ => Err(bad()),
        }
    }
}

impl Serialize for RdpPair {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for RdpPair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Every valid pair whose parameter `n` is at most `max_n`, in canonical order.
pub fn universe(max_n: u32) -> Vec<RdpPair> {
    let mut out = Vec::new();
    for n in 1..=max_n {
        for k in 1..=n.div_ceil(2) {
            out.push(RdpPair::A { n, k });
        }
    }
    out.extend((4..=max_n).map(|n| RdpPair::DFirst { n }));
    out.extend((5..=max_n).map(|n| RdpPair::DLast { n }));
    out.push(RdpPair::E6);
    out.push(RdpPair::E7);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> RdpPair {
        s.parse().unwrap()
    }

    fn ts(v: &[u64]) -> TypeSequence {
        TypeSequence::new(v.to_vec()).unwrap()
    }

    fn q(s: &str) -> Rational {
        s.parse().unwrap()
    }

    #[test]
    fn classify_descriptors() {
        assert_eq!(p("A:10:7"), RdpPair::A { n: 10, k: 4 });
        assert_eq!(p("E6"), RdpPair::E6);
        assert_eq!(p("D1:6"), RdpPair::DFirst { n: 6 });
        assert_eq!(p("Dn:7"), RdpPair::DLast { n: 7 });
        assert!("Dn:4".parse::<RdpPair>().is_err());
        assert!("D1:3".parse::<RdpPair>().is_err());
        assert!("A:3:4".parse::<RdpPair>().is_err());
        assert!("A:0:0".parse::<RdpPair>().is_err());
        assert!("E8".parse::<RdpPair>().is_err());
        assert!("A:3".parse::<RdpPair>().is_err());
    }

    #[test]
    fn types_from_the_table() {
        assert_eq!(p("Dn:5").type_seq(), ts(&[2, 1, 1, 1, 1]));
        assert_eq!(p("Dn:8").type_seq(), ts(&[4]));
        assert_eq!(p("D1:9").type_seq(), ts(&[2]));
        assert_eq!(p("E6").type_seq(), ts(&[2, 2]));
        assert_eq!(p("E7").type_seq(), ts(&[3]));
        assert_eq!(p("A:3:1").type_seq(), ts(&[1, 1, 1]));
        assert_eq!(p("A:7:2").type_seq(), ts(&[2, 2, 2]));
        assert_eq!(p("A:4:2").type_seq(), ts(&[2, 1, 1]));
    }

    #[test]
    fn scalar_invariants_examples() {
        let a21 = p("A:2:1").scalar_invariants();
        assert_eq!(
            a21,
            ScalarInvariants {
                order: 3,
                delta: q("2/3"),
                sigma: 2,
                deficiency: 0
            }
        );

        let d7 = p("Dn:7").scalar_invariants();
        assert_eq!(
            d7,
            ScalarInvariants {
                order: 4,
                delta: q("7/4"),
                sigma: 7,
                deficiency: -2
            }
        );

        let e7 = p("E7").scalar_invariants();
        assert_eq!(
            e7,
            ScalarInvariants {
                order: 2,
                delta: q("3/2"),
                sigma: 7,
                deficiency: 4
            }
        );

        assert_eq!(p("E6").scalar_invariants().order, 3);
        assert_eq!(p("E6").deficiency(), 2);
        assert_eq!(p("D1:4").delta(), 1);
        assert_eq!(p("Dn:6").order(), 2);
    }

    #[test]
    fn blowup_list() {
        assert_eq!(p("E6").blowup(), Some(RdpPair::A { n: 3, k: 2 }));
        assert_eq!(p("A:10:4").blowup(), Some(RdpPair::A { n: 6, k: 3 }));
        assert_eq!(p("Dn:7").blowup(), Some(RdpPair::A { n: 6, k: 1 }));
        assert_eq!(p("Dn:8").blowup(), None);
        assert_eq!(p("D1:8").blowup(), None);
        assert_eq!(p("E7").blowup(), None);
        assert_eq!(p("A:7:4").blowup(), None);
        assert_eq!(p("A:9:2").blowup(), Some(RdpPair::A { n: 7, k: 2 }));
    }

    #[test]
    fn miyaoka() {
        assert_eq!(p("A:1:1").miyaoka_contribution().unwrap(), q("3/2"));
        assert_eq!(p("A:2:1").miyaoka_contribution().unwrap(), q("8/3"));
        assert!(matches!(
            p("E6").miyaoka_contribution(),
            Err(Error::Unsupported(_))
        ));
        assert!(p("D1:5").miyaoka_contribution().is_err());
    }

    #[test]
    fn descriptor_round_trip() {
        for pair in universe(30) {
            assert_eq!(pair.to_string().parse::<RdpPair>().unwrap(), pair);
        }
    }
}
