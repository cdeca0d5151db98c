//! Which degree pairs `(deg S, deg T)` can cut out a smooth curve of degree
//! `d` and genus `g` set-theoretically, when the surfaces have disjoint
//! singular loci.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Signed;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::{bigint_json, Rational};
use crate::error::{domain, Result};
use crate::theorems::StciParams;

/// The condition `(n-1) | d[n(s-4)+t] + (2-2g)n` with the right side positive.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisibilityReport {
    pub s: u64,
    pub t: u64,
    pub n: u64,
    /// `d[n(s-4)+t] + (2-2g)n`.
    #[serde(with = "bigint_json")]
    pub value: BigInt,
    pub divides: bool,
    pub positive: bool,
    pub holds: bool,
    /// `value / (n-1)`, the common value of `p_1..p_{n-1}`.
    pub p: Rational,
}

fn params_with_n(s: u64, t: u64, d: u64, g: u64) -> Result<StciParams> {
    let p = StciParams::new(s, t, d, g)?;
    if p.n < 2 {
        return Err(domain(format!(
            "n = st/d = {} < 2: C would be a complete intersection",
            p.n
        )));
    }
    Ok(p)
}

pub fn divisibility_check(s: u64, t: u64, d: u64, g: u64) -> Result<DivisibilityReport> {
    let params = params_with_n(s, t, d, g)?;
    let value = params.bracket();
    let m = BigInt::from(params.n - 1);
    let divides = value.is_multiple_of(&m);
    let positive = value.is_positive();
    let p = Rational::new(value.clone(), m)?;
    Ok(DivisibilityReport {
        s,
        t,
        n: params.n,
        value,
        divides,
        positive,
        holds: divides && positive,
        p,
    })
}

/// `C(n, 2) | st(4-s-t)/2 - n(1-g)`.
///
/// Equivalent to the `divides` part of [`divisibility_check`]; positivity is
/// a separate condition.
pub fn binomial_divisibility_check(s: u64, t: u64, d: u64, g: u64) -> Result<bool> {
    let params = params_with_n(s, t, d, g)?;
    let (sb, tb, gb, nb) = (
        BigInt::from(s),
        BigInt::from(t),
        BigInt::from(g),
        BigInt::from(params.n),
    );
    let st = &sb * &tb;
    let twice: BigInt = &st * (BigInt::from(4) - &sb - &tb);
    debug_assert!(twice.is_even());
    let target: BigInt = twice / 2 - &nb * (BigInt::from(1) - gb);
    let choose2: BigInt = &nb * (&nb - 1) / 2;
    Ok(target.is_multiple_of(&choose2))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumerateOptions {
    /// Require the condition with `S` and `T` exchanged as well.
    pub symmetric: bool,
    pub s_max: Option<u64>,
    pub t_max: Option<u64>,
}

impl Default for EnumerateOptions {
    fn default() -> Self {
        EnumerateOptions {
            symmetric: true,
            s_max: None,
            t_max: None,
        }
    }
}

/// One admissible pair `s <= t`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreePairRecord {
    pub s: u64,
    pub t: u64,
    pub n: u64,
    /// The common type value computed from `S` (degree `s` in the bracket).
    pub p_s: Rational,
    /// The same with the roles of `S` and `T` exchanged.
    pub p_t: Rational,
    pub forward_holds: bool,
    pub swapped_holds: bool,
}

/// `2d^2 - 1` and `2d^4 - 1`, the largest degrees the bounds allow.
pub fn default_bounds(d: u64) -> (u64, u64) {
    let d2 = d.saturating_mul(d);
    (
        d2.saturating_mul(2) - 1,
        d2.saturating_mul(d2).saturating_mul(2) - 1,
    )
}

/// All `(s, t)` with `3 <= s <= t`, `d | st`, `n = st/d >= 2` that pass the
/// divisibility condition (in both orientations unless `symmetric` is off),
/// sorted by `(s, t)`.
pub fn enumerate_pairs(d: u64, g: u64, opts: EnumerateOptions) -> Result<Vec<DegreePairRecord>> {
    if d == 0 {
        return Err(domain("curve degree must be positive"));
    }
    let (ds, dt) = default_bounds(d);
    let s_max = opts.s_max.unwrap_or(ds);
    let t_max = opts.t_max.unwrap_or(dt);
    let rows: Vec<Result<Vec<DegreePairRecord>>> = (3..=s_max)
        .into_par_iter()
        .map(|s| {
            let mut out = Vec::new();
            for t in s..=t_max {
                if !(s as u128 * t as u128).is_multiple_of(d as u128)
                    || (s as u128 * t as u128) < 2 * d as u128
                {
                    continue;
                }
                let fwd = divisibility_check(s, t, d, g)?;
                if !fwd.holds {
                    continue;
                }
                let back = divisibility_check(t, s, d, g)?;
                if opts.symmetric && !back.holds {
                    continue;
                }
                out.push(DegreePairRecord {
                    s,
                    t,
                    n: fwd.n,
                    p_s: fwd.p,
                    p_t: back.p,
                    forward_holds: true,
                    swapped_holds: back.holds,
                });
            }
            Ok(out)
        })
        .collect();
    let mut out = Vec::new();
    for r in rows {
        out.extend(r?);
    }
    out.sort_by_key(|r| (r.s, r.t));
    Ok(out)
}

/// `{(3,4), (3,8), ...}`.
pub fn format_pair_list(records: &[DegreePairRecord]) -> String {
    let body: Vec<String> = records
        .iter()
        .map(|r| format!("({},{})", r.s, r.t))
        .collect();
    format!("{{{}}}", body.join(", "))
}
