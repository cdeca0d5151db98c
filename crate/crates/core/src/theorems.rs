//! Numerical constraints on a smooth curve `C` of degree `d` and genus `g`
//! that is set-theoretically the intersection of surfaces `S`, `T` of
//! degrees `s`, `t`, and the case analyses built on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{bigint_json, pow2, Rational};
use crate::chow::multiplicity;
use crate::error::{domain, Error, Result};
use crate::rdp::{universe, ConfigInvariants, Configuration, RdpPair, TypeSequence};

/// Degrees `(s, t)` of the surfaces, `(d, g)` of the curve, and `n = st/d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct StciParams {
    pub s: u64,
    pub t: u64,
    pub d: u64,
    pub g: u64,
    pub n: u64,
}

impl StciParams {
    pub fn new(s: u64, t: u64, d: u64, g: u64) -> Result<Self> {
        if s == 0 || t == 0 || d == 0 {
            return Err(domain(format!(
                "degrees must be positive, got s={s}, t={t}, d={d}"
            )));
        }
        let n = multiplicity(s, t, d)? as u64;
        Ok(StciParams { s, t, d, g, n })
    }

    /// `S` and `T` exchanged.
    pub fn swapped(&self) -> Self {
        StciParams {
            s: self.t,
            t: self.s,
            ..*self
        }
    }

    fn big(&self) -> (BigInt, BigInt, BigInt, BigInt, BigInt) {
        (
            self.s.into(),
            self.t.into(),
            self.d.into(),
            self.g.into(),
            self.n.into(),
        )
    }

    fn require_n_at_least_two(&self) -> Result<()> {
        if self.n < 2 {
            return Err(domain(format!(
                "n = st/d = {} makes C a complete intersection; the bound is vacuous",
                self.n
            )));
        }
        Ok(())
    }

    /// `d[n(s-4)+t] + (2-2g)n`.
    pub fn bracket(&self) -> BigInt {
        let (s, t, d, g, n) = self.big();
        &d * (&n * (s - 4) + t) + (BigInt::from(2) - 2 * g) * n
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm1Value {
    pub params: StciParams,
    pub value: Rational,
    pub integral: bool,
}

/// The common value `{d[n(s-4)+t] + (2-2g)n}/(n-1)` of `p_1, ..., p_{n-1}`
/// when the singular loci of `S` and `T` are disjoint.
pub fn thm1_value(params: &StciParams) -> Result<Thm1Value> {
    params.require_n_at_least_two()?;
    let value = Rational::new(params.bracket(), params.n - 1)?;
    Ok(Thm1Value {
        params: *params,
        integral: value.is_integer(),
        value,
    })
}

/// Both sides of the `k`-th inequality, `k = 1..n-1`, and their difference.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm2Report {
    pub params: StciParams,
    pub p: TypeSequence,
    #[serde(with = "bigint_json::vec")]
    pub lhs: Vec<BigInt>,
    #[serde(with = "bigint_json::vec")]
    pub rhs: Vec<BigInt>,
    #[serde(with = "bigint_json::vec")]
    pub margins: Vec<BigInt>,
    pub holds: bool,
}

/// `sum_{i<k} 2^{k-i-1}(n-i+1) p_i + (n-k) p_k >= 2^{k-1}{dt + n[d(s-4)+2-2g]}`
/// for `k = 1..n-1`, with `p` zero-padded.
pub fn thm2_margins(params: &StciParams, p: &TypeSequence) -> Result<Thm2Report> {
    params.require_n_at_least_two()?;
    let (s, t, d, g, n) = params.big();
    let constant = &d * &t + &n * (&d * (s - 4) + 2 - 2 * g);
    let len = (params.n - 1) as usize;
    let pk = |k: usize| BigInt::from(p.get(k));
    let mut lhs = Vec::with_capacity(len);
    // prefix_k = sum_{i<k} 2^{k-i-1}(n-i+1) p_i
    let mut prefix = BigInt::zero();
    for k in 1..=len {
        lhs.push(&prefix + (&n - k) * pk(k));
        prefix = 2 * prefix + (&n - k + 1) * pk(k);
    }
    let rhs: Vec<BigInt> = (1..=len).map(|k| pow2(k - 1) * &constant).collect();
    let margins: Vec<BigInt> = lhs.iter().zip(&rhs).map(|(l, r)| l - r).collect();
    let holds = margins.iter().all(|m| !m.is_negative());
    Ok(Thm2Report {
        params: *params,
        p: p.clone(),
        lhs,
        rhs,
        margins,
        holds,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoefficientIdentity {
    pub n: u64,
    pub k: u64,
    #[serde(with = "bigint_json")]
    pub sum: BigInt,
    #[serde(with = "bigint_json")]
    pub closed_form: BigInt,
    pub holds: bool,
}

/// `sum_{i=1}^{k-1} 2^{k-i-1}(n-i+1) = (n-1)2^{k-1} + k - n`, both sides
/// evaluated independently.
pub fn thm2_coefficient_identity(n: u64, k: u64) -> Result<CoefficientIdentity> {
    if k == 0 || k > n {
        return Err(domain(format!("need 1 <= k <= n, got n={n}, k={k}")));
    }
    let nb = BigInt::from(n);
    let sum: BigInt = (1..k)
        .map(|i| pow2((k - i - 1) as usize) * (&nb - i + 1))
        .sum();
    let closed_form = (&nb - 1) * pow2((k - 1) as usize) + k - &nb;
    Ok(CoefficientIdentity {
        n,
        k,
        holds: sum == closed_form,
        sum,
        closed_form,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Thm3Report {
    pub lhs: Rational,
    pub rhs: Rational,
    pub holds: bool,
    /// Number of type entries summed, when truncated.
    pub truncated_at: Option<usize>,
}

/// `sum_k p_k/(k(k+1)) >= d^2/s + d(s-4) + 2 - 2g`.
///
/// The sum runs over the whole (finite) type unless `truncate` limits it to
/// the first entries.
pub fn thm3_check(
    s: u64,
    d: u64,
    g: u64,
    ty: &TypeSequence,
    truncate: Option<usize>,
) -> Result<Thm3Report> {
    let rhs = thm3_rhs(s, d, g)?;
    let lhs = match truncate {
        Some(limit) => ty.weighted_sum_to(limit),
        None => ty.weighted_sum(),
    };
    Ok(Thm3Report {
        holds: lhs >= rhs,
        lhs,
        rhs,
        truncated_at: truncate,
    })
}

/// `d^2/s + d(s-4) + 2 - 2g`, which is also `Δ(S, C)`.
pub fn thm3_rhs(s: u64, d: u64, g: u64) -> Result<Rational> {
    if s == 0 {
        return Err(Error::DivisionByZero);
    }
    let (s, d, g) = (BigInt::from(s), BigInt::from(d), BigInt::from(g));
    let tail = &d * (&s - 4) + 2 - 2 * g;
    Ok(Rational::new(&d * &d, s)? + Rational::from(tail))
}

/// `(s/3)(2s^2 - 6s + 7) - 1`, an upper bound on the number of exceptional
/// curves in the minimal resolution of a degree-`s` surface with only
/// rational double points.
pub fn resolution_bound(s: u64) -> BigInt {
    let s = BigInt::from(s);
    let num: BigInt = &s * (2 * &s * &s - 6 * &s + 7);
    let (q, r) = num.div_rem(&BigInt::from(3));
    debug_assert!(r.is_zero(), "s(2s^2-6s+7) is divisible by 3");
    q - 1
}

/// `p_1 <= d(s-1) - k` with `k = 3d + (2g-2) - l`.
pub fn kformula_bound(s: u64, d: u64, g: u64, l: i64) -> BigInt {
    let (s, d, g) = (BigInt::from(s), BigInt::from(d), BigInt::from(g));
    let k = 3 * &d + 2 * g - 2 - l;
    d * (s - 1) - k
}

/// The orbifold Miyaoka-Yau bound `(2/3)s(s-1)^2` on the total contribution
/// of the singular points of a degree-`s` surface.
pub fn miyaoka_bound(s: u64) -> Rational {
    let s = BigInt::from(s);
    Rational::new(2 * &s * (&s - 1) * (&s - 1), 3).expect("nonzero denominator")
}

/// `n/4 + sum_k p_k/(k(k+1))`.
pub fn bungo_lhs(n: u64, p: &TypeSequence) -> Rational {
    Rational::new(n, 4).expect("nonzero denominator") + p.weighted_sum()
}

/// Whether `(n, p)` passes the four bungobungo constraints:
/// `5p_1 <= 45 - 2n`, `p` non-increasing, `sum p <= 19 - n` and
/// `n/4 + sum p_k/(k(k+1)) >= 6`.
pub fn bungo_admissible(n: u64, p: &TypeSequence) -> bool {
    5 * p.first() + 2 * n <= 45
        && p.is_non_increasing()
        && p.total() + n <= 19
        && bungo_lhs(n, p) >= 6
}

/// Every `(n, p)` with `p` non-increasing satisfying the constraints.
///
/// The search is finite: `sum p <= 19 - n` forces `n <= 19`, and
/// `5 p_1 <= 45` forces `p_1 <= 9`.
pub fn bungobungo_solve() -> Vec<(u64, TypeSequence)> {
    let mut out = Vec::new();
    for n in 0..=19u64 {
        let max_first = (45 - 2 * n) / 5;
        let budget = 19 - n;
        let mut stack = Vec::new();
        non_increasing(max_first, budget, &mut stack, &mut |p| {
            let ty = TypeSequence::new(p.to_vec()).expect("positive entries");
            if bungo_admissible(n, &ty) {
                out.push((n, ty));
            }
        });
    }
    out.sort();
    out
}

/// Visit every non-increasing sequence of positive integers with entries
/// at most `cap` and sum at most `budget`, including the empty one.
fn non_increasing(cap: u64, budget: u64, prefix: &mut Vec<u64>, visit: &mut impl FnMut(&[u64])) {
    visit(prefix);
    for v in (1..=cap.min(budget)).rev() {
        prefix.push(v);
        non_increasing(v, budget - v, prefix, visit);
        prefix.pop();
    }
}

/// Filters for [`config_search`]. At least one of `max_deficiency` and
/// `max_sigma` must be set so the search is finite.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigConstraints {
    pub max_deficiency: Option<i64>,
    pub max_sigma: Option<u64>,
    pub require_delta: Option<Rational>,
    /// Keep configurations whose A-species Miyaoka sum is at most this.
    /// Configurations with D or E members have no computable sum and are kept.
    pub miyaoka_budget: Option<Rational>,
    pub must_contain: Vec<RdpPair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfigMatch {
    pub configuration: Configuration,
    pub invariants: ConfigInvariants,
    pub miyaoka: Option<Rational>,
}

/// All configurations whose type is exactly `target` and which pass the
/// constraints, in canonical order.
///
/// The total `sigma` equals `target.total() + deficiency`, so a deficiency
/// cap also caps `sigma`; only pairs whose type fits inside the remaining
/// target are tried.
pub fn config_search(target: &TypeSequence, cons: &ConfigConstraints) -> Result<Vec<ConfigMatch>> {
    if target.is_empty() {
        return Err(domain("target type must be nonempty"));
    }
    let implied = cons
        .max_deficiency
        .map(|def| target.total() as i64 + def)
        .map(|cap| u64::try_from(cap).unwrap_or(0));
    let max_sigma = match (cons.max_sigma, implied) {
        (Some(a), Some(b)) => a.min(b),
        (Some(a), None) | (None, Some(a)) => a,
        (None, None) => {
            return Err(domain(
                "config search needs max_deficiency or max_sigma to be finite",
            ))
        }
    };
    let max_n = u32::try_from(max_sigma).map_err(|_| Error::Overflow("sigma cap"))?;
    let candidates: Vec<(RdpPair, TypeSequence)> = universe(max_n)
        .into_iter()
        .filter(|p| p.sigma() <= max_sigma)
        .map(|p| (p, p.type_seq()))
        .filter(|(_, ty)| ty.fits_within(target))
        .collect();

    let mut found = Vec::new();
    let mut current = Configuration::new();
    search(
        &candidates,
        0,
        target.entries().to_vec(),
        max_sigma,
        &mut current,
        &mut |c| found.push(c.clone()),
    );

    let mut out = Vec::new();
    for configuration in found {
        let invariants = configuration.invariants()?;
        if cons
            .max_deficiency
            .is_some_and(|m| invariants.deficiency > m)
        {
            continue;
        }
        if cons
            .require_delta
            .as_ref()
            .is_some_and(|d| &invariants.delta != d)
        {
            continue;
        }
        if cons
            .must_contain
            .iter()
            .any(|p| configuration.multiplicity(p) == 0)
        {
            continue;
        }
        let miyaoka = configuration.miyaoka_sum().ok();
        if let (Some(budget), Some(m)) = (&cons.miyaoka_budget, &miyaoka) {
            if m > budget {
                continue;
            }
        }
        out.push(ConfigMatch {
            configuration,
            invariants,
            miyaoka,
        });
    }
    out.sort_by(|a, b| a.configuration.cmp(&b.configuration));
    Ok(out)
}

fn search(
    cands: &[(RdpPair, TypeSequence)],
    from: usize,
    remaining: Vec<u64>,
    sigma_left: u64,
    current: &mut Configuration,
    emit: &mut impl FnMut(&Configuration),
) {
    if remaining.iter().all(|&r| r == 0) {
        emit(current);
        return;
    }
    // only pairs at least as long as the last nonzero slot can clear it
    let need = remaining
        .iter()
        .rposition(|&r| r > 0)
        .expect("nonzero entry")
        + 1;
    if !cands[from..].iter().any(|(_, t)| t.len() >= need) {
        return;
    }
    for (idx, (pair, ty)) in cands.iter().enumerate().skip(from) {
        if pair.sigma() > sigma_left || ty.len() > remaining.len() {
            continue;
        }
        if !ty.entries().iter().zip(&remaining).all(|(a, b)| a <= b) {
            continue;
        }
        let mut next = remaining.clone();
        for (slot, v) in next.iter_mut().zip(ty.entries()) {
            *slot -= v;
        }
        current.add(*pair, 1);
        search(cands, idx, next, sigma_left - pair.sigma(), current, emit);
        current.remove_one(pair);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ThmAStatus {
    /// `d <= g + 3` holds outright.
    Trivial,
    /// `n = 1`, `s <= 3` or `s > t`: outside the range the algebraic bound covers.
    OutOfScope,
    /// The algebraic hypotheses fail, so nothing is forced.
    HypothesesFail,
    /// Hypotheses hold and `d <= g + 3` follows.
    Concluded,
    /// Hypotheses hold yet `d >= g + 4`; never produced for valid input.
    Counterexample,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ThmAVerdict {
    pub params: StciParams,
    pub status: ThmAStatus,
    /// Whether the algebraic bound applies to these parameters.
    pub applies: bool,
    /// `d <= g + 3`.
    pub conclusion: bool,
    #[serde(with = "bigint_json")]
    pub r: BigInt,
    #[serde(with = "bigint_json")]
    pub bound: BigInt,
    pub witness: String,
}

/// `t >= s >= 4`, `n >= 2` and `r = d[n(s-4)+t] + (2-2g)n <= resolution_bound(s)`.
pub fn murky_hypotheses(p: &StciParams) -> bool {
    p.t >= p.s && p.s >= 4 && p.n >= 2 && p.bracket() <= resolution_bound(p.s)
}

pub fn thma_verdict(p: &StciParams) -> ThmAVerdict {
    let r = p.bracket();
    let bound = resolution_bound(p.s);
    let conclusion = p.d <= p.g + 3;
    let scope = if p.n < 2 {
        Some("n = 1: C is a complete intersection".to_string())
    } else if p.s <= 3 {
        Some(format!(
            "s = {} <= 3 is settled by the low-degree classification",
            p.s
        ))
    } else if p.s > p.t {
        Some(format!(
            "the statement orders the surfaces by degree, but s = {} > t = {}",
            p.s, p.t
        ))
    } else {
        None
    };
    let (status, applies, witness) = match scope {
        Some(why) => (ThmAStatus::OutOfScope, false, why),
        None if r > bound => (
            ThmAStatus::HypothesesFail,
            false,
            format!("r = {r} exceeds the resolution bound {bound}"),
        ),
        None if conclusion => (
            ThmAStatus::Concluded,
            true,
            format!(
                "r = {r} <= {bound}, hence d = {} <= g + 3 = {}",
                p.d,
                p.g + 3
            ),
        ),
        None => (
            ThmAStatus::Counterexample,
            true,
            format!("r = {r} <= {bound} but d = {} > g + 3 = {}", p.d, p.g + 3),
        ),
    };
    let status =
        if status != ThmAStatus::Concluded && status != ThmAStatus::Counterexample && conclusion {
            ThmAStatus::Trivial
        } else {
            status
        };
    ThmAVerdict {
        params: *p,
        status,
        applies,
        conclusion,
        r,
        bound,
        witness,
    }
}

/// Every `(s, t, d, g)` with `4 <= s <= t <= max`, `d, g <= max` meeting
/// the algebraic hypotheses with `d >= g + 4`. Evaluated with checked
/// 128-bit arithmetic, which is exact for any box that does not overflow.
pub fn murky_scan(max: u64) -> Result<Vec<(u64, u64, u64, u64)>> {
    use rayon::prelude::*;
    let per_s: Vec<Result<Vec<_>>> = (4..=max)
        .into_par_iter()
        .map(|s| {
            let mut hits = Vec::new();
            let bound = resolution_bound_i128(s)?;
            for t in s..=max {
                for d in 1..=max {
                    let st = s as i128 * t as i128;
                    if st % d as i128 != 0 {
                        continue;
                    }
                    let n = st / d as i128;
                    if n < 2 {
                        continue;
                    }
                    for g in 0..=max {
                        if d < g + 4 {
                            break;
                        }
                        let r = murky_r_i128(s, t, d, g, n).ok_or(Error::Overflow("murky scan"))?;
                        if r <= bound {
                            hits.push((s, t, d, g));
                        }
                    }
                }
            }
            Ok(hits)
        })
        .collect();
    let mut out = Vec::new();
    for hits in per_s {
        out.extend(hits?);
    }
    out.sort();
    Ok(out)
}

fn murky_r_i128(s: u64, t: u64, d: u64, g: u64, n: i128) -> Option<i128> {
    let inner = n.checked_mul(s as i128 - 4)?.checked_add(t as i128)?;
    let first = (d as i128).checked_mul(inner)?;
    let second = (2 - 2 * g as i128).checked_mul(n)?;
    first.checked_add(second)
}

fn resolution_bound_i128(s: u64) -> Result<i128> {
    i128::try_from(resolution_bound(s)).map_err(|_| Error::Overflow("resolution bound"))
}
