//! The Chow ring of `Y_n`, the `n`-fold iterated blowup of projective
//! three-space along a smooth curve of degree `d` and genus `g`.
//!
//! `A*(Y_n)` has basis `1`; `H, E_1..E_n`; `H^2, R_1..R_n`; `pt`, where `E_k`
//! is the total transform of the `k`-th exceptional divisor and `R_k` the
//! class of one of its rulings. Strict transforms such as `[E_{k,n}]` are not
//! basis elements; they are written as combinations of the above.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::bigint_json;
use crate::error::{domain, Error, Result};

/// The numerical data `(d, g, beta)` that fixes the multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlowupContext {
    #[serde(with = "bigint_json")]
    d: BigInt,
    #[serde(with = "bigint_json")]
    g: BigInt,
    #[serde(with = "bigint_json::vec")]
    beta: Vec<BigInt>,
    #[serde(with = "bigint_json::vec")]
    alpha: Vec<BigInt>,
}

/// `2 - 4d - 2g`, the constant shared by `alpha_0` and the beta formula.
fn base_constant(d: &BigInt, g: &BigInt) -> BigInt {
    BigInt::from(2) - 4 * d - 2 * g
}

impl BlowupContext {
    /// `alpha_0 = 2 - 2g - 4d`, `alpha_k = alpha_{k-1} - beta_k`.
    pub fn new(d: impl Into<BigInt>, g: impl Into<BigInt>, beta: Vec<BigInt>) -> Result<Self> {
        let (d, g) = (d.into(), g.into());
        if d < BigInt::one() {
            return Err(domain(format!("curve degree must be positive, got {d}")));
        }
        if g.is_negative() {
            return Err(domain(format!("genus must be nonnegative, got {g}")));
        }
        let mut alpha = Vec::with_capacity(beta.len() + 1);
        alpha.push(base_constant(&d, &g));
        for b in &beta {
            let next = alpha.last().expect("alpha_0 pushed") - b;
            alpha.push(next);
        }
        Ok(BlowupContext { d, g, beta, alpha })
    }

    /// The context of the blowups along `C = S ∩ T`: `n = st/d` steps with
    /// `beta` read off the type `p` of `(S, C)`, zero-padded to length `n`.
    pub fn for_surface(s: u64, t: u64, d: u64, g: u64, p: &[u64]) -> Result<Self> {
        let n = multiplicity(s, t, d)?;
        if p.len() > n {
            return Err(domain(format!(
                "type has {} entries but only n = {n} blowups",
                p.len()
            )));
        }
        let mut padded = p.to_vec();
        padded.resize(n, 0);
        BlowupContext::new(d, g, beta_from_p(s, d, g, &padded))
    }

    pub fn d(&self) -> &BigInt {
        &self.d
    }

    pub fn g(&self) -> &BigInt {
        &self.g
    }

    /// Number of blowups.
    pub fn n(&self) -> usize {
        self.beta.len()
    }

    /// `beta_1..beta_n`.
    pub fn beta(&self) -> &[BigInt] {
        &self.beta
    }

    /// `alpha_0..alpha_n`.
    pub fn alpha(&self) -> &[BigInt] {
        &self.alpha
    }

    fn b(&self, k: usize) -> &BigInt {
        &self.beta[k - 1]
    }
}

/// `n = st/d`, rejecting `d ∤ st`.
pub fn multiplicity(s: u64, t: u64, d: u64) -> Result<usize> {
    if d == 0 {
        return Err(Error::DivisionByZero);
    }
    let st = BigInt::from(s) * t;
    let (n, rem) = st.div_rem(&BigInt::from(d));
    if !rem.is_zero() {
        return Err(Error::NotDivisible(st.to_string(), d.to_string()));
    }
    usize::try_from(n).map_err(|_| Error::Overflow("blowup count"))
}

/// `beta_k = ds + (2 - 4d - 2g) - p_k`.
pub fn beta_from_p(s: u64, d: u64, g: u64, p: &[u64]) -> Vec<BigInt> {
    let (d, g) = (BigInt::from(d), BigInt::from(g));
    let head = &d * s + base_constant(&d, &g);
    p.iter().map(|&pk| &head - pk).collect()
}

/// An element of `A*(Y_n)`, possibly of mixed degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleClass {
    n: usize,
    #[serde(with = "bigint_json")]
    pub c0: BigInt,
    #[serde(with = "bigint_json")]
    pub h: BigInt,
    #[serde(with = "bigint_json::vec")]
    pub e: Vec<BigInt>,
    #[serde(with = "bigint_json")]
    pub h2: BigInt,
    #[serde(with = "bigint_json::vec")]
    pub r: Vec<BigInt>,
    #[serde(with = "bigint_json")]
    pub pt: BigInt,
}

#[derive(Clone, Copy)]
enum Basis {
    One,
    H,
    E(usize),
    H2,
    R(usize),
    Pt,
}

impl CycleClass {
    pub fn zero(n: usize) -> Self {
        CycleClass {
            n,
            c0: BigInt::zero(),
            h: BigInt::zero(),
            e: vec![BigInt::zero(); n],
            h2: BigInt::zero(),
            r: vec![BigInt::zero(); n],
            pt: BigInt::zero(),
        }
    }

    pub fn one(n: usize) -> Self {
        CycleClass {
            c0: BigInt::one(),
            ..Self::zero(n)
        }
    }

    pub fn hyperplane(n: usize) -> Self {
        CycleClass {
            h: BigInt::one(),
            ..Self::zero(n)
        }
    }

    pub fn h_squared(n: usize) -> Self {
        CycleClass {
            h2: BigInt::one(),
            ..Self::zero(n)
        }
    }

    pub fn point(n: usize) -> Self {
        CycleClass {
            pt: BigInt::one(),
            ..Self::zero(n)
        }
    }

    /// `E_k`, `1 <= k <= n`.
    pub fn exceptional(n: usize, k: usize) -> Result<Self> {
        check_index(n, k)?;
        let mut c = Self::zero(n);
        c.e[k - 1] = BigInt::one();
        Ok(c)
    }

    /// `R_k`, `1 <= k <= n`.
    pub fn ruling(n: usize, k: usize) -> Result<Self> {
        check_index(n, k)?;
        let mut c = Self::zero(n);
        c.r[k - 1] = BigInt::one();
        Ok(c)
    }

    /// A degree-two class `sum_k coeffs[k-1] R_k`.
    pub fn from_rulings(coeffs: Vec<BigInt>) -> Self {
        CycleClass {
            r: coeffs.clone(),
            ..Self::zero(coeffs.len())
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        *self == Self::zero(self.n)
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        CycleClass {
            n: self.n,
            c0: &self.c0 * c,
            h: &self.h * c,
            e: self.e.iter().map(|x| x * c).collect(),
            h2: &self.h2 * c,
            r: self.r.iter().map(|x| x * c).collect(),
            pt: &self.pt * c,
        }
    }

    /// The parts of degree 0..=3.
    fn degree_parts(&self) -> [bool; 4] {
        let nz = |v: &[BigInt]| v.iter().any(|x| !x.is_zero());
        [
            !self.c0.is_zero(),
            !self.h.is_zero() || nz(&self.e),
            !self.h2.is_zero() || nz(&self.r),
            !self.pt.is_zero(),
        ]
    }

    /// `Some(δ)` when the class is nonzero and homogeneous of degree `δ`.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let parts = self.degree_parts();
        let mut degs = (0..4).filter(|&i| parts[i]);
        let first = degs.next()?;
        degs.next().is_none().then_some(first)
    }

    /// Keep only the part of degree `deg`.
    pub fn component(&self, deg: usize) -> Self {
        let mut out = Self::zero(self.n);
        match deg {
            0 => out.c0 = self.c0.clone(),
            1 => {
                out.h = self.h.clone();
                out.e = self.e.clone();
            }
            2 => {
                out.h2 = self.h2.clone();
                out.r = self.r.clone();
            }
            3 => out.pt = self.pt.clone(),
            _ => {}
        }
        out
    }

    fn terms(&self) -> Vec<(Basis, &BigInt)> {
        let mut out = vec![(Basis::One, &self.c0), (Basis::H, &self.h)];
        out.extend(self.e.iter().enumerate().map(|(i, c)| (Basis::E(i + 1), c)));
        out.push((Basis::H2, &self.h2));
        out.extend(self.r.iter().enumerate().map(|(i, c)| (Basis::R(i + 1), c)));
        out.push((Basis::Pt, &self.pt));
        out.retain(|(_, c)| !c.is_zero());
        out
    }

    fn add_basis(&mut self, b: Basis, c: &BigInt) {
        match b {
            Basis::One => self.c0 += c,
            Basis::H => self.h += c,
            Basis::E(k) => self.e[k - 1] += c,
            Basis::H2 => self.h2 += c,
            Basis::R(k) => self.r[k - 1] += c,
            Basis::Pt => self.pt += c,
        }
    }

    fn zip_with(&self, other: &Self, f: impl Fn(&BigInt, &BigInt) -> BigInt) -> Self {
        assert_eq!(self.n, other.n, "classes from different blowup towers");
        let zip = |a: &[BigInt], b: &[BigInt]| a.iter().zip(b).map(|(x, y)| f(x, y)).collect();
        CycleClass {
            n: self.n,
            c0: f(&self.c0, &other.c0),
            h: f(&self.h, &other.h),
            e: zip(&self.e, &other.e),
            h2: f(&self.h2, &other.h2),
            r: zip(&self.r, &other.r),
            pt: f(&self.pt, &other.pt),
        }
    }

    /// Sum that reports a tower mismatch instead of panicking.
    pub fn checked_add(&self, other: &Self) -> Result<Self> {
        same_tower(self, other)?;
        Ok(self.zip_with(other, |a, b| a + b))
    }
}

fn check_index(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(domain(format!("index {k} outside 1..={n}")));
    }
    Ok(())
}

fn same_tower(x: &CycleClass, y: &CycleClass) -> Result<()> {
    if x.n != y.n {
        return Err(Error::ContextMismatch(format!(
            "classes live on Y_{} and Y_{}",
            x.n, y.n
        )));
    }
    Ok(())
}

impl Add for &CycleClass {
    type Output = CycleClass;
    fn add(self, rhs: &CycleClass) -> CycleClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Sub for &CycleClass {
    type Output = CycleClass;
    fn sub(self, rhs: &CycleClass) -> CycleClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Add for CycleClass {
    type Output = CycleClass;
    fn add(self, rhs: CycleClass) -> CycleClass {
        &self + &rhs
    }
}

impl Sub for CycleClass {
    type Output = CycleClass;
    fn sub(self, rhs: CycleClass) -> CycleClass {
        &self - &rhs
    }
}

impl Neg for CycleClass {
    type Output = CycleClass;
    fn neg(self) -> CycleClass {
        self.scale(&BigInt::from(-1))
    }
}

impl Mul<&CycleClass> for i64 {
    type Output = CycleClass;
    fn mul(self, rhs: &CycleClass) -> CycleClass {
        rhs.scale(&BigInt::from(self))
    }
}

/// Product of two basis elements.
fn basis_product(x: Basis, y: Basis, ctx: &BlowupContext, out: &mut CycleClass, c: &BigInt) {
    use Basis::*;
    match (x, y) {
        (One, b) | (b, One) => out.add_basis(b, c),
        (H, H) => out.h2 += c,
        (H, E(k)) | (E(k), H) => out.r[k - 1] += c * &ctx.d,
        (E(i), E(j)) if i != j => {
            let (lo, hi) = (i.min(j), i.max(j));
            out.r[hi - 1] -= c * ctx.b(lo);
        }
        (E(k), E(_)) => {
            out.h2 -= c * &ctx.d;
            out.r[k - 1] -= c * &ctx.alpha[k - 1];
            for i in 1..k {
                out.r[i - 1] -= c * ctx.b(i);
            }
        }
        (H, H2) | (H2, H) => out.pt += c,
        (H, R(_)) | (R(_), H) | (E(_), H2) | (H2, E(_)) => {}
        (E(i), R(j)) | (R(j), E(i)) if i == j => {
            out.pt -= c;
        }
        // everything else lands in degree four or more
        _ => {}
    }
}

/// Product in `A*(Y_n)`.
pub fn mul(x: &CycleClass, y: &CycleClass, ctx: &BlowupContext) -> Result<CycleClass> {
    same_tower(x, y)?;
    if x.n != ctx.n() {
        return Err(Error::ContextMismatch(format!(
            "classes live on Y_{} but the context describes Y_{}",
            x.n,
            ctx.n()
        )));
    }
    let mut out = CycleClass::zero(ctx.n());
    for (bx, cx) in x.terms() {
        for (by, cy) in y.terms() {
            basis_product(bx, by, ctx, &mut out, &(cx * cy));
        }
    }
    Ok(out)
}

/// `deg * H - E_1 - ... - E_k`: the class of the strict transform of a
/// surface of degree `deg` containing the curve, after `k` blowups.
///
/// With `deg = -4` and the sign flipped this is the canonical class
/// `-4H + E_1 + ... + E_k` of `Y_k` pulled back to `Y_n`.
pub fn surface_class(deg: i64, k: usize, ctx: &BlowupContext) -> Result<CycleClass> {
    if k > ctx.n() {
        return Err(domain(format!(
            "surface class after {k} blowups on Y_{}",
            ctx.n()
        )));
    }
    let mut c = CycleClass::hyperplane(ctx.n()).scale(&BigInt::from(deg));
    for i in 0..k {
        c.e[i] = BigInt::from(-1);
    }
    Ok(c)
}

/// `[K_{Y_k}] = -4H + E_1 + ... + E_k`.
pub fn canonical_class(k: usize, ctx: &BlowupContext) -> Result<CycleClass> {
    Ok(-surface_class(4, k, ctx)?)
}

/// Coefficients of `[S_n]·[T_n]` in the basis `H^2, R_1..R_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StExpansion {
    #[serde(with = "bigint_json")]
    pub h2_coeff: BigInt,
    #[serde(with = "bigint_json::vec")]
    pub a: Vec<BigInt>,
}

/// Multiply out `(sH - ΣE)(tH - ΣE)` with the generic ring product.
pub fn st_expansion(s: u64, t: u64, ctx: &BlowupContext) -> Result<StExpansion> {
    let n = ctx.n();
    let sc = surface_class(
        i64::try_from(s).map_err(|_| Error::Overflow("surface degree"))?,
        n,
        ctx,
    )?;
    let tc = surface_class(
        i64::try_from(t).map_err(|_| Error::Overflow("surface degree"))?,
        n,
        ctx,
    )?;
    let prod = mul(&sc, &tc, ctx)?;
    debug_assert_eq!(prod.homogeneous_degree().unwrap_or(2), 2);
    Ok(StExpansion {
        h2_coeff: prod.h2,
        a: prod.r,
    })
}

/// `a_m` from `-a_m = d(s+t) + Σ_{i<m} beta_i + (n-m) beta_m + (2-4d-2g)`.
pub fn a_closed_form(s: u64, t: u64, d: u64, g: u64, p: &[u64], m: usize) -> Result<BigInt> {
    let n = multiplicity(s, t, d)?;
    check_index(n, m)?;
    if p.len() > n {
        return Err(domain(format!(
            "type has {} entries but only n = {n} blowups",
            p.len()
        )));
    }
    let mut padded = p.to_vec();
    padded.resize(n, 0);
    let beta = beta_from_p(s, d, g, &padded);
    let (db, gb) = (BigInt::from(d), BigInt::from(g));
    let prefix: BigInt = beta[..m - 1].iter().sum();
    let minus_a =
        &db * (s + t) + prefix + BigInt::from(n - m) * &beta[m - 1] + base_constant(&db, &gb);
    Ok(-minus_a)
}

impl fmt::Display for CycleClass {
    /// `4H - E1 - E2`, `8R3 - pt`, `H^2`; zero renders as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let terms = self.terms();
        if terms.is_empty() {
            return write!(f, "0");
        }
        for (idx, (b, c)) in terms.iter().enumerate() {
            let name = match b {
                Basis::One => String::new(),
                Basis::H => "H".into(),
                Basis::E(k) => format!("E{k}"),
                Basis::H2 => "H^2".into(),
                Basis::R(k) => format!("R{k}"),
                Basis::Pt => "pt".into(),
            };
            let mag = c.abs();
            let body = if name.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                name
            } else {
                format!("{mag}{name}")
            };
            match (idx, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}
