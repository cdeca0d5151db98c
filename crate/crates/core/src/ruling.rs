//! Standard labeled graphs: how the strict transforms of a ruling of `E_k`
//! meet the later exceptional divisors, and what that says about its class.
//!
//! A standard graph on the vertex interval `[k, m]` is built from the single
//! vertex `{k}` by two operations on the top vertex `m`:
//!
//! * `Plus`: add `m + 1` and the edge `(m, m + 1)`;
//! * `Split(l)`: for an edge `(l, m)`, add `m + 1` with edges `(l, m + 1)` and
//!   `(m, m + 1)` and remove `(l, m)`.
//!
//! Every standard graph has exactly one such history, which `decompose`
//! recovers by peeling off the top vertex.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::arith::bigint_json;
use crate::error::{Error, Result};

pub type Vertex = u64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum StandardOp {
    Plus,
    Split(Vertex),
}

impl fmt::Display for StandardOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StandardOp::Plus => write!(f, "+"),
            StandardOp::Split(l) => write!(f, "{l}"),
        }
    }
}

impl FromStr for StandardOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "+" => Ok(StandardOp::Plus),
            t => t
                .parse()
                .map(StandardOp::Split)
                .map_err(|_| Error::Parse(format!("invalid graph operation {t:?}"))),
        }
    }
}

/// Render a history as the token list `+,1,2`.
pub fn format_history(ops: &[StandardOp]) -> String {
    ops.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

pub fn parse_history(s: &str) -> Result<Vec<StandardOp>> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',').map(str::parse).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledGraph {
    base: Vertex,
    top: Vertex,
    /// Edges `(a, b)` with `a < b`.
    edges: BTreeSet<(Vertex, Vertex)>,
    history: Vec<StandardOp>,
    /// `mu[v - base]`.
    mu: Vec<u64>,
}

fn edge(a: Vertex, b: Vertex) -> (Vertex, Vertex) {
    (a.min(b), a.max(b))
}

fn non_standard(msg: impl Into<String>) -> Error {
    Error::NonStandardGraph(msg.into())
}

impl LabeledGraph {
    /// The single vertex `{base}` with `mu = 1`.
    pub fn single(base: Vertex) -> Self {
        LabeledGraph {
            base,
            top: base,
            edges: BTreeSet::new(),
            history: Vec::new(),
            mu: vec![1],
        }
    }

    pub fn from_history(base: Vertex, ops: &[StandardOp]) -> Result<Self> {
        let mut g = LabeledGraph::single(base);
        for &op in ops {
            g.apply(op)?;
        }
        Ok(g)
    }

    /// Validate an externally supplied graph by decomposing and replaying it.
    pub fn from_edges(
        base: Vertex,
        top: Vertex,
        edges: impl IntoIterator<Item = (Vertex, Vertex)>,
    ) -> Result<Self> {
        let edges: BTreeSet<_> = edges.into_iter().map(|(a, b)| edge(a, b)).collect();
        let ops = decompose(base, top, &edges)?;
        let g = LabeledGraph::from_history(base, &ops)?;
        if g.edges != edges {
            return Err(non_standard(
                "replaying the recovered operations gives a different graph",
            ));
        }
        Ok(g)
    }

    pub fn base(&self) -> Vertex {
        self.base
    }

    pub fn top(&self) -> Vertex {
        self.top
    }

    pub fn vertex_count(&self) -> usize {
        self.mu.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = Vertex> {
        self.base..=self.top
    }

    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        self.edges.iter().copied()
    }

    pub fn history(&self) -> &[StandardOp] {
        &self.history
    }

    pub fn has_edge(&self, a: Vertex, b: Vertex) -> bool {
        self.edges.contains(&edge(a, b))
    }

    pub fn neighbors(&self, v: Vertex) -> Vec<Vertex> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    /// `mu_G(v)`, zero outside the vertex interval.
    pub fn mu(&self, v: Vertex) -> u64 {
        if v < self.base || v > self.top {
            return 0;
        }
        self.mu[(v - self.base) as usize]
    }

    pub fn mu_values(&self) -> &[u64] {
        &self.mu
    }

    /// Labels `l` for which `Split(l)` is currently allowed.
    pub fn split_candidates(&self) -> Vec<Vertex> {
        self.neighbors(self.top)
    }

    pub fn apply(&mut self, op: StandardOp) -> Result<()> {
        let m = self.top;
        let next = m.checked_add(1).ok_or(Error::Overflow("vertex label"))?;
        let mu_next = match op {
            StandardOp::Plus => {
                self.edges.insert((m, next));
                self.mu(m)
            }
            StandardOp::Split(l) => {
                if l == m || !self.has_edge(l, m) {
                    return Err(non_standard(format!("Split({l}) needs an edge ({l},{m})")));
                }
                self.edges.remove(&edge(l, m));
                self.edges.insert((l, next));
                self.edges.insert((m, next));
                self.mu(m)
                    .checked_add(self.mu(l))
                    .ok_or(Error::Overflow("mu"))?
            }
        };
        self.top = next;
        self.mu.push(mu_next);
        self.history.push(op);
        Ok(())
    }

    pub fn applied(mut self, op: StandardOp) -> Result<Self> {
        self.apply(op)?;
        Ok(self)
    }

    /// `r - k`, where `r` is the unique neighbor of the base vertex `k`.
    pub fn order(&self) -> Result<u64> {
        match self.neighbors(self.base).as_slice() {
            [r] => Ok(r - self.base),
            [] => Err(Error::Domain(
                "the order of a single-vertex graph is undefined".into(),
            )),
            _ => Err(non_standard("base vertex has more than one neighbor")),
        }
    }

    /// `G - {k}` on `[k + 1, m]`, obtained by rewriting the history
    /// `+, k^[p], o_1, ..., o_r` into `+^[p], o_1, ..., o_r` when `p >= 1`,
    /// into `+, o_2, ..., o_r` when `p = 0 < r`, and into the empty history
    /// otherwise. `None` for a single vertex.
    pub fn truncate(&self) -> Option<LabeledGraph> {
        let (first, rest) = self.history.split_first()?;
        debug_assert_eq!(*first, StandardOp::Plus);
        let k = self.base;
        let p = rest
            .iter()
            .take_while(|&&op| op == StandardOp::Split(k))
            .count();
        let tail = &rest[p..];
        let ops: Vec<StandardOp> = if p >= 1 {
            std::iter::repeat_n(StandardOp::Plus, p)
                .chain(tail.iter().copied())
                .collect()
        } else if let Some((_, after)) = tail.split_first() {
            std::iter::once(StandardOp::Plus)
                .chain(after.iter().copied())
                .collect()
        } else {
            Vec::new()
        };
        let g = LabeledGraph::from_history(k + 1, &ops)
            .expect("the truncation of a standard graph is standard");
        debug_assert_eq!(g.top, self.top);
        Some(g)
    }

    /// `G, G - {k}, G - {k, k+1}, ...` down to the single top vertex.
    pub fn truncations(&self) -> Vec<LabeledGraph> {
        std::iter::successors(Some(self.clone()), LabeledGraph::truncate).collect()
    }

    /// `mu_{{k}} + sum_{i=1}^{ord G} mu_{G - {k..k+i-1}}` over `[k, m]`.
    pub fn spitup_sum(&self) -> Result<Vec<u64>> {
        let len = self.vertex_count();
        let mut out = vec![0u64; len];
        out[0] = 1;
        if len == 1 {
            return Ok(out);
        }
        let ord = self.order()? as usize;
        for t in self.truncations().iter().skip(1).take(ord) {
            for v in t.vertices() {
                let slot = &mut out[(v - self.base) as usize];
                *slot = slot.checked_add(t.mu(v)).ok_or(Error::Overflow("mu"))?;
            }
        }
        Ok(out)
    }
}

/// Recover the unique history of a standard graph on `[base, top]`.
pub fn decompose(
    base: Vertex,
    top: Vertex,
    edges: &BTreeSet<(Vertex, Vertex)>,
) -> Result<Vec<StandardOp>> {
    if top < base {
        return Err(non_standard(format!(
            "empty vertex interval [{base}, {top}]"
        )));
    }
    if let Some(&(a, b)) = edges.iter().find(|&&(a, b)| a == b || a < base || b > top) {
        return Err(non_standard(format!(
            "edge ({a},{b}) is a loop or leaves [{base}, {top}]"
        )));
    }
    let mut edges = edges.clone();
    let mut ops = Vec::new();
    let mut m = top;
    while m > base {
        let nbrs: Vec<Vertex> = edges
            .iter()
            .filter(|&&(_, b)| b == m)
            .map(|&(a, _)| a)
            .collect();
        let op = match nbrs.as_slice() {
            [p] if *p == m - 1 => StandardOp::Plus,
            [l, p] if *p == m - 1 => StandardOp::Split(*l),
            _ => {
                return Err(non_standard(format!(
                    "vertex {m} has lower neighbors {nbrs:?}; expected {} alone or with one more",
                    m - 1
                )))
            }
        };
        for &a in &nbrs {
            edges.remove(&(a, m));
        }
        if let StandardOp::Split(l) = op {
            edges.insert((l, m - 1));
        }
        ops.push(op);
        m -= 1;
    }
    if !edges.is_empty() {
        return Err(non_standard("edges left over after peeling every vertex"));
    }
    ops.reverse();
    Ok(ops)
}

/// Coefficients of a class `sum_i c_i R_i` on `Y_n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RulingClassVector {
    #[serde(with = "bigint_json::vec")]
    pub coefficients: Vec<BigInt>,
}

impl RulingClassVector {
    /// `R_k - R_{k+1} - ... - R_l` on `Y_n`.
    pub fn block(n: usize, k: usize, l: usize) -> Self {
        let mut coefficients = vec![BigInt::zero(); n];
        coefficients[k - 1] = BigInt::one();
        for c in &mut coefficients[k..l] {
            *c = BigInt::from(-1);
        }
        RulingClassVector { coefficients }
    }

    /// `(k, l)` when the vector is `R_k - R_{k+1} - ... - R_l`.
    pub fn block_shape(&self) -> Option<(usize, usize)> {
        let k = self.coefficients.iter().position(|c| !c.is_zero())? + 1;
        if !self.coefficients[k - 1].is_one() {
            return None;
        }
        let run = self.coefficients[k..]
            .iter()
            .take_while(|c| **c == BigInt::from(-1))
            .count();
        let l = k + run;
        self.coefficients[l..]
            .iter()
            .all(Zero::is_zero)
            .then_some((k, l))
    }
}

impl fmt::Display for RulingClassVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::chow::CycleClass::from_rulings(self.coefficients.clone()).fmt(f)
    }
}

/// The class `[R_{k,n}]` of the strict transform of a ruling of `E_k` on
/// `Y_n`, where `graph` is its graph on `[k, n]`.
///
/// Solves `R_j = sum_{i >= j} mu_j(i) X_i` (with `mu_j` the multiplicities of
/// the truncation starting at `j`) for `X_k = [R_{k,n}]`, then checks the
/// result is `R_k - R_{k+1} - ... - R_l` with `l = k + ord(graph)`.
pub fn strict_transform_class(graph: &LabeledGraph) -> Result<RulingClassVector> {
    let k = graph.base() as usize;
    let n = graph.top() as usize;
    if k == 0 {
        return Err(Error::Domain(
            "exceptional divisors are indexed from 1".into(),
        ));
    }
    let truncs = graph.truncations();
    // xs[j - k] = X_j as a vector over R_1..R_n
    let mut xs: Vec<Vec<BigInt>> = vec![Vec::new(); truncs.len()];
    for (idx, t) in truncs.iter().enumerate().rev() {
        let j = k + idx;
        let mut x = vec![BigInt::zero(); n];
        x[j - 1] = BigInt::one();
        for i in j + 1..=n {
            let w = t.mu(i as Vertex);
            if w == 0 {
                continue;
            }
            for (c, xi) in x.iter_mut().zip(&xs[i - k]) {
                *c -= BigInt::from(w) * xi;
            }
        }
        xs[idx] = x;
    }
    let out = RulingClassVector {
        coefficients: xs.swap_remove(0),
    };
    let expected_l = if graph.vertex_count() == 1 {
        k
    } else {
        k + graph.order()? as usize
    };
    match out.block_shape() {
        Some((kk, l)) if kk == k && l == expected_l => Ok(out),
        _ => Err(Error::Inconsistent(format!(
            "strict transform class {out} is not R_{k} - R_{} - ... - R_{expected_l}",
            k + 1
        ))),
    }
}

/// Margins `sum_{i<k} 2^{k-i-1} a_i + a_k` of the cone inequalities.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnortReport {
    pub holds: bool,
    #[serde(with = "bigint_json::vec")]
    pub margins: Vec<BigInt>,
    /// First 1-based index with a negative margin.
    pub first_failure: Option<usize>,
}

/// A class `sum a_k R_k` is a nonnegative combination of the strict
/// transform classes exactly when every margin is nonnegative.
pub fn snort_check(a: &[BigInt]) -> SnortReport {
    let mut prefix = BigInt::zero();
    let mut margins = Vec::with_capacity(a.len());
    for ak in a {
        margins.push(&prefix + ak);
        prefix = 2 * prefix + ak;
    }
    let first_failure = margins.iter().position(Signed::is_negative).map(|i| i + 1);
    SnortReport {
        holds: first_failure.is_none(),
        margins,
        first_failure,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeDecomposition {
    pub feasible: bool,
    /// Coefficients on `R_1 - R_2 - ... - R_n, ..., R_{n-1} - R_n, R_n`.
    #[serde(with = "bigint_json::vec")]
    pub coefficients: Vec<BigInt>,
}

/// Write `sum a_k R_k` in terms of the generators `R_k - R_{k+1} - ... - R_n`.
///
/// The system is triangular: `a_m = c_m - sum_{j<m} c_j`.
pub fn cone_decompose(a: &[BigInt]) -> ConeDecomposition {
    let mut coefficients: Vec<BigInt> = Vec::with_capacity(a.len());
    let mut running = BigInt::zero();
    for ak in a {
        let c = ak + &running;
        running += &c;
        coefficients.push(c);
    }
    let feasible = coefficients.iter().all(|c| !c.is_negative());
    ConeDecomposition {
        feasible,
        coefficients,
    }
}

#[derive(Serialize, Deserialize)]
struct GraphJson {
    base: Vertex,
    vertices: Vec<Vertex>,
    edges: Vec<(Vertex, Vertex)>,
    mu: Vec<u64>,
    history: String,
}

impl Serialize for LabeledGraph {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        GraphJson {
            base: self.base,
            vertices: self.vertices().collect(),
            edges: self.edges().collect(),
            mu: self.mu.clone(),
            history: format_history(&self.history),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LabeledGraph {
    /// Rebuilds from the edges and checks the stated history and `mu`.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = GraphJson::deserialize(deserializer)?;
        let top = raw.vertices.last().copied().unwrap_or(raw.base);
        let g = LabeledGraph::from_edges(raw.base, top, raw.edges).map_err(D::Error::custom)?;
        let history = parse_history(&raw.history).map_err(D::Error::custom)?;
        if g.history != history || g.mu != raw.mu || !g.vertices().eq(raw.vertices) {
            return Err(D::Error::custom("graph fields disagree with its edges"));
        }
        Ok(g)
    }
}
