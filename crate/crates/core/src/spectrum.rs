//! The prime spectrum of the Burnside Tambara functor on `Z/p^r`, restricted
//! to a finite set `Q` of primes other than `p`:
//!
//! ```text
//! { L^r(p) } ∪ { L^i(0) : 0 <= i <= r } ∪ { L^i S^{r-i}(q) : 0 <= i <= r, q ∈ Q }
//! ```
//!
//! Every point is built from its base ideal of `Z` by the `L` and `S`
//! operators and checked to be an ideal sequence.

use std::fmt::{self, Write as _};

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::arith::is_prime_u64;
use crate::error::{Error, Result};
use crate::ideals::{check_tambara, Ideal, IdealSequence, TambaraCheck};
use crate::ring::{Element, GroupParams};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum PointKind {
    /// `L^r(p)`.
    Lp,
    /// `L^i(0)`: `L` applied `i` times to the zero ideal of level `r - i`.
    Li0 { i: usize },
    /// `L^i S^{r-i}(q)`.
    LiSq { i: usize, q: u64 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumPoint {
    pub kind: PointKind,
    pub seq: IdealSequence,
}

impl SpectrumPoint {
    pub fn label(&self) -> String {
        let r = self.seq.top();
        match self.kind {
            PointKind::Lp => format!("L^{r}({})", self.seq.params().p()),
            PointKind::Li0 { i } => format!("L^{i}(0)"),
            PointKind::LiSq { i, q } => format!("L^{i} S^{}({q})", r - i),
        }
    }

    pub fn to_json(&self) -> Value {
        let (kind, i, q) = match self.kind {
            PointKind::Lp => ("Lp", None, None),
            PointKind::Li0 { i } => ("Li0", Some(i), None),
            PointKind::LiSq { i, q } => ("LiSq", Some(i), Some(q)),
        };
        let mut v = json!({ "label": self.label(), "kind": kind, "sequence": self.seq.to_json() });
        if let Some(i) = i {
            v["i"] = json!(i);
        }
        if let Some(q) = q {
            v["q"] = json!(q);
        }
        v
    }
}

fn repeat<F>(mut seq: IdealSequence, times: usize, step: F) -> Result<IdealSequence>
where
    F: Fn(&IdealSequence) -> Result<IdealSequence>,
{
    for _ in 0..times {
        seq = step(&seq)?;
    }
    Ok(seq)
}

fn l_step(s: &IdealSequence) -> Result<IdealSequence> {
    s.l_op()
}

fn s_step(s: &IdealSequence) -> Result<IdealSequence> {
    Ok(s.s_op()?.0)
}

/// Sorted, deduplicated `Q`; each entry must be a prime other than `p`.
pub fn validate_primes(params: GroupParams, qs: &[u64]) -> Result<Vec<u64>> {
    let mut out = qs.to_vec();
    out.sort_unstable();
    out.dedup();
    for &q in &out {
        if q == params.p() {
            return Err(Error::BadPrimeSet(format!("q = {q} equals p")));
        }
        if !is_prime_u64(q) {
            return Err(Error::BadPrimeSet(format!("q = {q} is not prime")));
        }
    }
    Ok(out)
}

/// Builds the point of the given kind at top level `r`.
pub fn build_point(params: GroupParams, kind: PointKind) -> Result<SpectrumPoint> {
    let r = params.r();
    let base = |n: u64| IdealSequence::base(params, BigInt::from(n));
    let seq = match kind {
        PointKind::Lp => repeat(base(params.p())?, r, l_step)?,
        PointKind::Li0 { i } => repeat(repeat(base(0)?, r - i, s_step)?, i, l_step)?,
        PointKind::LiSq { i, q } => repeat(repeat(base(q)?, r - i, s_step)?, i, l_step)?,
    };
    if let TambaraCheck::Violated { level, clause } = check_tambara(&seq)? {
        return Err(Error::Internal(format!(
            "spectrum point {kind:?} fails at level {level}: {clause}"
        )));
    }
    Ok(SpectrumPoint { kind, seq })
}

/// All `1 + (r+1)(1+|Q|)` points, ordered `L^r(p)`, then `L^i(0)` by `i`,
/// then `L^i S^{r-i}(q)` by `q` and `i`.
pub fn enumerate_spectrum(params: GroupParams, qs: &[u64]) -> Result<Vec<SpectrumPoint>> {
    let qs = validate_primes(params, qs)?;
    let r = params.r();
    let mut kinds = vec![PointKind::Lp];
    kinds.extend((0..=r).map(|i| PointKind::Li0 { i }));
    for &q in &qs {
        kinds.extend((0..=r).map(|i| PointKind::LiSq { i, q }));
    }
    let points = kinds
        .into_iter()
        .map(|k| build_point(params, k))
        .collect::<Result<Vec<_>>>()?;
    for (x, a) in points.iter().enumerate() {
        for b in &points[x + 1..] {
            if a.seq == b.seq {
                return Err(Error::Internal(format!(
                    "{} and {} coincide",
                    a.label(),
                    b.label()
                )));
            }
        }
    }
    Ok(points)
}

/// The inclusion order on a set of points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    /// `leq[a][b]` iff point `a` is contained in point `b`.
    pub leq: Vec<Vec<bool>>,
    /// Covering pairs `(a, b)`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl Poset {
    pub fn len(&self) -> usize {
        self.leq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.leq.is_empty()
    }

    /// Reflexive-transitive closure of the covering edges.
    pub fn closure_of_edges(&self) -> Vec<Vec<bool>> {
        let n = self.len();
        let mut reach = vec![vec![false; n]; n];
        for (x, row) in reach.iter_mut().enumerate() {
            row[x] = true;
        }
        for &(a, b) in &self.edges {
            reach[a][b] = true;
        }
        for m in 0..n {
            for a in 0..n {
                if reach[a][m] {
                    for b in 0..n {
                        if reach[m][b] {
                            reach[a][b] = true;
                        }
                    }
                }
            }
        }
        reach
    }
}

fn expect(cond: bool, what: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Internal(what()))
    }
}

/// Computes all pairwise inclusions, extracts covering edges, and checks the
/// inclusions and non-inclusions the classification predicts.
pub fn inclusion_poset(points: &[SpectrumPoint]) -> Result<Poset> {
    let n = points.len();
    let mut leq = vec![vec![false; n]; n];
    for a in 0..n {
        for b in 0..n {
            leq[a][b] = a == b || points[b].seq.includes(&points[a].seq)?;
        }
    }
    let lt = |a: usize, b: usize| a != b && leq[a][b];
    let mut edges = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if lt(a, b) && !(0..n).any(|c| lt(a, c) && lt(c, b)) {
                edges.push((a, b));
            }
        }
    }
    edges.sort_unstable();

    let find = |kind: PointKind| points.iter().position(|pt| pt.kind == kind);
    let name = |x: usize| points[x].label();
    for (x, pt) in points.iter().enumerate() {
        match pt.kind {
            PointKind::Li0 { i } => {
                if let Some(y) = find(PointKind::Li0 { i: i + 1 }) {
                    expect(lt(x, y), || format!("{} ⊄ {}", name(x), name(y)))?;
                }
                for (y, other) in points.iter().enumerate() {
                    match other.kind {
                        PointKind::LiSq { i: j, .. } if j == i => {
                            expect(lt(x, y), || format!("{} ⊄ {}", name(x), name(y)))?;
                        }
                        PointKind::LiSq { i: j, .. } if j < i => {
                            expect(!leq[x][y], || format!("{} ⊆ {}", name(x), name(y)))?;
                        }
                        PointKind::Lp if i == pt.seq.top() => {
                            expect(lt(x, y), || format!("{} ⊄ {}", name(x), name(y)))?;
                        }
                        _ => {}
                    }
                }
            }
            PointKind::LiSq { i, q } => {
                if let Some(y) = find(PointKind::LiSq { i: i + 1, q }) {
                    expect(lt(x, y), || format!("{} ⊄ {}", name(x), name(y)))?;
                }
                if i == pt.seq.top() {
                    if let Some(y) = find(PointKind::Lp) {
                        expect(!leq[x][y] && !leq[y][x], || {
                            format!("{} and {} are comparable", name(x), name(y))
                        })?;
                    }
                }
            }
            PointKind::Lp => {}
        }
    }
    Ok(Poset { leq, edges })
}

/// Length of the longest chain of strict inclusions.
pub fn dimension(poset: &Poset) -> usize {
    let n = poset.len();
    let mut memo: Vec<Option<usize>> = vec![None; n];
    fn longest(v: usize, poset: &Poset, memo: &mut Vec<Option<usize>>) -> usize {
        if let Some(d) = memo[v] {
            return d;
        }
        let d = poset
            .edges
            .iter()
            .filter(|e| e.0 == v)
            .map(|e| 1 + longest(e.1, poset, memo))
            .max()
            .unwrap_or(0);
        memo[v] = Some(d);
        d
    }
    (0..n).map(|v| longest(v, poset, &mut memo)).max().unwrap_or(0)
}

/// Enumerated points with their order and dimension.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub params: GroupParams,
    pub qs: Vec<u64>,
    pub points: Vec<SpectrumPoint>,
    pub poset: Poset,
    pub dimension: usize,
}

impl Spectrum {
    pub fn compute(params: GroupParams, qs: &[u64]) -> Result<Spectrum> {
        let qs = validate_primes(params, qs)?;
        let points = enumerate_spectrum(params, &qs)?;
        let poset = inclusion_poset(&points)?;
        let dimension = dimension(&poset);
        Ok(Spectrum {
            params,
            qs,
            points,
            poset,
            dimension,
        })
    }

    pub fn to_json(&self) -> Value {
        let edges: Vec<Value> = self
            .poset
            .edges
            .iter()
            .map(|&(a, b)| json!([self.points[a].label(), self.points[b].label()]))
            .collect();
        json!({
            "p": self.params.p(),
            "r": self.params.r(),
            "qs": self.qs,
            "points": self.points.iter().map(SpectrumPoint::to_json).collect::<Vec<_>>(),
            "edges": edges,
            "dimension": self.dimension,
        })
    }

    /// Hasse diagram with smaller ideals at the bottom.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph spectrum {\n  rankdir=BT;\n");
        for (x, pt) in self.points.iter().enumerate() {
            let _ = writeln!(out, "  n{x} [label=\"{}\"];", pt.label());
        }
        for &(a, b) in &self.poset.edges {
            let _ = writeln!(out, "  n{a} -> n{b};");
        }
        out.push_str("}\n");
        out
    }
}

impl fmt::Display for Spectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let qs: Vec<String> = self.qs.iter().map(u64::to_string).collect();
        writeln!(
            f,
            "p = {}, r = {}, Q = {{{}}}: {} points, dimension {}",
            self.params.p(),
            self.params.r(),
            qs.join(", "),
            self.points.len(),
            self.dimension
        )?;
        let width = self.points.iter().map(|p| p.label().len()).max().unwrap_or(0);
        for pt in &self.points {
            writeln!(f, "  {:width$}  {}", pt.label(), pt.seq)?;
        }
        writeln!(f, "covering inclusions:")?;
        for &(a, b) in &self.poset.edges {
            writeln!(f, "  {} < {}", self.points[a].label(), self.points[b].label())?;
        }
        Ok(())
    }
}

/// Every ideal sequence over `(p)` reachable by `L`/`S` steps, keyed by the
/// step word (`'L'`/`'S'`, applied left to right).
pub fn p_fiber_sequences(params: GroupParams) -> Result<Vec<(String, IdealSequence)>> {
    let mut level = vec![(String::new(), IdealSequence::base(params, BigInt::from(params.p()))?)];
    for _ in 0..params.r() {
        let mut next = Vec::with_capacity(level.len() * 2);
        for (word, seq) in &level {
            next.push((format!("{word}L"), seq.l_op()?));
            next.push((format!("{word}S"), seq.s_op()?.0));
        }
        level = next;
    }
    Ok(level)
}

/// `[0, …, 0, (n·F_{l,l-1})]`, which is an ideal sequence for every `n`.
pub fn zero_fiber_sequence(params: GroupParams, l: usize, n: i64) -> Result<IdealSequence> {
    if l == 0 {
        return Err(Error::Range("need level at least 1".into()));
    }
    params.check_level(l)?;
    let mut ideals = (0..l)
        .map(|k| Ideal::zero(params, k))
        .collect::<Result<Vec<_>>>()?;
    let nf = Element::f(params, l, l - 1)?.scale(&BigInt::from(n));
    ideals.push(Ideal::from_generators(params, l, &[nf])?);
    IdealSequence::new(params, ideals)
}
