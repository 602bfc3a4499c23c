//! Tambara ideals of `Ω_{H_l}` encoded as sequences `[I_0, …, I_l]` of ring
//! ideals `I_k ⊆ R_k`, subject to
//!
//! ```text
//! ind^k_{k-1}(I_{k-1}) ⊆ I_k,  res^k_{k-1}(I_k) ⊆ I_{k-1},  jnd^k_{k-1}(I_{k-1}) ⊆ I_k.
//! ```
//!
//! The largest extension of a sequence by one level is the restriction
//! preimage `L(I)`; the smallest is the ideal `S(I)` generated by the
//! additive and multiplicative transfers of `I`. `L` is linear and computed
//! exactly. `S` involves the nonlinear norm, which is polynomial of degree `p`
//! in coordinates, so finitely many norms span all of them.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::arith::is_prime_big;
use crate::error::{Error, Result};
use crate::lattice::{IntMap, Lattice, Vector};
use crate::ring::{Element, GroupParams};

/// A ring ideal of `R_k`, stored as a lattice in X-coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Ideal {
    params: GroupParams,
    level: usize,
    lat: Lattice,
}

/// Names the ideal `J_{level,cut}(x)`: `(x, F_{l,cut}, …, F_{l,l-1})`, or `(x)`
/// when `cut = level`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct JDescriptor {
    pub level: usize,
    pub cut: usize,
    pub x: BigInt,
}

impl fmt::Display for JDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "J[{},{}]({})", self.level, self.cut, self.x)
    }
}

impl JDescriptor {
    pub fn to_json(&self) -> Value {
        json!({ "level": self.level, "k": self.cut, "x": self.x.to_string() })
    }
}

/// Span of `{X_{k,i} · b}` over all `i` and all `b` in a Z-basis of `gens`.
/// Products of orbit basis elements are integer multiples of orbit basis
/// elements, so this span is already closed under multiplication.
fn ideal_lattice(params: GroupParams, level: usize, span: &Lattice) -> Result<Lattice> {
    let mut gens = Vec::with_capacity(span.rank() * (level + 1));
    for row in span.basis() {
        let b = Element::new(params, level, row.clone())?;
        for i in 0..=level {
            gens.push(Element::x(params, level, i)?.mul(&b)?.into_coeffs());
        }
    }
    Lattice::from_generators(level + 1, gens)
}

impl Ideal {
    /// The ideal of `R_k` generated by `gens`.
    pub fn from_generators(params: GroupParams, level: usize, gens: &[Element]) -> Result<Ideal> {
        params.check_level(level)?;
        for g in gens {
            if g.level() != level || g.params() != params {
                return Err(Error::Level(format!(
                    "generator {g} lives at level {}, expected {level}",
                    g.level()
                )));
            }
        }
        let span = Lattice::from_generators(level + 1, gens.iter().map(|g| g.coeffs().to_vec()))?;
        let lat = ideal_lattice(params, level, &span)?;
        let ideal = Ideal { params, level, lat };
        debug_assert!(ideal.is_closed());
        Ok(ideal)
    }

    /// Wraps a lattice, checking that it is closed under multiplication.
    pub fn from_lattice(params: GroupParams, level: usize, lat: Lattice) -> Result<Ideal> {
        params.check_level(level)?;
        if lat.dim() != level + 1 {
            return Err(Error::DimensionMismatch {
                expected: level + 1,
                got: lat.dim(),
            });
        }
        let ideal = Ideal { params, level, lat };
        if !ideal.is_closed() {
            return Err(Error::PreconditionViolated(format!(
                "lattice {} is not an ideal of R_{level}",
                ideal.lat
            )));
        }
        Ok(ideal)
    }

    pub fn zero(params: GroupParams, level: usize) -> Result<Ideal> {
        params.check_level(level)?;
        Ok(Ideal {
            params,
            level,
            lat: Lattice::zero(level + 1),
        })
    }

    pub fn full(params: GroupParams, level: usize) -> Result<Ideal> {
        params.check_level(level)?;
        Ok(Ideal {
            params,
            level,
            lat: Lattice::full(level + 1),
        })
    }

    /// Principal ideal `(n)` generated by an integer.
    pub fn principal_int(params: GroupParams, level: usize, n: BigInt) -> Result<Ideal> {
        Ideal::from_generators(params, level, &[Element::constant(params, level, n)?])
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lat
    }

    pub fn is_zero(&self) -> bool {
        self.lat.is_zero()
    }

    pub fn is_full(&self) -> bool {
        self.lat == Lattice::full(self.level + 1)
    }

    /// Z-basis of the ideal as ring elements.
    pub fn basis(&self) -> Vec<Element> {
        self.lat
            .basis()
            .iter()
            .map(|r| Element::new(self.params, self.level, r.clone()).expect("dimension checked"))
            .collect()
    }

    /// Ring-ideal closure: `X_{k,i} · b ∈ I` for every basis row `b`.
    pub fn is_closed(&self) -> bool {
        self.basis().iter().all(|b| {
            (0..=self.level).all(|i| {
                let prod = Element::x(self.params, self.level, i)
                    .and_then(|x| x.mul(b))
                    .expect("same level");
                self.lat.contains(prod.coeffs()).expect("dimension checked")
            })
        })
    }

    pub fn contains(&self, a: &Element) -> Result<bool> {
        if a.level() != self.level || a.params() != self.params {
            return Err(Error::Level(format!(
                "element at level {} tested against an ideal of R_{}",
                a.level(),
                self.level
            )));
        }
        self.lat.contains(a.coeffs())
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &Ideal) -> Result<bool> {
        self.check_same(other)?;
        self.lat.includes(&other.lat)
    }

    pub fn sum(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same(other)?;
        Ok(Ideal {
            params: self.params,
            level: self.level,
            lat: self.lat.sum(&other.lat)?,
        })
    }

    pub fn intersect(&self, other: &Ideal) -> Result<Ideal> {
        self.check_same(other)?;
        Ok(Ideal {
            params: self.params,
            level: self.level,
            lat: self.lat.intersect(&other.lat)?,
        })
    }

    fn check_same(&self, other: &Ideal) -> Result<()> {
        if self.level != other.level || self.params != other.params {
            return Err(Error::Level(format!(
                "ideals at levels {} and {}",
                self.level, other.level
            )));
        }
        Ok(())
    }

    /// `{ a ∈ R_k : c·a ∈ self }` for `c ∈ R_k`.
    pub fn colon(&self, c: &Element) -> Result<Lattice> {
        Lattice::preimage(&mul_map(c)?, &self.lat)
    }

    /// The generator `x` of the projection of the ideal onto the constant
    /// F-coordinate (nonnegative).
    fn constant_gcd(&self) -> BigInt {
        self.basis()
            .iter()
            .fold(BigInt::zero(), |g, b| g.gcd(&b.to_f().m_top))
    }
}

impl fmt::Display for Ideal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(d) = recognize_j(self) {
            return write!(f, "{d}");
        }
        write!(f, "ideal<R_{}>{}", self.level, self.lat)
    }
}

/// Linearization of `res^from_to` as a matrix `Z^{from+1} → Z^{to+1}`.
pub fn res_map(params: GroupParams, from: usize, to: usize) -> Result<IntMap> {
    let cols = (0..=from)
        .map(|i| Ok(Element::x(params, from, i)?.res(to)?.into_coeffs()))
        .collect::<Result<Vec<Vector>>>()?;
    IntMap::from_columns(to + 1, cols)
}

/// Multiplication by `c` as a matrix on `Z^{k+1}`.
pub fn mul_map(c: &Element) -> Result<IntMap> {
    let (params, k) = (c.params(), c.level());
    let cols = (0..=k)
        .map(|i| Ok(Element::x(params, k, i)?.mul(c)?.into_coeffs()))
        .collect::<Result<Vec<Vector>>>()?;
    IntMap::from_columns(k + 1, cols)
}

/// `J_{l,k}(x)`.
pub fn j_ideal(params: GroupParams, level: usize, cut: usize, x: &BigInt) -> Result<Ideal> {
    params.check_level(level)?;
    if cut > level {
        return Err(Error::Range(format!("J[{level},{cut}] needs cut <= level")));
    }
    let mut gens = vec![Element::constant(params, level, x.abs())?];
    for i in cut..level {
        gens.push(Element::f(params, level, i)?);
    }
    Ideal::from_generators(params, level, &gens)
}

/// Recovers `(cut, x)` with `J_{l,cut}(x) = I`, preferring the smallest cut.
pub fn recognize_j(ideal: &Ideal) -> Option<JDescriptor> {
    let x = ideal.constant_gcd();
    let (params, level) = (ideal.params, ideal.level);
    (0..=level).find_map(|cut| {
        let cand = j_ideal(params, level, cut, &x).ok()?;
        (cand == *ideal).then(|| JDescriptor {
            level,
            cut,
            x: x.clone(),
        })
    })
}

/// `L(I) = (res^{k+1}_k)^{-1}(I) ⊆ R_{k+1}`.
pub fn l_ideal(ideal: &Ideal) -> Result<Ideal> {
    let params = ideal.params;
    let k = ideal.level;
    if k >= params.r() {
        return Err(Error::RankExceeded { level: k, r: params.r() });
    }
    let lat = Lattice::preimage(&res_map(params, k + 1, k)?, &ideal.lat)?;
    let out = Ideal {
        params,
        level: k + 1,
        lat,
    };
    if !out.is_closed() {
        return Err(Error::Internal(
            "restriction preimage of an ideal failed to be an ideal".into(),
        ));
    }
    Ok(out)
}

/// Exponent vectors `c ∈ N^d` with `|c| <= deg`, in lexicographic order.
fn interpolation_points(d: usize, deg: usize) -> Vec<Vec<usize>> {
    fn go(d: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == d {
            out.push(cur.clone());
            return;
        }
        for c in 0..=left {
            cur.push(c);
            go(d, left - c, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(d, deg, &mut Vec::with_capacity(d), &mut out);
    out
}

/// Elements `Σ c_j b_j` of `ideal` whose norms to the next level span the
/// Z-span of all its norms.
///
/// In coordinates over a Z-basis `b`, `c ↦ jnd(Σ c_j b_j)` is an
/// integer-valued polynomial of total degree at most `p`. Newton
/// interpolation writes it as `Σ_α Δ^α f(0) Π binom(c_j, α_j)` with `|α| <= p`,
/// and each `Δ^α f(0)` is an integer combination of values at points `β <= α`.
pub fn norm_spanning_set(ideal: &Ideal) -> Vec<Element> {
    let basis = ideal.basis();
    let deg = ideal.params.p() as usize;
    interpolation_points(basis.len(), deg)
        .into_iter()
        .map(|c| {
            c.iter().zip(&basis).fold(
                Element::zero(ideal.params, ideal.level).expect("level valid"),
                |acc, (&cj, b)| acc.add(&b.scale(&BigInt::from(cj))).expect("same level"),
            )
        })
        .collect()
}

/// How an `S` extension was obtained.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SForm {
    /// Generated, and equal to the known closed form of its `J` label.
    ClosedForm,
    /// Generated; the lower ideal has no closed form on record.
    Generated,
}

/// `S(I) ⊆ R_{k+1}`: the ideal generated by `ind(I)` and `jnd(I)`.
pub fn s_generated(ideal: &Ideal) -> Result<Ideal> {
    let params = ideal.params;
    let k = ideal.level;
    if k >= params.r() {
        return Err(Error::RankExceeded { level: k, r: params.r() });
    }
    let mut gens = Vec::new();
    for b in ideal.basis() {
        gens.push(b.ind(k + 1)?);
    }
    for w in norm_spanning_set(ideal) {
        gens.push(w.jnd(k + 1)?);
    }
    Ideal::from_generators(params, k + 1, &gens)
}

/// Closed form of `S(J_{l-1,cut}(x))` where one is known:
///
/// * `x = 1`: the unit ideal;
/// * `x = 0` or `x = q` prime `≠ p`: `J_{l,cut}(x)` for `cut <= l-2`, `(x)` for `cut = l-1`;
/// * `x = p^{e+1}`, `cut = 0`: `J_{l,0}(p^{e+2})`, provided `l >= 2` or `e = 0`.
///
/// For `l = 1` and `e >= 1` the norms of `(p^{e+1})` only reach
/// `p^e·F_{1,0}`, so no closed form is given there.
pub fn s_closed_form(params: GroupParams, d: &JDescriptor) -> Result<Option<Ideal>> {
    let l = d.level + 1;
    if d.level >= params.r() {
        return Err(Error::RankExceeded {
            level: d.level,
            r: params.r(),
        });
    }
    if d.x.is_one() {
        return Ideal::full(params, l).map(Some);
    }
    let p = params.p_big();
    if d.x.is_zero() || (is_prime_big(&d.x) && d.x != p) {
        let cut = if d.cut + 1 == l { l } else { d.cut };
        return j_ideal(params, l, cut, &d.x).map(Some);
    }
    if d.cut == 0 && is_positive_power(&d.x, &p) && (l >= 2 || d.x == p) {
        return j_ideal(params, l, 0, &(&d.x * &p)).map(Some);
    }
    Ok(None)
}

/// `x = p^t` for some `t >= 1`.
fn is_positive_power(x: &BigInt, p: &BigInt) -> bool {
    let mut rest = x.clone();
    while rest > BigInt::one() && (&rest % p).is_zero() {
        rest /= p;
    }
    rest.is_one() && x > &BigInt::one()
}

/// `S(I)`, cross-checked against its closed form when `I` is recognized.
pub fn s_ideal(ideal: &Ideal) -> Result<(Ideal, SForm)> {
    let generated = s_generated(ideal)?;
    if let Some(d) = recognize_j(ideal) {
        if let Some(closed) = s_closed_form(ideal.params, &d)? {
            if closed != generated {
                return Err(Error::Internal(format!(
                    "S({d}) generated as {generated}, closed form {closed}"
                )));
            }
            return Ok((generated, SForm::ClosedForm));
        }
    }
    Ok((generated, SForm::Generated))
}

/// `[I_0, …, I_top]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IdealSequence {
    params: GroupParams,
    ideals: Vec<Ideal>,
}

/// Outcome of [`check_tambara`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TambaraCheck {
    Certified,
    Violated { level: usize, clause: String },
}

impl TambaraCheck {
    pub fn is_certified(&self) -> bool {
        matches!(self, TambaraCheck::Certified)
    }
}

impl IdealSequence {
    pub fn new(params: GroupParams, ideals: Vec<Ideal>) -> Result<IdealSequence> {
        if ideals.is_empty() {
            return Err(Error::MalformedSequence("empty sequence".into()));
        }
        for (k, i) in ideals.iter().enumerate() {
            if i.level != k || i.params != params {
                return Err(Error::MalformedSequence(format!(
                    "entry {k} holds an ideal of level {}",
                    i.level
                )));
            }
        }
        params.check_level(ideals.len() - 1)?;
        Ok(IdealSequence { params, ideals })
    }

    /// `[(n)]` at level 0.
    pub fn base(params: GroupParams, n: BigInt) -> Result<IdealSequence> {
        IdealSequence::new(params, vec![Ideal::principal_int(params, 0, n)?])
    }

    pub fn params(&self) -> GroupParams {
        self.params
    }

    pub fn top(&self) -> usize {
        self.ideals.len() - 1
    }

    pub fn ideals(&self) -> &[Ideal] {
        &self.ideals
    }

    pub fn level(&self, k: usize) -> &Ideal {
        &self.ideals[k]
    }

    pub fn top_ideal(&self) -> &Ideal {
        self.ideals.last().expect("nonempty")
    }

    /// `[I_0, …, I_i]`.
    pub fn restrict(&self, i: usize) -> Result<IdealSequence> {
        if i > self.top() {
            return Err(Error::Range(format!(
                "cannot restrict a sequence of top {} to level {i}",
                self.top()
            )));
        }
        Ok(IdealSequence {
            params: self.params,
            ideals: self.ideals[..=i].to_vec(),
        })
    }

    pub fn push(&self, ideal: Ideal) -> Result<IdealSequence> {
        let mut ideals = self.ideals.clone();
        ideals.push(ideal);
        IdealSequence::new(self.params, ideals)
    }

    /// Largest extension by one level.
    pub fn l_op(&self) -> Result<IdealSequence> {
        self.push(l_ideal(self.top_ideal())?)
    }

    /// Smallest extension by one level.
    pub fn s_op(&self) -> Result<(IdealSequence, SForm)> {
        let (s, form) = s_ideal(self.top_ideal())?;
        Ok((self.push(s)?, form))
    }

    /// Levelwise inclusion `other ⊆ self` (same top).
    pub fn includes(&self, other: &IdealSequence) -> Result<bool> {
        if self.top() != other.top() {
            return Err(Error::MalformedSequence(format!(
                "comparing sequences of tops {} and {}",
                self.top(),
                other.top()
            )));
        }
        for (a, b) in self.ideals.iter().zip(&other.ideals) {
            if !a.includes(b)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn labels(&self) -> Vec<Option<JDescriptor>> {
        self.ideals.iter().map(recognize_j).collect()
    }

    pub fn to_json(&self) -> Value {
        let levels: Vec<Value> = self.ideals.iter().map(|i| i.lat.to_json()).collect();
        let labels: Vec<Value> = self
            .labels()
            .into_iter()
            .map(|d| d.map_or(Value::Null, |d| d.to_json()))
            .collect();
        json!({
            "p": self.params.p(),
            "r": self.top(),
            "levels": levels,
            "labels": labels,
        })
    }

    /// Reads the JSON produced by [`IdealSequence::to_json`]; `rank` is the
    /// rank of the ambient group (at least the sequence's top).
    pub fn from_json(v: &Value, rank: usize) -> Result<IdealSequence> {
        let p = v
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::MalformedSequence("missing p".into()))?;
        let params = GroupParams::new(p, rank)?;
        let levels = v
            .get("levels")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::MalformedSequence("missing levels".into()))?;
        let ideals = levels
            .iter()
            .enumerate()
            .map(|(k, l)| Ideal::from_lattice(params, k, Lattice::from_json(l)?))
            .collect::<Result<Vec<_>>>()?;
        IdealSequence::new(params, ideals)
    }
}

impl fmt::Display for IdealSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (k, i) in self.ideals.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{i}")?;
        }
        f.write_str("]")
    }
}

/// Checks the ideal-sequence conditions at every level. The additive and
/// restriction clauses are linear and checked on HNF bases; the norm clause
/// is checked on [`norm_spanning_set`], which is exact because `I_k` is a
/// group.
pub fn check_tambara(seq: &IdealSequence) -> Result<TambaraCheck> {
    for k in 1..=seq.top() {
        let lower = seq.level(k - 1);
        let upper = seq.level(k);
        for b in lower.basis() {
            if !upper.contains(&b.ind(k)?)? {
                return Ok(TambaraCheck::Violated {
                    level: k,
                    clause: format!("ind({b}) not in I_{k}"),
                });
            }
        }
        for b in upper.basis() {
            if !lower.contains(&b.res(k - 1)?)? {
                return Ok(TambaraCheck::Violated {
                    level: k,
                    clause: format!("res({b}) not in I_{}", k - 1),
                });
            }
        }
        for w in norm_spanning_set(lower) {
            let n = w.jnd(k)?;
            if !upper.contains(&n)? {
                return Ok(TambaraCheck::Violated {
                    level: k,
                    clause: format!("jnd({w}) = {n} not in I_{k}"),
                });
            }
        }
    }
    Ok(TambaraCheck::Certified)
}
