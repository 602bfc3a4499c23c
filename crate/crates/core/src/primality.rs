//! Primality of ideal sequences through the inductive condition `P(k)`:
//! for `0 <= i <= k`, `a ∈ L_k(I_{k-1})` and `b ∈ L_i(I_{i-1}) \ I_i`,
//! `a·jnd^k_i(b) ∈ I_k` forces `a ∈ I_k`.
//!
//! For fixed `b` the condition is linear in `a` and is decided exactly. The
//! quantifier over `b` is swept over a box of F-coordinates, so a sweep
//! without witness is evidence rather than proof.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde_json::{json, Value};

use crate::arith::is_prime_big;
use crate::error::{Error, Result};
use crate::ideals::{check_tambara, l_ideal, Ideal, IdealSequence, TambaraCheck};
use crate::lattice::Lattice;
use crate::ring::{Element, FCoords};

/// Default half-width of the F-coordinate box swept for `b`.
pub const DEFAULT_BOUND: u32 = 3;

/// A failure of `P(k)`: `a·jnd^k_i(b) ∈ I_k` with `a ∉ I_k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub k: usize,
    pub i: usize,
    pub b: Element,
    pub a: Element,
}

impl Witness {
    pub fn to_json(&self) -> Value {
        json!({
            "k": self.k,
            "i": self.i,
            "b": self.b.to_string(),
            "a": self.a.to_string(),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PkOutcome {
    Holds,
    Fails(Witness),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrimeStatus {
    /// No `b` in the box violates `P(k)` at any level.
    NoWitnessFound,
    Witness(Witness),
    /// `I_0 = Z`, so the ideal is the whole functor.
    NotProper,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimalityReport {
    pub bound: u32,
    pub status: PrimeStatus,
}

impl PrimalityReport {
    pub fn witness(&self) -> Option<&Witness> {
        match &self.status {
            PrimeStatus::Witness(w) => Some(w),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        let (status, witness) = match &self.status {
            PrimeStatus::NoWitnessFound => ("no_witness_found", None),
            PrimeStatus::Witness(w) => ("witness", Some(w.to_json())),
            PrimeStatus::NotProper => ("not_proper", None),
        };
        let mut v = json!({ "status": status, "bound": self.bound });
        if let Some(w) = witness {
            v["witness"] = w;
        }
        v
    }
}

/// `I_0` is `0` or generated by a prime.
pub fn check_p0(seq: &IdealSequence) -> bool {
    match seq.level(0).lattice().basis() {
        [] => true,
        [row] => is_prime_big(&row[0].abs()),
        _ => false,
    }
}

/// `L_k(I_{k-1})`, with `L_0 = R_0`.
pub fn l_level(seq: &IdealSequence, k: usize) -> Result<Ideal> {
    if k > seq.top() {
        return Err(Error::Range(format!("level {k} above top {}", seq.top())));
    }
    if k == 0 {
        return Ideal::full(seq.params(), 0);
    }
    l_ideal(seq.level(k - 1))
}

fn f_norm(a: &Element) -> BigInt {
    let c = a.to_f();
    c.f.iter().fold(c.m_top.abs(), |acc, x| acc + x.abs())
}

fn smaller(x: &Element, y: &Element) -> Ordering {
    f_norm(x)
        .cmp(&f_norm(y))
        .then_with(|| x.coeffs().cmp(y.coeffs()))
}

/// The element of `sub \ ideal` with the smallest F-norm among the basis rows
/// of `sub` and their pairwise sums and differences.
fn pick_outside(sub: &Lattice, ideal: &Ideal) -> Result<Option<Element>> {
    let (params, level) = (ideal.params(), ideal.level());
    let rows = sub
        .basis()
        .iter()
        .map(|r| Element::new(params, level, r.clone()))
        .collect::<Result<Vec<_>>>()?;
    let mut cands = rows.clone();
    for (x, u) in rows.iter().enumerate() {
        for v in &rows[x + 1..] {
            cands.push(u.add(v)?);
            cands.push(u.sub(v)?);
        }
    }
    let mut best: Option<Element> = None;
    for c in cands {
        if ideal.contains(&c)? {
            continue;
        }
        let c = if c.to_f().m_top.is_negative() { c.neg() } else { c };
        if best.as_ref().map_or(true, |b| smaller(&c, b) == Ordering::Less) {
            best = Some(c);
        }
    }
    Ok(best)
}

fn pk_with(seq: &IdealSequence, k: usize, i: usize, b: &Element, lk: &Ideal) -> Result<PkOutcome> {
    let ik = seq.level(k);
    let c = b.jnd(k)?;
    let kernel = lk.lattice().intersect(&ik.colon(&c)?)?;
    if ik.lattice().includes(&kernel)? {
        return Ok(PkOutcome::Holds);
    }
    let a = pick_outside(&kernel, ik)?
        .ok_or_else(|| Error::Internal("no basis combination outside I_k".into()))?;
    Ok(PkOutcome::Fails(Witness {
        k,
        i,
        b: b.clone(),
        a,
    }))
}

fn check_b(seq: &IdealSequence, i: usize, b: &Element, li: &Ideal) -> Result<()> {
    if b.level() != i || b.params() != seq.params() {
        return Err(Error::PreconditionViolated(format!(
            "b = {b} should live at level {i}"
        )));
    }
    if !li.contains(b)? {
        return Err(Error::PreconditionViolated(format!("b = {b} is not in L_{i}")));
    }
    if seq.level(i).contains(b)? {
        return Err(Error::PreconditionViolated(format!("b = {b} lies in I_{i}")));
    }
    Ok(())
}

/// Decides `P(k)` for one `b`, exactly in `a`.
pub fn check_pk_for_b(seq: &IdealSequence, k: usize, i: usize, b: &Element) -> Result<PkOutcome> {
    if i > k || k > seq.top() {
        return Err(Error::Range(format!(
            "need i <= k <= {}, got i = {i}, k = {k}",
            seq.top()
        )));
    }
    check_b(seq, i, b, &l_level(seq, i)?)?;
    pk_with(seq, k, i, b, &l_level(seq, k)?)
}

/// `0, 1, -1, 2, -2, …, bound, -bound`.
fn zigzag(bound: u32) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero()];
    for t in 1..=i64::from(bound) {
        out.push(BigInt::from(t));
        out.push(BigInt::from(-t));
    }
    out
}

/// Elements of level `i` whose F-coordinates `(m_top, f_0, …, f_{i-1})` lie
/// in `[-bound, bound]`, in lexicographic order with each coordinate running
/// through `0, 1, -1, 2, -2, …`.
pub fn f_box(params: crate::GroupParams, i: usize, bound: u32) -> Vec<Element> {
    let values = zigzag(bound);
    let mut digits = vec![0usize; i + 1];
    let mut out = Vec::new();
    loop {
        let c = FCoords {
            level: i,
            m_top: values[digits[0]].clone(),
            f: digits[1..].iter().map(|&d| values[d].clone()).collect(),
        };
        out.push(Element::from_f(params, &c).expect("level valid"));
        let mut pos = i + 1;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < values.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

/// Sweeps `k`, then `i`, then `b` in [`f_box`] order, returning the first
/// failure of `P(k)`. Returned witnesses have passed [`verify_witness`].
pub fn falsify_prime(seq: &IdealSequence, bound: u32) -> Result<PrimalityReport> {
    if bound == 0 {
        return Err(Error::Range("bound must be at least 1".into()));
    }
    if let TambaraCheck::Violated { level, clause } = check_tambara(seq)? {
        return Err(Error::PreconditionViolated(format!(
            "not an ideal sequence at level {level}: {clause}"
        )));
    }
    let report = |status| PrimalityReport { bound, status };
    if seq.level(0).is_full() {
        return Ok(report(PrimeStatus::NotProper));
    }
    let ls = (0..=seq.top())
        .map(|k| l_level(seq, k))
        .collect::<Result<Vec<_>>>()?;
    let boxes: Vec<Vec<Element>> = (0..=seq.top())
        .map(|i| {
            f_box(seq.params(), i, bound)
                .into_iter()
                .filter(|b| ls[i].contains(b).expect("same level") && !seq.level(i).contains(b).expect("same level"))
                .collect()
        })
        .collect();
    for k in 0..=seq.top() {
        // K ⊆ L_k = I_k, so no b can fail here
        if &ls[k] == seq.level(k) {
            continue;
        }
        for i in 0..=k {
            for b in &boxes[i] {
                if let PkOutcome::Fails(w) = pk_with(seq, k, i, b, &ls[k])? {
                    if !verify_witness(seq, &w) {
                        return Err(Error::Internal(format!(
                            "witness at k = {k}, i = {i} failed re-verification"
                        )));
                    }
                    return Ok(report(PrimeStatus::Witness(w)));
                }
            }
        }
    }
    Ok(report(PrimeStatus::NoWitnessFound))
}

/// Re-checks all memberships of a witness from scratch.
pub fn verify_witness(seq: &IdealSequence, w: &Witness) -> bool {
    let check = || -> Result<bool> {
        if w.i > w.k || w.k > seq.top() || w.a.level() != w.k || w.a.params() != seq.params() {
            return Ok(false);
        }
        if check_b(seq, w.i, &w.b, &l_level(seq, w.i)?).is_err() {
            return Ok(false);
        }
        let ik = seq.level(w.k);
        Ok(l_level(seq, w.k)?.contains(&w.a)?
            && ik.contains(&w.a.mul(&w.b.jnd(w.k)?)?)?
            && !ik.contains(&w.a)?)
    };
    check().unwrap_or(false)
}
