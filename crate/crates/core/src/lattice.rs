//! Finitely generated subgroups of `Z^n` in canonical Hermite normal form.
//!
//! Convention: basis vectors are rows; the basis is in row echelon form with
//! strictly increasing pivot columns, every pivot is positive, and every
//! entry above a pivot lies in `[0, pivot)`. Under this convention two
//! lattices are equal exactly when their bases are identical, so equality is
//! a structural compare. The zero lattice has no rows.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::{json, Value};

use crate::error::{Error, Result};

pub type Vector = Vec<BigInt>;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Lattice {
    dim: usize,
    rows: Vec<Vector>,
}

/// An integer-linear map `Z^n → Z^m`, stored as an `m × n` matrix acting on
/// column vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntMap {
    rows: usize,
    cols: usize,
    matrix: Vec<Vector>,
}

/// Index of one lattice in another.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Index {
    Finite(BigInt),
    Infinite,
}

/// Structure of a quotient `super / sub`: torsion invariant factors
/// `d_1 | d_2 | …` (all > 1) plus the rank of the free part.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientInvariants {
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

/// Returns `(g, x, y)` with `g = gcd(a, b) >= 0` and `x a + y b = g`.
fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let (mut old_r, mut r) = (a.clone(), b.clone());
    let (mut old_s, mut s) = (BigInt::one(), BigInt::zero());
    let (mut old_t, mut t) = (BigInt::zero(), BigInt::one());
    while !r.is_zero() {
        let q = old_r.div_floor(&r);
        let next_r = &old_r - &q * &r;
        old_r = std::mem::replace(&mut r, next_r);
        let next_s = &old_s - &q * &s;
        old_s = std::mem::replace(&mut s, next_s);
        let next_t = &old_t - &q * &t;
        old_t = std::mem::replace(&mut t, next_t);
    }
    if old_r.is_negative() {
        (-old_r, -old_s, -old_t)
    } else {
        (old_r, old_s, old_t)
    }
}

fn is_zero_vec(v: &[BigInt]) -> bool {
    v.iter().all(Zero::is_zero)
}

fn axpy(dst: &mut [BigInt], q: &BigInt, src: &[BigInt]) {
    // dst -= q * src
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d -= q * s;
        }
    }
}

/// Row-style HNF of an arbitrary generating set (rows may be dependent).
fn hnf_rows(mut rows: Vec<Vector>, dim: usize) -> Vec<Vector> {
    rows.retain(|r| !is_zero_vec(r));
    let mut piv = 0usize;
    for col in 0..dim {
        if piv == rows.len() {
            break;
        }
        for i in piv + 1..rows.len() {
            if rows[i][col].is_zero() {
                continue;
            }
            let a = rows[piv][col].clone();
            let b = rows[i][col].clone();
            let (g, x, y) = ext_gcd(&a, &b);
            let ag = &a / &g;
            let bg = &b / &g;
            let top: Vector = rows[piv]
                .iter()
                .zip(&rows[i])
                .map(|(u, v)| &x * u + &y * v)
                .collect();
            let bottom: Vector = rows[piv]
                .iter()
                .zip(&rows[i])
                .map(|(u, v)| &ag * v - &bg * u)
                .collect();
            rows[piv] = top;
            rows[i] = bottom;
        }
        if rows[piv][col].is_zero() {
            continue;
        }
        if rows[piv][col].is_negative() {
            for e in rows[piv].iter_mut() {
                *e = -&*e;
            }
        }
        let pivot_row = rows[piv].clone();
        let pivot = &pivot_row[col];
        for r in rows.iter_mut().take(piv) {
            let q = r[col].div_floor(pivot);
            if !q.is_zero() {
                axpy(r, &q, &pivot_row);
            }
        }
        piv += 1;
    }
    rows.truncate(piv);
    debug_assert!(rows.iter().all(|r| !is_zero_vec(r)));
    rows
}

fn pivot_col(row: &[BigInt]) -> usize {
    row.iter()
        .position(|e| !e.is_zero())
        .expect("basis rows are nonzero")
}

impl Lattice {
    /// The Z-span of `gens` in `Z^dim`.
    pub fn from_generators<I>(dim: usize, gens: I) -> Result<Lattice>
    where
        I: IntoIterator<Item = Vector>,
    {
        // Generators are folded in one at a time so the working matrix never
        // exceeds dim + 1 rows and stays reduced.
        let mut basis: Vec<Vector> = Vec::new();
        for g in gens {
            if g.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: g.len(),
                });
            }
            if is_zero_vec(&g) {
                continue;
            }
            let mut work = basis;
            work.push(g);
            basis = hnf_rows(work, dim);
        }
        Ok(Lattice { dim, rows: basis })
    }

    pub fn zero(dim: usize) -> Lattice {
        Lattice {
            dim,
            rows: Vec::new(),
        }
    }

    pub fn full(dim: usize) -> Lattice {
        let rows = (0..dim)
            .map(|i| {
                let mut v = vec![BigInt::zero(); dim];
                v[i] = BigInt::one();
                v
            })
            .collect();
        Lattice { dim, rows }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    fn check_dim(&self, n: usize) -> Result<()> {
        if n != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: n,
            });
        }
        Ok(())
    }

    /// Coordinates of `v` in the HNF basis, or `None` when `v ∉ L`.
    pub fn coordinates(&self, v: &[BigInt]) -> Result<Option<Vector>> {
        self.check_dim(v.len())?;
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rows.len());
        for row in &self.rows {
            let c = pivot_col(row);
            if rest[..c].iter().any(|e| !e.is_zero()) {
                return Ok(None);
            }
            let (q, rem) = rest[c].div_rem(&row[c]);
            if !rem.is_zero() {
                return Ok(None);
            }
            axpy(&mut rest, &q, row);
            coords.push(q);
        }
        Ok(if is_zero_vec(&rest) { Some(coords) } else { None })
    }

    pub fn contains(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.coordinates(v)?.is_some())
    }

    /// `other ⊆ self`.
    pub fn includes(&self, other: &Lattice) -> Result<bool> {
        self.check_dim(other.dim)?;
        for row in &other.rows {
            if !self.contains(row)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn sum(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other.dim)?;
        Lattice::from_generators(self.dim, self.rows.iter().chain(&other.rows).cloned())
    }

    pub fn intersect(&self, other: &Lattice) -> Result<Lattice> {
        self.check_dim(other.dim)?;
        let n = self.dim;
        // Rows (u | u) for u in self and (w | 0) for w in other; the vectors
        // of the span with vanishing left half are (0 | u) with u ∈ self ∩ other.
        let mut gens = Vec::with_capacity(self.rank() + other.rank());
        for u in &self.rows {
            let mut v = u.clone();
            v.extend(u.iter().cloned());
            gens.push(v);
        }
        for w in &other.rows {
            let mut v = w.clone();
            v.extend(std::iter::repeat(BigInt::zero()).take(n));
            gens.push(v);
        }
        let h = hnf_rows(gens, 2 * n);
        let right = h
            .into_iter()
            .filter(|r| is_zero_vec(&r[..n]))
            .map(|r| r[n..].to_vec());
        Lattice::from_generators(n, right)
    }

    /// `{ v ∈ Z^n : f(v) ∈ target }` for `f : Z^n → Z^m`.
    pub fn preimage(f: &IntMap, target: &Lattice) -> Result<Lattice> {
        target.check_dim(f.rows)?;
        let (m, n) = (f.rows, f.cols);
        let mut gens = Vec::with_capacity(n + target.rank());
        for j in 0..n {
            let mut v: Vector = (0..m).map(|i| f.matrix[i][j].clone()).collect();
            v.extend((0..n).map(|t| if t == j { BigInt::one() } else { BigInt::zero() }));
            gens.push(v);
        }
        for w in &target.rows {
            let mut v = w.clone();
            v.extend(std::iter::repeat(BigInt::zero()).take(n));
            gens.push(v);
        }
        let h = hnf_rows(gens, m + n);
        let right = h
            .into_iter()
            .filter(|r| is_zero_vec(&r[..m]))
            .map(|r| r[m..].to_vec());
        Lattice::from_generators(n, right)
    }

    /// Image of the lattice under `f`.
    pub fn image(&self, f: &IntMap) -> Result<Lattice> {
        self.check_dim(f.cols)?;
        let gens = self
            .rows
            .iter()
            .map(|r| f.apply(r))
            .collect::<Result<Vec<_>>>()?;
        Lattice::from_generators(f.rows, gens)
    }

    /// Structure of `self / sub`.
    pub fn quotient_invariants(&self, sub: &Lattice) -> Result<QuotientInvariants> {
        if !self.includes(sub)? {
            return Err(Error::NotIncluded);
        }
        let coords: Vec<Vector> = sub
            .rows
            .iter()
            .map(|r| {
                self.coordinates(r)
                    .map(|c| c.expect("inclusion checked above"))
            })
            .collect::<Result<_>>()?;
        let diag = smith_diagonal(coords, self.rank());
        let free_rank = self.rank() - diag.len();
        let torsion = diag.into_iter().filter(|d| !d.is_one()).collect();
        Ok(QuotientInvariants { torsion, free_rank })
    }

    /// `|self : sub|`.
    pub fn index_of(&self, sub: &Lattice) -> Result<Index> {
        let q = self.quotient_invariants(sub)?;
        if q.free_rank > 0 {
            return Ok(Index::Infinite);
        }
        Ok(Index::Finite(q.torsion.iter().product()))
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|e| e.to_string()).collect())
            .collect();
        json!({ "dim": self.dim, "rows": rows })
    }

    pub fn from_json(v: &Value) -> Result<Lattice> {
        let bad = |m: &str| Error::MalformedSequence(format!("lattice JSON: {m}"));
        let dim = v
            .get("dim")
            .and_then(Value::as_u64)
            .ok_or_else(|| bad("missing dim"))? as usize;
        let rows = v
            .get("rows")
            .and_then(Value::as_array)
            .ok_or_else(|| bad("missing rows"))?;
        let mut gens = Vec::with_capacity(rows.len());
        for row in rows {
            let row = row.as_array().ok_or_else(|| bad("row is not an array"))?;
            let parsed = row
                .iter()
                .map(|e| {
                    e.as_str()
                        .and_then(|s| s.parse::<BigInt>().ok())
                        .ok_or_else(|| bad("entries must be decimal strings"))
                })
                .collect::<Result<Vector>>()?;
            gens.push(parsed);
        }
        Lattice::from_generators(dim, gens)
    }
}

/// Index of `sub` in `sup`; free-function spelling of [`Lattice::index_of`].
pub fn index(sub: &Lattice, sup: &Lattice) -> Result<Index> {
    sup.index_of(sub)
}

/// Quotient structure of `sup / sub`.
pub fn invariant_factors(sub: &Lattice, sup: &Lattice) -> Result<QuotientInvariants> {
    sup.quotient_invariants(sub)
}

impl fmt::Display for Lattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.rows.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            f.write_str("(")?;
            for (j, e) in r.iter().enumerate() {
                if j > 0 {
                    f.write_str(",")?;
                }
                write!(f, "{e}")?;
            }
            f.write_str(")")?;
        }
        f.write_str("]")
    }
}

impl fmt::Display for Index {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Index::Finite(n) => write!(f, "{n}"),
            Index::Infinite => f.write_str("infinite"),
        }
    }
}

/// Nonzero Smith invariants `d_1 | d_2 | … | d_t` (positive) of a matrix
/// with `cols` columns.
pub fn smith_diagonal(mut m: Vec<Vector>, cols: usize) -> Vec<BigInt> {
    let rows = m.len();
    let mut diag = Vec::new();
    let mut t = 0usize;
    while t < rows.min(cols) {
        // smallest nonzero entry of the trailing block becomes the pivot
        let mut best: Option<(usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, e) in row.iter().enumerate().skip(t) {
                if e.is_zero() {
                    continue;
                }
                match best {
                    Some((bi, bj)) if m[bi][bj].abs() <= e.abs() => {}
                    _ => best = Some((i, j)),
                }
            }
        }
        let Some((bi, bj)) = best else { break };
        m.swap(t, bi);
        for row in m.iter_mut() {
            row.swap(t, bj);
        }

        loop {
            let mut clean = true;
            for i in t + 1..rows {
                if m[i][t].is_zero() {
                    continue;
                }
                let q = m[i][t].div_floor(&m[t][t]);
                let pivot_row = m[t].clone();
                axpy(&mut m[i], &q, &pivot_row);
                if !m[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if m[t][j].is_zero() {
                    continue;
                }
                let q = m[t][j].div_floor(&m[t][t]);
                for row in m.iter_mut() {
                    let sub = &q * &row[t];
                    row[j] -= sub;
                }
                if !m[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                // move the smallest remainder in row/column t onto the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !m[i][t].is_zero() && m[i][t].abs() < m[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !m[t][j].is_zero() && m[t][j].abs() < m[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                if best.1 == t {
                    m.swap(t, best.0);
                } else {
                    for row in m.iter_mut() {
                        row.swap(t, best.1);
                    }
                }
                continue;
            }
            // divisibility: pull an offending row into row t
            let pivot = m[t][t].clone();
            let offender = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&m[i][j] % &pivot).is_zero()));
            match offender {
                Some(i) => {
                    let extra = m[i].clone();
                    for (d, s) in m[t].iter_mut().zip(&extra) {
                        *d += s;
                    }
                }
                None => break,
            }
        }
        diag.push(m[t][t].abs());
        t += 1;
    }
    diag
}

impl IntMap {
    pub fn new(rows: usize, cols: usize, matrix: Vec<Vector>) -> Result<IntMap> {
        if matrix.len() != rows {
            return Err(Error::DimensionMismatch {
                expected: rows,
                got: matrix.len(),
            });
        }
        for r in &matrix {
            if r.len() != cols {
                return Err(Error::DimensionMismatch {
                    expected: cols,
                    got: r.len(),
                });
            }
        }
        Ok(IntMap { rows, cols, matrix })
    }

    /// Builds the matrix whose `j`-th column is `columns[j] ∈ Z^rows`.
    pub fn from_columns(rows: usize, columns: Vec<Vector>) -> Result<IntMap> {
        let cols = columns.len();
        for c in &columns {
            if c.len() != rows {
                return Err(Error::DimensionMismatch {
                    expected: rows,
                    got: c.len(),
                });
            }
        }
        let matrix = (0..rows)
            .map(|i| columns.iter().map(|c| c[i].clone()).collect())
            .collect();
        Ok(IntMap { rows, cols, matrix })
    }

    pub fn identity(n: usize) -> IntMap {
        IntMap {
            rows: n,
            cols: n,
            matrix: Lattice::full(n).rows,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn apply(&self, v: &[BigInt]) -> Result<Vector> {
        if v.len() != self.cols {
            return Err(Error::DimensionMismatch {
                expected: self.cols,
                got: v.len(),
            });
        }
        Ok(self
            .matrix
            .iter()
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }
}
