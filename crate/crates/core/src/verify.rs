//! Batch checks of the library against its classification results, shared by
//! the `verify` and `oracle-check` commands and the acceptance tests.

use std::fmt;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ideals::{check_tambara, j_ideal, l_ideal, s_generated, IdealSequence};
use crate::lattice::{index, IntMap, Index, Lattice, Vector};
use crate::oracle::{enumerate_sections, jnd_oracle};
use crate::primality::{check_pk_for_b, falsify_prime, verify_witness, PkOutcome, PrimeStatus, Witness};
use crate::ring::{Element, GroupParams};
use crate::spectrum::{p_fiber_sequences, zero_fiber_sequence, PointKind, Spectrum};

const KEPT_FAILURES: usize = 8;

/// Number of cases run and a sample of the failures.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Tally {
    pub cases: usize,
    pub failed: usize,
    pub failures: Vec<String>,
}

impl Tally {
    pub fn passed(&self) -> bool {
        self.failed == 0
    }

    pub fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failed += 1;
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(what());
            }
        }
    }

    pub fn absorb(&mut self, other: Tally) {
        self.cases += other.cases;
        self.failed += other.failed;
        for f in other.failures {
            if self.failures.len() < KEPT_FAILURES {
                self.failures.push(f);
            }
        }
    }
}

impl fmt::Display for Tally {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} cases, {} failed", self.cases, self.failed)?;
        for msg in &self.failures {
            write!(f, "\n    {msg}")?;
        }
        Ok(())
    }
}

fn n(x: i64) -> BigInt {
    BigInt::from(x)
}

/// The `p = 2, r = 1, Q = {3}` picture: five points, five covering edges,
/// dimension 2.
pub fn example_picture() -> Result<Tally> {
    let s = Spectrum::compute(GroupParams::new(2, 1)?, &[3])?;
    let mut t = Tally::default();
    t.record(s.points.len() == 5, || format!("{} points", s.points.len()));
    let mut got: Vec<(String, String)> = s
        .poset
        .edges
        .iter()
        .map(|&(a, b)| (s.points[a].label(), s.points[b].label()))
        .collect();
    got.sort();
    let mut want: Vec<(String, String)> = [
        ("L^0(0)", "L^1(0)"),
        ("L^1(0)", "L^1(2)"),
        ("L^0(0)", "L^0 S^1(3)"),
        ("L^0 S^1(3)", "L^1 S^0(3)"),
        ("L^1(0)", "L^1 S^0(3)"),
    ]
    .iter()
    .map(|(a, b)| (a.to_string(), b.to_string()))
    .collect();
    want.sort();
    t.record(got == want, || format!("edges {got:?}"));
    t.record(s.dimension == 2, || format!("dimension {}", s.dimension));
    Ok(t)
}

/// Point count, dimension, chain shape of the fibers, and agreement between
/// the covering edges and the full inclusion relation.
pub fn spectrum_shape(params: GroupParams, qs: &[u64]) -> Result<Tally> {
    let s = Spectrum::compute(params, qs)?;
    let r = params.r();
    let mut t = Tally::default();
    let count = 1 + (r + 1) * (1 + s.qs.len());
    t.record(s.points.len() == count, || {
        format!("p={} r={r}: {} points, expected {count}", params.p(), s.points.len())
    });
    t.record(s.dimension == r + 1, || {
        format!("p={} r={r}: dimension {}", params.p(), s.dimension)
    });
    t.record(s.poset.closure_of_edges() == s.poset.leq, || {
        format!("p={} r={r}: covering edges do not generate the order", params.p())
    });
    for &q in &s.qs {
        let fiber: Vec<usize> = (0..s.points.len())
            .filter(|&x| matches!(s.points[x].kind, PointKind::LiSq { q: qq, .. } if qq == q))
            .collect();
        let chain = fiber.len() == r + 1
            && fiber.windows(2).all(|w| s.poset.edges.contains(&(w[0], w[1])));
        t.record(chain, || format!("p={} r={r}: fiber over {q} is not a chain", params.p()));
    }
    Ok(t)
}

/// Closed-form norms against the section census for all coefficient vectors
/// in `[0, max_coeff]^{k+1}`, `0 <= k <= l <= max_level`; literal enumeration
/// joins in wherever it has at most `cap` sections.
pub fn oracle_agreement(p: u64, max_level: usize, max_coeff: i64, cap: u64) -> Result<(Tally, usize)> {
    let params = GroupParams::new(p, max_level)?;
    let mut t = Tally::default();
    let mut enumerated = 0;
    for k in 0..=max_level {
        let mut digits = vec![0i64; k + 1];
        loop {
            let a = Element::from_i64s(params, k, &digits)?;
            for l in k..=max_level {
                let closed = a.jnd(l)?;
                let census = jnd_oracle(&a, l)?;
                t.record(closed == census, || format!("jnd^{l}_{k}({a}): {closed} vs census {census}"));
                match enumerate_sections(&a, l, cap) {
                    Ok(c) => {
                        enumerated += 1;
                        let listed = c.to_element()?;
                        t.record(listed == closed, || {
                            format!("jnd^{l}_{k}({a}): {closed} vs enumeration {listed}")
                        });
                    }
                    Err(Error::TooLarge { .. }) => {}
                    Err(e) => return Err(e),
                }
            }
            if !advance(&mut digits, max_coeff) {
                break;
            }
        }
    }
    Ok((t, enumerated))
}

/// Steps an odometer over `[0, max]^len`; `false` once it wraps around.
fn advance(digits: &mut [i64], max: i64) -> bool {
    for d in digits.iter_mut().rev() {
        if *d < max {
            *d += 1;
            return true;
        }
        *d = 0;
    }
    false
}

fn random_element<R: Rng>(rng: &mut R, params: GroupParams, level: usize, bound: i64) -> Result<Element> {
    let c: Vec<i64> = (0..=level).map(|_| rng.gen_range(-bound..=bound)).collect();
    Element::from_i64s(params, level, &c)
}

/// Random instances of the ring-homomorphism, additivity, multiplicativity,
/// folding and composition laws of the three structure maps. Each of the
/// eleven laws gets `cases` instances.
pub fn structure_map_laws<R: Rng>(
    rng: &mut R,
    p: u64,
    max_level: usize,
    bound: i64,
    cases: usize,
) -> Result<Tally> {
    let params = GroupParams::new(p, max_level)?;
    let mut t = Tally::default();
    for _ in 0..cases {
        let l = rng.gen_range(0..=max_level);
        let k = rng.gen_range(0..=l);
        let m = rng.gen_range(l..=max_level);
        let a = random_element(rng, params, k, bound)?;
        let b = random_element(rng, params, k, bound)?;
        let x = random_element(rng, params, l, bound)?;
        let y = random_element(rng, params, l, bound)?;
        let z = random_element(rng, params, m, bound)?;
        let ctx = || format!("p={p} k={k} l={l} m={m} a={a} b={b} x={x} y={y}");

        t.record(x.add(&y)?.res(k)? == x.res(k)?.add(&y.res(k)?)?, || format!("res additive: {}", ctx()));
        t.record(x.mul(&y)?.res(k)? == x.res(k)?.mul(&y.res(k)?)?, || format!("res multiplicative: {}", ctx()));
        t.record(Element::one(params, l)?.res(k)? == Element::one(params, k)?, || format!("res unital: {}", ctx()));
        t.record(a.add(&b)?.ind(l)? == a.ind(l)?.add(&b.ind(l)?)?, || format!("ind additive: {}", ctx()));
        t.record(a.mul(&b)?.jnd(l)? == a.jnd(l)?.mul(&b.jnd(l)?)?, || format!("jnd multiplicative: {}", ctx()));
        t.record(Element::one(params, k)?.jnd(l)? == Element::one(params, l)?, || format!("jnd unital: {}", ctx()));
        t.record(a.ind(l)?.res(k)? == a.scale(&params.pow(l - k)), || format!("res ind: {}", ctx()));
        let e = crate::arith::pow_u64(p, l - k)?;
        let e = u32::try_from(e).map_err(|_| Error::Range("exponent".into()))?;
        t.record(a.jnd(l)?.res(k)? == a.pow(e), || format!("res jnd: {}", ctx()));
        t.record(z.res(l)?.res(k)? == z.res(k)?, || format!("res transitive: {} z={z}", ctx()));
        t.record(
            a.ind(l)?.ind(m)? == a.ind(m)? && a.jnd(l)?.jnd(m)? == a.jnd(m)?,
            || format!("ind/jnd transitive: {} z={z}", ctx()),
        );
        t.record(a.mul(&x.res(k)?)?.ind(l)? == a.ind(l)?.mul(&x)?, || format!("reciprocity: {}", ctx()));
    }
    Ok(t)
}

/// `L` and `S` of the `J` family against their closed forms, with `S`
/// generated from transfers and norms, plus every `S`/`L` path over `(p)`.
pub fn closed_forms(p: u64, qs: &[u64], max_level: usize, max_e: u32) -> Result<Tally> {
    let params = GroupParams::new(p, max_level)?;
    let mut t = Tally::default();
    let mut ns = vec![0i64];
    ns.extend(qs.iter().filter(|&&q| q != p).map(|&q| q as i64));
    for &x in &ns {
        for l in 1..=max_level {
            for k in 0..l {
                let lower = j_ideal(params, l - 1, k, &n(x))?;
                let want_l = j_ideal(params, l, k, &n(x))?;
                t.record(l_ideal(&lower)? == want_l, || format!("L(J[{},{k}]({x}))", l - 1));
                let want_s = j_ideal(params, l, if k + 1 == l { l } else { k }, &n(x))?;
                t.record(s_generated(&lower)? == want_s, || format!("S(J[{},{k}]({x}))", l - 1));
            }
        }
    }
    let pb = n(p as i64);
    for e in 0..=max_e {
        let pe = num_traits::pow(pb.clone(), e as usize + 1);
        for l in 1..=max_level {
            let lower = j_ideal(params, l - 1, 0, &pe)?;
            t.record(l_ideal(&lower)? == j_ideal(params, l, 0, &pe)?, || format!("L(J[{},0]({pe}))", l - 1));
            if l >= 2 || e == 0 {
                let want = j_ideal(params, l, 0, &(&pe * &pb))?;
                t.record(s_generated(&lower)? == want, || format!("S(J[{},0]({pe}))", l - 1));
            }
        }
    }
    for l in 1..=max_level {
        for mask in 0u32..(1 << l) {
            let mut seq = IdealSequence::base(params, pb.clone())?;
            for step in 0..l {
                seq = if mask >> step & 1 == 1 { seq.s_op()?.0 } else { seq.l_op()? };
            }
            let k = mask.count_ones() as usize;
            let want = j_ideal(params, l, 0, &num_traits::pow(pb.clone(), k + 1))?;
            t.record(seq.top_ideal() == &want, || format!("S/L word {mask:0l$b} over ({p})"));
        }
    }
    Ok(t)
}

/// Prime indices between consecutive members of the `J` chains.
pub fn covering_certificates(p: u64, qs: &[u64], max_level: usize, max_e: u32) -> Result<Tally> {
    let params = GroupParams::new(p, max_level)?;
    let mut t = Tally::default();
    for &q in qs.iter().filter(|&&q| q != p) {
        let q = n(q as i64);
        for l in 0..=max_level {
            for k in 0..l {
                let sub = j_ideal(params, l, k + 1, &q)?;
                let sup = j_ideal(params, l, k, &q)?;
                let got = index(sub.lattice(), sup.lattice())?;
                t.record(got == Index::Finite(q.clone()), || {
                    format!("[J[{l},{k}]({q}) : J[{l},{}]({q})] = {got}", k + 1)
                });
            }
        }
    }
    let pb = n(p as i64);
    for l in 0..=max_level {
        for e in 0..=max_e as usize {
            let sub = j_ideal(params, l, 0, &num_traits::pow(pb.clone(), e + 2))?;
            let sup = j_ideal(params, l, 0, &num_traits::pow(pb.clone(), e + 1))?;
            let got = index(sub.lattice(), sup.lattice())?;
            t.record(got == Index::Finite(pb.clone()), || {
                format!("[J[{l},0]({p}^{}) : J[{l},0]({p}^{})] = {got}", e + 1, e + 2)
            });
        }
    }
    Ok(t)
}

/// Spectrum points survive the falsifier; the non-prime siblings over `(p)`
/// and `[0, …, 0, (n·F)]` for `2 <= n <= 5` yield verified witnesses of the
/// expected shape.
pub fn primality_evidence(params: GroupParams, qs: &[u64], bound: u32) -> Result<Tally> {
    let mut t = Tally::default();
    let s = Spectrum::compute(params, qs)?;
    for pt in &s.points {
        t.record(check_tambara(&pt.seq)?.is_certified(), || format!("{} is not an ideal sequence", pt.label()));
        let report = falsify_prime(&pt.seq, bound)?;
        t.record(report.status == PrimeStatus::NoWitnessFound, || {
            format!("{}: {}", pt.label(), report.to_json())
        });
    }

    let pb = n(params.p() as i64);
    let r = params.r();
    for top in 1..=r {
        let sub = GroupParams::new(params.p(), top)?;
        for (word, seq) in p_fiber_sequences(sub)? {
            let Some(first_s) = word.find('S') else { continue };
            let k = first_s + 1;
            let known = Witness {
                k,
                i: k,
                b: Element::constant(sub, k, pb.clone())?,
                a: Element::constant(sub, k, pb.clone())?,
            };
            t.record(verify_witness(&seq, &known), || format!("a = b = p fails for {word}"));
            let found = falsify_prime(&seq, bound)?;
            t.record(found.witness().is_some_and(|w| verify_witness(&seq, w)), || {
                format!("no verified witness for {word}: {}", found.to_json())
            });
        }
        for m in 2..=5i64 {
            let seq = zero_fiber_sequence(sub, top, m)?;
            let b = Element::constant(sub, 0, n(m))?;
            let ok = match check_pk_for_b(&seq, top, 0, &b)? {
                PkOutcome::Fails(w) => w.a == Element::f(sub, top, top - 1)? && verify_witness(&seq, &w),
                PkOutcome::Holds => false,
            };
            t.record(ok, || format!("[0,…,({m}F)] at level {top}: no witness a = F"));
            let found = falsify_prime(&seq, (m as u32).max(bound))?;
            t.record(found.witness().is_some_and(|w| verify_witness(&seq, w)), || {
                format!("[0,…,({m}F)] at level {top}: falsifier found nothing")
            });
        }
    }
    Ok(t)
}

fn random_vector<R: Rng>(rng: &mut R, dim: usize, bound: i64) -> Vector {
    (0..dim).map(|_| n(rng.gen_range(-bound..=bound))).collect()
}

fn full_rank_lattice<R: Rng>(rng: &mut R, dim: usize, within: &Lattice) -> Result<Lattice> {
    loop {
        let gens: Vec<Vector> = (0..dim)
            .map(|_| {
                let c = random_vector(rng, within.rank(), 3);
                let mut v = vec![BigInt::from(0); dim];
                for (ci, row) in c.iter().zip(within.basis()) {
                    for (vj, rj) in v.iter_mut().zip(row) {
                        *vj += ci * rj;
                    }
                }
                v
            })
            .collect();
        let lat = Lattice::from_generators(dim, gens)?;
        if lat.rank() == dim {
            return Ok(lat);
        }
    }
}

/// Canonical forms under reordering and row mixing, preimage membership,
/// and multiplicativity of indices along chains.
pub fn lattice_soundness<R: Rng>(rng: &mut R, canon: usize, preimages: usize, chains: usize) -> Result<Tally> {
    let mut t = Tally::default();
    for _ in 0..canon {
        let dim = rng.gen_range(1..=4);
        let count = rng.gen_range(0..=5);
        let gens: Vec<Vector> = (0..count).map(|_| random_vector(rng, dim, 6)).collect();
        let base = Lattice::from_generators(dim, gens.clone())?;
        let mut mixed = gens.clone();
        mixed.shuffle(rng);
        if mixed.len() >= 2 {
            for _ in 0..3 {
                let (i, j) = (rng.gen_range(0..mixed.len()), rng.gen_range(0..mixed.len()));
                if i != j {
                    let c = n(rng.gen_range(-3..=3));
                    let add: Vector = mixed[j].iter().map(|x| x * &c).collect();
                    for (x, y) in mixed[i].iter_mut().zip(add) {
                        *x += y;
                    }
                }
            }
        }
        let again = Lattice::from_generators(dim, mixed)?;
        t.record(base == again, || format!("{gens:?}: {base} vs {again}"));
    }
    for _ in 0..preimages {
        let rows = rng.gen_range(1..=4);
        let cols = rng.gen_range(1..=4);
        let matrix: Vec<Vector> = (0..rows).map(|_| random_vector(rng, cols, 4)).collect();
        let f = IntMap::new(rows, cols, matrix)?;
        let tcount = rng.gen_range(0..=rows + 1);
        let target = Lattice::from_generators(rows, (0..tcount).map(|_| random_vector(rng, rows, 5)).collect::<Vec<_>>())?;
        let pre = Lattice::preimage(&f, &target)?;
        let v = random_vector(rng, cols, 5);
        let direct = target.contains(&f.apply(&v)?)?;
        t.record(pre.contains(&v)? == direct, || format!("preimage membership of {v:?}"));
    }
    for _ in 0..chains {
        let dim = rng.gen_range(1..=4);
        let c = full_rank_lattice(rng, dim, &Lattice::full(dim))?;
        let b = full_rank_lattice(rng, dim, &c)?;
        let a = full_rank_lattice(rng, dim, &b)?;
        let (ab, bc, ac) = (index(&a, &b)?, index(&b, &c)?, index(&a, &c)?);
        let ok = match (&ab, &bc, &ac) {
            (Index::Finite(x), Index::Finite(y), Index::Finite(z)) => x * y == *z,
            _ => false,
        };
        t.record(ok, || format!("indices {ab} * {bc} != {ac}"));
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn tally_keeps_a_sample() {
        let mut t = Tally::default();
        for x in 0..20 {
            t.record(x % 2 == 0, || format!("odd {x}"));
        }
        assert_eq!((t.cases, t.failed, t.failures.len()), (20, 10, KEPT_FAILURES));
        assert!(!t.passed());
        assert!(t.to_string().starts_with("20 cases, 10 failed"));
    }

    #[test]
    fn small_runs_pass() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        assert!(example_picture().unwrap().passed());
        assert!(spectrum_shape(GroupParams::new(3, 1).unwrap(), &[2, 5]).unwrap().passed());
        let (t, enumerated) = oracle_agreement(2, 2, 1, 10_000).unwrap();
        assert!(t.passed() && enumerated > 0, "{t}");
        assert!(structure_map_laws(&mut rng, 3, 2, 4, 20).unwrap().passed());
        assert!(closed_forms(2, &[3], 2, 1).unwrap().passed());
        assert!(covering_certificates(3, &[2, 5], 2, 1).unwrap().passed());
        assert!(primality_evidence(GroupParams::new(2, 1).unwrap(), &[3], 2).unwrap().passed());
        assert!(lattice_soundness(&mut rng, 20, 20, 10).unwrap().passed());
    }
}
