//! Multiplicative transfer by counting sections.
//!
//! For `a = Σ m_i X_{k,i}` with `m_i >= 0`, let `A = ⊔_i m_i · G/H_i` over
//! `G/H_k`, where `G = H_l` is the target group. The norm of `a` is the
//! `G`-set `S` of sections of `A → G/H_k`. Writing `c(H_j)` for the number of
//! sections whose stabilizer is exactly `H_j`, the `X_{l,j}` coefficient of
//! `jnd^l_k(a)` is `c(H_j) / |G : H_j|`.
//!
//! Two independent routes are provided: [`c_census`] counts fixed sections in
//! closed form and peels off larger stabilizers top-down, while
//! [`enumerate_sections`] literally lists every section and computes its
//! stabilizer. Neither route touches [`Element::jnd`].

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{exact_div, pow_big, pow_u64};
use crate::error::{Error, Result};
use crate::ring::{Element, GroupParams};

/// Default cap on the number of sections [`enumerate_sections`] will list.
pub const DEFAULT_MAX_ORACLE: u64 = 1_000_000;

/// Environment variable overriding [`DEFAULT_MAX_ORACLE`].
pub const MAX_ORACLE_ENV: &str = "TAMBARA_MAX_ORACLE";

pub fn max_oracle_from_env() -> u64 {
    std::env::var(MAX_ORACLE_ENV)
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_ORACLE)
}

/// Section counts `c(H_j)` for `0 <= j <= l`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SectionCensus {
    pub params: GroupParams,
    pub source: usize,
    pub target: usize,
    pub coeffs: Vec<BigInt>,
    /// `counts[j] = c(H_j)`.
    pub counts: Vec<BigInt>,
}

impl SectionCensus {
    /// Sections over one point of `G/H_k`: `Σ_i m_i p^{k-i}`.
    pub fn fiber_size(&self) -> BigInt {
        fiber_size(self.params, self.source, &self.coeffs)
    }

    /// Checks the counting identities: the counts add up to
    /// `fiber^{p^{l-k}}` and each `c(H_j)` is a multiple of `p^{l-j}`.
    pub fn check(&self) -> Result<()> {
        let total: BigInt = self.counts.iter().sum();
        let e = pow_u64(self.params.p(), self.target - self.source)?;
        let expected = pow_big(&self.fiber_size(), e);
        if total != expected {
            return Err(Error::Internal(format!(
                "census total {total} differs from {expected}"
            )));
        }
        for (j, c) in self.counts.iter().enumerate() {
            if !(c % self.params.pow(self.target - j)).is_zero() {
                return Err(Error::Internal(format!(
                    "c(H_{j}) = {c} is not a multiple of the orbit size"
                )));
            }
        }
        Ok(())
    }

    /// The norm as an element of `R_l`.
    pub fn to_element(&self) -> Result<Element> {
        let l = self.target;
        let coeffs = self
            .counts
            .iter()
            .enumerate()
            .map(|(j, c)| exact_div(c, &self.params.pow(l - j), "orbit count"))
            .collect::<Result<Vec<_>>>()?;
        Element::new(self.params, l, coeffs)
    }
}

fn fiber_size(params: GroupParams, k: usize, m: &[BigInt]) -> BigInt {
    m.iter()
        .enumerate()
        .map(|(i, mi)| mi * params.pow(k - i))
        .sum()
}

fn check_nonneg(m: &[BigInt]) -> Result<()> {
    match m.iter().find(|x| x.is_negative()) {
        Some(x) => Err(Error::NegativeCoefficient(x.to_string())),
        None => Ok(()),
    }
}

fn check_levels(params: GroupParams, k: usize, l: usize, m: &[BigInt]) -> Result<()> {
    params.check_level(l)?;
    if k > l {
        return Err(Error::Level(format!("source level {k} above target {l}")));
    }
    if m.len() != k + 1 {
        return Err(Error::DimensionMismatch {
            expected: k + 1,
            got: m.len(),
        });
    }
    Ok(())
}

/// `|K \ G / H| = |G : KH|` for `K = H_j`, `H = H_k` inside `G = H_r`.
pub fn orbit_count(params: GroupParams, j: usize, k: usize) -> Result<BigInt> {
    params.check_level(j)?;
    params.check_level(k)?;
    Ok(params.pow(params.r() - j.max(k)))
}

/// Number of sections fixed by `H_j`:
/// `(Σ_{min(j,k) <= i <= k} m_i p^{k-i})^{|G : H_j H_k|}` with `G = H_l`.
pub fn fixed_sections(
    params: GroupParams,
    k: usize,
    l: usize,
    m: &[BigInt],
    j: usize,
) -> Result<BigInt> {
    check_levels(params, k, l, m)?;
    check_nonneg(m)?;
    if j > l {
        return Err(Error::Level(format!("subgroup level {j} above {l}")));
    }
    let local = GroupParams::new(params.p(), l)?;
    let lo = j.min(k);
    let base: BigInt = (lo..=k).map(|i| &m[i] * params.pow(k - i)).sum();
    let r_k = orbit_count(local, j, k)?
        .to_u64()
        .ok_or_else(|| Error::Range("orbit count exceeds u64".into()))?;
    Ok(pow_big(&base, r_k))
}

/// `c(H_j)` for all `j`, computed top-down from the fixed-section counts.
pub fn c_census(params: GroupParams, k: usize, l: usize, m: &[BigInt]) -> Result<SectionCensus> {
    check_levels(params, k, l, m)?;
    check_nonneg(m)?;
    let mut counts = vec![BigInt::zero(); l + 1];
    let mut above = BigInt::zero();
    for j in (0..=l).rev() {
        let fixed = fixed_sections(params, k, l, m, j)?;
        counts[j] = &fixed - &above;
        above += &counts[j];
    }
    let census = SectionCensus {
        params,
        source: k,
        target: l,
        coeffs: m.to_vec(),
        counts,
    };
    census.check()?;
    Ok(census)
}

/// Norm computed from the section census.
pub fn jnd_oracle(a: &Element, target: usize) -> Result<Element> {
    c_census(a.params(), a.level(), target, a.coeffs())?.to_element()
}

/// Literal enumeration of all sections of `A → G/H_k` and their stabilizers.
/// Refuses inputs with more than `cap` sections.
pub fn enumerate_sections(a: &Element, target: usize, cap: u64) -> Result<SectionCensus> {
    let params = a.params();
    let (k, l) = (a.level(), target);
    let m = a.coeffs();
    check_levels(params, k, l, m)?;
    check_nonneg(m)?;

    let fiber = fiber_size(params, k, m);
    let points = pow_u64(params.p(), l - k)?;
    let total = pow_big(&fiber, points);
    if total > BigInt::from(cap) {
        return Err(Error::TooLarge {
            size: total.to_string(),
            cap,
        });
    }
    let mut counts = vec![0u64; l + 1];
    if fiber.is_zero() {
        return finish(params, k, l, m, counts);
    }

    let p = params.p();
    let order = pow_u64(p, l)?; // |G|
    let base_mod = points; // |G/H_k| = p^{l-k}
    let n_fiber = fiber.to_usize().expect("bounded by cap");
    let npoints = points as usize;

    // options[x][t] = (orbit type i, copy, y ∈ Z/p^{l-i}) lying over x.
    let mut options: Vec<Vec<(usize, u64, u64)>> = vec![Vec::with_capacity(n_fiber); npoints];
    for (x, opts) in options.iter_mut().enumerate() {
        for (i, mi) in m.iter().enumerate() {
            let copies = mi.to_u64().expect("bounded by cap");
            let lift = pow_u64(p, k - i)?;
            for c in 0..copies {
                for t in 0..lift {
                    opts.push((i, c, x as u64 + t * base_mod));
                }
            }
        }
    }
    let modulus: Vec<u64> = (0..=k).map(|i| pow_u64(p, l - i)).collect::<Result<_>>()?;
    let gens: Vec<u64> = (0..=l).map(|j| pow_u64(p, l - j)).collect::<Result<_>>()?;

    let mut choice = vec![0usize; npoints];
    loop {
        // Stabilizer is H_j for the largest j whose generator fixes s.
        let mut stab = 0usize;
        for j in (1..=l).rev() {
            let g = gens[j] % order;
            let fixes = (0..npoints).all(|x| {
                let src = ((x as u64 + base_mod - (g % base_mod)) % base_mod) as usize;
                let (i, c, y) = options[src][choice[src]];
                let moved = (i, c, (y + g) % modulus[i]);
                options[x][choice[x]] == moved
            });
            if fixes {
                stab = j;
                break;
            }
        }
        counts[stab] += 1;

        // next section in mixed radix
        let mut pos = 0;
        loop {
            if pos == npoints {
                return finish(params, k, l, m, counts);
            }
            choice[pos] += 1;
            if choice[pos] < n_fiber {
                break;
            }
            choice[pos] = 0;
            pos += 1;
        }
    }
}

fn finish(
    params: GroupParams,
    k: usize,
    l: usize,
    m: &[BigInt],
    counts: Vec<u64>,
) -> Result<SectionCensus> {
    let census = SectionCensus {
        params,
        source: k,
        target: l,
        coeffs: m.to_vec(),
        counts: counts.into_iter().map(BigInt::from).collect(),
    };
    census.check()?;
    Ok(census)
}
