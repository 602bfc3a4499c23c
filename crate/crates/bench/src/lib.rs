//! Deterministic inputs shared by the benchmarks in `benches/`.

use num_bigint::BigInt;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tambara_core::{Element, GroupParams};

pub const SEED: u64 = 0x5eed;

/// An element of `R_level` with coefficients in `[-bound, bound]`.
pub fn random_element(rng: &mut ChaCha8Rng, params: GroupParams, level: usize, bound: i64) -> Element {
    let coeffs: Vec<i64> = (0..=level).map(|_| rng.gen_range(-bound..=bound)).collect();
    Element::from_i64s(params, level, &coeffs).expect("level within rank")
}

/// `count` random integer vectors of length `dim`, entries in `[-bound, bound]`.
pub fn random_generators(seed: u64, dim: usize, count: usize, bound: i64) -> Vec<Vec<BigInt>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (0..dim).map(|_| BigInt::from(rng.gen_range(-bound..=bound))).collect())
        .collect()
}
