//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use tambara_core::oracle::max_oracle_from_env;
use tambara_core::verify::{
    closed_forms, covering_certificates, example_picture, lattice_soundness, oracle_agreement,
    primality_evidence, spectrum_shape, structure_map_laws, Tally,
};
use tambara_core::{GroupParams, Result};

const SEED: u64 = 0x7a3b_a5a0;

const PICTURE_BUDGET: Duration = Duration::from_secs(1);
const COUNT_BUDGET: Duration = Duration::from_secs(10);
const ORACLE_BUDGET: Duration = Duration::from_secs(60);
const CLOSED_FORM_BUDGET: Duration = Duration::from_secs(10);
const PRIMALITY_BUDGET: Duration = Duration::from_secs(120);

const LAW_CASES: usize = 1000;
const LAW_MAX_LEVEL: usize = 4;
const LAW_COEFF: i64 = 9;
const HNF_CASES: usize = 500;
const PREIMAGE_CASES: usize = 500;
const CHAIN_CASES: usize = 200;
const FALSIFIER_BOUND: u32 = 3;

fn two_primes_besides(p: u64) -> Vec<u64> {
    if p == 2 {
        vec![3, 5]
    } else {
        vec![2, 5]
    }
}

fn picture() -> Result<Tally> {
    example_picture()
}

fn count_and_dimension() -> Result<Tally> {
    let mut t = Tally::default();
    for p in [2, 3] {
        for r in 0..=3 {
            t.absorb(spectrum_shape(GroupParams::new(p, r)?, &two_primes_besides(p))?);
        }
    }
    Ok(t)
}

fn norm_oracle() -> Result<Tally> {
    let mut t = Tally::default();
    let cap = max_oracle_from_env();
    for p in [2, 3] {
        let (tally, enumerated) = oracle_agreement(p, 3, 2, cap)?;
        t.absorb(tally);
        t.record(enumerated > 0, || format!("p={p}: enumeration never ran"));
    }
    Ok(t)
}

fn laws() -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut t = Tally::default();
    for p in [2, 3] {
        t.absorb(structure_map_laws(&mut rng, p, LAW_MAX_LEVEL, LAW_COEFF, LAW_CASES)?);
    }
    Ok(t)
}

fn ls_closed_forms() -> Result<Tally> {
    let mut t = Tally::default();
    for p in [2, 3] {
        t.absorb(closed_forms(p, &[3, 5], 4, 2)?);
    }
    Ok(t)
}

fn coverings() -> Result<Tally> {
    let mut t = Tally::default();
    for p in [2, 3] {
        t.absorb(covering_certificates(p, &[3, 5], 4, 2)?);
    }
    Ok(t)
}

fn primality() -> Result<Tally> {
    let mut t = Tally::default();
    for p in [2, 3] {
        for r in 0..=2 {
            t.absorb(primality_evidence(GroupParams::new(p, r)?, &two_primes_besides(p), FALSIFIER_BOUND)?);
        }
    }
    Ok(t)
}

fn lattices() -> Result<Tally> {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 0xff);
    lattice_soundness(&mut rng, HNF_CASES, PREIMAGE_CASES, CHAIN_CASES)
}

fn main() -> ExitCode {
    type Check = fn() -> Result<Tally>;
    let criteria: [(&str, Check, Option<Duration>); 8] = [
        ("spectrum picture for p=2, r=1, Q={3}", picture, Some(PICTURE_BUDGET)),
        ("point count and dimension, p in {2,3}, r <= 3", count_and_dimension, Some(COUNT_BUDGET)),
        ("norm closed form vs census vs enumeration", norm_oracle, Some(ORACLE_BUDGET)),
        ("structure map laws, seeded random cases", laws, None),
        ("L/S closed forms and S/L paths over (p)", ls_closed_forms, Some(CLOSED_FORM_BUDGET)),
        ("covering indices of the J chains", coverings, None),
        ("primality evidence and non-prime witnesses", primality, Some(PRIMALITY_BUDGET)),
        ("lattice engine soundness, seeded random cases", lattices, None),
    ];
    let mut all = true;
    for (idx, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let in_time = budget.map_or(true, |b| elapsed <= b);
        let (ok, detail) = match &outcome {
            Ok(t) => (t.passed() && in_time, t.to_string()),
            Err(e) => (false, format!("error: {e}")),
        };
        let limit = budget.map_or(String::new(), |b| format!(", limit {:.0?}", b));
        println!(
            "criterion {}: {} - {name} ({detail}; {:.2?}{limit})",
            idx + 1,
            if ok { "PASS" } else { "FAIL" },
            elapsed
        );
        all &= ok;
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
