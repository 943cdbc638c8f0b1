#![allow(dead_code)]

use polar_spectrum::monomial::{index_of, CodeSpec, Monomial};
use polar_spectrum::pattern::{Mode, Pattern};
use rand::Rng;

/// Every decreasing information set of length `2^m`, the empty one included.
pub fn decreasing_specs(m: u32) -> Vec<CodeSpec> {
    polar_spectrum::oracle::decreasing_specs(m).unwrap()
}

/// Uniformly random subset of `[1, n]` with a random density.
pub fn random_pattern(rng: &mut impl Rng, n: usize, mode: Mode) -> Pattern {
    let p: f64 = rng.random();
    let idx: Vec<usize> = (1..=n).filter(|_| rng.random_bool(p)).collect();
    Pattern::custom(n, mode, idx).unwrap()
}

/// Random shortening pattern closed under taking factors.
pub fn random_dominated_shortening(rng: &mut impl Rng, m: u32) -> Pattern {
    let n = 1usize << m;
    let seeds = rng.random_range(0..=3);
    let mut idx = Vec::new();
    for _ in 0..seeds {
        let top: u32 = rng.random_range(0..n as u32);
        let mut sub = top;
        loop {
            idx.push(index_of(Monomial::new(sub, m).unwrap(), m).unwrap());
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & top;
        }
    }
    idx.sort_unstable();
    idx.dedup();
    Pattern::custom(n, Mode::Shorten, idx).unwrap()
}

pub fn random_bits(rng: &mut impl Rng, len: usize) -> Vec<bool> {
    (0..len).map(|_| rng.random()).collect()
}
