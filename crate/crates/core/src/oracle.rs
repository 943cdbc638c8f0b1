//! Reference implementations by exhaustive enumeration and sampling.
//!
//! Everything here works on codewords of length at most 64, packed into a
//! `u64` with bit `z - 1` holding coordinate `z`. These routines exist to
//! check the closed forms and recursions at small sizes; they make no attempt
//! to scale.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::monomial::{eval_at, is_decreasing, lambda_log2, CodeSpec, Monomial};
use crate::pattern::{respects_binary_domination, Mode, Pattern};
use crate::spectrum::WeightSpectrum;

/// Largest exponent the packed representation supports.
pub const MAX_ORACLE_M: u32 = 6;

/// Enumeration and sampling limits. Exceeding one is an error.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OracleCaps {
    /// Largest code dimension enumerated by [`brute_code_spectrum`].
    pub max_dimension: usize,
    /// Largest number of free input bits in [`brute_coset_spectrum`].
    pub max_free_bits: usize,
    /// Largest `log2 λ_f` enumerated by [`enumerate_t`].
    pub max_lambda_log2: u32,
    /// Largest code dimension for [`mc_pretransform_avg`].
    pub max_mc_dimension: usize,
    /// Smallest accepted sample count for [`mc_pretransform_avg`].
    pub min_mc_samples: usize,
}

impl Default for OracleCaps {
    fn default() -> Self {
        OracleCaps {
            max_dimension: 24,
            max_free_bits: 24,
            max_lambda_log2: 20,
            max_mc_dimension: 16,
            min_mc_samples: 1000,
        }
    }
}

fn cap(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        Err(Error::CapExceeded {
            what,
            value: value as u128,
            cap: limit as u128,
        })
    } else {
        Ok(())
    }
}

fn check_oracle_m(m: u32) -> Result<()> {
    if m > MAX_ORACLE_M {
        return Err(Error::CapExceeded {
            what: "oracle block-length exponent",
            value: m as u128,
            cap: MAX_ORACLE_M as u128,
        });
    }
    Ok(())
}

fn full_mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Packed evaluation vector of a monomial.
pub fn packed_row(f: Monomial, m: u32) -> u64 {
    (1..=1usize << m)
        .filter(|&z| eval_at(f, z))
        .fold(0u64, |acc, z| acc | 1 << (z - 1))
}

/// Packed rows of `F^{⊗m}`, indexed by row − 1.
pub fn packed_rows(m: u32) -> Vec<u64> {
    let n = 1usize << m;
    let full = (n - 1) as u32;
    (1..=n)
        .map(|z| packed_row(Monomial::from_mask(!(z as u32 - 1) & full), m))
        .collect()
}

/// Unpacks a codeword into coordinate flags.
pub fn unpack(word: u64, n: usize) -> Vec<bool> {
    (0..n).map(|k| word >> k & 1 == 1).collect()
}

pub fn pack(bits: &[bool]) -> u64 {
    bits.iter()
        .enumerate()
        .fold(0u64, |acc, (k, &b)| acc | (b as u64) << k)
}

/// Visits `base ⊕ span(gens)` in Gray-code order, one XOR per step.
fn for_each_in_span(gens: &[u64], base: u64, mut visit: impl FnMut(u64)) {
    let mut word = base;
    visit(word);
    for step in 1u64..1 << gens.len() {
        word ^= gens[step.trailing_zeros() as usize];
        visit(word);
    }
}

/// How a pattern acts on packed codewords.
#[derive(Clone, Copy)]
struct Filter {
    keep: u64,
    zero: u64,
}

impl Filter {
    fn new(n: usize, pattern: Option<&Pattern>) -> Result<Self> {
        let full = full_mask(n);
        let Some(p) = pattern else {
            return Ok(Filter {
                keep: full,
                zero: 0,
            });
        };
        if p.n() != n {
            return Err(Error::LengthMismatch {
                pattern: p.n(),
                code: n,
            });
        }
        let set = p.indices().iter().fold(0u64, |acc, &z| acc | 1 << (z - 1));
        Ok(match p.mode() {
            Mode::Puncture => Filter {
                keep: full & !set,
                zero: 0,
            },
            Mode::Shorten => Filter {
                keep: full & !set,
                zero: set,
            },
        })
    }

    /// Weight after rate matching, or `None` if a shortened bit is set.
    #[inline]
    fn weight(self, word: u64) -> Option<u32> {
        (word & self.zero == 0).then(|| (word & self.keep).count_ones())
    }
}

fn tally(n: usize, gens: &[u64], base: u64, filter: Filter) -> WeightSpectrum {
    let mut counts = vec![0u64; n + 1];
    for_each_in_span(gens, base, |word| {
        if let Some(w) = filter.weight(word) {
            counts[w as usize] += 1;
        }
    });
    WeightSpectrum::from_u64(&counts)
}

/// Spectrum of the (rate-matched) code by enumerating all `2^K` codewords.
///
/// Puncturing deletes the pattern coordinates; shortening keeps only
/// codewords vanishing on the pattern before deleting them.
pub fn brute_code_spectrum(
    spec: &CodeSpec,
    pattern: Option<&Pattern>,
    caps: &OracleCaps,
) -> Result<WeightSpectrum> {
    check_oracle_m(spec.m())?;
    cap("code dimension", spec.k(), caps.max_dimension)?;
    let rows = packed_rows(spec.m());
    let gens: Vec<u64> = spec.info().iter().map(|&z| rows[z - 1]).collect();
    let filter = Filter::new(spec.n(), pattern)?;
    Ok(tally(spec.n(), &gens, 0, filter))
}

/// Spectrum of the polar coset with fixed input prefix `prefix`, by
/// enumerating every completion of the remaining input bits.
pub fn brute_coset_spectrum(
    m: u32,
    prefix: &[bool],
    pattern: Option<&Pattern>,
    caps: &OracleCaps,
) -> Result<WeightSpectrum> {
    check_oracle_m(m)?;
    let n = 1usize << m;
    if prefix.len() > n {
        return Err(Error::PrefixTooLong {
            len: prefix.len(),
            n,
        });
    }
    cap("free input bits", n - prefix.len(), caps.max_free_bits)?;
    let rows = packed_rows(m);
    let base = prefix
        .iter()
        .zip(&rows)
        .filter(|(&u, _)| u)
        .fold(0u64, |acc, (_, &r)| acc ^ r);
    let gens = &rows[prefix.len()..];
    let filter = Filter::new(n, pattern)?;
    Ok(tally(n, gens, base, filter))
}

/// All members of `T(f)`: the products
/// `∏_j (x_{i_j} + Σ_{k ∈ B(f,j)} a_{j,k} x_k + a_{j,0})` over every choice of
/// coefficients, where `B(f,j)` holds the indices below `i_j` that are not
/// variables of `f`.
pub fn enumerate_t(f: Monomial, m: u32, caps: &OracleCaps) -> Result<Vec<u64>> {
    check_oracle_m(m)?;
    if !f.is_valid_for(m) {
        return Err(Error::MonomialOutOfRange { mask: f.mask(), m });
    }
    let log = lambda_log2(f);
    cap(
        "log2 of lambda",
        log as usize,
        caps.max_lambda_log2 as usize,
    )?;
    let n = 1usize << m;
    let ones = full_mask(n);
    let var_row = |k: u32| packed_row(Monomial::from_mask(1 << (k - 1)), m);

    // Each factor: leading variable plus its free linear terms and constant.
    let factors: Vec<(u64, Vec<u64>)> = f
        .vars()
        .into_iter()
        .map(|i| {
            let mut free: Vec<u64> = (1..i).filter(|&k| !f.has_var(k)).map(var_row).collect();
            free.push(ones);
            (var_row(i), free)
        })
        .collect();

    let mut out = Vec::with_capacity(1 << log);
    for mut choice in 0u64..1 << log {
        let mut word = ones;
        for (lead, free) in &factors {
            let mut lin = *lead;
            for g in free {
                if choice & 1 == 1 {
                    lin ^= g;
                }
                choice >>= 1;
            }
            word &= lin;
        }
        out.push(word);
    }
    Ok(out)
}

/// An affine map `z ↦ A z + b` on `F_2^m`; row `i` of `A` is `rows[i]` with
/// bit `j` holding `A_{i,j}` (0-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AffineMap {
    m: u32,
    rows: Vec<u32>,
    b: u32,
}

impl AffineMap {
    pub fn new(m: u32, rows: Vec<u32>, b: u32) -> Result<Self> {
        if rows.len() != m as usize {
            return Err(Error::DimensionMismatch {
                expected: m as usize,
                found: rows.len(),
            });
        }
        let limit = if m == 32 { u32::MAX } else { (1u32 << m) - 1 };
        if rows.iter().any(|&r| r & !limit != 0) || b & !limit != 0 {
            return Err(Error::InvalidArgument("affine map entry beyond m".into()));
        }
        let map = AffineMap { m, rows, b };
        if !map.is_invertible() {
            return Err(Error::SingularMatrix);
        }
        Ok(map)
    }

    pub fn identity(m: u32, b: u32) -> Result<Self> {
        AffineMap::new(m, (0..m).map(|i| 1 << i).collect(), b)
    }

    /// Random lower-triangular (unit diagonal) affine map.
    pub fn random_lta(m: u32, rng: &mut impl Rng) -> Self {
        let rows = (0..m)
            .map(|i| (1 << i) | (rng.random::<u32>() & ((1u32 << i) - 1)))
            .collect();
        let b = if m == 0 {
            0
        } else {
            rng.random::<u32>() & ((1u32 << m) - 1)
        };
        AffineMap { m, rows, b }
    }

    pub fn is_lower_triangular(&self) -> bool {
        self.rows.iter().enumerate().all(|(i, &r)| r >> i == 1)
    }

    fn is_invertible(&self) -> bool {
        let mut rows = self.rows.clone();
        for col in 0..self.m as usize {
            let Some(p) = (col..rows.len()).find(|&r| rows[r] >> col & 1 == 1) else {
                return false;
            };
            rows.swap(col, p);
            for r in 0..rows.len() {
                if r != col && rows[r] >> col & 1 == 1 {
                    rows[r] ^= rows[col];
                }
            }
        }
        true
    }

    fn apply_point(&self, z: u32) -> u32 {
        let az = self
            .rows
            .iter()
            .enumerate()
            .fold(0u32, |acc, (i, &r)| acc | ((r & z).count_ones() & 1) << i);
        az ^ self.b
    }

    /// The coordinate permutation `π` with `π(D(z)) = D(A z + b)`, as a
    /// 1-based vector `π[k - 1] = π(k)`.
    pub fn permutation(&self) -> Vec<usize> {
        let n = 1usize << self.m;
        let full = (n - 1) as u32;
        (1..=n)
            .map(|k| {
                let z = !(k as u32 - 1) & full;
                (!self.apply_point(z) & full) as usize + 1
            })
            .collect()
    }
}

/// Permutes a codeword: `c'_k = c_{π(k)}`.
pub fn apply_affine(map: &AffineMap, codeword: &[bool]) -> Result<Vec<bool>> {
    let n = 1usize << map.m;
    if codeword.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: codeword.len(),
        });
    }
    Ok(map
        .permutation()
        .into_iter()
        .map(|p| codeword[p - 1])
        .collect())
}

/// Sampling settings for [`mc_pretransform_avg`].
#[derive(Clone, Copy, Debug)]
pub struct McConfig {
    pub samples: usize,
    pub seed: u64,
    /// Forces every strictly-upper entry to zero (sanity ensemble).
    pub identity_only: bool,
}

/// Per-weight sample mean and standard error of the codeword count.
#[derive(Clone, Debug, Default, serde::Serialize)]
pub struct McEstimate {
    pub samples: usize,
    pub seed: u64,
    pub mean: BTreeMap<usize, f64>,
    pub std_err: BTreeMap<usize, f64>,
}

const MC_CHUNK: usize = 1024;

/// Monte-Carlo estimate of the average spectrum over upper-triangular
/// pre-transformations with unit diagonal and fair-coin entries above it.
///
/// In shortening mode the columns of the shortened positions are left
/// untouched, so the shortened input bits stay frozen to zero. Chunk `c` of
/// the samples draws from stream `c` of a ChaCha8 generator seeded with
/// `seed`, so results do not depend on the thread count.
pub fn mc_pretransform_avg(
    spec: &CodeSpec,
    pattern: Option<&Pattern>,
    cfg: &McConfig,
    caps: &OracleCaps,
) -> Result<McEstimate> {
    check_oracle_m(spec.m())?;
    cap("sampled code dimension", spec.k(), caps.max_mc_dimension)?;
    if cfg.samples < caps.min_mc_samples {
        return Err(Error::InvalidArgument(format!(
            "at least {} samples required",
            caps.min_mc_samples
        )));
    }
    let n = spec.n();
    let filter = Filter::new(n, pattern)?;
    if let Some(p) = pattern.filter(|p| p.mode() == Mode::Shorten) {
        if !respects_binary_domination(p) {
            return Err(Error::NotDominated);
        }
        if let Some(&z) = spec.info().iter().find(|&&z| p.contains(z)) {
            return Err(Error::InfoInPattern(z));
        }
    }
    let rows = packed_rows(spec.m());
    let info: Vec<usize> = spec.info().iter().copied().collect();
    let full = full_mask(n);
    let frozen_columns = filter.zero;

    let chunks = cfg.samples.div_ceil(MC_CHUNK);
    let (sum, sum_sq) = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(c as u64);
            let count = MC_CHUNK.min(cfg.samples - c * MC_CHUNK);
            let mut sum = vec![0u128; n + 1];
            let mut sum_sq = vec![0u128; n + 1];
            let mut counts = vec![0u64; n + 1];
            let mut gens = vec![0u64; info.len()];
            for _ in 0..count {
                for (g, &z) in gens.iter_mut().zip(&info) {
                    // Row z of T: unit at z, random beyond it.
                    let above = full & !full_mask(z);
                    let noise = if cfg.identity_only {
                        0
                    } else {
                        rng.random::<u64>() & above & !frozen_columns
                    };
                    let v = noise | 1 << (z - 1);
                    *g = (0..n)
                        .filter(|&l| v >> l & 1 == 1)
                        .fold(0u64, |acc, l| acc ^ rows[l]);
                }
                counts.iter_mut().for_each(|x| *x = 0);
                let mut first = true;
                for_each_in_span(&gens, 0, |word| {
                    if first {
                        first = false;
                        return;
                    }
                    if let Some(w) = filter.weight(word) {
                        counts[w as usize] += 1;
                    }
                });
                for w in 0..=n {
                    let x = counts[w] as u128;
                    sum[w] += x;
                    sum_sq[w] += x * x;
                }
            }
            (sum, sum_sq)
        })
        .reduce(
            || (vec![0u128; n + 1], vec![0u128; n + 1]),
            |(mut a, mut a2), (b, b2)| {
                for w in 0..=n {
                    a[w] += b[w];
                    a2[w] += b2[w];
                }
                (a, a2)
            },
        );

    let s = cfg.samples as f64;
    let mut est = McEstimate {
        samples: cfg.samples,
        seed: cfg.seed,
        ..Default::default()
    };
    for w in 0..=n {
        if sum[w] == 0 {
            continue;
        }
        let mean = sum[w] as f64 / s;
        let var = ((sum_sq[w] as f64 - s * mean * mean) / (s - 1.0)).max(0.0);
        est.mean.insert(w, mean);
        est.std_err.insert(w, (var / s).sqrt());
    }
    Ok(est)
}

/// Every decreasing information set for length `2^m` (the empty set
/// included), found by testing all subsets of monomials. Limited to `m ≤ 4`.
pub fn decreasing_specs(m: u32) -> Result<Vec<CodeSpec>> {
    if m > 4 {
        return Err(Error::CapExceeded {
            what: "exponent for listing decreasing sets",
            value: m as u128,
            cap: 4,
        });
    }
    let all: Vec<Monomial> = Monomial::all(m).collect();
    (0u32..1 << all.len())
        .filter_map(|sel| {
            let set: Vec<Monomial> = all
                .iter()
                .enumerate()
                .filter(|(b, _)| sel >> b & 1 == 1)
                .map(|(_, &f)| f)
                .collect();
            is_decreasing(&set).then(|| CodeSpec::from_monomials(m, set))
        })
        .collect()
}

/// Packed codeword set of `C(I)`, for automorphism checks.
pub fn codeword_set(spec: &CodeSpec, caps: &OracleCaps) -> Result<Vec<u64>> {
    check_oracle_m(spec.m())?;
    cap("code dimension", spec.k(), caps.max_dimension)?;
    let rows = packed_rows(spec.m());
    let gens: Vec<u64> = spec.info().iter().map(|&z| rows[z - 1]).collect();
    let mut out = Vec::with_capacity(1 << gens.len());
    for_each_in_span(&gens, 0, |w| out.push(w));
    out.sort_unstable();
    Ok(out)
}
