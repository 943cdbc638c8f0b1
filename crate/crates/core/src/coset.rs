//! Weight spectra of punctured and shortened polar cosets, and the exact
//! average spectrum of randomly pre-transformed rate-matched codes.
//!
//! With `G = F^{⊗m}` in natural order, odd code positions carry
//! `(u_o ⊕ u_e) G_{N/2}` and even positions carry `u_e G_{N/2}`. A coset with
//! an even-length prefix therefore splits into two independent half-length
//! cosets, and an odd-length prefix is the union of its two extensions.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::CodeSpec;
use crate::pattern::{respects_binary_domination, split_odd_even, Mode, Pattern};
use crate::spectrum::{AvgSpectrum, DyadicRational, WeightSpectrum};

/// Fixed input prefix `u_1^i` of a polar coset.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "form")]
pub enum CosetPrefix {
    /// `0^i`
    Zeros {
        len: usize,
    },
    /// `(0^{i-1}, 1)`
    UnitLast {
        len: usize,
    },
    Explicit {
        bits: Vec<bool>,
    },
}

impl CosetPrefix {
    pub fn len(&self) -> usize {
        match self {
            CosetPrefix::Zeros { len } | CosetPrefix::UnitLast { len } => *len,
            CosetPrefix::Explicit { bits } => bits.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn bits(&self) -> Result<Vec<bool>> {
        match self {
            CosetPrefix::Zeros { len } => Ok(vec![false; *len]),
            CosetPrefix::UnitLast { len: 0 } => Err(Error::InvalidArgument(
                "a unit-last prefix needs at least one bit".into(),
            )),
            CosetPrefix::UnitLast { len } => {
                let mut bits = vec![false; *len];
                bits[len - 1] = true;
                Ok(bits)
            }
            CosetPrefix::Explicit { bits } => Ok(bits.clone()),
        }
    }
}

/// Spectrum of a length-one coset; `u` is `None` when the bit is free.
fn leaf(u: Option<bool>, marked: bool, mode: Mode) -> WeightSpectrum {
    let one = BigUint::from(1u32);
    match (marked, mode, u) {
        (false, _, Some(false)) => WeightSpectrum::unit(0),
        (false, _, Some(true)) => WeightSpectrum::unit(1),
        (false, _, None) => WeightSpectrum::from_counts(vec![one.clone(), one]),
        (true, Mode::Puncture, Some(_)) => WeightSpectrum::unit(0),
        (true, Mode::Puncture, None) => WeightSpectrum::from_counts(vec![BigUint::from(2u32)]),
        (true, Mode::Shorten, Some(true)) => WeightSpectrum::new(),
        (true, Mode::Shorten, _) => WeightSpectrum::unit(0),
    }
}

fn check_pattern(m: u32, pattern: &Pattern) -> Result<()> {
    let n = 1usize << m;
    if pattern.n() != n {
        return Err(Error::LengthMismatch {
            pattern: pattern.n(),
            code: n,
        });
    }
    Ok(())
}

/// Weight spectrum of the coset `{u G : u_1^i = prefix}` after applying the
/// pattern (punctured coordinates deleted; shortened coordinates required to
/// be zero, then deleted).
pub fn coset_spectrum(m: u32, prefix: &CosetPrefix, pattern: &Pattern) -> Result<WeightSpectrum> {
    check_pattern(m, pattern)?;
    let n = 1usize << m;
    let bits = prefix.bits()?;
    if bits.len() > n {
        return Err(Error::PrefixTooLong { len: bits.len(), n });
    }
    explicit(&bits, pattern)
}

fn explicit(prefix: &[bool], pattern: &Pattern) -> Result<WeightSpectrum> {
    if pattern.n() == 1 {
        return Ok(leaf(
            prefix.first().copied(),
            pattern.contains(1),
            pattern.mode(),
        ));
    }
    if prefix.len() % 2 == 1 {
        let mut out = WeightSpectrum::new();
        for bit in [false, true] {
            let mut longer = prefix.to_vec();
            longer.push(bit);
            out += &explicit(&longer, pattern)?;
        }
        return Ok(out);
    }
    let (odd, even) = split_odd_even(pattern)?;
    let u_e: Vec<bool> = prefix.chunks(2).map(|p| p[1]).collect();
    let u_oe: Vec<bool> = prefix.chunks(2).map(|p| p[0] ^ p[1]).collect();
    Ok(explicit(&u_e, &even)?.convolve(&explicit(&u_oe, &odd)?))
}

/// Spectra of the all-zero cosets `0^i` (`zeros[i]`, `0 ≤ i ≤ N`) and the
/// unit-last cosets `(0^{i-1}, 1)` (`unit_last[i]`, `1 ≤ i ≤ N`;
/// `unit_last[0]` is empty) for a single pattern.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixSpectra {
    pub zeros: Vec<WeightSpectrum>,
    pub unit_last: Vec<WeightSpectrum>,
}

impl PrefixSpectra {
    fn leaf(marked: bool, mode: Mode) -> Self {
        PrefixSpectra {
            zeros: vec![leaf(None, marked, mode), leaf(Some(false), marked, mode)],
            unit_last: vec![WeightSpectrum::new(), leaf(Some(true), marked, mode)],
        }
    }

    /// Combines the spectra of the odd-position and even-position halves.
    fn join(odd: &PrefixSpectra, even: &PrefixSpectra) -> Self {
        let half = odd.zeros.len() - 1;
        let len = 2 * half;
        let pairs: Vec<_> = (1..=half)
            .into_par_iter()
            .map(|k| {
                let z_even = even.zeros[k].convolve(&odd.zeros[k]);
                let u_even = even.unit_last[k].convolve(&odd.unit_last[k]);
                let z_odd = &z_even + &u_even;
                let u_odd = &even.zeros[k].convolve(&odd.unit_last[k])
                    + &even.unit_last[k].convolve(&odd.zeros[k]);
                (z_odd, u_odd, z_even, u_even)
            })
            .collect();
        let mut zeros = Vec::with_capacity(len + 1);
        let mut unit_last = Vec::with_capacity(len + 1);
        zeros.push(even.zeros[0].convolve(&odd.zeros[0]));
        unit_last.push(WeightSpectrum::new());
        for (z_odd, u_odd, z_even, u_even) in pairs {
            zeros.extend([z_odd, z_even]);
            unit_last.extend([u_odd, u_even]);
        }
        PrefixSpectra { zeros, unit_last }
    }
}

/// The tree of sub-patterns obtained by repeated odd/even splitting.
/// Level `l` holds `2^l` patterns of length `N / 2^l`; the children of node
/// `j` are nodes `2j` (odd half) and `2j + 1` (even half) of level `l + 1`.
#[derive(Clone, Debug)]
pub struct PatternTree {
    levels: Vec<Vec<Pattern>>,
}

impl PatternTree {
    pub fn new(pattern: &Pattern) -> Result<Self> {
        let mut levels = vec![vec![pattern.clone()]];
        while levels.last().expect("root level")[0].n() > 1 {
            let next = levels
                .last()
                .expect("root level")
                .iter()
                .map(split_odd_even)
                .collect::<Result<Vec<_>>>()?
                .into_iter()
                .flat_map(|(odd, even)| [odd, even])
                .collect();
            levels.push(next);
        }
        Ok(PatternTree { levels })
    }

    pub fn depth(&self) -> usize {
        self.levels.len() - 1
    }

    pub fn node(&self, level: usize, j: usize) -> Option<&Pattern> {
        self.levels.get(level).and_then(|l| l.get(j))
    }

    /// All-zero and unit-last prefix spectra at the root, computed bottom-up.
    pub fn prefix_spectra(&self) -> PrefixSpectra {
        let leaves = self.levels.last().expect("leaf level");
        let mut current: Vec<PrefixSpectra> = leaves
            .iter()
            .map(|p| PrefixSpectra::leaf(p.contains(1), p.mode()))
            .collect();
        while current.len() > 1 {
            current = current
                .par_chunks(2)
                .map(|pair| PrefixSpectra::join(&pair[0], &pair[1]))
                .collect();
        }
        current.pop().expect("root spectra")
    }
}

/// Unit-last coset spectra for every prefix length, over `pattern`.
pub fn all_prefix_spectra(m: u32, pattern: &Pattern) -> Result<PrefixSpectra> {
    check_pattern(m, pattern)?;
    Ok(PatternTree::new(pattern)?.prefix_spectra())
}

/// Spectrum of the coset `(0^{I_j - 1}, 1)` for every information index `I_j`.
pub fn alg4_prefix_spectra(
    spec: &CodeSpec,
    pattern: &Pattern,
) -> Result<BTreeMap<usize, WeightSpectrum>> {
    let mut spectra = all_prefix_spectra(spec.m(), pattern)?;
    Ok(spec
        .info()
        .iter()
        .map(|&z| (z, std::mem::take(&mut spectra.unit_last[z])))
        .collect())
}

/// Exact average spectrum over pre-transformations `T` (upper triangular,
/// unit diagonal, fair-coin entries above the diagonal).
///
/// A message whose first nonzero information bit is `I_j` is mapped to a
/// uniformly random member of the coset `(0^{I_j - 1}, 1)`, and `2^{K-j}`
/// messages share that first bit. When shortening, the shortened input bits
/// after `I_j` stay frozen, which removes them from the denominator.
pub fn avg_spectrum(spec: &CodeSpec, pattern: &Pattern) -> Result<AvgSpectrum> {
    if pattern.mode() == Mode::Shorten {
        check_pattern(spec.m(), pattern)?;
        if !respects_binary_domination(pattern) {
            return Err(Error::NotDominated);
        }
        if let Some(&z) = spec.info().iter().find(|&&z| pattern.contains(z)) {
            return Err(Error::InfoInPattern(z));
        }
    }
    let spectra = alg4_prefix_spectra(spec, pattern)?;
    let n = spec.n();
    let k = spec.k();
    let mut avg = AvgSpectrum::new();
    for (j, (&z, spectrum)) in spectra.iter().enumerate() {
        let later_shortened = match pattern.mode() {
            Mode::Shorten => pattern.indices().iter().filter(|&&y| y > z).count(),
            Mode::Puncture => 0,
        };
        let messages = k - j - 1;
        let exp2 = (n - z - later_shortened) as u64;
        for (w, c) in spectrum.iter() {
            avg.add(w, &DyadicRational::new(c << messages, exp2));
        }
    }
    Ok(avg)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::Monomial;
    use crate::pattern::{make_pattern, PatternKind};

    fn puncture(n: usize, idx: &[usize]) -> Pattern {
        Pattern::custom(n, Mode::Puncture, idx.iter().copied()).unwrap()
    }

    fn explicit_prefix(bits: &[u8]) -> CosetPrefix {
        CosetPrefix::Explicit {
            bits: bits.iter().map(|&b| b == 1).collect(),
        }
    }

    #[test]
    fn base_cases() {
        let none = Pattern::empty(1, Mode::Puncture).unwrap();
        let s = coset_spectrum(0, &explicit_prefix(&[1]), &none).unwrap();
        assert_eq!(s, WeightSpectrum::unit(1));
        let s = coset_spectrum(0, &explicit_prefix(&[0]), &none).unwrap();
        assert_eq!(s, WeightSpectrum::unit(0));
        let shortened = Pattern::custom(1, Mode::Shorten, [1]).unwrap();
        assert!(coset_spectrum(0, &explicit_prefix(&[1]), &shortened)
            .unwrap()
            .is_empty());
        let punctured = puncture(1, &[1]);
        let s = coset_spectrum(0, &CosetPrefix::Zeros { len: 0 }, &punctured).unwrap();
        assert_eq!(s.get(0), BigUint::from(2u32));
    }

    #[test]
    fn two_bit_unit_coset() {
        let none = Pattern::empty(2, Mode::Puncture).unwrap();
        let s = coset_spectrum(1, &explicit_prefix(&[0, 1]), &none).unwrap();
        assert_eq!(s, WeightSpectrum::unit(2));
    }

    #[test]
    fn even_prefix_splits_into_halves() {
        let x = puncture(8, &[1, 2, 5]);
        let (odd, even) = split_odd_even(&x).unwrap();
        assert_eq!(odd.indices(), &[1, 3]);
        assert_eq!(even.indices(), &[1]);
        let whole = coset_spectrum(3, &explicit_prefix(&[0, 0, 1, 0]), &x).unwrap();
        let a = coset_spectrum(2, &explicit_prefix(&[0, 0]), &even).unwrap();
        let b = coset_spectrum(2, &explicit_prefix(&[0, 1]), &odd).unwrap();
        assert_eq!(whole, a.convolve(&b));
        assert_eq!(whole.total(), BigUint::from(16u32));
    }

    #[test]
    fn tree_matches_explicit_recursion() {
        for m in 0..=4u32 {
            let n = 1usize << m;
            for pattern in [
                Pattern::empty(n, Mode::Puncture).unwrap(),
                make_pattern(PatternKind::Qup, m, n / 2, Mode::Puncture).unwrap(),
                make_pattern(PatternKind::Br, m, n / 4, Mode::Shorten).unwrap(),
            ] {
                let tree = all_prefix_spectra(m, &pattern).unwrap();
                for i in 0..=n {
                    let z = coset_spectrum(m, &CosetPrefix::Zeros { len: i }, &pattern).unwrap();
                    assert_eq!(tree.zeros[i], z, "m={m} i={i}");
                    if i > 0 {
                        let u =
                            coset_spectrum(m, &CosetPrefix::UnitLast { len: i }, &pattern).unwrap();
                        assert_eq!(tree.unit_last[i], u, "m={m} i={i}");
                    }
                }
            }
        }
    }

    #[test]
    fn full_puncturing_is_all_weight_zero() {
        let x = puncture(8, &[1, 2, 3, 4, 5, 6, 7, 8]);
        let s = coset_spectrum(3, &CosetPrefix::Zeros { len: 3 }, &x).unwrap();
        assert_eq!(s, WeightSpectrum::from_counts(vec![BigUint::from(32u32)]));
    }

    #[test]
    fn average_mass_and_unpatterned_case() {
        let spec = CodeSpec::from_monomials(
            3,
            ["1", "x1", "x2", "x3"]
                .iter()
                .map(|s| s.parse::<Monomial>().unwrap()),
        )
        .unwrap();
        for i in 0..=3 {
            let x = make_pattern(PatternKind::Qup, 3, i, Mode::Puncture).unwrap();
            let avg = avg_spectrum(&spec, &x).unwrap();
            assert_eq!(avg.total().to_integer(), Some(BigUint::from(15u32)));
        }
    }

    #[test]
    fn shortened_average_rejections() {
        let spec = CodeSpec::new(3, [8]).unwrap();
        let y = make_pattern(PatternKind::Br, 3, 1, Mode::Shorten).unwrap();
        assert!(matches!(
            avg_spectrum(&spec, &y),
            Err(Error::InfoInPattern(8))
        ));
        let bad = Pattern::custom(8, Mode::Shorten, [2]).unwrap();
        assert!(matches!(
            avg_spectrum(&CodeSpec::new(3, [1]).unwrap(), &bad),
            Err(Error::NotDominated)
        ));
    }

    #[test]
    fn prefix_json() {
        let p: CosetPrefix = serde_json::from_str(r#"{"form":"unit_last","len":3}"#).unwrap();
        assert_eq!(p.bits().unwrap(), vec![false, false, true]);
    }
}
