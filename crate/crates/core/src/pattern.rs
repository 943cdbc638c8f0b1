//! Rate-matching patterns: quasi-uniform puncturing, Wang–Liu shortening,
//! bit-reversal shortening and user-supplied index sets.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::monomial::{Monomial, MAX_M};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Puncture,
    Shorten,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Puncture => "puncture",
            Mode::Shorten => "shorten",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PatternKind {
    /// First `i` coordinates of the natural order.
    Qup,
    /// Last `i` coordinates of the natural order.
    Wl,
    /// Last `i` entries of the bit-reversal sequence.
    Br,
    Custom,
}

impl fmt::Display for PatternKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            PatternKind::Qup => "qup",
            PatternKind::Wl => "wl",
            PatternKind::Br => "br",
            PatternKind::Custom => "custom",
        })
    }
}

/// A set of coordinates of a length-`n` codeword that are punctured or
/// shortened. Indices are 1-based and kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawPattern", into = "RawPattern")]
pub struct Pattern {
    n: usize,
    mode: Mode,
    kind: PatternKind,
    indices: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawPattern {
    mode: Mode,
    kind: PatternKind,
    n: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    i: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    indices: Option<Vec<usize>>,
}

impl TryFrom<RawPattern> for Pattern {
    type Error = Error;

    fn try_from(raw: RawPattern) -> Result<Self> {
        match raw.kind {
            PatternKind::Custom => {
                let indices = raw.indices.ok_or_else(|| {
                    Error::InvalidArgument("custom pattern needs \"indices\"".into())
                })?;
                Pattern::custom(raw.n, raw.mode, indices)
            }
            kind => {
                let m = exponent_of(raw.n)?;
                let i = raw
                    .i
                    .ok_or_else(|| Error::InvalidArgument(format!("{kind} pattern needs \"i\"")))?;
                let p = make_pattern(kind, m, i, raw.mode)?;
                if let Some(indices) = raw.indices {
                    if indices != p.indices {
                        return Err(Error::InvalidArgument(format!(
                            "indices disagree with the {kind} pattern of size {i}"
                        )));
                    }
                }
                Ok(p)
            }
        }
    }
}

impl From<Pattern> for RawPattern {
    fn from(p: Pattern) -> Self {
        let custom = p.kind == PatternKind::Custom;
        RawPattern {
            mode: p.mode,
            kind: p.kind,
            n: p.n,
            i: (!custom).then_some(p.indices.len()),
            indices: custom.then_some(p.indices),
        }
    }
}

fn exponent_of(n: usize) -> Result<u32> {
    if n == 0 || !n.is_power_of_two() || n.trailing_zeros() > MAX_M {
        return Err(Error::InvalidArgument(format!(
            "pattern length {n} is not a supported power of two"
        )));
    }
    Ok(n.trailing_zeros())
}

/// Reverses the low `m` bits of `x`.
#[inline]
pub fn reverse_bits(x: usize, m: u32) -> usize {
    if m == 0 {
        0
    } else {
        x.reverse_bits() >> (usize::BITS - m)
    }
}

/// The bit-reversal permutation `q'` of `(1, .., 2^m)`.
pub fn bit_reversal_sequence(m: u32) -> Vec<usize> {
    (0..1usize << m).map(|k| reverse_bits(k, m) + 1).collect()
}

/// Builds the QUP, Wang–Liu or bit-reversal pattern of size `i` over `2^m`.
pub fn make_pattern(kind: PatternKind, m: u32, i: usize, mode: Mode) -> Result<Pattern> {
    if m > MAX_M {
        return Err(Error::UnsupportedExponent(m));
    }
    let n = 1usize << m;
    if i > n {
        return Err(Error::PatternSizeOutOfRange { i, n });
    }
    let mut indices: Vec<usize> = match kind {
        PatternKind::Qup => (1..=i).collect(),
        PatternKind::Wl => (n - i + 1..=n).collect(),
        PatternKind::Br => bit_reversal_sequence(m)[n - i..].to_vec(),
        PatternKind::Custom => {
            return Err(Error::InvalidArgument(
                "custom patterns are built with Pattern::custom".into(),
            ))
        }
    };
    indices.sort_unstable();
    Ok(Pattern {
        n,
        mode,
        kind,
        indices,
    })
}

impl Pattern {
    pub fn custom(n: usize, mode: Mode, indices: impl IntoIterator<Item = usize>) -> Result<Self> {
        exponent_of(n)?;
        let mut set = BTreeSet::new();
        for index in indices {
            if index == 0 || index > n {
                return Err(Error::IndexOutOfRange { index, n });
            }
            if !set.insert(index) {
                return Err(Error::DuplicateIndex(index));
            }
        }
        Ok(Pattern {
            n,
            mode,
            kind: PatternKind::Custom,
            indices: set.into_iter().collect(),
        })
    }

    /// The empty pattern over `n` coordinates.
    pub fn empty(n: usize, mode: Mode) -> Result<Self> {
        Pattern::custom(n, mode, [])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> u32 {
        self.n.trailing_zeros()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn kind(&self) -> PatternKind {
        self.kind
    }

    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn len(&self) -> usize {
        self.indices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indices.is_empty()
    }

    pub fn contains(&self, index: usize) -> bool {
        self.indices.binary_search(&index).is_ok()
    }

    /// Membership flags indexed by position − 1.
    pub fn flags(&self) -> Vec<bool> {
        let mut flags = vec![false; self.n];
        for &i in &self.indices {
            flags[i - 1] = true;
        }
        flags
    }

    /// Monomials attached to the pattern positions.
    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        let mask = (self.n - 1) as u32;
        self.indices
            .iter()
            .map(move |&z| Monomial::from_mask(!(z - 1) as u32 & mask))
    }

    /// Same index set viewed as the other rate-matching mode.
    pub fn with_mode(&self, mode: Mode) -> Pattern {
        Pattern {
            mode,
            ..self.clone()
        }
    }
}

/// Splits a pattern over `n` into the patterns seen by the odd- and
/// even-indexed halves: `{(i+1)/2 : i odd}` and `{i/2 : i even}`.
pub fn split_odd_even(p: &Pattern) -> Result<(Pattern, Pattern)> {
    if p.n < 2 {
        return Err(Error::InvalidArgument(
            "cannot split a length-1 pattern".into(),
        ));
    }
    let half = p.n / 2;
    let odd = p
        .indices
        .iter()
        .filter(|&&i| i % 2 == 1)
        .map(|&i| i.div_ceil(2));
    let even = p.indices.iter().filter(|&&i| i % 2 == 0).map(|&i| i / 2);
    let make = |indices: Vec<usize>| Pattern {
        n: half,
        mode: p.mode,
        kind: PatternKind::Custom,
        indices,
    };
    Ok((make(odd.collect()), make(even.collect())))
}

/// Binary-domination closure test.
///
/// A puncturing pattern must contain every position whose monomial is a
/// multiple of a punctured monomial; a shortening pattern must contain every
/// position whose monomial divides a shortened monomial.
pub fn respects_binary_domination(p: &Pattern) -> bool {
    let flags = p.flags();
    let full = (p.n - 1) as u32;
    p.monomials().all(|f| {
        let free = full & !f.mask();
        let closed = |g: u32| flags[(!g & full) as usize];
        match p.mode {
            Mode::Puncture => subsets(free).all(|extra| closed(f.mask() | extra)),
            Mode::Shorten => subsets(f.mask()).all(closed),
        }
    })
}

/// All submasks of `mask`.
fn subsets(mask: u32) -> impl Iterator<Item = u32> {
    let mut next = Some(mask);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 {
            None
        } else {
            Some((cur - 1) & mask)
        };
        Some(cur)
    })
}
