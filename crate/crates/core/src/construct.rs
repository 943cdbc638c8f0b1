//! Information-set construction: polarization weight or an external
//! reliability sequence, optionally avoiding a rate-matching pattern.

use std::collections::BTreeSet;

use crate::error::{Error, Result};
use crate::monomial::{is_decreasing, monomial_of, CodeSpec, Monomial};
use crate::pattern::{Mode, Pattern};

/// Base of the polarization-weight expansion.
pub const PW_BETA: f64 = 1.189_207_115_002_721; // 2^{1/4}

/// `Σ_j b_j β^j` over the bits `b_j` of `z - 1`; bit `j` is set exactly when
/// `x_{j+1}` is absent from the row's monomial.
pub fn polarization_weight(z: usize) -> f64 {
    let bits = z - 1;
    (0..usize::BITS)
        .filter(|&j| bits >> j & 1 == 1)
        .map(|j| PW_BETA.powi(j as i32))
        .sum()
}

/// Row indices from least to most reliable by polarization weight; equal
/// weights put the lower index first.
pub fn pw_sequence(m: u32) -> Vec<usize> {
    let mut seq: Vec<usize> = (1..=1usize << m).collect();
    seq.sort_by(|&a, &b| {
        polarization_weight(a)
            .total_cmp(&polarization_weight(b))
            .then(a.cmp(&b))
    });
    seq
}

fn check_exclude(m: u32, exclude: Option<&Pattern>) -> Result<()> {
    if let Some(p) = exclude {
        if p.n() != 1 << m {
            return Err(Error::LengthMismatch {
                pattern: p.n(),
                code: 1 << m,
            });
        }
    }
    Ok(())
}

/// The `k` most reliable indices of `sequence` (least reliable first) that
/// are not in `exclude`.
pub fn from_reliability_sequence(
    m: u32,
    k: usize,
    sequence: &[usize],
    exclude: Option<&Pattern>,
) -> Result<CodeSpec> {
    check_exclude(m, exclude)?;
    let n = 1usize << m;
    if sequence.len() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: sequence.len(),
        });
    }
    let mut seen = vec![false; n + 1];
    for &z in sequence {
        if z == 0 || z > n {
            return Err(Error::IndexOutOfRange { index: z, n });
        }
        if std::mem::replace(&mut seen[z], true) {
            return Err(Error::DuplicateIndex(z));
        }
    }
    let available = n - exclude.map_or(0, Pattern::len);
    if k == 0 || k > available {
        return Err(Error::InvalidArgument(format!(
            "dimension {k} outside [1, {available}]"
        )));
    }
    let info = sequence
        .iter()
        .rev()
        .filter(|&&z| !exclude.is_some_and(|p| p.contains(z)))
        .take(k)
        .copied();
    CodeSpec::new(m, info)
}

/// Polarization-weight construction. The result is checked to be
/// decreasing; with a shortening pattern the shortened monomials are
/// included in the check.
pub fn pw_construct(m: u32, k: usize, exclude: Option<&Pattern>) -> Result<CodeSpec> {
    let spec = from_reliability_sequence(m, k, &pw_sequence(m), exclude)?;
    let mut set: BTreeSet<Monomial> = spec.monomials().collect();
    if let Some(p) = exclude.filter(|p| p.mode() == Mode::Shorten) {
        for &z in p.indices() {
            set.insert(monomial_of(z, m)?);
        }
    }
    if !is_decreasing(&set) {
        return Err(Error::NotDecreasing(
            "polarization-weight information set".into(),
        ));
    }
    Ok(spec)
}

/// Parses whitespace- or comma-separated indices. With `zero_based`, every
/// index is shifted up by one.
pub fn parse_sequence(text: &str, zero_based: bool) -> Result<Vec<usize>> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(|s| {
            let v: usize = s
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad index {s:?}")))?;
            Ok(if zero_based { v + 1 } else { v })
        })
        .collect()
}
