//! Minimum-weight codewords of bit-reversal shortened decreasing codes.
//!
//! Shortening the bit-reversal sequence from its end removes monomials in an
//! order where every factor of `f` goes before `f` itself. Each shortened
//! factor of `f` removes exactly `λ_f / 2^{deg f}` members of `T(f)`, and
//! non-factors remove none, so the survivors are `λ_f (1 - β_f / 2^r)` with
//! `β_f` the number of shortened factors.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::monomial::{is_decreasing, is_factor, lambda, CodeSpec, Monomial};
use crate::pattern::{make_pattern, Mode, Pattern, PatternKind};

/// Number of pattern monomials dividing `f`.
pub fn beta(f: Monomial, y: &Pattern) -> Result<usize> {
    if y.mode() != Mode::Shorten {
        return Err(Error::WrongPattern {
            expected: "a shortening",
            found: y.mode().to_string(),
        });
    }
    Ok(y.monomials().filter(|&g| is_factor(g, f)).count())
}

/// Members of `T(f)` left after shortening by a bit-reversal pattern.
pub fn surviving_count(f: Monomial, y: &Pattern) -> Result<BigUint> {
    let b = beta(f, y)?;
    let lam = lambda(f);
    let step = &lam >> f.degree();
    Ok(lam - step * BigUint::from(b))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShortenedMinWeightReport {
    /// `2^{m-r}`; the true minimum distance when `count > 0`.
    pub d_min: usize,
    /// Number of weight-`d_min` codewords.
    #[serde(rename = "count", serialize_with = "decimal")]
    pub total: BigUint,
    #[serde(serialize_with = "decimal_map")]
    pub per_monomial: BTreeMap<Monomial, BigUint>,
    /// Every weight-`d_min` codeword was shortened away, so the actual
    /// minimum distance is larger than `d_min`.
    pub exceeds_d_min: bool,
}

pub(crate) fn decimal<S: serde::Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_string())
}

pub(crate) fn decimal_map<S: serde::Serializer>(
    map: &BTreeMap<Monomial, BigUint>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_map(map.iter().map(|(f, c)| (f.to_string(), c.to_string())))
}

/// Checks that the shortened code is decreasing (information set plus
/// shortened monomials) and that no information bit is shortened.
pub(crate) fn check_shortened(spec: &CodeSpec, y: &Pattern) -> Result<()> {
    if y.n() != spec.n() {
        return Err(Error::LengthMismatch {
            pattern: y.n(),
            code: spec.n(),
        });
    }
    if let Some(&z) = spec.info().iter().find(|&&z| y.contains(z)) {
        return Err(Error::InfoInPattern(z));
    }
    let union: Vec<Monomial> = spec.monomials().chain(y.monomials()).collect();
    if !is_decreasing(&union) {
        return Err(Error::NotDecreasing(
            "information set plus shortened monomials".into(),
        ));
    }
    Ok(())
}

/// Number of minimum-weight codewords after shortening the last `i` entries
/// of the bit-reversal sequence.
pub fn br_min_weight_count(spec: &CodeSpec, i: usize) -> Result<ShortenedMinWeightReport> {
    let y = make_pattern(PatternKind::Br, spec.m(), i, Mode::Shorten)?;
    check_shortened(spec, &y)?;
    let r = spec.r();
    let per_monomial: BTreeMap<Monomial, BigUint> = spec
        .top_degree()
        .into_par_iter()
        .map(|f| surviving_count(f, &y).map(|c| (f, c)))
        .collect::<Result<_>>()?;
    let total: BigUint = per_monomial.values().sum();
    Ok(ShortenedMinWeightReport {
        d_min: if spec.k() == 0 {
            0
        } else {
            1 << (spec.m() - r)
        },
        exceeds_d_min: total.is_zero() && spec.k() > 0,
        total,
        per_monomial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{downward_closure, index_of, mother_min_weight};
    use crate::oracle::{brute_code_spectrum, OracleCaps};

    fn mono(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    fn pattern(m: u32, monos: &[&str]) -> Pattern {
        let idx = monos.iter().map(|s| index_of(mono(s), m).unwrap());
        Pattern::custom(1 << m, Mode::Shorten, idx).unwrap()
    }

    #[test]
    fn beta_examples() {
        let f = mono("x3*x5");
        assert_eq!(beta(f, &pattern(5, &["1", "x5"])).unwrap(), 2);
        assert_eq!(
            beta(f, &Pattern::empty(32, Mode::Shorten).unwrap()).unwrap(),
            0
        );
        assert_eq!(beta(f, &pattern(5, &["1", "x5", "x3"])).unwrap(), 3);
        assert_eq!(beta(f, &pattern(5, &["1", "x5", "x4"])).unwrap(), 2);
        let punct = Pattern::empty(32, Mode::Puncture).unwrap();
        assert!(beta(f, &punct).is_err());
    }

    #[test]
    fn survivor_progression_for_x3x5() {
        let f = mono("x3*x5");
        let counts: Vec<u32> = [vec![], vec!["1"], vec!["1", "x5"], vec!["1", "x5", "x3"]]
            .iter()
            .map(|set| {
                let c = surviving_count(f, &pattern(5, set)).unwrap();
                c.try_into().unwrap()
            })
            .collect();
        assert_eq!(counts, vec![128, 96, 64, 32]);
    }

    #[test]
    fn zero_shortening_matches_mother_code() {
        for m in 1..=5u32 {
            for seed in Monomial::all(m) {
                let spec = CodeSpec::from_monomials(m, downward_closure([seed])).unwrap();
                let report = br_min_weight_count(&spec, 0).unwrap();
                let mother = mother_min_weight(&spec).unwrap();
                assert_eq!(report.total, mother.count);
                assert_eq!(report.d_min, mother.weight);
            }
        }
    }

    #[test]
    fn small_code_against_enumeration() {
        // I = {x1, x2, x3} with the constant monomial shortened: the union
        // with {1} is decreasing.
        let spec = CodeSpec::from_monomials(3, [mono("x1"), mono("x2"), mono("x3")]).unwrap();
        let report = br_min_weight_count(&spec, 1).unwrap();
        let y = make_pattern(PatternKind::Br, 3, 1, Mode::Shorten).unwrap();
        let brute = brute_code_spectrum(&spec, Some(&y), &OracleCaps::default()).unwrap();
        assert_eq!(report.d_min, 4);
        assert_eq!(report.total, brute.get(4));
        assert_eq!(report.total, BigUint::from(7u32));
    }

    #[test]
    fn rejects_bad_inputs() {
        let spec = CodeSpec::from_monomials(3, [Monomial::ONE, mono("x1"), mono("x2"), mono("x3")])
            .unwrap();
        assert!(matches!(
            br_min_weight_count(&spec, 1),
            Err(Error::InfoInPattern(8))
        ));
        let gap = CodeSpec::from_monomials(3, [mono("x2")]).unwrap();
        assert!(matches!(
            br_min_weight_count(&gap, 1),
            Err(Error::NotDecreasing(_))
        ));
    }

    #[test]
    fn report_json() {
        let spec = CodeSpec::from_monomials(3, [mono("x1"), mono("x2"), mono("x3")]).unwrap();
        let json = serde_json::to_value(br_min_weight_count(&spec, 1).unwrap()).unwrap();
        assert_eq!(json["d_min"], 4);
        assert_eq!(json["count"], "7");
        assert_eq!(json["per_monomial"]["x3"], "4");
    }
}
