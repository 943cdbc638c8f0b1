//! Monomial view of polar codes.
//!
//! Row `z` of the Kronecker power `F^{⊗m}` is the evaluation vector of a
//! monomial in `x_1..x_m`. With `a = (a_1, .., a_m)` the evaluation point and
//! `a_1` the least significant bit, the row index is
//! `z = Σ 2^{i-1} (a_i ⊕ 1) + 1`, so the all-variables monomial sits in row 1
//! and the constant monomial in row `N`.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest block-length exponent accepted anywhere in the crate.
pub const MAX_M: u32 = 24;

/// A monomial in `x_1..x_m`, stored as a variable mask (bit `i - 1` set iff
/// `x_i` is a factor).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Monomial(u32);

impl Monomial {
    /// The constant monomial `1`.
    pub const ONE: Monomial = Monomial(0);

    pub fn new(mask: u32, m: u32) -> Result<Self> {
        if m > MAX_M {
            return Err(Error::UnsupportedExponent(m));
        }
        if mask >> m != 0 {
            return Err(Error::MonomialOutOfRange { mask, m });
        }
        Ok(Monomial(mask))
    }

    /// Builds a monomial from 1-based variable indices.
    pub fn from_vars(vars: &[u32], m: u32) -> Result<Self> {
        let mut mask = 0u32;
        for &v in vars {
            if v == 0 || v > m || v > 32 {
                return Err(Error::InvalidArgument(format!(
                    "variable x{v} outside x1..x{m}"
                )));
            }
            mask |= 1 << (v - 1);
        }
        Monomial::new(mask, m)
    }

    /// Unchecked constructor for masks already known to be valid.
    pub(crate) const fn from_mask(mask: u32) -> Self {
        Monomial(mask)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> u32 {
        self.0.count_ones()
    }

    pub fn is_valid_for(self, m: u32) -> bool {
        m <= MAX_M && self.0 >> m == 0
    }

    pub fn has_var(self, v: u32) -> bool {
        (1..=32).contains(&v) && self.0 & (1 << (v - 1)) != 0
    }

    /// Variable indices in ascending order (1-based).
    pub fn vars(self) -> Vec<u32> {
        (1..=32).filter(|&v| self.has_var(v)).collect()
    }

    /// Largest variable index, or 0 for the constant monomial.
    pub fn max_var(self) -> u32 {
        32 - self.0.leading_zeros()
    }

    pub fn with_var(self, v: u32) -> Monomial {
        Monomial(self.0 | (1 << (v - 1)))
    }

    pub fn without_var(self, v: u32) -> Monomial {
        Monomial(self.0 & !(1 << (v - 1)))
    }

    /// Whether `self` divides `other`.
    pub fn divides(self, other: Monomial) -> bool {
        self.0 & !other.0 == 0
    }

    /// Iterates every monomial in `m` variables.
    pub fn all(m: u32) -> impl Iterator<Item = Monomial> {
        (0..1u32 << m).map(Monomial)
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0 == 0 {
            return f.write_str("1");
        }
        let parts: Vec<String> = self.vars().iter().map(|v| format!("x{v}")).collect();
        f.write_str(&parts.join("*"))
    }
}

impl FromStr for Monomial {
    type Err = Error;

    /// Parses `1`, `x3`, `x1*x3` or `x1x3`. The result is checked against
    /// `MAX_M` only; callers validate against their own `m`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if s == "1" {
            return Ok(Monomial::ONE);
        }
        let mut mask = 0u32;
        for part in s.split(['*', 'x']).filter(|p| !p.is_empty()) {
            let v: u32 = part
                .trim()
                .parse()
                .map_err(|_| Error::InvalidArgument(format!("bad monomial '{s}'")))?;
            if v == 0 || v > MAX_M {
                return Err(Error::InvalidArgument(format!("bad monomial '{s}'")));
            }
            mask |= 1 << (v - 1);
        }
        if mask == 0 {
            return Err(Error::InvalidArgument(format!("bad monomial '{s}'")));
        }
        Ok(Monomial(mask))
    }
}

fn check_m(m: u32) -> Result<usize> {
    if m > MAX_M {
        return Err(Error::UnsupportedExponent(m));
    }
    Ok(1usize << m)
}

/// Row index of `f` in `F^{⊗m}` (1-based).
pub fn index_of(f: Monomial, m: u32) -> Result<usize> {
    let n = check_m(m)?;
    if !f.is_valid_for(m) {
        return Err(Error::MonomialOutOfRange { mask: f.0, m });
    }
    Ok((!f.0 as usize & (n - 1)) + 1)
}

/// Monomial generating row `index` of `F^{⊗m}`.
pub fn monomial_of(index: usize, m: u32) -> Result<Monomial> {
    let n = check_m(m)?;
    if index == 0 || index > n {
        return Err(Error::IndexOutOfRange { index, n });
    }
    Ok(Monomial(!(index - 1) as u32 & (n - 1) as u32))
}

/// Value of `f` at the evaluation point stored in position `pos` (1-based).
#[inline]
pub fn eval_at(f: Monomial, pos: usize) -> bool {
    (pos - 1) as u32 & f.0 == 0
}

/// Evaluation vector of `f`, i.e. row `index_of(f, m)` of `F^{⊗m}`.
pub fn eval_row(f: Monomial, m: u32) -> Result<Vec<bool>> {
    let n = check_m(m)?;
    if !f.is_valid_for(m) {
        return Err(Error::MonomialOutOfRange { mask: f.0, m });
    }
    Ok((1..=n).map(|pos| eval_at(f, pos)).collect())
}

/// Evaluation vector of a polynomial given as a sum of monomials.
pub fn eval_poly(terms: &[Monomial], m: u32) -> Result<Vec<bool>> {
    let n = check_m(m)?;
    let mut out = vec![false; n];
    for &t in terms {
        let row = eval_row(t, m)?;
        for (o, r) in out.iter_mut().zip(row) {
            *o ^= r;
        }
    }
    Ok(out)
}

/// The monomial partial order `f ≼ g`: `f` is at most `g` after aligning the
/// sorted variable lists at their largest entries.
pub fn leq(f: Monomial, g: Monomial) -> bool {
    let fv = f.vars();
    let gv = g.vars();
    if fv.len() > gv.len() {
        return false;
    }
    fv.iter().rev().zip(gv.iter().rev()).all(|(a, b)| a <= b)
}

/// `g` is a factor of `f` (`f = g h`).
pub fn is_factor(g: Monomial, f: Monomial) -> bool {
    g.divides(f)
}

/// Immediate predecessors of `g` under `≼`: drop one variable, or lower one
/// variable index by one when the target slot is free. Every relation of the
/// order is a chain of such steps.
pub fn predecessors(g: Monomial) -> impl Iterator<Item = Monomial> {
    let vars = g.vars();
    let mut out = Vec::with_capacity(2 * vars.len());
    for &v in &vars {
        out.push(g.without_var(v));
        if v > 1 && !g.has_var(v - 1) {
            out.push(g.without_var(v).with_var(v - 1));
        }
    }
    out.into_iter()
}

/// Whether the set is closed downward under `≼`.
pub fn is_decreasing<'a>(set: impl IntoIterator<Item = &'a Monomial>) -> bool {
    let members: HashSet<Monomial> = set.into_iter().copied().collect();
    members
        .iter()
        .all(|&g| predecessors(g).all(|f| members.contains(&f)))
}

/// Smallest decreasing set containing `seeds`.
pub fn downward_closure(seeds: impl IntoIterator<Item = Monomial>) -> BTreeSet<Monomial> {
    let mut out = BTreeSet::new();
    let mut stack: Vec<Monomial> = seeds.into_iter().collect();
    while let Some(g) = stack.pop() {
        if out.insert(g) {
            stack.extend(predecessors(g));
        }
    }
    out
}

/// `λ_f = 2^{Σ_t (i_t - t + 1)}`, the number of minimum-weight codewords
/// whose leading monomial is `f`.
pub fn lambda(f: Monomial) -> BigUint {
    BigUint::one() << lambda_log2(f)
}

pub fn lambda_log2(f: Monomial) -> u32 {
    f.vars()
        .iter()
        .enumerate()
        .map(|(t, &i)| i - t as u32)
        .sum()
}

/// Block-length exponent plus an information set of 1-based row indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawCodeSpec", into = "RawCodeSpec")]
pub struct CodeSpec {
    m: u32,
    info: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawCodeSpec {
    m: u32,
    info: Vec<usize>,
}

impl TryFrom<RawCodeSpec> for CodeSpec {
    type Error = Error;

    fn try_from(raw: RawCodeSpec) -> Result<Self> {
        CodeSpec::new(raw.m, raw.info)
    }
}

impl From<CodeSpec> for RawCodeSpec {
    fn from(spec: CodeSpec) -> Self {
        RawCodeSpec {
            m: spec.m,
            info: spec.info.into_iter().collect(),
        }
    }
}

impl CodeSpec {
    pub fn new(m: u32, info: impl IntoIterator<Item = usize>) -> Result<Self> {
        let n = check_m(m)?;
        let mut set = BTreeSet::new();
        for index in info {
            if index == 0 || index > n {
                return Err(Error::IndexOutOfRange { index, n });
            }
            if !set.insert(index) {
                return Err(Error::DuplicateIndex(index));
            }
        }
        Ok(CodeSpec { m, info: set })
    }

    pub fn from_monomials(m: u32, monomials: impl IntoIterator<Item = Monomial>) -> Result<Self> {
        let indices = monomials
            .into_iter()
            .map(|f| index_of(f, m))
            .collect::<Result<Vec<_>>>()?;
        CodeSpec::new(m, indices)
    }

    pub fn m(&self) -> u32 {
        self.m
    }

    pub fn n(&self) -> usize {
        1 << self.m
    }

    pub fn k(&self) -> usize {
        self.info.len()
    }

    /// Information row indices, ascending.
    pub fn info(&self) -> &BTreeSet<usize> {
        &self.info
    }

    pub fn contains_index(&self, index: usize) -> bool {
        self.info.contains(&index)
    }

    pub fn monomials(&self) -> impl Iterator<Item = Monomial> + '_ {
        let mask = (self.n() - 1) as u32;
        self.info
            .iter()
            .map(move |&z| Monomial(!(z - 1) as u32 & mask))
    }

    /// Maximum degree over the information monomials (0 when empty).
    pub fn r(&self) -> u32 {
        self.monomials().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Degree-`r` information monomials.
    pub fn top_degree(&self) -> Vec<Monomial> {
        let r = self.r();
        self.monomials().filter(|f| f.degree() == r).collect()
    }

    pub fn is_decreasing(&self) -> bool {
        is_decreasing(&self.monomials().collect::<Vec<_>>())
    }

    pub(crate) fn require_decreasing(&self) -> Result<()> {
        if self.is_decreasing() {
            Ok(())
        } else {
            Err(Error::NotDecreasing(self.describe_violation()))
        }
    }

    fn describe_violation(&self) -> String {
        let members: HashSet<Monomial> = self.monomials().collect();
        for g in self.monomials() {
            if let Some(f) = predecessors(g).find(|f| !members.contains(f)) {
                return format!("{g} is present but {f} is not");
            }
        }
        String::new()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }
}

/// Minimum weight of a decreasing code and its multiplicity.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MinWeightCount {
    pub weight: usize,
    pub count: BigUint,
}

/// `d = 2^{m-r}` and `A_d = Σ_{f ∈ I_r} λ_f` for a decreasing code.
///
/// The empty code has no nonzero codewords; it reports weight 0 and count 0.
pub fn mother_min_weight(spec: &CodeSpec) -> Result<MinWeightCount> {
    if spec.k() == 0 {
        return Ok(MinWeightCount {
            weight: 0,
            count: BigUint::zero(),
        });
    }
    spec.require_decreasing()?;
    let r = spec.r();
    let count = spec.top_degree().into_iter().map(lambda).sum();
    Ok(MinWeightCount {
        weight: 1 << (spec.m() - r),
        count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    #[test]
    fn row_indices_follow_generator_listing() {
        assert_eq!(index_of(mono("x1*x2*x3"), 3).unwrap(), 1);
        assert_eq!(index_of(Monomial::ONE, 3).unwrap(), 8);
        assert_eq!(index_of(mono("x3"), 3).unwrap(), 4);
        assert_eq!(index_of(mono("x2*x3"), 3).unwrap(), 2);
        assert_eq!(monomial_of(7, 3).unwrap(), mono("x1"));
        assert!(index_of(mono("x4"), 3).is_err());
        assert!(monomial_of(9, 3).is_err());
    }

    #[test]
    fn rows_match_kronecker_power() {
        let expect = |s: &str| s.chars().map(|c| c == '1').collect::<Vec<_>>();
        assert_eq!(eval_row(mono("x3"), 3).unwrap(), expect("11110000"));
        assert_eq!(eval_row(mono("x1"), 3).unwrap(), expect("10101010"));
        assert_eq!(eval_row(Monomial::ONE, 3).unwrap(), expect("11111111"));
        assert_eq!(eval_row(mono("x1*x2"), 3).unwrap(), expect("10001000"));
        let p = eval_poly(&[mono("x3"), mono("x1"), Monomial::ONE], 3).unwrap();
        assert_eq!(p, expect("10100101"));
    }

    #[test]
    fn kronecker_power_agrees_with_rows() {
        // F^{⊗m} built by explicit Kronecker products.
        for m in 0..=5u32 {
            let mut f = vec![vec![true]];
            for _ in 0..m {
                let n = f.len();
                let mut g = vec![vec![false; 2 * n]; 2 * n];
                for r in 0..2 * n {
                    for c in 0..2 * n {
                        let kernel = !(r < n && c >= n);
                        g[r][c] = kernel && f[r % n][c % n];
                    }
                }
                f = g;
            }
            for (z, row) in f.iter().enumerate() {
                let mono = monomial_of(z + 1, m).unwrap();
                assert_eq!(&eval_row(mono, m).unwrap(), row, "m={m} row {}", z + 1);
            }
        }
    }

    #[test]
    fn partial_order_examples() {
        assert!(leq(mono("x1"), mono("x2")));
        assert!(leq(mono("x2"), mono("x1*x3")));
        assert!(!leq(mono("x1*x3"), mono("x2")));
        assert!(leq(Monomial::ONE, mono("x1")));
        assert!(!leq(mono("x3"), mono("x1*x2")));
    }

    #[test]
    fn decreasing_examples() {
        let set = [Monomial::ONE, mono("x1"), mono("x2"), mono("x3")];
        assert!(is_decreasing(&set));
        assert!(!is_decreasing(&[mono("x2")]));
        assert!(is_decreasing(&[]));
    }

    #[test]
    fn lambda_examples() {
        assert_eq!(lambda(mono("x3*x5")), BigUint::from(128u32));
        assert_eq!(lambda(Monomial::ONE), BigUint::one());
        assert_eq!(lambda(mono("x2*x3")), BigUint::from(16u32));
        assert_eq!(lambda(mono("x1")), BigUint::from(2u32));
    }

    #[test]
    fn factor_examples() {
        assert!(is_factor(mono("x5"), mono("x3*x5")));
        assert!(is_factor(Monomial::ONE, mono("x1*x4")));
        assert!(!is_factor(mono("x4"), mono("x3*x5")));
    }

    #[test]
    fn mother_min_weight_examples() {
        let spec = CodeSpec::from_monomials(3, [Monomial::ONE, mono("x1"), mono("x2"), mono("x3")])
            .unwrap();
        let mw = mother_min_weight(&spec).unwrap();
        assert_eq!((mw.weight, mw.count), (4, BigUint::from(14u32)));

        let rep = CodeSpec::new(3, [8]).unwrap();
        let mw = mother_min_weight(&rep).unwrap();
        assert_eq!((mw.weight, mw.count), (8, BigUint::one()));

        let empty = CodeSpec::new(3, []).unwrap();
        assert_eq!(mother_min_weight(&empty).unwrap().count, BigUint::zero());

        let bad = CodeSpec::from_monomials(3, [mono("x2")]).unwrap();
        assert!(matches!(
            mother_min_weight(&bad),
            Err(Error::NotDecreasing(_))
        ));
    }

    #[test]
    fn spec_json() {
        let spec = CodeSpec::from_json(r#"{"m":3,"info":[8,4,6,7]}"#).unwrap();
        assert_eq!(spec.k(), 4);
        assert_eq!(spec.r(), 1);
        assert_eq!(spec.to_json().unwrap(), r#"{"m":3,"info":[4,6,7,8]}"#);
        assert!(CodeSpec::from_json(r#"{"m":3,"info":[9]}"#).is_err());
        assert!(CodeSpec::from_json(r#"{"m":3,"info":[2,2]}"#).is_err());
    }

    #[test]
    fn monomial_parse_and_display() {
        assert_eq!(mono("x1*x3").to_string(), "x1*x3");
        assert_eq!(mono("x1x3"), mono("x1*x3"));
        assert_eq!(Monomial::ONE.to_string(), "1");
        assert!("y2".parse::<Monomial>().is_err());
    }
}
