//! Exact weight spectra and dyadic expectations.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign};

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};
use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

/// Map from Hamming weight to codeword count. Stored densely; trailing zero
/// counts are trimmed so equal spectra compare equal.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeightSpectrum {
    counts: Vec<BigUint>,
}

impl WeightSpectrum {
    pub fn new() -> Self {
        Self::default()
    }

    /// One codeword of weight `w`.
    pub fn unit(w: usize) -> Self {
        let mut counts = vec![BigUint::zero(); w + 1];
        counts[w] = BigUint::from(1u32);
        WeightSpectrum { counts }
    }

    pub fn from_counts(counts: Vec<BigUint>) -> Self {
        let mut s = WeightSpectrum { counts };
        s.trim();
        s
    }

    pub fn from_u64(counts: &[u64]) -> Self {
        Self::from_counts(counts.iter().map(|&c| BigUint::from(c)).collect())
    }

    fn trim(&mut self) {
        while self.counts.last().is_some_and(Zero::is_zero) {
            self.counts.pop();
        }
    }

    pub fn get(&self, w: usize) -> BigUint {
        self.counts.get(w).cloned().unwrap_or_default()
    }

    pub fn count_ref(&self, w: usize) -> Option<&BigUint> {
        self.counts.get(w).filter(|c| !c.is_zero())
    }

    pub fn add_count(&mut self, w: usize, c: &BigUint) {
        if c.is_zero() {
            return;
        }
        if self.counts.len() <= w {
            self.counts.resize(w + 1, BigUint::zero());
        }
        self.counts[w] += c;
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// One past the largest weight with a nonzero count.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn max_weight(&self) -> Option<usize> {
        self.counts.len().checked_sub(1)
    }

    pub fn total(&self) -> BigUint {
        self.counts.iter().sum()
    }

    /// Smallest weight `w > 0` with a nonzero count.
    pub fn min_positive_weight(&self) -> Option<usize> {
        (1..self.counts.len()).find(|&w| !self.counts[w].is_zero())
    }

    /// Nonzero `(weight, count)` pairs in increasing weight order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &BigUint)> {
        self.counts.iter().enumerate().filter(|(_, c)| !c.is_zero())
    }

    /// Spectrum of the direct sum of two codes (or cosets).
    pub fn convolve(&self, other: &WeightSpectrum) -> WeightSpectrum {
        if self.is_empty() || other.is_empty() {
            return WeightSpectrum::new();
        }
        let mut out = vec![BigUint::zero(); self.counts.len() + other.counts.len() - 1];
        for (i, a) in self.iter() {
            for (j, b) in other.iter() {
                out[i + j] += a * b;
            }
        }
        WeightSpectrum::from_counts(out)
    }

    pub fn to_f64_pairs(&self) -> Vec<(usize, f64)> {
        self.iter()
            .map(|(w, c)| (w, c.to_f64().unwrap_or(f64::INFINITY)))
            .collect()
    }

    /// Decimal-string map, the JSON form used on the wire.
    pub fn to_string_map(&self) -> BTreeMap<usize, String> {
        self.iter().map(|(w, c)| (w, c.to_string())).collect()
    }
}

impl AddAssign<&WeightSpectrum> for WeightSpectrum {
    fn add_assign(&mut self, rhs: &WeightSpectrum) {
        if self.counts.len() < rhs.counts.len() {
            self.counts.resize(rhs.counts.len(), BigUint::zero());
        }
        for (a, b) in self.counts.iter_mut().zip(&rhs.counts) {
            *a += b;
        }
    }
}

impl Add<&WeightSpectrum> for &WeightSpectrum {
    type Output = WeightSpectrum;

    fn add(self, rhs: &WeightSpectrum) -> WeightSpectrum {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Serialize for WeightSpectrum {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(None)?;
        for (w, c) in self.iter() {
            map.serialize_entry(&w.to_string(), &c.to_string())?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for WeightSpectrum {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = BTreeMap::<String, String>::deserialize(deserializer)?;
        let mut s = WeightSpectrum::new();
        for (w, c) in raw {
            let w: usize = w.parse().map_err(D::Error::custom)?;
            let c: BigUint = c.parse().map_err(D::Error::custom)?;
            s.add_count(w, &c);
        }
        Ok(s)
    }
}

impl fmt::Display for WeightSpectrum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (k, (w, c)) in self.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{w}: {c}")?;
        }
        f.write_str("}")
    }
}

/// Exact value `num / 2^exp2`, kept with `num` odd (or zero with `exp2 = 0`).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct DyadicRational {
    num: BigUint,
    exp2: u64,
}

impl DyadicRational {
    pub fn new(num: BigUint, exp2: u64) -> Self {
        if num.is_zero() {
            return DyadicRational::default();
        }
        let shift = num.trailing_zeros().unwrap_or(0).min(exp2);
        DyadicRational {
            num: num >> shift,
            exp2: exp2 - shift,
        }
    }

    pub fn from_integer(num: BigUint) -> Self {
        DyadicRational::new(num, 0)
    }

    pub fn zero() -> Self {
        DyadicRational::default()
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exp2(&self) -> u64 {
        self.exp2
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Integer value when the denominator has cancelled.
    pub fn to_integer(&self) -> Option<BigUint> {
        (self.exp2 == 0).then(|| self.num.clone())
    }

    pub fn to_f64(&self) -> f64 {
        if self.num.is_zero() {
            return 0.0;
        }
        // Keep 64 significant bits so huge numerators do not overflow f64
        // before the scaling.
        let bits = self.num.bits();
        let drop = bits.saturating_sub(64);
        let mantissa = (&self.num >> drop).to_f64().unwrap_or(f64::INFINITY);
        let exponent = drop as i64 - self.exp2 as i64;
        libm::ldexp(
            mantissa,
            exponent.clamp(i32::MIN as i64, i32::MAX as i64) as i32,
        )
    }
}

impl Add<&DyadicRational> for &DyadicRational {
    type Output = DyadicRational;

    fn add(self, rhs: &DyadicRational) -> DyadicRational {
        let exp2 = self.exp2.max(rhs.exp2);
        let a = &self.num << (exp2 - self.exp2);
        let b = &rhs.num << (exp2 - rhs.exp2);
        DyadicRational::new(a + b, exp2)
    }
}

impl AddAssign<&DyadicRational> for DyadicRational {
    fn add_assign(&mut self, rhs: &DyadicRational) {
        *self = &*self + rhs;
    }
}

impl fmt::Display for DyadicRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exp2 == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp2)
        }
    }
}

impl Serialize for DyadicRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(3))?;
        map.serialize_entry("num", &self.num.to_string())?;
        map.serialize_entry("exp2", &self.exp2)?;
        map.serialize_entry("approx", &self.to_f64())?;
        map.end()
    }
}

impl<'de> Deserialize<'de> for DyadicRational {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        #[derive(Deserialize)]
        struct Raw {
            num: String,
            exp2: u64,
        }
        let raw = Raw::deserialize(deserializer)?;
        let num: BigUint = raw.num.parse().map_err(D::Error::custom)?;
        Ok(DyadicRational::new(num, raw.exp2))
    }
}

/// Ensemble-average weight enumerator.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AvgSpectrum {
    entries: BTreeMap<usize, DyadicRational>,
}

impl AvgSpectrum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, w: usize, value: &DyadicRational) {
        if value.is_zero() {
            return;
        }
        *self.entries.entry(w).or_default() += value;
    }

    pub fn get(&self, w: usize) -> DyadicRational {
        self.entries.get(&w).cloned().unwrap_or_default()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &DyadicRational)> {
        self.entries.iter().map(|(&w, v)| (w, v))
    }

    pub fn total(&self) -> DyadicRational {
        self.entries
            .values()
            .fold(DyadicRational::zero(), |acc, v| &acc + v)
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_f64_pairs(&self) -> Vec<(usize, f64)> {
        self.iter().map(|(w, v)| (w, v.to_f64())).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(x: u64) -> BigUint {
        BigUint::from(x)
    }

    #[test]
    fn convolution_is_commutative_and_counts_pairs() {
        let a = WeightSpectrum::from_u64(&[1, 2, 1]);
        let b = WeightSpectrum::from_u64(&[0, 3]);
        let ab = a.convolve(&b);
        assert_eq!(ab, b.convolve(&a));
        assert_eq!(ab, WeightSpectrum::from_u64(&[0, 3, 6, 3]));
        assert_eq!(ab.total(), a.total() * b.total());
        assert!(a.convolve(&WeightSpectrum::new()).is_empty());
    }

    #[test]
    fn trailing_zeros_are_trimmed() {
        assert_eq!(
            WeightSpectrum::from_u64(&[1, 0, 0]),
            WeightSpectrum::from_u64(&[1])
        );
        assert_eq!(
            WeightSpectrum::from_u64(&[0, 0, 5]).min_positive_weight(),
            Some(2)
        );
        assert_eq!(WeightSpectrum::from_u64(&[4]).min_positive_weight(), None);
    }

    #[test]
    fn spectrum_json_uses_decimal_strings() {
        let s = WeightSpectrum::from_u64(&[1, 0, 14]);
        let json = serde_json::to_string(&s).unwrap();
        assert_eq!(json, r#"{"0":"1","2":"14"}"#);
        let back: WeightSpectrum = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn dyadic_canonical_form() {
        let x = DyadicRational::new(big(12), 4);
        assert_eq!((x.numerator().clone(), x.exp2()), (big(3), 2));
        let y = DyadicRational::new(big(8), 2);
        assert_eq!(y.to_integer(), Some(big(2)));
        assert!(DyadicRational::new(big(0), 9).is_zero());
        assert_eq!(DyadicRational::new(big(0), 9), DyadicRational::zero());
    }

    #[test]
    fn dyadic_addition() {
        let a = DyadicRational::new(big(3), 2);
        let b = DyadicRational::new(big(1), 2);
        assert_eq!((&a + &b).to_integer(), Some(big(1)));
        let c = DyadicRational::new(big(1), 3);
        assert_eq!(&a + &c, DyadicRational::new(big(7), 3));
        assert!((c.to_f64() - 0.125).abs() < 1e-15);
    }

    #[test]
    fn dyadic_f64_for_huge_values() {
        let x = DyadicRational::new(BigUint::from(3u32) << 2000u32, 1999);
        assert_eq!(x.to_f64(), 6.0);
        let tiny = DyadicRational::new(big(1), 10);
        assert_eq!(tiny.to_f64(), 1.0 / 1024.0);
    }

    #[test]
    fn dyadic_json() {
        let x = DyadicRational::new(big(5), 3);
        let json = serde_json::to_string(&x).unwrap();
        assert_eq!(json, r#"{"num":"5","exp2":3,"approx":0.625}"#);
        let back: DyadicRational = serde_json::from_str(&json).unwrap();
        assert_eq!(back, x);
    }
}
