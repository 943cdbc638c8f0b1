//! Prefix-weight tables of `T(f)` and the minimum-weight counts they give for
//! quasi-uniformly punctured (QUP) and Wang–Liu shortened codes.
//!
//! `N_f(w, a)` counts members of `T(f)` with exactly `w` ones among the first
//! `a` coordinates. Puncturing the first `a` coordinates of such a codeword
//! leaves weight `2^{m-t} - w`, so `P_f(w, a) = N_f(2^{m-t} - w, a)` is the
//! punctured weight distribution of `T(f)`.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{CheckedSub, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::minwt_short::{check_shortened, decimal, ShortenedMinWeightReport};
use crate::monomial::{eval_at, lambda, CodeSpec, Monomial};
use crate::pattern::{make_pattern, Mode, PatternKind};
use crate::spectrum::WeightSpectrum;

/// `N_f(w, a)` for `0 ≤ a ≤ a_max` and `0 ≤ w ≤ 2^{m - deg f}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrefixWeightTable {
    f: Monomial,
    m: u32,
    lambda: BigUint,
    /// `rows[a][w]`
    rows: Vec<Vec<BigUint>>,
}

impl PrefixWeightTable {
    pub fn monomial(&self) -> Monomial {
        self.f
    }

    pub fn a_max(&self) -> usize {
        self.rows.len() - 1
    }

    /// Weight of every member of `T(f)`, `2^{m - deg f}`.
    pub fn codeword_weight(&self) -> usize {
        1 << (self.m - self.f.degree())
    }

    pub fn lambda(&self) -> &BigUint {
        &self.lambda
    }

    /// `N_f(w, a)`; zero outside the table.
    pub fn n(&self, w: usize, a: usize) -> BigUint {
        self.n_ref(w, a).cloned().unwrap_or_default()
    }

    fn n_ref(&self, w: usize, a: usize) -> Option<&BigUint> {
        self.rows.get(a).and_then(|row| row.get(w))
    }

    /// `P_f(w, a)`: members of weight `w` after puncturing the first `a` bits.
    pub fn p(&self, w: usize, a: usize) -> BigUint {
        match self.codeword_weight().checked_sub(w) {
            Some(prefix) => self.n(prefix, a),
            None => BigUint::zero(),
        }
    }

    /// Punctured weight distribution of `T(f)` at puncture count `a`.
    pub fn punctured_spectrum(&self, a: usize) -> WeightSpectrum {
        let wt = self.codeword_weight();
        WeightSpectrum::from_counts((0..=wt).map(|w| self.p(w, a)).collect())
    }

    /// CSV with one row per weight and one column per puncture count, in the
    /// `P_f` view (`punctured = true`) or the `N_f` view. All-zero rows are
    /// skipped.
    pub fn to_csv(&self, punctured: bool) -> String {
        let mut out = String::from("weight");
        for a in 0..=self.a_max() {
            let _ = write!(out, ",{a}");
        }
        out.push('\n');
        for w in 0..=self.codeword_weight() {
            let row: Vec<BigUint> = (0..=self.a_max())
                .map(|a| {
                    if punctured {
                        self.p(w, a)
                    } else {
                        self.n(w, a)
                    }
                })
                .collect();
            if row.iter().all(Zero::is_zero) {
                continue;
            }
            let _ = write!(out, "{w}");
            for c in row {
                let _ = write!(out, ",{c}");
            }
            out.push('\n');
        }
        out
    }
}

/// Builds prefix tables for every monomial a query needs, sharing the
/// tables of the smaller monomials the recursion reaches.
#[derive(Debug)]
pub struct PrefixTableBuilder {
    m: u32,
    a_max: usize,
    memo: HashMap<Monomial, Arc<PrefixWeightTable>>,
}

impl PrefixTableBuilder {
    pub fn new(m: u32, a_max: usize) -> Result<Self> {
        if m > crate::monomial::MAX_M {
            return Err(Error::UnsupportedExponent(m));
        }
        let n = 1usize << m;
        if a_max > n {
            return Err(Error::PatternSizeOutOfRange { i: a_max, n });
        }
        Ok(PrefixTableBuilder {
            m,
            a_max,
            memo: HashMap::new(),
        })
    }

    pub fn table(&mut self, f: Monomial) -> Result<Arc<PrefixWeightTable>> {
        if !f.is_valid_for(self.m) {
            return Err(Error::MonomialOutOfRange {
                mask: f.mask(),
                m: self.m,
            });
        }
        Ok(self.get(f))
    }

    fn get(&mut self, f: Monomial) -> Arc<PrefixWeightTable> {
        if let Some(t) = self.memo.get(&f) {
            return Arc::clone(t);
        }
        let rows = match f.degree() {
            0 => self.constant_rows(),
            1 => self.linear_rows(f),
            _ => self.recursive_rows(f),
        };
        let table = Arc::new(PrefixWeightTable {
            f,
            m: self.m,
            lambda: lambda(f),
            rows,
        });
        self.memo.insert(f, Arc::clone(&table));
        table
    }

    /// `T(1)` is the all-ones word: its first `a` bits weigh `a`.
    fn constant_rows(&self) -> Vec<Vec<BigUint>> {
        let width = (1usize << self.m) + 1;
        (0..=self.a_max)
            .map(|a| {
                let mut row = vec![BigUint::zero(); width];
                row[a] = BigUint::from(1u32);
                row
            })
            .collect()
    }

    /// Degree one: enumerate `x_i + Σ_{k<i} c_k x_k + c_0` directly.
    fn linear_rows(&self, f: Monomial) -> Vec<Vec<BigUint>> {
        let i = f.max_var();
        let width = (1usize << (self.m - 1)) + 1;
        let mut counts = vec![vec![0u64; width]; self.a_max + 1];
        let lower = (1u32 << (i - 1)) - 1;
        for choice in 0u32..1 << i {
            let coeffs = (1u32 << (i - 1)) | (choice & lower);
            let constant = choice >> (i - 1) & 1;
            let mut weight = 0usize;
            counts[0][0] += 1;
            for (a, row) in counts.iter_mut().enumerate().skip(1) {
                // The point at position a has x_j = 1 iff bit j-1 of a-1 is 0.
                let point = !(a as u32 - 1);
                weight += (((point & coeffs).count_ones() ^ constant) & 1) as usize;
                row[weight] += 1;
            }
        }
        counts
            .into_iter()
            .map(|row| row.into_iter().map(BigUint::from).collect())
            .collect()
    }

    /// Degree `t ≥ 2`: split on the largest variable `x_{i_t}`.
    fn recursive_rows(&mut self, f: Monomial) -> Vec<Vec<BigUint>> {
        let vars = f.vars();
        let t = vars.len() as u32;
        let top = *vars.last().expect("degree >= 2");
        let half = 1usize << (top - 1);
        let period = 1usize << top;
        let shift = 1usize << (top - t);
        let width = (1usize << (self.m - t)) + 1;
        let lam = lambda(f);

        let base = f.without_var(top);
        let base_table = self.get(base);
        // Companions x_{i_1}..x_{i_{t-1}} x_s for free s < i_t, weighted by
        // 2^{#(i_j > s)}.
        let companions: Vec<(u32, Arc<PrefixWeightTable>)> = (1..top)
            .filter(|&s| !f.has_var(s))
            .map(|s| {
                let alpha = vars[..vars.len() - 1].iter().filter(|&&v| v > s).count() as u32;
                (alpha, self.get(base.with_var(s)))
            })
            .collect();

        let mut rows: Vec<Vec<BigUint>> = Vec::with_capacity(self.a_max + 1);
        for a in 0..=self.a_max {
            let mut row = vec![BigUint::zero(); width];
            if a <= half {
                let mut nonzero = BigUint::zero();
                for (w, cell) in row.iter_mut().enumerate().skip(1) {
                    let mut sum = base_table.n_ref(w, a).cloned().unwrap_or_default();
                    for (alpha, table) in &companions {
                        if let Some(c) = table.n_ref(w, a) {
                            sum += c << *alpha;
                        }
                    }
                    nonzero += &sum;
                    *cell = sum;
                }
                row[0] = lam
                    .checked_sub(&nonzero)
                    .expect("prefix counts exceed lambda");
            } else if a <= period {
                // Reflection through the affine map x_j -> x_j + 1, j < i_t.
                let mirror = &rows[period - a];
                for (w, cell) in row.iter_mut().enumerate().take(shift + 1) {
                    *cell = mirror[shift - w].clone();
                }
            } else {
                // Every aligned window of length 2^{i_t} carries weight `shift`.
                let earlier = &rows[a - period];
                row[shift..width].clone_from_slice(&earlier[..width - shift]);
            }
            rows.push(row);
        }
        rows
    }
}

/// `N_f(w, a)` for `a ≤ a_max` over length `2^m`.
pub fn build_prefix_table(f: Monomial, a_max: usize, m: u32) -> Result<PrefixWeightTable> {
    let mut builder = PrefixTableBuilder::new(m, a_max)?;
    let table = builder.table(f)?;
    Ok(Arc::unwrap_or_clone(table))
}

/// Minimum distance and multiplicity of a QUP code, with lower bounds on
/// the counts of heavier weights up to `2^{m-r}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QupMinWeight {
    pub d: usize,
    #[serde(serialize_with = "decimal")]
    pub count: BigUint,
    /// Whether `count` is exact. Otherwise it is a lower bound: some row
    /// reaching weight `d` is followed (in index order) by an information
    /// monomial of higher degree, and codewords mixing the two can also
    /// reach `d` without belonging to any `T(f)`.
    pub exact: bool,
    #[serde(serialize_with = "decimal_by_weight")]
    pub lower_bounds: BTreeMap<usize, BigUint>,
}

fn decimal_by_weight<S: serde::Serializer>(
    map: &BTreeMap<usize, BigUint>,
    s: S,
) -> Result<S::Ok, S::Error> {
    s.collect_map(map.iter().map(|(w, c)| (w.to_string(), c.to_string())))
}

fn check_qup(spec: &CodeSpec, i: usize) -> Result<()> {
    let n = spec.n();
    if i == n {
        return Err(Error::FullyPunctured);
    }
    if i > n {
        return Err(Error::PatternSizeOutOfRange { i, n });
    }
    spec.require_decreasing()?;
    if let Some(&z) = spec.info().iter().find(|&&z| z <= i) {
        return Err(Error::InfoInPattern(z));
    }
    Ok(())
}

/// `Σ_{f ∈ I} P_f(w, i)`: the punctured weight distribution of all
/// codewords that had their coset's minimum weight before puncturing the
/// first `i` bits.
pub fn qup_weight_profile(spec: &CodeSpec, i: usize) -> Result<WeightSpectrum> {
    check_qup(spec, i)?;
    let mut builder = PrefixTableBuilder::new(spec.m(), i)?;
    let mut profile = WeightSpectrum::new();
    for f in spec.monomials() {
        profile += &builder.get(f).punctured_spectrum(i);
    }
    Ok(profile)
}

/// Weight of row `f` after deleting its first `i` coordinates.
fn punctured_row_weight(f: Monomial, m: u32, i: usize) -> usize {
    (i + 1..=1usize << m).filter(|&z| eval_at(f, z)).count()
}

/// Minimum weight of the code punctured on its first `i` coordinates.
///
/// `d` is always exact: every coset `(0^{j-1}, 1)` keeps its row as a
/// lightest punctured member. A lightest codeword of coset `j` has the
/// weight of row `j` before puncturing, so when no information monomial of
/// higher degree follows row `j` it lies in `T(f_j)` and the count is exact;
/// see [`QupMinWeight::exact`]. Counts at heavier weights are lower bounds.
pub fn qup_min_weight(spec: &CodeSpec, i: usize) -> Result<QupMinWeight> {
    if spec.k() == 0 {
        check_qup(spec, i)?;
        return Ok(QupMinWeight {
            d: 0,
            count: BigUint::zero(),
            exact: true,
            lower_bounds: BTreeMap::new(),
        });
    }
    let profile = qup_weight_profile(spec, i)?;
    let d = profile
        .min_positive_weight()
        .expect("unpunctured information rows keep positive weight");
    let top = 1usize << (spec.m() - spec.r());
    let lower_bounds = (d + 1..=top)
        .map(|w| (w, profile.get(w)))
        .filter(|(_, c)| !c.is_zero())
        .collect();
    let rows: Vec<(usize, Monomial)> = spec
        .info()
        .iter()
        .zip(spec.monomials())
        .map(|(&z, f)| (z, f))
        .collect();
    let exact = rows.iter().all(|&(z, f)| {
        punctured_row_weight(f, spec.m(), i) != d
            || rows
                .iter()
                .all(|&(z2, g)| z2 <= z || g.degree() <= f.degree())
    });
    Ok(QupMinWeight {
        d,
        count: profile.get(d),
        exact,
        lower_bounds,
    })
}

/// Number of weight-`2^{m-r}` codewords after shortening the last `i`
/// coordinates. By the symmetry `x_j -> x_j + 1` this equals the number of
/// `T(f)` members with an all-zero prefix of length `i`.
pub fn wl_min_weight(spec: &CodeSpec, i: usize) -> Result<ShortenedMinWeightReport> {
    let y = make_pattern(PatternKind::Wl, spec.m(), i, Mode::Shorten)?;
    check_shortened(spec, &y)?;
    let mut builder = PrefixTableBuilder::new(spec.m(), i)?;
    let per_monomial: BTreeMap<Monomial, BigUint> = spec
        .top_degree()
        .into_iter()
        .map(|f| {
            let table = builder.get(f);
            (f, table.n(0, i))
        })
        .collect();
    let total: BigUint = per_monomial.values().sum();
    Ok(ShortenedMinWeightReport {
        d_min: if spec.k() == 0 {
            0
        } else {
            1 << (spec.m() - spec.r())
        },
        exceeds_d_min: total.is_zero() && spec.k() > 0,
        total,
        per_monomial,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::monomial::{downward_closure, index_of};
    use crate::oracle::{enumerate_t, OracleCaps};

    fn mono(s: &str) -> Monomial {
        s.parse().unwrap()
    }

    /// Tally prefix weights of the explicitly enumerated `T(f)`.
    fn oracle_table(f: Monomial, m: u32, a_max: usize) -> Vec<Vec<u64>> {
        let words = enumerate_t(f, m, &OracleCaps::default()).unwrap();
        let width = (1usize << (m - f.degree())) + 1;
        let mut out = vec![vec![0u64; width]; a_max + 1];
        for c in words {
            for (a, row) in out.iter_mut().enumerate() {
                let prefix = if a == 0 {
                    0
                } else {
                    (c & (u64::MAX >> (64 - a))).count_ones()
                };
                row[prefix as usize] += 1;
            }
        }
        out
    }

    #[test]
    fn x1x2_table_matches_enumeration() {
        let f = mono("x1*x2");
        let table = build_prefix_table(f, 8, 3).unwrap();
        let expect = oracle_table(f, 3, 8);
        for (a, row) in expect.iter().enumerate() {
            for (w, &c) in row.iter().enumerate() {
                assert_eq!(table.n(w, a), BigUint::from(c), "w={w} a={a}");
            }
        }
    }

    #[test]
    fn tables_match_enumeration_up_to_m5() {
        for m in 1..=5u32 {
            let n = 1usize << m;
            for f in Monomial::all(m) {
                let table = build_prefix_table(f, n, m).unwrap();
                let expect = oracle_table(f, m, n);
                for (a, row) in expect.iter().enumerate() {
                    for (w, &c) in row.iter().enumerate() {
                        assert_eq!(table.n(w, a), BigUint::from(c), "m={m} f={f} w={w} a={a}");
                    }
                }
            }
        }
    }

    #[test]
    fn empty_prefix_column() {
        let t = build_prefix_table(mono("x2*x4"), 5, 5).unwrap();
        assert_eq!(t.n(0, 0), lambda(mono("x2*x4")));
        assert!((1..=8).all(|w| t.n(w, 0).is_zero()));
    }

    #[test]
    fn example6_wang_liu() {
        let spec = CodeSpec::from_monomials(3, [mono("x1*x2"), mono("x2")]).unwrap();
        let report = wl_min_weight(&spec, 2).unwrap();
        assert_eq!(report.d_min, 2);
        assert_eq!(report.total, BigUint::from(2u32));
        let table = build_prefix_table(mono("x1*x2"), 2, 3).unwrap();
        assert_eq!(table.p(2, 2), BigUint::from(2u32));
    }

    #[test]
    fn zero_puncturing_matches_mother_code() {
        for m in 1..=5u32 {
            for seed in Monomial::all(m) {
                let spec = CodeSpec::from_monomials(m, downward_closure([seed])).unwrap();
                let mother = crate::monomial::mother_min_weight(&spec).unwrap();
                let q = qup_min_weight(&spec, 0).unwrap();
                assert_eq!((q.d, &q.count), (mother.weight, &mother.count));
                let wl = wl_min_weight(&spec, 0).unwrap();
                assert_eq!(wl.total, mother.count);
            }
        }
    }

    #[test]
    fn qup_single_monomial_contribution() {
        // Only x2x3 has degree 2; the row weight-4 / column-10 entry of its
        // table is one codeword.
        let table = build_prefix_table(mono("x2*x3"), 10, 5).unwrap();
        assert_eq!(table.p(4, 10), BigUint::from(1u32));
    }

    #[test]
    fn qup_count_is_a_bound_when_heavier_rows_follow() {
        // x3 + x1*x2 has weight 4 and three ones among the first three
        // positions, yet lies in no T(f).
        let spec = CodeSpec::new(3, 4..=8).unwrap();
        let q = qup_min_weight(&spec, 3).unwrap();
        assert_eq!((q.d, q.count.clone()), (1, BigUint::from(4u32)));
        assert!(!q.exact);
        let x = make_pattern(PatternKind::Qup, 3, 3, Mode::Puncture).unwrap();
        let brute =
            crate::oracle::brute_code_spectrum(&spec, Some(&x), &OracleCaps::default()).unwrap();
        assert_eq!(brute.get(1), BigUint::from(5u32));

        let top_only = CodeSpec::new(3, [5, 6, 7, 8]).unwrap();
        let q = qup_min_weight(&top_only, 3).unwrap();
        assert!(q.exact);
    }

    #[test]
    fn qup_rejections() {
        let spec = CodeSpec::from_monomials(3, [Monomial::ONE, mono("x1")]).unwrap();
        assert!(matches!(
            qup_min_weight(&spec, 8),
            Err(Error::FullyPunctured)
        ));
        let bad = CodeSpec::from_monomials(3, [mono("x2")]).unwrap();
        assert!(matches!(
            qup_min_weight(&bad, 1),
            Err(Error::NotDecreasing(_))
        ));
        let full = CodeSpec::new(3, 1..=8).unwrap();
        assert!(matches!(
            qup_min_weight(&full, 1),
            Err(Error::InfoInPattern(1))
        ));
        let _ = index_of(Monomial::ONE, 3).unwrap();
    }

    #[test]
    fn csv_layout() {
        let t = build_prefix_table(mono("x2*x3"), 16, 5).unwrap();
        let csv = t.to_csv(true);
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines.len(), 6);
        assert!(lines[0].starts_with("weight,0,1,2"));
        assert_eq!(lines[1], "4,0,0,0,0,0,0,0,0,0,0,1,2,4,6,9,12,16");
        assert_eq!(lines[5], "8,16,12,9,6,4,2,1,0,0,0,0,0,0,0,0,0,0");
    }
}
