//! Self-check: closed forms and tree recursions against brute-force
//! enumeration over every decreasing information set of small length.

use std::collections::BTreeSet;

use clap::Args;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use polar_spectrum::coset::{all_prefix_spectra, avg_spectrum};
use polar_spectrum::minwt_punct::{qup_min_weight, wl_min_weight};
use polar_spectrum::minwt_short::br_min_weight_count;
use polar_spectrum::monomial::is_decreasing;
use polar_spectrum::oracle::{
    brute_code_spectrum, brute_coset_spectrum, decreasing_specs, mc_pretransform_avg, McConfig,
    OracleCaps,
};
use polar_spectrum::pattern::make_pattern;
use polar_spectrum::{CodeSpec, Mode, Monomial, Pattern, PatternKind};

use crate::input::parse_family;
use crate::output::Emit;
use crate::{CmdResult, Failure};

#[derive(Args, Debug, Serialize)]
pub struct CheckArgs {
    /// Largest m swept (at most 4).
    #[arg(long, default_value_t = 3)]
    pub max_m: u32,
    /// Families to sweep.
    #[arg(long, value_delimiter = ',', value_parser = parse_family, default_value = "qup,wl,br")]
    pub patterns: Vec<PatternKind>,
    /// Monte-Carlo samples for the average-spectrum comparison (0 skips it).
    #[arg(long, default_value_t = 0)]
    pub samples: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

#[derive(Default, Serialize)]
struct Tally {
    compared: usize,
    rejected: usize,
    /// QUP counts flagged as lower bounds.
    bound_only: usize,
    /// Lower-bound QUP counts strictly below enumeration.
    bound_gaps: usize,
    mismatches: Vec<String>,
}

impl Tally {
    fn merge(mut self, o: Tally) -> Tally {
        self.compared += o.compared;
        self.rejected += o.rejected;
        self.bound_only += o.bound_only;
        self.bound_gaps += o.bound_gaps;
        self.mismatches.extend(o.mismatches);
        self
    }
}

fn disjoint(spec: &CodeSpec, p: &Pattern) -> bool {
    spec.info().iter().all(|&z| !p.contains(z))
}

fn minwt_case(spec: &CodeSpec, kind: PatternKind, i: usize) -> Tally {
    let caps = OracleCaps::default();
    let m = spec.m();
    let mut t = Tally::default();
    let label = format!("{kind:?} m={m} info={:?} i={i}", spec.info());
    if kind == PatternKind::Qup {
        let x = match make_pattern(kind, m, i, Mode::Puncture) {
            Ok(x) => x,
            Err(_) => return t,
        };
        let Ok(q) = qup_min_weight(spec, i) else {
            t.rejected += 1;
            return t;
        };
        if !disjoint(spec, &x) {
            t.mismatches
                .push(format!("{label}: accepted a punctured information bit"));
            return t;
        }
        t.compared += 1;
        let oracle = brute_code_spectrum(spec, Some(&x), &caps).expect("within caps");
        let (d, c) = match oracle.min_positive_weight() {
            Some(d) => (d, oracle.get(d)),
            None => (0, Default::default()),
        };
        if !q.exact {
            t.bound_only += 1;
            if q.count < c {
                t.bound_gaps += 1;
            }
        }
        if q.d != d || q.count > c || (q.exact && q.count != c) {
            t.mismatches.push(format!(
                "{label}: ({}, {}) vs enumeration ({d}, {c})",
                q.d, q.count
            ));
        }
        return t;
    }
    let y = match make_pattern(kind, m, i, Mode::Shorten) {
        Ok(y) => y,
        Err(_) => return t,
    };
    let report = match kind {
        PatternKind::Wl => wl_min_weight(spec, i),
        _ => br_min_weight_count(spec, i),
    };
    let union: BTreeSet<Monomial> = spec.monomials().chain(y.monomials()).collect();
    let admissible = disjoint(spec, &y) && is_decreasing(&union);
    match (admissible, report) {
        (true, Ok(r)) => {
            t.compared += 1;
            let oracle = brute_code_spectrum(spec, Some(&y), &caps).expect("within caps");
            let expect = if spec.k() == 0 {
                Default::default()
            } else {
                oracle.get(r.d_min)
            };
            if r.total != expect {
                t.mismatches
                    .push(format!("{label}: {} vs enumeration {expect}", r.total));
            }
        }
        (false, Err(_)) => t.rejected += 1,
        (ok, r) => t.mismatches.push(format!(
            "{label}: admissible={ok} but accepted={}",
            r.is_ok()
        )),
    }
    t
}

fn coset_case(m: u32, pattern: &Pattern) -> Tally {
    let caps = OracleCaps::default();
    let n = 1usize << m;
    let mut t = Tally::default();
    let tree = match all_prefix_spectra(m, pattern) {
        Ok(tree) => tree,
        Err(_) => {
            t.rejected += 1;
            return t;
        }
    };
    for i in 0..=n {
        let mut prefixes = vec![(vec![false; i], &tree.zeros[i])];
        if i > 0 {
            let mut bits = vec![false; i];
            bits[i - 1] = true;
            prefixes.push((bits, &tree.unit_last[i]));
        }
        for (prefix, got) in prefixes {
            t.compared += 1;
            let oracle =
                brute_coset_spectrum(m, &prefix, Some(pattern), &caps).expect("within caps");
            if *got != oracle {
                t.mismatches.push(format!(
                    "coset m={m} {:?} {:?} prefix={prefix:?}: {got} vs {oracle}",
                    pattern.mode(),
                    pattern.indices()
                ));
            }
        }
    }
    t
}

/// Largest per-weight deviation of the sampled average from the exact one,
/// in standard errors.
fn mc_case(spec: &CodeSpec, pattern: &Pattern, cfg: &McConfig) -> Option<f64> {
    let exact = avg_spectrum(spec, pattern).ok()?;
    let est = mc_pretransform_avg(spec, Some(pattern), cfg, &OracleCaps::default()).ok()?;
    let weights: BTreeSet<usize> = exact
        .iter()
        .map(|(w, _)| w)
        .chain(est.mean.keys().copied())
        .collect();
    Some(weights.into_iter().fold(0.0, |worst: f64, w| {
        let mean = est.mean.get(&w).copied().unwrap_or(0.0);
        let se = est.std_err.get(&w).copied().unwrap_or(0.0).max(1e-12);
        worst.max((mean - exact.get(w).to_f64()).abs() / se)
    }))
}

pub fn run(a: &CheckArgs, config: Value) -> CmdResult {
    let mut minwt = Tally::default();
    let mut coset = Tally::default();
    let mut mc_worst: Option<f64> = None;
    let mut mc_cases = 0;
    for m in 2..=a.max_m {
        let specs = decreasing_specs(m)?;
        let n = 1usize << m;
        let cases: Vec<(&CodeSpec, PatternKind, usize)> = specs
            .iter()
            .flat_map(|s| {
                a.patterns
                    .iter()
                    .flat_map(move |&k| (0..=n).map(move |i| (s, k, i)))
            })
            .filter(|(_, k, _)| *k != PatternKind::Custom)
            .collect();
        minwt = minwt.merge(
            cases
                .par_iter()
                .map(|&(s, k, i)| minwt_case(s, k, i))
                .reduce(Tally::default, Tally::merge),
        );

        let patterns: Vec<Pattern> = a
            .patterns
            .iter()
            .filter(|&&k| k != PatternKind::Custom)
            .flat_map(|&k| {
                (0..=n).flat_map(move |i| {
                    [Mode::Puncture, Mode::Shorten]
                        .into_iter()
                        .filter_map(move |mode| make_pattern(k, m, i, mode).ok())
                })
            })
            .collect();
        coset = coset.merge(
            patterns
                .par_iter()
                .map(|p| coset_case(m, p))
                .reduce(Tally::default, Tally::merge),
        );

        if a.samples > 0 && m <= 3 {
            let cfg = McConfig {
                samples: a.samples,
                seed: a.seed,
                identity_only: false,
            };
            for spec in specs.iter().filter(|s| s.k() > 0) {
                for p in &patterns {
                    if let Some(dev) = mc_case(spec, p, &cfg) {
                        mc_cases += 1;
                        mc_worst = Some(mc_worst.map_or(dev, |w| w.max(dev)));
                    }
                }
            }
        }
    }

    let failed = !minwt.mismatches.is_empty() || !coset.mismatches.is_empty();
    let report = json!({
        "config": config,
        "passed": !failed,
        "min_weight": minwt,
        "coset": coset,
        "monte_carlo": { "cases": mc_cases, "worst_std_errors": mc_worst },
    });
    if failed {
        let text = serde_json::to_string_pretty(&report).expect("report serializes");
        return Err(Failure::invalid(format!(
            "enumeration mismatches found\n{text}"
        )));
    }
    Ok(Emit::json(report))
}
