use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use serde_json::Value;

use polar_spectrum::coset::CosetPrefix;
use polar_spectrum::pattern::make_pattern;
use polar_spectrum::{CodeSpec, DyadicRational, Mode, Monomial, Pattern, PatternKind};

use crate::Failure;

pub fn parse_family(s: &str) -> Result<PatternKind, String> {
    match s {
        "qup" => Ok(PatternKind::Qup),
        "wl" => Ok(PatternKind::Wl),
        "br" => Ok(PatternKind::Br),
        "custom" => Ok(PatternKind::Custom),
        _ => Err(format!(
            "unknown pattern family {s:?} (qup, wl, br, custom)"
        )),
    }
}

pub fn parse_mode(s: &str) -> Result<Mode, String> {
    match s {
        "puncture" => Ok(Mode::Puncture),
        "shorten" => Ok(Mode::Shorten),
        _ => Err(format!("unknown mode {s:?} (puncture, shorten)")),
    }
}

pub fn read_file(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))
}

/// Information set from a JSON file, an index list or a monomial list.
#[derive(Args, Debug, Serialize)]
pub struct SpecArgs {
    /// Code specification JSON ({"m": .., "info": [..]}).
    #[arg(long, conflicts_with_all = ["info", "monomials"])]
    pub spec: Option<PathBuf>,
    /// Block-length exponent (with --info or --monomials).
    #[arg(long)]
    pub m: Option<u32>,
    /// 1-based information row indices.
    #[arg(long, value_delimiter = ',', requires = "m")]
    pub info: Vec<usize>,
    /// Information monomials such as 1,x1,x1*x2.
    #[arg(long, value_delimiter = ',', requires = "m")]
    pub monomials: Vec<String>,
}

impl SpecArgs {
    pub fn resolve(&self) -> Result<CodeSpec, Failure> {
        if let Some(path) = &self.spec {
            return Ok(CodeSpec::from_json(&read_file(path)?)?);
        }
        let m = self
            .m
            .ok_or_else(|| Failure::invalid("give --spec, or --m with --info or --monomials"))?;
        if !self.monomials.is_empty() {
            let monos = self
                .monomials
                .iter()
                .map(|s| s.trim().parse::<Monomial>())
                .collect::<Result<Vec<_>, _>>()?;
            return Ok(CodeSpec::from_monomials(m, monos)?);
        }
        Ok(CodeSpec::new(m, self.info.iter().copied())?)
    }
}

/// Rate-matching pattern from a family and size, explicit indices, or a
/// JSON file.
#[derive(Args, Debug, Serialize)]
pub struct PatternArgs {
    /// Pattern family: qup, wl, br or custom.
    #[arg(long = "pattern", value_parser = parse_family)]
    pub family: Option<PatternKind>,
    /// Pattern size for the qup, wl and br families.
    #[arg(long)]
    pub i: Option<usize>,
    /// puncture or shorten (qup defaults to puncture, wl and br to shorten).
    #[arg(long, value_parser = parse_mode)]
    pub mode: Option<Mode>,
    /// 1-based positions of a custom pattern.
    #[arg(long, value_delimiter = ',')]
    pub indices: Vec<usize>,
    /// Pattern JSON file.
    #[arg(long, conflicts_with_all = ["family", "indices"])]
    pub pattern_file: Option<PathBuf>,
}

impl PatternArgs {
    pub fn resolve_optional(&self, m: u32) -> Result<Option<Pattern>, Failure> {
        if let Some(path) = &self.pattern_file {
            let p: Pattern = serde_json::from_str(&read_file(path)?)
                .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
            return Ok(Some(p));
        }
        let n = 1usize << m;
        let family = match (self.family, self.indices.is_empty()) {
            (None, true) => return Ok(None),
            (None, false) => PatternKind::Custom,
            (Some(f), _) => f,
        };
        let mode = self.mode.unwrap_or(match family {
            PatternKind::Wl | PatternKind::Br => Mode::Shorten,
            _ => Mode::Puncture,
        });
        if family == PatternKind::Custom {
            return Ok(Some(Pattern::custom(
                n,
                mode,
                self.indices.iter().copied(),
            )?));
        }
        let i = self
            .i
            .ok_or_else(|| Failure::invalid("--i is required with --pattern"))?;
        Ok(Some(make_pattern(family, m, i, mode)?))
    }

    pub fn resolve_or_empty(&self, m: u32) -> Result<Pattern, Failure> {
        match self.resolve_optional(m)? {
            Some(p) => Ok(p),
            None => Ok(Pattern::empty(1 << m, self.mode.unwrap_or(Mode::Puncture))?),
        }
    }
}

/// Fixed input prefix of a coset.
#[derive(Args, Debug, Serialize)]
pub struct PrefixArgs {
    /// Explicit prefix bits such as 0010.
    #[arg(long, conflicts_with_all = ["zeros", "unit_last"])]
    pub prefix: Option<String>,
    /// All-zero prefix of this length.
    #[arg(long, conflicts_with = "unit_last")]
    pub zeros: Option<usize>,
    /// Prefix of this length that is zero except for a final one.
    #[arg(long)]
    pub unit_last: Option<usize>,
}

impl PrefixArgs {
    pub fn resolve(&self) -> Result<CosetPrefix, Failure> {
        if let Some(bits) = &self.prefix {
            let bits = bits
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(Failure::invalid(format!("prefix bit {c:?} is not 0 or 1"))),
                })
                .collect::<Result<_, _>>()?;
            return Ok(CosetPrefix::Explicit { bits });
        }
        if let Some(len) = self.unit_last {
            return Ok(CosetPrefix::UnitLast { len });
        }
        Ok(CosetPrefix::Zeros {
            len: self.zeros.unwrap_or(0),
        })
    }
}

/// `(weight, count)` pairs from any spectrum-bearing JSON document: a bare
/// weight map, a document with a `spectrum` field, or a `minwt` result.
pub fn read_terms(path: &Path) -> Result<Vec<(usize, f64)>, Failure> {
    let doc: Value = serde_json::from_str(&read_file(path)?)
        .map_err(|e| Failure::invalid(format!("{}: {e}", path.display())))?;
    let bad = || Failure::invalid(format!("{}: no spectrum found", path.display()));
    if let Some(result) = doc.get("result") {
        return minwt_terms(result).ok_or_else(bad);
    }
    let map = doc
        .get("spectrum")
        .unwrap_or(&doc)
        .as_object()
        .ok_or_else(bad)?;
    map.iter()
        .map(|(w, v)| {
            let w: usize = w.parse().map_err(|_| bad())?;
            Ok((w, count_value(v).ok_or_else(bad)?))
        })
        .collect()
}

fn count_value(v: &Value) -> Option<f64> {
    match v {
        Value::String(s) => s.parse().ok(),
        Value::Number(n) => n.as_f64(),
        Value::Object(_) => serde_json::from_value::<DyadicRational>(v.clone())
            .ok()
            .map(|d| d.to_f64()),
        _ => None,
    }
}

fn minwt_terms(result: &Value) -> Option<Vec<(usize, f64)>> {
    let d = result.get("d").or_else(|| result.get("d_min"))?.as_u64()? as usize;
    let mut terms = vec![(d, count_value(result.get("count")?)?)];
    if let Some(bounds) = result.get("lower_bounds").and_then(Value::as_object) {
        for (w, c) in bounds {
            terms.push((w.parse().ok()?, count_value(c)?));
        }
    }
    Some(terms)
}
