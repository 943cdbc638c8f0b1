//! `polar-spectrum`: weight spectra, minimum-weight counts and union bounds
//! for punctured and shortened polar codes.

mod check;
mod input;
mod output;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use polar_spectrum::bound::{union_bound, union_bound_ebn0, BoundOptions};
use polar_spectrum::construct::{from_reliability_sequence, parse_sequence, pw_construct};
use polar_spectrum::coset::{avg_spectrum, coset_spectrum};
use polar_spectrum::minwt_punct::{build_prefix_table, qup_min_weight, wl_min_weight};
use polar_spectrum::minwt_short::br_min_weight_count;
use polar_spectrum::monomial::{mother_min_weight, Monomial};
use polar_spectrum::{Error, PatternKind};

use input::{read_terms, PatternArgs, PrefixArgs, SpecArgs};
use output::{emit, Emit};

#[derive(Parser, Debug)]
#[command(name = "polar-spectrum", version, about)]
struct Cli {
    /// Worker threads (defaults to all cores).
    #[arg(long, global = true, env = "POLAR_SPECTRUM_THREADS")]
    threads: Option<usize>,

    /// Write CSV instead of JSON where a table makes sense.
    #[arg(long, global = true)]
    csv: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug, Serialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
enum Command {
    /// Build an information set by polarization weight or from a reliability
    /// sequence file.
    Construct(ConstructArgs),
    /// Minimum weight and its multiplicity under QUP, Wang-Liu or
    /// bit-reversal rate matching.
    Minwt(MinwtArgs),
    /// Weight spectrum of a punctured or shortened polar coset.
    CosetSpectrum(CosetArgs),
    /// Exact average spectrum over random upper-triangular pre-transforms.
    AvgSpectrum(AvgArgs),
    /// Union bound on the ML block error rate from a spectrum file.
    UnionBound(BoundArgs),
    /// Compare closed forms and recursions with brute-force enumeration.
    Check(check::CheckArgs),
    /// Prefix-weight table of one monomial as CSV.
    DumpTable(TableArgs),
}

#[derive(Args, Debug, Serialize)]
struct ConstructArgs {
    #[arg(long)]
    m: u32,
    /// Code dimension.
    #[arg(long)]
    k: usize,
    /// Reliability sequence (least reliable first) instead of polarization weight.
    #[arg(long)]
    sequence: Option<std::path::PathBuf>,
    /// The sequence file uses 0-based indices.
    #[arg(long, requires = "sequence")]
    zero_based: bool,
    /// Keep the information set clear of this rate-matching pattern.
    #[command(flatten)]
    pattern: PatternArgs,
}

#[derive(Args, Debug, Serialize)]
struct MinwtArgs {
    #[command(flatten)]
    spec: SpecArgs,
    /// Rate-matching family.
    #[arg(long, value_parser = input::parse_family)]
    pattern: PatternKind,
    /// Number of punctured or shortened bits.
    #[arg(long)]
    i: usize,
}

#[derive(Args, Debug, Serialize)]
struct CosetArgs {
    #[arg(long)]
    m: u32,
    #[command(flatten)]
    prefix: PrefixArgs,
    #[command(flatten)]
    pattern: PatternArgs,
}

#[derive(Args, Debug, Serialize)]
struct AvgArgs {
    #[command(flatten)]
    spec: SpecArgs,
    #[command(flatten)]
    pattern: PatternArgs,
}

#[derive(Args, Debug, Serialize)]
struct BoundArgs {
    /// JSON spectrum: the output of another command or a bare weight map.
    #[arg(long)]
    spectrum: std::path::PathBuf,
    /// Eb/N0 values in dB.
    #[arg(long, value_delimiter = ',', conflicts_with = "sigma")]
    snr: Vec<f64>,
    /// Code rate used to turn Eb/N0 into a noise level.
    #[arg(long, required_unless_present = "sigma")]
    rate: Option<f64>,
    /// Noise standard deviations, instead of --snr.
    #[arg(long, value_delimiter = ',')]
    sigma: Vec<f64>,
    /// Drop weights above this value.
    #[arg(long)]
    max_weight: Option<usize>,
    /// Evaluate the sign-flipped variant Q(-sqrt(d)/sigma) for comparison.
    #[arg(long)]
    paper_literal_sign: bool,
}

#[derive(Args, Debug, Serialize)]
struct TableArgs {
    #[arg(long)]
    m: u32,
    /// Monomial such as x2*x3.
    #[arg(long)]
    monomial: String,
    /// Largest prefix length (column).
    #[arg(long)]
    a_max: usize,
    /// Print N_f(w, a) (prefix weights) instead of punctured weights.
    #[arg(long)]
    prefix_view: bool,
}

/// Failure with the process exit code it maps to.
pub(crate) struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if matches!(e, Error::CapExceeded { .. }) {
            2
        } else {
            1
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl Failure {
    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Failure {
            code: 1,
            message: message.into(),
        }
    }
}

type CmdResult = Result<Emit, Failure>;

fn run(cli: &Cli) -> CmdResult {
    let config = serde_json::to_value(&cli.command).expect("arguments serialize");
    match &cli.command {
        Command::Construct(a) => {
            let exclude = a.pattern.resolve_optional(a.m)?;
            let spec = match &a.sequence {
                Some(path) => {
                    let text = input::read_file(path)?;
                    let seq = parse_sequence(&text, a.zero_based)?;
                    from_reliability_sequence(a.m, a.k, &seq, exclude.as_ref())?
                }
                None => pw_construct(a.m, a.k, exclude.as_ref())?,
            };
            let monomials: Vec<String> = spec.monomials().map(|f| f.to_string()).collect();
            Ok(Emit::json(json!({
                "config": config,
                "m": spec.m(),
                "info": spec.info(),
                "monomials": monomials,
                "decreasing": spec.is_decreasing(),
            })))
        }
        Command::Minwt(a) => {
            let spec = a.spec.resolve()?;
            let result = match a.pattern {
                PatternKind::Qup => serde_json::to_value(qup_min_weight(&spec, a.i)?),
                PatternKind::Wl => serde_json::to_value(wl_min_weight(&spec, a.i)?),
                PatternKind::Br => serde_json::to_value(br_min_weight_count(&spec, a.i)?),
                PatternKind::Custom => {
                    return Err(Failure::invalid(
                        "closed forms exist only for the qup, wl and br families",
                    ))
                }
            }
            .expect("report serializes");
            // Shortened codes may be decreasing only together with the pattern.
            let mother = if spec.is_decreasing() {
                let mw = mother_min_weight(&spec)?;
                json!({ "weight": mw.weight, "count": mw.count.to_string() })
            } else {
                serde_json::Value::Null
            };
            Ok(Emit::json(json!({
                "config": config,
                "mother": mother,
                "result": result,
            })))
        }
        Command::CosetSpectrum(a) => {
            let pattern = a.pattern.resolve_or_empty(a.m)?;
            let prefix = a.prefix.resolve()?;
            let spectrum = coset_spectrum(a.m, &prefix, &pattern)?;
            let rows = spectrum
                .iter()
                .map(|(w, c)| vec![w.to_string(), c.to_string()])
                .collect();
            Ok(Emit::table(
                json!({ "config": config, "spectrum": spectrum }),
                &["weight", "count"],
                rows,
            ))
        }
        Command::AvgSpectrum(a) => {
            let spec = a.spec.resolve()?;
            let pattern = a.pattern.resolve_or_empty(spec.m())?;
            let avg = avg_spectrum(&spec, &pattern)?;
            let rows = avg
                .iter()
                .map(|(w, v)| {
                    vec![
                        w.to_string(),
                        v.numerator().to_string(),
                        v.exp2().to_string(),
                        format!("{:e}", v.to_f64()),
                    ]
                })
                .collect();
            Ok(Emit::table(
                json!({ "config": config, "spectrum": avg }),
                &["weight", "num", "exp2", "approx"],
                rows,
            ))
        }
        Command::UnionBound(a) => {
            let terms = read_terms(&a.spectrum)?;
            let opts = BoundOptions {
                max_weight: a.max_weight,
                literal_sign: a.paper_literal_sign,
            };
            let curve = if a.sigma.is_empty() {
                let rate = a
                    .rate
                    .ok_or_else(|| Failure::invalid("--rate is required with --snr"))?;
                if a.snr.is_empty() {
                    return Err(Failure::invalid("give --snr or --sigma values"));
                }
                union_bound_ebn0(&terms, &a.snr, rate, &opts)?
            } else {
                union_bound(&terms, &a.sigma, &opts)?
            };
            let rows = curve
                .points
                .iter()
                .map(|p| {
                    vec![
                        p.ebn0_db.map(|s| s.to_string()).unwrap_or_default(),
                        p.sigma.to_string(),
                        format!("{:e}", p.bound),
                    ]
                })
                .collect();
            Ok(Emit::table(
                json!({ "config": config, "curve": curve }),
                &["ebn0_db", "sigma", "bound"],
                rows,
            ))
        }
        Command::Check(a) => check::run(a, config),
        Command::DumpTable(a) => {
            let f: Monomial = a
                .monomial
                .parse()
                .map_err(|e: Error| Failure::invalid(e.to_string()))?;
            let table = build_prefix_table(f, a.a_max, a.m)?;
            Ok(Emit::Raw(table.to_csv(!a.prefix_view)))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    }
    match run(&cli) {
        Ok(out) => match emit(out, cli.csv) {
            Ok(()) => ExitCode::SUCCESS,
            Err(e) => {
                eprintln!("error: {e}");
                ExitCode::from(1)
            }
        },
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
