//! Union bound on the ML block error probability over BPSK/AWGN.

use serde::Serialize;

use crate::error::{Error, Result};

/// Tail probability of the standard normal distribution.
pub fn q_function(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Noise standard deviation for a given `Eb/N0` in dB and code rate.
pub fn sigma_from_ebn0_db(ebn0_db: f64, rate: f64) -> Result<f64> {
    if !(rate > 0.0 && rate <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "rate {rate} outside (0, 1]"
        )));
    }
    Ok((1.0 / (2.0 * rate * 10f64.powf(ebn0_db / 10.0))).sqrt())
}

#[derive(Clone, Copy, Debug, Default)]
pub struct BoundOptions {
    /// Ignore weights above this value.
    pub max_weight: Option<usize>,
    /// Evaluate `Q(-√d/σ)` instead of `Q(√d/σ)`, for comparison only.
    pub literal_sign: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BoundPoint {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ebn0_db: Option<f64>,
    pub sigma: f64,
    pub bound: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct UnionBoundCurve {
    pub points: Vec<BoundPoint>,
}

impl UnionBoundCurve {
    /// True when the bound never increases as `σ` decreases.
    pub fn is_monotone(&self) -> bool {
        let mut pts: Vec<&BoundPoint> = self.points.iter().collect();
        pts.sort_by(|a, b| b.sigma.total_cmp(&a.sigma));
        pts.windows(2).all(|w| w[1].bound <= w[0].bound)
    }
}

/// `Σ_d A_d Q(√d / σ)` at a single `σ`; weight zero is skipped.
pub fn union_bound_at(terms: &[(usize, f64)], sigma: f64, opts: &BoundOptions) -> Result<f64> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidSigma(sigma));
    }
    let sign = if opts.literal_sign { -1.0 } else { 1.0 };
    Ok(terms
        .iter()
        .filter(|(d, _)| *d > 0 && opts.max_weight.is_none_or(|cap| *d <= cap))
        .map(|&(d, a)| a * q_function(sign * (d as f64).sqrt() / sigma))
        .sum())
}

fn require_terms(terms: &[(usize, f64)]) -> Result<()> {
    if terms.iter().all(|&(d, a)| d == 0 || a == 0.0) {
        return Err(Error::InvalidArgument(
            "the spectrum has no nonzero weights".into(),
        ));
    }
    Ok(())
}

/// Union bound over a list of noise levels.
pub fn union_bound(
    terms: &[(usize, f64)],
    sigmas: &[f64],
    opts: &BoundOptions,
) -> Result<UnionBoundCurve> {
    require_terms(terms)?;
    let points = sigmas
        .iter()
        .map(|&sigma| {
            Ok(BoundPoint {
                ebn0_db: None,
                sigma,
                bound: union_bound_at(terms, sigma, opts)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(UnionBoundCurve { points })
}

/// Union bound over a list of `Eb/N0` values (dB) at the given code rate.
pub fn union_bound_ebn0(
    terms: &[(usize, f64)],
    ebn0_db: &[f64],
    rate: f64,
    opts: &BoundOptions,
) -> Result<UnionBoundCurve> {
    require_terms(terms)?;
    let points = ebn0_db
        .iter()
        .map(|&snr| {
            let sigma = sigma_from_ebn0_db(snr, rate)?;
            Ok(BoundPoint {
                ebn0_db: Some(snr),
                sigma,
                bound: union_bound_at(terms, sigma, opts)?,
            })
        })
        .collect::<Result<_>>()?;
    Ok(UnionBoundCurve { points })
}
