//! Annual-distribution models: flood-type mixture (TMPS), AMS/GEV and
//! POT/Poisson-Pareto, with L-moment fitting and return-level evaluation.

use crate::distributions::{GevParams, GpdParams, SHAPE_EPS};
use crate::lmoments::{fit_gev_lmom, fit_gpd_known_threshold, sample_lmoments};
use crate::{Error, Result};

/// One flood type inside a [`TmpsModel`]: its exceedance distribution and
/// the fixed probability `p0` that a peak of this type stays below the
/// threshold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TmpsComponent {
    pub gpd: GpdParams,
    pub p0: f64,
}

/// Flood-type mixture model of the annual maximum.
///
/// The annual CDF is the product over types of
/// `p0_j + (1 - p0_j) G_j(x)`, so below every threshold it flattens at
/// `prod_j p0_j` (the mixture floor) and quantiles are only defined above it.
#[derive(Debug, Clone, PartialEq)]
pub struct TmpsModel {
    components: Vec<TmpsComponent>,
}

impl TmpsModel {
    pub fn new(components: Vec<TmpsComponent>) -> Result<Self> {
        if components.is_empty() {
            return Err(Error::InvalidConfig {
                what: "mixture needs at least one flood type".into(),
            });
        }
        for c in &components {
            if !(0.0..1.0).contains(&c.p0) {
                return Err(Error::InvalidProbability {
                    prob: c.p0,
                    range: "[0, 1)",
                });
            }
        }
        Ok(TmpsModel { components })
    }

    pub fn components(&self) -> &[TmpsComponent] {
        &self.components
    }

    /// Value of the CDF on the flat region below all thresholds.
    pub fn floor_probability(&self) -> f64 {
        self.components.iter().map(|c| c.p0).product()
    }

    /// Annual non-exceedance probability.
    pub fn cdf(&self, x: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.p0 + (1.0 - c.p0) * c.gpd.cdf(x))
            .product()
    }

    /// Inverse of [`TmpsModel::cdf`] by bracketed root-finding.
    ///
    /// Starts at the largest threshold and doubles the upper end until the
    /// CDF exceeds `prob`; the bracket is then narrowed with safeguarded
    /// false-position steps until its width is at most `1e-9 * max(1, |x|)`.
    pub fn quantile(&self, prob: f64) -> Result<f64> {
        let floor = self.floor_probability();
        if prob >= 1.0 {
            return Err(Error::InvalidProbability {
                prob,
                range: "(floor, 1)",
            });
        }
        if prob <= floor {
            return Err(Error::BelowMixtureFloor { prob, floor });
        }
        let max_u = self
            .components
            .iter()
            .map(|c| c.gpd.threshold)
            .fold(f64::NEG_INFINITY, f64::max);
        let min_u = self
            .components
            .iter()
            .map(|c| c.gpd.threshold)
            .fold(f64::INFINITY, f64::min);

        // With distinct thresholds the root can sit below max_u; the CDF at
        // min_u is exactly the floor, so [min_u, max_u] brackets it then.
        let (mut lo, mut hi);
        if self.cdf(max_u) >= prob {
            lo = min_u;
            hi = max_u;
        } else {
            lo = max_u;
            let mut width = 1.0;
            hi = max_u + width;
            let mut doublings = 0;
            while self.cdf(hi) < prob {
                width *= 2.0;
                hi = max_u + width;
                doublings += 1;
                if doublings > 1000 {
                    return Err(Error::BracketingFailed {
                        what: "mixture quantile upper bound",
                    });
                }
            }
        }

        let mut flo = self.cdf(lo) - prob;
        let mut fhi = self.cdf(hi) - prob;
        let mut best = 0.5 * (lo + hi);
        for _ in 0..300 {
            // false-position candidate, midpoint when it stalls
            let mut x = if fhi > flo {
                hi - fhi * (hi - lo) / (fhi - flo)
            } else {
                0.5 * (lo + hi)
            };
            let margin = 0.01 * (hi - lo);
            if !(x > lo + margin && x < hi - margin) {
                x = 0.5 * (lo + hi);
            }
            let fx = self.cdf(x) - prob;
            if fx < 0.0 {
                lo = x;
                flo = fx;
            } else {
                hi = x;
                fhi = fx;
            }
            best = x;
            let width = hi - lo;
            if width <= 1e-9 * hi.abs().max(1.0) && fx.abs() <= 1e-9 {
                break;
            }
            if width <= 4.0 * f64::EPSILON * hi.abs().max(1.0) {
                break;
            }
        }
        Ok(best)
    }

    /// Quantile at annual non-exceedance probability `1 - 1/T`.
    pub fn return_level(&self, return_period: f64) -> Result<f64> {
        self.quantile(annual_probability(return_period)?)
    }
}

/// Annual maximum series model: a GEV for the yearly maxima.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AmsModel {
    pub gev: GevParams,
}

impl AmsModel {
    pub fn return_level(&self, return_period: f64) -> Result<f64> {
        self.gev.quantile(annual_probability(return_period)?)
    }
}

/// Peaks-over-threshold model: a GPD for the pooled peaks plus the mean
/// annual number of exceedances.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PotModel {
    pub gpd: GpdParams,
    pub rate: f64,
}

impl PotModel {
    /// Annual quantile of the Poisson-Pareto model,
    /// `u + (beta/kappa) ((-ln p / rate)^(-kappa) - 1)`.
    ///
    /// Agrees with evaluating the mapped GEV of
    /// [`crate::poisson_pareto_to_gev`]; both routes are kept and
    /// cross-checked in tests.
    pub fn return_level(&self, return_period: f64) -> Result<f64> {
        let p = annual_probability(return_period)?;
        let y = -p.ln() / self.rate;
        let (k, b, u) = (self.gpd.shape, self.gpd.scale, self.gpd.threshold);
        if k.abs() < SHAPE_EPS {
            return Ok(u - b * y.ln());
        }
        Ok(u + b / k * (y.powf(-k) - 1.0))
    }
}

fn annual_probability(return_period: f64) -> Result<f64> {
    if return_period <= 1.0 || return_period.is_nan() {
        return Err(Error::InvalidReturnPeriod { t: return_period });
    }
    Ok(1.0 - 1.0 / return_period)
}

/// Fits one GPD per flood type at its known threshold; `p0`s pass through
/// unchanged. Per-type failures carry the type index.
pub fn fit_tmps(samples: &[Vec<f64>], thresholds: &[f64], p0s: &[f64]) -> Result<TmpsModel> {
    if samples.len() != thresholds.len() || samples.len() != p0s.len() {
        return Err(Error::LengthMismatch {
            expected: samples.len(),
            got: thresholds.len().min(p0s.len()),
        });
    }
    let mut components = Vec::with_capacity(samples.len());
    for (index, ((peaks, &u), &p0)) in samples.iter().zip(thresholds).zip(p0s).enumerate() {
        let fit = sample_lmoments(peaks, 2)
            .and_then(|lm| fit_gpd_known_threshold(&lm, u))
            .map_err(|source| Error::TypeFitFailed {
                index,
                source: Box::new(source),
            })?;
        components.push(TmpsComponent { gpd: fit, p0 });
    }
    TmpsModel::new(components)
}

/// GEV fitted to an annual maximum series via sample L-moments.
pub fn fit_ams(annual_maxima: &[f64]) -> Result<AmsModel> {
    if annual_maxima.len() < 3 {
        return Err(Error::SampleTooSmall {
            len: annual_maxima.len(),
            needed: 3,
        });
    }
    let lm = sample_lmoments(annual_maxima, 3)?;
    Ok(AmsModel {
        gev: fit_gev_lmom(&lm)?,
    })
}

/// GPD fitted to the pooled peaks at a known common threshold; the rate is
/// the pool size per year.
pub fn fit_pot(pooled_peaks: &[f64], threshold: f64, years: u32) -> Result<PotModel> {
    if pooled_peaks.is_empty() {
        return Err(Error::EmptySample);
    }
    if years == 0 {
        return Err(Error::InvalidConfig {
            what: "years must be at least 1".into(),
        });
    }
    if let Some(&bad) = pooled_peaks.iter().find(|&&x| x < threshold) {
        return Err(Error::InvalidConfig {
            what: format!("pooled peak {bad} below threshold {threshold}"),
        });
    }
    let lm = sample_lmoments(pooled_peaks, 2)?;
    Ok(PotModel {
        gpd: fit_gpd_known_threshold(&lm, threshold)?,
        rate: pooled_peaks.len() as f64 / years as f64,
    })
}
