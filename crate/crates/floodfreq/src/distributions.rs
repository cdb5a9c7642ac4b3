//! Generalized Pareto and generalized extreme value distributions.
//!
//! Closed-form CDFs, quantile functions and inverse-transform samplers, plus
//! the Poisson-Pareto parameter mapping and population L-moments. CDFs are
//! total functions on the reals: values below the support evaluate to 0 and
//! values above a bounded upper tail evaluate to 1, which keeps the mixture
//! root-finding in `models` free of domain checks.

use crate::{Error, Result};
use rand::Rng;
use statrs::function::gamma::gamma;

/// Shape magnitudes below this use the exponential/Gumbel limit formulas.
///
/// `(1 + k*z)^(-1/k)` loses all precision as `k -> 0`; the limit branch has
/// relative error below 1e-7 inside this band.
pub const SHAPE_EPS: f64 = 1e-8;

const EULER_MASCHERONI: f64 = 0.577_215_664_901_532_9;

/// Generalized Pareto distribution of exceedances over a threshold.
///
/// Shape follows the heavy-tail-positive convention: support is
/// `[threshold, inf)` for `shape >= 0` and
/// `[threshold, threshold - scale/shape]` for `shape < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GpdParams {
    pub shape: f64,
    pub scale: f64,
    pub threshold: f64,
}

impl GpdParams {
    pub fn new(shape: f64, scale: f64, threshold: f64) -> Result<Self> {
        if scale <= 0.0 || !scale.is_finite() {
            return Err(Error::NonPositiveScale { scale });
        }
        Ok(GpdParams {
            shape,
            scale,
            threshold,
        })
    }

    /// Upper end of the support; `None` when the tail is unbounded.
    pub fn upper_bound(&self) -> Option<f64> {
        if self.shape < 0.0 {
            Some(self.threshold - self.scale / self.shape)
        } else {
            None
        }
    }

    /// Distribution function, defined on all of `f64`.
    pub fn cdf(&self, x: f64) -> f64 {
        let z = (x - self.threshold) / self.scale;
        if z <= 0.0 {
            return 0.0;
        }
        if self.shape.abs() < SHAPE_EPS {
            return 1.0 - (-z).exp();
        }
        let t = 1.0 + self.shape * z;
        if t <= 0.0 {
            // beyond the bounded upper tail (shape < 0)
            return 1.0;
        }
        1.0 - t.powf(-1.0 / self.shape)
    }

    /// Inverse distribution function for non-exceedance probability
    /// `prob` in `[0, 1)`.
    pub fn quantile(&self, prob: f64) -> Result<f64> {
        if !(0.0..1.0).contains(&prob) {
            return Err(Error::InvalidProbability {
                prob,
                range: "[0, 1)",
            });
        }
        if self.shape.abs() < SHAPE_EPS {
            return Ok(self.threshold - self.scale * (-prob).ln_1p());
        }
        Ok(self.threshold + self.scale / self.shape * ((1.0 - prob).powf(-self.shape) - 1.0))
    }

    /// `count` independent inverse-transform draws.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<f64> {
        (0..count)
            .map(|_| {
                let u: f64 = rng.gen();
                self.quantile(u).expect("uniform draw is in [0, 1)")
            })
            .collect()
    }

    /// Population L-moments `(lambda1, lambda2)`; both exist only for
    /// `shape < 1`.
    pub fn population_lmoments(&self) -> Result<(f64, f64)> {
        if self.shape >= 1.0 {
            return Err(Error::ShapeOutOfRange {
                shape: self.shape,
                why: "mean exists only for shape < 1",
            });
        }
        let k = self.shape;
        let l1 = self.threshold + self.scale / (1.0 - k);
        let l2 = self.scale / ((1.0 - k) * (2.0 - k));
        Ok((l1, l2))
    }
}

/// Generalized extreme value distribution of block maxima.
///
/// `shape > 0` is the heavy-tailed Fréchet branch, `shape == 0` Gumbel,
/// `shape < 0` the bounded Weibull branch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GevParams {
    pub shape: f64,
    pub scale: f64,
    pub location: f64,
}

impl GevParams {
    pub fn new(shape: f64, scale: f64, location: f64) -> Result<Self> {
        if scale <= 0.0 || !scale.is_finite() {
            return Err(Error::NonPositiveScale { scale });
        }
        Ok(GevParams {
            shape,
            scale,
            location,
        })
    }

    /// Distribution function, defined on all of `f64`.
    pub fn cdf(&self, x: f64) -> f64 {
        let z = (x - self.location) / self.scale;
        if self.shape.abs() < SHAPE_EPS {
            return (-(-z).exp()).exp();
        }
        let t = 1.0 + self.shape * z;
        if t <= 0.0 {
            // below the lower bound (shape > 0) or above the upper (shape < 0)
            return if self.shape > 0.0 { 0.0 } else { 1.0 };
        }
        (-t.powf(-1.0 / self.shape)).exp()
    }

    /// Inverse distribution function for `prob` in `(0, 1)`.
    pub fn quantile(&self, prob: f64) -> Result<f64> {
        if !(prob > 0.0 && prob < 1.0) {
            return Err(Error::InvalidProbability {
                prob,
                range: "(0, 1)",
            });
        }
        let y = -prob.ln(); // > 0
        if self.shape.abs() < SHAPE_EPS {
            return Ok(self.location - self.scale * y.ln());
        }
        Ok(self.location + self.scale / self.shape * (y.powf(-self.shape) - 1.0))
    }

    /// `count` independent inverse-transform draws.
    pub fn sample<R: Rng + ?Sized>(&self, count: usize, rng: &mut R) -> Vec<f64> {
        (0..count)
            .map(|_| {
                // reject u == 0, where the quantile is undefined
                let u: f64 = loop {
                    let u: f64 = rng.gen();
                    if u > 0.0 {
                        break u;
                    }
                };
                self.quantile(u).expect("draw is in (0, 1)")
            })
            .collect()
    }

    /// Population L-moments `(lambda1, lambda2, tau3)` for `shape < 1`.
    pub fn population_lmoments(&self) -> Result<(f64, f64, f64)> {
        if self.shape >= 1.0 {
            return Err(Error::ShapeOutOfRange {
                shape: self.shape,
                why: "mean exists only for shape < 1",
            });
        }
        if self.shape.abs() < SHAPE_EPS {
            let l1 = self.location + self.scale * EULER_MASCHERONI;
            let l2 = self.scale * std::f64::consts::LN_2;
            let t3 = (9.0f64 / 8.0).ln() / std::f64::consts::LN_2;
            return Ok((l1, l2, t3));
        }
        let k = -self.shape;
        let g1 = gamma(1.0 + k);
        let l1 = self.location + self.scale * (1.0 - g1) / k;
        let l2 = self.scale * (1.0 - 2.0f64.powf(-k)) * g1 / k;
        let t3 = 2.0 * (1.0 - 3.0f64.powf(-k)) / (1.0 - 2.0f64.powf(-k)) - 3.0;
        Ok((l1, l2, t3))
    }
}

/// Annual-maximum distribution of a Poisson-Pareto process as a GEV.
///
/// With `rate` exceedances per year following a GPD, the annual maximum has
/// CDF `exp(-rate * (1 - gpd_cdf(x)))`, which is exactly the GEV returned
/// here: shape is preserved, `scale = beta * rate^kappa` and the location
/// shifts by `beta * (rate^kappa - 1) / kappa`.
pub fn poisson_pareto_to_gev(rate: f64, gpd: &GpdParams) -> Result<GevParams> {
    if rate <= 0.0 || !rate.is_finite() {
        return Err(Error::NonPositiveRate { rate });
    }
    let (k, b, u) = (gpd.shape, gpd.scale, gpd.threshold);
    if k.abs() < SHAPE_EPS {
        return GevParams::new(k, b, u + b * rate.ln());
    }
    let lk = rate.powf(k);
    GevParams::new(k, b * lk, u - b * (1.0 - lk) / k)
}
