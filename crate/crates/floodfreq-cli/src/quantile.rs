//! Direct model-quantile evaluation, for spot checks against the benchmark's
//! true quantiles.

use anyhow::{Context, Result};
use floodfreq::models::{AmsModel, PotModel, TmpsComponent, TmpsModel};
use floodfreq::{GevParams, GpdParams};
use serde::Deserialize;

/// A model parameterization, as read from `--params-file` JSON. The flag
/// form of each variant is assembled by the binary.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "model")]
pub enum ModelParams {
    #[serde(rename = "TMPS", alias = "tmps")]
    Tmps { components: Vec<ComponentParams> },
    #[serde(rename = "AMS", alias = "ams")]
    Ams { shape: f64, scale: f64, location: f64 },
    #[serde(rename = "POT", alias = "pot")]
    Pot {
        shape: f64,
        scale: f64,
        threshold: f64,
        rate: f64,
    },
}

#[derive(Debug, Clone, Copy, Deserialize)]
pub struct ComponentParams {
    pub shape: f64,
    pub scale: f64,
    pub threshold: f64,
    pub p0: f64,
}

/// Evaluates the model's return levels on the grid.
pub fn evaluate(params: &ModelParams, return_periods: &[f64]) -> Result<Vec<(f64, f64)>> {
    let level = |t: f64| -> Result<f64> {
        let q = match params {
            ModelParams::Tmps { components } => {
                let comps = components
                    .iter()
                    .map(|c| {
                        Ok(TmpsComponent {
                            gpd: GpdParams::new(c.shape, c.scale, c.threshold)?,
                            p0: c.p0,
                        })
                    })
                    .collect::<floodfreq::Result<Vec<_>>>()?;
                TmpsModel::new(comps)?.return_level(t)?
            }
            ModelParams::Ams {
                shape,
                scale,
                location,
            } => AmsModel {
                gev: GevParams::new(*shape, *scale, *location)?,
            }
            .return_level(t)?,
            ModelParams::Pot {
                shape,
                scale,
                threshold,
                rate,
            } => {
                anyhow::ensure!(*rate > 0.0, "rate must be positive, got {rate}");
                PotModel {
                    gpd: GpdParams::new(*shape, *scale, *threshold)?,
                    rate: *rate,
                }
                .return_level(t)?
            }
        };
        Ok(q)
    };
    return_periods
        .iter()
        .map(|&t| {
            level(t)
                .map(|q| (t, q))
                .with_context(|| format!("return period {t}"))
        })
        .collect()
}

/// One "T=<..> q=<..>" line per return period.
pub fn render(levels: &[(f64, f64)]) -> String {
    levels
        .iter()
        .map(|(t, q)| format!("T={t} q={q:.10}\n"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn tmps_single_type_collapse() {
        let params = ModelParams::Tmps {
            components: vec![ComponentParams {
                shape: 0.2,
                scale: 5.0,
                threshold: 10.0,
                p0: 0.0,
            }],
        };
        let out = evaluate(&params, &[100.0]).unwrap();
        assert_relative_eq!(out[0].1, 47.797_160_787_739_49, max_relative = 1e-9);
    }

    #[test]
    fn ams_gumbel_reference_value() {
        let params = ModelParams::Ams {
            shape: 0.0,
            scale: 1.0,
            location: 0.0,
        };
        let out = evaluate(&params, &[100.0]).unwrap();
        assert_relative_eq!(out[0].1, 4.600_149_226_776_579, max_relative = 1e-10);
    }

    #[test]
    fn rejects_return_period_of_one() {
        let params = ModelParams::Pot {
            shape: 0.2,
            scale: 5.0,
            threshold: 10.0,
            rate: 1.0,
        };
        assert!(evaluate(&params, &[1.0]).is_err());
    }

    #[test]
    fn params_file_json_shapes() {
        let tmps: ModelParams = serde_json::from_str(
            r#"{"model":"TMPS","components":[{"shape":0.2,"scale":5.0,"threshold":10.0,"p0":0.2}]}"#,
        )
        .unwrap();
        assert!(matches!(tmps, ModelParams::Tmps { .. }));
        let pot: ModelParams = serde_json::from_str(
            r#"{"model":"POT","shape":0.0,"scale":5.0,"threshold":10.0,"rate":2.0}"#,
        )
        .unwrap();
        assert!(matches!(pot, ModelParams::Pot { .. }));
    }
}
