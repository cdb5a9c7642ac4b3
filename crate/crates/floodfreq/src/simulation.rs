//! Monte Carlo benchmark of the three annual-distribution models.
//!
//! A scenario fixes five flood types (GPD parameters, events per year and
//! the threshold non-exceedance probability `p0`). Each run draws the
//! per-type peak samples, derives the annual maximum series and the pooled
//! peaks-over-threshold sample, fits every requested model and evaluates the
//! return levels on the configured grid. Aggregation reduces the runs to
//! normalized-error statistics against the true mixture quantiles.
//!
//! Per-run random streams are derived purely from the master seed and the
//! cell identifiers, so runs can execute in parallel and still produce
//! bit-identical output; aggregation always consumes records in run-index
//! order.

use crate::distributions::GpdParams;
use crate::models::{fit_ams, fit_pot, fit_tmps, TmpsComponent, TmpsModel};
use crate::{Error, Result};
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::fmt;
use std::str::FromStr;

/// Threshold non-exceedance probabilities of the five flood types, fixed
/// across all scenarios.
pub const P0_VECTOR: [f64; 5] = [0.24, 0.20, 0.17, 0.26, 0.14];

/// Return-period grid shared by all experiments unless overridden.
pub const DEFAULT_RETURN_PERIODS: [f64; 9] =
    [2.0, 5.0, 10.0, 20.0, 25.0, 50.0, 100.0, 200.0, 500.0];

/// Default number of Monte Carlo runs per cell.
pub const DEFAULT_RUNS: u32 = 1000;

/// One flood type: exceedance distribution, annual event count and the
/// fixed probability that a peak stays below the threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FloodTypeSpec {
    pub shape: f64,
    pub scale: f64,
    pub threshold: f64,
    /// Events per year; the block-maximum formula indexes fixed-size blocks,
    /// so fractional rates are not representable.
    pub rate: u32,
    pub p0: f64,
}

impl FloodTypeSpec {
    pub fn gpd(&self) -> Result<GpdParams> {
        GpdParams::new(self.shape, self.scale, self.threshold)
    }
}

/// A benchmark scenario: which of the five types carry extreme parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioSpec {
    pub id: u8,
    pub n_extreme: u8,
    pub types: Vec<FloodTypeSpec>,
}

impl ScenarioSpec {
    /// The true annual mixture distribution of the scenario.
    pub fn true_model(&self) -> Result<TmpsModel> {
        let comps = self
            .types
            .iter()
            .map(|t| {
                Ok(TmpsComponent {
                    gpd: t.gpd()?,
                    p0: t.p0,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        TmpsModel::new(comps)
    }

    /// Common threshold of all types, if there is one.
    pub fn common_threshold(&self) -> Option<f64> {
        let u = self.types.first()?.threshold;
        self.types
            .iter()
            .all(|t| t.threshold == u)
            .then_some(u)
    }
}

/// Scenario catalog. Extreme parameter values are assigned to the first
/// `n_extreme` of the five types (the `p0` order is fixed, so the
/// assignment is deterministic and recorded in the output metadata).
///
/// | id | varied        | base           | extreme          | events/yr |
/// |----|---------------|----------------|------------------|-----------|
/// | 1  | shape         | 0.2            | 0.6              | 1         |
/// | 2  | shape         | 0.2            | 0.6              | 2         |
/// | 3  | scale         | 5              | 20               | 2         |
/// | 4  | threshold     | 10             | 50               | 2         |
/// | 5  | shape + scale | (0.2, 5)       | (0.6, 20)        | 2         |
pub fn build_scenario(id: u8, n_extreme: u8) -> Result<ScenarioSpec> {
    if !(1..=5).contains(&id) || n_extreme > 5 {
        return Err(Error::InvalidScenario { id, n_extreme });
    }
    let rate = if id == 1 { 1 } else { 2 };
    let types = P0_VECTOR
        .iter()
        .enumerate()
        .map(|(j, &p0)| {
            let extreme = (j as u8) < n_extreme;
            let (mut shape, mut scale, mut threshold) = (0.2, 5.0, 10.0);
            if extreme {
                match id {
                    1 | 2 => shape = 0.6,
                    3 => scale = 20.0,
                    4 => threshold = 50.0,
                    5 => {
                        shape = 0.6;
                        scale = 20.0;
                    }
                    _ => unreachable!(),
                }
            }
            FloodTypeSpec {
                shape,
                scale,
                threshold,
                rate,
                p0,
            }
        })
        .collect();
    Ok(ScenarioSpec {
        id,
        n_extreme,
        types,
    })
}

/// The three competing models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    #[serde(rename = "TMPS")]
    Tmps,
    #[serde(rename = "AMS")]
    Ams,
    #[serde(rename = "POT")]
    Pot,
}

impl fmt::Display for ModelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModelKind::Tmps => "TMPS",
            ModelKind::Ams => "AMS",
            ModelKind::Pot => "POT",
        })
    }
}

impl FromStr for ModelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "TMPS" => Ok(ModelKind::Tmps),
            "AMS" => Ok(ModelKind::Ams),
            "POT" => Ok(ModelKind::Pot),
            other => Err(Error::InvalidConfig {
                what: format!("unknown model '{other}' (expected TMPS, AMS or POT)"),
            }),
        }
    }
}

/// Models evaluated by default: POT is only defined where all type
/// thresholds coincide, which the catalog guarantees for scenario 1 alone.
pub fn default_models(scenario_id: u8) -> Vec<ModelKind> {
    if scenario_id == 1 {
        vec![ModelKind::Tmps, ModelKind::Ams, ModelKind::Pot]
    } else {
        vec![ModelKind::Tmps, ModelKind::Ams]
    }
}

/// Full description of one benchmark cell.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scenario: ScenarioSpec,
    pub years: u32,
    pub return_periods: Vec<f64>,
    pub runs: u32,
    pub master_seed: u64,
    pub models: Vec<ModelKind>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            return Err(Error::InvalidConfig {
                what: "runs must be at least 1".into(),
            });
        }
        if self.years < 3 {
            return Err(Error::InvalidConfig {
                what: format!("years must be at least 3, got {}", self.years),
            });
        }
        if self.models.is_empty() {
            return Err(Error::InvalidConfig {
                what: "at least one model must be requested".into(),
            });
        }
        if let Some(&t) = self.return_periods.iter().find(|&&t| t <= 1.0 || t.is_nan()) {
            return Err(Error::InvalidReturnPeriod { t });
        }
        if self.models.contains(&ModelKind::Pot) && self.scenario.common_threshold().is_none() {
            return Err(Error::UnequalThresholds);
        }
        for t in &self.scenario.types {
            if t.rate == 0 {
                return Err(Error::NonPositiveRate { rate: 0.0 });
            }
        }
        Ok(())
    }
}

/// Estimated return levels of one model in one run, or the reason the fit
/// was rejected. Failures are counted per cell, never silently dropped.
#[derive(Debug, Clone, PartialEq)]
pub struct ModelOutcome {
    pub model: ModelKind,
    pub result: std::result::Result<Vec<f64>, String>,
}

/// All model outcomes of a single Monte Carlo run.
#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub run_index: u32,
    pub outcomes: Vec<ModelOutcome>,
}

/// Aggregated normalized-error statistics for one (cell, model, T).
///
/// `mean_bias` is the mean of `(estimate - truth)/truth` over non-failed
/// runs, so positive values mean the model overestimates the true quantile.
/// `rmse` is the root mean square of the same errors and `std_dev` their
/// standard deviation about the mean (`rmse^2 = mean_bias^2 + std_dev^2`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsRow {
    pub scenario_id: u8,
    pub n_extreme: u8,
    pub years: u32,
    pub return_period: f64,
    pub model: ModelKind,
    pub mean_bias: f64,
    pub rmse: f64,
    pub std_dev: f64,
    pub runs_used: u32,
    pub runs_failed: u32,
}

fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Per-run stream seed, a pure function of the master seed and the cell
/// identifiers. Never derived from shared stream state.
pub fn derive_run_seed(
    master_seed: u64,
    scenario_id: u8,
    n_extreme: u8,
    years: u32,
    run_index: u32,
) -> [u8; 32] {
    const GOLDEN: u64 = 0x9E37_79B9_7F4A_7C15;
    let mut h = master_seed;
    for v in [
        scenario_id as u64,
        n_extreme as u64,
        years as u64,
        run_index as u64,
    ] {
        h = mix64(h.wrapping_add(GOLDEN).wrapping_add(v));
    }
    let mut seed = [0u8; 32];
    for (i, chunk) in seed.chunks_exact_mut(8).enumerate() {
        chunk.copy_from_slice(&mix64(h.wrapping_add(GOLDEN.wrapping_mul(i as u64 + 1))).to_le_bytes());
    }
    seed
}

/// Draws each type's peak sample: `years * rate` values from its GPD.
pub fn generate_type_samples(
    scenario: &ScenarioSpec,
    years: u32,
    rng: &mut ChaCha12Rng,
) -> Result<Vec<Vec<f64>>> {
    scenario
        .types
        .iter()
        .map(|t| Ok(t.gpd()?.sample(years as usize * t.rate as usize, rng)))
        .collect()
}

/// Annual maximum series of the generated record:
/// `Y_i = max_j (max over type j's year-i block + u_j)`.
///
/// Every type contributes at least its threshold on top of a peak that
/// already sits at or above it, so `Y_i >= 2 max_j u_j` when thresholds are
/// equal.
pub fn derive_ams(samples: &[Vec<f64>], scenario: &ScenarioSpec, years: u32) -> Result<Vec<f64>> {
    if samples.len() != scenario.types.len() {
        return Err(Error::LengthMismatch {
            expected: scenario.types.len(),
            got: samples.len(),
        });
    }
    for (t, s) in scenario.types.iter().zip(samples) {
        let expected = years as usize * t.rate as usize;
        if s.len() != expected {
            return Err(Error::LengthMismatch {
                expected,
                got: s.len(),
            });
        }
    }
    let mut ams = Vec::with_capacity(years as usize);
    for i in 0..years as usize {
        let mut y = f64::NEG_INFINITY;
        for (t, s) in scenario.types.iter().zip(samples) {
            let lam = t.rate as usize;
            let block_max = s[i * lam..(i + 1) * lam]
                .iter()
                .copied()
                .fold(f64::NEG_INFINITY, f64::max);
            y = y.max(block_max + t.threshold);
        }
        ams.push(y);
    }
    Ok(ams)
}

/// Pooled peaks-over-threshold sample `(pool, threshold, total_rate)`.
///
/// The pool mirrors the annual-maximum construction: each generated peak is
/// shifted by its type threshold before pooling. Defined only when every
/// type shares one threshold.
pub fn derive_pot_pool(samples: &[Vec<f64>], scenario: &ScenarioSpec) -> Result<(Vec<f64>, f64, f64)> {
    let threshold = scenario
        .common_threshold()
        .ok_or(Error::UnequalThresholds)?;
    if samples.len() != scenario.types.len() {
        return Err(Error::LengthMismatch {
            expected: scenario.types.len(),
            got: samples.len(),
        });
    }
    let mut pool = Vec::with_capacity(samples.iter().map(Vec::len).sum());
    for (t, s) in scenario.types.iter().zip(samples) {
        pool.extend(s.iter().map(|&x| x + t.threshold));
    }
    let rate = scenario.types.iter().map(|t| t.rate as f64).sum();
    Ok((pool, threshold, rate))
}

/// True return levels: quantiles of the scenario's mixture model at
/// `p = 1 - 1/T`.
pub fn true_quantiles(scenario: &ScenarioSpec, return_periods: &[f64]) -> Result<Vec<f64>> {
    let model = scenario.true_model()?;
    return_periods
        .iter()
        .map(|&t| model.return_level(t))
        .collect()
}

/// One Monte Carlo run: draw, fit every requested model, evaluate the grid.
///
/// Fit failures never abort the run; they are recorded with their reason.
pub fn run_once(config: &ExperimentConfig, run_index: u32) -> RunRecord {
    let scenario = &config.scenario;
    let mut rng = ChaCha12Rng::from_seed(derive_run_seed(
        config.master_seed,
        scenario.id,
        scenario.n_extreme,
        config.years,
        run_index,
    ));
    let samples = generate_type_samples(scenario, config.years, &mut rng)
        .expect("validated scenario parameters");

    let evaluate = |model: ModelKind| -> std::result::Result<Vec<f64>, String> {
        match model {
            ModelKind::Tmps => {
                let thresholds: Vec<f64> = scenario.types.iter().map(|t| t.threshold).collect();
                let p0s: Vec<f64> = scenario.types.iter().map(|t| t.p0).collect();
                let fitted = fit_tmps(&samples, &thresholds, &p0s).map_err(|e| e.to_string())?;
                config
                    .return_periods
                    .iter()
                    .map(|&t| fitted.return_level(t))
                    .collect::<Result<Vec<f64>>>()
                    .map_err(|e| e.to_string())
            }
            ModelKind::Ams => {
                let ams = derive_ams(&samples, scenario, config.years).map_err(|e| e.to_string())?;
                let fitted = fit_ams(&ams).map_err(|e| e.to_string())?;
                config
                    .return_periods
                    .iter()
                    .map(|&t| fitted.return_level(t))
                    .collect::<Result<Vec<f64>>>()
                    .map_err(|e| e.to_string())
            }
            ModelKind::Pot => {
                let (pool, threshold, _) =
                    derive_pot_pool(&samples, scenario).map_err(|e| e.to_string())?;
                let fitted =
                    fit_pot(&pool, threshold, config.years).map_err(|e| e.to_string())?;
                config
                    .return_periods
                    .iter()
                    .map(|&t| fitted.return_level(t))
                    .collect::<Result<Vec<f64>>>()
                    .map_err(|e| e.to_string())
            }
        }
    };

    RunRecord {
        run_index,
        outcomes: config
            .models
            .iter()
            .map(|&model| ModelOutcome {
                model,
                result: evaluate(model),
            })
            .collect(),
    }
}

/// Executes all runs of a cell, optionally on the rayon thread pool.
/// Output is identical either way.
pub fn run_all(config: &ExperimentConfig, parallel: bool) -> Vec<RunRecord> {
    if parallel {
        (0..config.runs)
            .into_par_iter()
            .map(|i| run_once(config, i))
            .collect()
    } else {
        (0..config.runs).map(|i| run_once(config, i)).collect()
    }
}

/// Reduces run records to per-(model, T) normalized-error statistics.
///
/// Records are consumed in run-index order regardless of input order, with
/// plain sequential summation, so the reduction is bit-reproducible.
pub fn aggregate(
    config: &ExperimentConfig,
    records: &[RunRecord],
    true_q: &[f64],
) -> Result<Vec<MetricsRow>> {
    if records.is_empty() {
        return Err(Error::EmptySample);
    }
    if true_q.len() != config.return_periods.len() {
        return Err(Error::LengthMismatch {
            expected: config.return_periods.len(),
            got: true_q.len(),
        });
    }
    let mut order: Vec<usize> = (0..records.len()).collect();
    order.sort_by_key(|&i| records[i].run_index);

    let mut rows = Vec::with_capacity(config.models.len() * config.return_periods.len());
    for (m_idx, &model) in config.models.iter().enumerate() {
        for (t_idx, (&t, &q)) in config.return_periods.iter().zip(true_q).enumerate() {
            let mut errors = Vec::with_capacity(records.len());
            let mut failed = 0u32;
            for &i in &order {
                let outcome = &records[i].outcomes[m_idx];
                debug_assert_eq!(outcome.model, model);
                match &outcome.result {
                    Ok(qs) => errors.push((qs[t_idx] - q) / q),
                    Err(_) => failed += 1,
                }
            }
            let used = errors.len() as u32;
            let (mean, rmse, sd) = if errors.is_empty() {
                (f64::NAN, f64::NAN, f64::NAN)
            } else {
                let n = errors.len() as f64;
                let mean = errors.iter().sum::<f64>() / n;
                let ms = errors.iter().map(|e| e * e).sum::<f64>() / n;
                let var = errors.iter().map(|e| (e - mean) * (e - mean)).sum::<f64>() / n;
                (mean, ms.sqrt(), var.sqrt())
            };
            rows.push(MetricsRow {
                scenario_id: config.scenario.id,
                n_extreme: config.scenario.n_extreme,
                years: config.years,
                return_period: t,
                model,
                mean_bias: mean,
                rmse,
                std_dev: sd,
                runs_used: used,
                runs_failed: failed,
            });
        }
    }
    Ok(rows)
}

/// Convenience wrapper: validate, compute truth, run, aggregate.
pub fn run_experiment(config: &ExperimentConfig, parallel: bool) -> Result<Vec<MetricsRow>> {
    config.validate()?;
    let true_q = true_quantiles(&config.scenario, &config.return_periods)?;
    let records = run_all(config, parallel);
    aggregate(config, &records, &true_q)
}
