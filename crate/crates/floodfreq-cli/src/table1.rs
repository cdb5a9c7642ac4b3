//! Reference-table reproduction: the selected benchmark cells at T = 100
//! with published mean-bias and spread values alongside computed ones.

use anyhow::Result;
use floodfreq::simulation::DEFAULT_RUNS;
use floodfreq::{build_scenario, run_experiment, ExperimentConfig, MetricsRow, ModelKind};

/// Published reference statistics for one (scenario, n_extreme, model) cell
/// at T = 100: mean bias and the spread of the normalized error, for record
/// lengths 30 and 100.
#[derive(Debug, Clone, Copy)]
pub struct ReferenceCell {
    pub scenario: u8,
    pub n_extreme: u8,
    pub model: ModelKind,
    pub bias: [f64; 2],
    pub spread: [f64; 2],
}

/// The reference comparison grid. Spread values are the standard deviation
/// of the normalized error over the runs.
pub const REFERENCE: [ReferenceCell; 14] = {
    use ModelKind::{Ams, Tmps};
    [
        ReferenceCell { scenario: 1, n_extreme: 0, model: Ams,  bias: [0.210, 0.211], spread: [0.293, 0.182] },
        ReferenceCell { scenario: 1, n_extreme: 0, model: Tmps, bias: [0.099, 0.036], spread: [0.250, 0.137] },
        ReferenceCell { scenario: 1, n_extreme: 2, model: Ams,  bias: [0.043, 0.118], spread: [0.592, 0.436] },
        ReferenceCell { scenario: 1, n_extreme: 2, model: Tmps, bias: [-0.096, -0.074], spread: [0.434, 0.285] },
        ReferenceCell { scenario: 2, n_extreme: 0, model: Ams,  bias: [0.403, 0.408], spread: [0.386, 0.217] },
        ReferenceCell { scenario: 2, n_extreme: 0, model: Tmps, bias: [0.055, 0.021], spread: [0.186, 0.098] },
        ReferenceCell { scenario: 2, n_extreme: 2, model: Ams,  bias: [0.501, 0.617], spread: [0.861, 0.598] },
        ReferenceCell { scenario: 2, n_extreme: 2, model: Tmps, bias: [-0.095, -0.061], spread: [0.323, 0.219] },
        ReferenceCell { scenario: 3, n_extreme: 2, model: Ams,  bias: [0.395, 0.393], spread: [0.491, 0.292] },
        ReferenceCell { scenario: 3, n_extreme: 2, model: Tmps, bias: [0.024, 0.006], spread: [0.252, 0.130] },
        ReferenceCell { scenario: 4, n_extreme: 2, model: Ams,  bias: [0.645, 0.664], spread: [0.206, 0.132] },
        ReferenceCell { scenario: 4, n_extreme: 2, model: Tmps, bias: [0.017, 0.009], spread: [0.118, 0.068] },
        ReferenceCell { scenario: 5, n_extreme: 2, model: Ams,  bias: [0.519, 0.612], spread: [0.893, 0.630] },
        ReferenceCell { scenario: 5, n_extreme: 2, model: Tmps, bias: [-0.110, -0.079], spread: [0.411, 0.241] },
    ]
};

pub const YEARS: [u32; 2] = [30, 100];

/// Computed statistics for one reference cell.
#[derive(Debug, Clone, Copy)]
pub struct ComputedCell {
    pub bias: [f64; 2],
    pub spread: [f64; 2],
}

fn find_t100(rows: &[MetricsRow], model: ModelKind) -> (f64, f64) {
    let row = rows
        .iter()
        .find(|r| r.model == model && r.return_period == 100.0)
        .expect("T=100 row present");
    (row.mean_bias, row.std_dev)
}

/// Runs every reference cell (both record lengths) and pairs the computed
/// statistics with the published ones, in `REFERENCE` order.
pub fn compute(seed: u64, runs: u32) -> Result<Vec<(ReferenceCell, ComputedCell)>> {
    let mut cells: Vec<(u8, u8)> = REFERENCE.iter().map(|r| (r.scenario, r.n_extreme)).collect();
    cells.dedup();

    let mut out = Vec::with_capacity(REFERENCE.len());
    for &(scenario, n_extreme) in &cells {
        let mut per_model: Vec<(ModelKind, ComputedCell)> = vec![
            (ModelKind::Ams, ComputedCell { bias: [0.0; 2], spread: [0.0; 2] }),
            (ModelKind::Tmps, ComputedCell { bias: [0.0; 2], spread: [0.0; 2] }),
        ];
        for (i, &years) in YEARS.iter().enumerate() {
            let config = ExperimentConfig {
                scenario: build_scenario(scenario, n_extreme)?,
                years,
                return_periods: vec![100.0],
                runs,
                master_seed: seed,
                models: vec![ModelKind::Tmps, ModelKind::Ams],
            };
            let rows = run_experiment(&config, true)?;
            for (model, computed) in &mut per_model {
                let (bias, spread) = find_t100(&rows, *model);
                computed.bias[i] = bias;
                computed.spread[i] = spread;
            }
        }
        for reference in REFERENCE
            .iter()
            .filter(|r| r.scenario == scenario && r.n_extreme == n_extreme)
        {
            let computed = per_model
                .iter()
                .find(|(m, _)| *m == reference.model)
                .map(|(_, c)| *c)
                .expect("model computed");
            out.push((*reference, computed));
        }
    }
    Ok(out)
}

/// Renders the comparison table: reference value, computed value and the
/// absolute deviation for each statistic and record length.
pub fn render(results: &[(ReferenceCell, ComputedCell)], seed: u64, runs: u32) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "Reference comparison at T=100, {runs} runs per cell, seed {seed}\n"
    ));
    out.push_str(&format!(
        "{:<9} {:<4} {:<5} {:<7} {:>8} {:>10} {:>8} {:>8} {:>10} {:>8}\n",
        "scenario", "n_E", "model", "stat", "ref30", "comp30", "dev30", "ref100", "comp100", "dev100"
    ));
    for (reference, computed) in results {
        for (stat, refv, compv) in [
            ("bias", reference.bias, computed.bias),
            ("spread", reference.spread, computed.spread),
        ] {
            out.push_str(&format!(
                "{:<9} {:<4} {:<5} {:<7} {:>8.3} {:>10.4} {:>8.4} {:>8.3} {:>10.4} {:>8.4}\n",
                reference.scenario,
                reference.n_extreme,
                reference.model.to_string(),
                stat,
                refv[0],
                compv[0],
                (compv[0] - refv[0]).abs(),
                refv[1],
                compv[1],
                (compv[1] - refv[1]).abs(),
            ));
        }
    }
    out
}

/// Full table-1 command: compute and render.
pub fn run(seed: u64, runs: Option<u32>) -> Result<String> {
    let runs = runs.unwrap_or(DEFAULT_RUNS);
    let results = compute(seed, runs)?;
    Ok(render(&results, seed, runs))
}
