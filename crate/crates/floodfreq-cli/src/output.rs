//! Result-table serialization.
//!
//! One row per (return period, model) cell. CSV is the primary format: a
//! comment header embeds the resolved configuration as JSON so any file can
//! be rerun, then the fixed column header and the rows. Floats are written
//! with 17 significant digits, which both exceeds the 10-digit contract and
//! parses back to the exact binary value. JSON mirrors the same schema.

use floodfreq::{ExperimentConfig, MetricsRow, ModelKind};
use serde::{Deserialize, Serialize};
use std::str::FromStr;

pub const CSV_HEADER: &str = "scenario_id,n_extreme,years,return_period,model,mean_bias,rmse,runs_used,runs_failed,master_seed";

/// One serialized result row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRow {
    pub scenario_id: u8,
    pub n_extreme: u8,
    pub years: u32,
    pub return_period: f64,
    pub model: ModelKind,
    pub mean_bias: f64,
    pub rmse: f64,
    pub runs_used: u32,
    pub runs_failed: u32,
    pub master_seed: u64,
}

impl OutputRow {
    pub fn from_metrics(row: &MetricsRow, master_seed: u64) -> Self {
        OutputRow {
            scenario_id: row.scenario_id,
            n_extreme: row.n_extreme,
            years: row.years,
            return_period: row.return_period,
            model: row.model,
            mean_bias: row.mean_bias,
            rmse: row.rmse,
            runs_used: row.runs_used,
            runs_failed: row.runs_failed,
            master_seed,
        }
    }
}

fn fmt_f64(v: f64) -> String {
    format!("{v:.16e}")
}

/// Renders the full CSV document, configuration comment included.
pub fn to_csv(config: &ExperimentConfig, rows: &[MetricsRow]) -> String {
    let mut out = String::new();
    out.push_str("# floodfreq benchmark results\n");
    out.push_str(&format!(
        "# config: {}\n",
        serde_json::to_string(config).expect("config serializes")
    ));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for row in rows {
        let r = OutputRow::from_metrics(row, config.master_seed);
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{},{},{}\n",
            r.scenario_id,
            r.n_extreme,
            r.years,
            fmt_f64(r.return_period),
            r.model,
            fmt_f64(r.mean_bias),
            fmt_f64(r.rmse),
            r.runs_used,
            r.runs_failed,
            r.master_seed
        ));
    }
    out
}

/// Parses a CSV document produced by [`to_csv`] back into rows.
pub fn parse_csv(text: &str) -> anyhow::Result<Vec<OutputRow>> {
    let mut rows = Vec::new();
    let mut saw_header = false;
    for line in text.lines() {
        if line.starts_with('#') || line.is_empty() {
            continue;
        }
        if !saw_header {
            anyhow::ensure!(line == CSV_HEADER, "unexpected CSV header: {line}");
            saw_header = true;
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        anyhow::ensure!(fields.len() == 10, "expected 10 fields, got: {line}");
        rows.push(OutputRow {
            scenario_id: fields[0].parse()?,
            n_extreme: fields[1].parse()?,
            years: fields[2].parse()?,
            return_period: fields[3].parse()?,
            model: ModelKind::from_str(fields[4]).map_err(|e| anyhow::anyhow!("{e}"))?,
            mean_bias: fields[5].parse()?,
            rmse: fields[6].parse()?,
            runs_used: fields[7].parse()?,
            runs_failed: fields[8].parse()?,
            master_seed: fields[9].parse()?,
        });
    }
    anyhow::ensure!(saw_header, "no header line found");
    Ok(rows)
}

#[derive(Debug, Serialize, Deserialize)]
pub struct JsonDocument {
    pub config: ExperimentConfig,
    pub rows: Vec<OutputRow>,
}

/// Renders the JSON document mirroring the CSV schema.
pub fn to_json(config: &ExperimentConfig, rows: &[MetricsRow]) -> String {
    let doc = JsonDocument {
        config: config.clone(),
        rows: rows
            .iter()
            .map(|r| OutputRow::from_metrics(r, config.master_seed))
            .collect(),
    };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}
