//! Plot-ready result files.
//!
//! CSV header: `density,regime,case,percentile,throughput_bps,samples`, one
//! row per (density, regime, case, percentile), sorted by case, regime,
//! density and percentile. JSON is an array of the same rows. Numbers use
//! the shortest round-trip representation, so output is byte-deterministic.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{AntennaCase, OutputFormat, Regime};
use crate::montecarlo::{CampaignStats, CellSamples};

pub const CSV_HEADER: &str = "density,regime,case,percentile,throughput_bps,samples";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OutputRow {
    pub density: f64,
    pub regime: Regime,
    pub case: AntennaCase,
    /// `p5` or `p50`.
    pub percentile: String,
    pub throughput_bps: f64,
    pub samples: usize,
}

#[derive(Debug, Error)]
pub enum OutputError {
    #[error("no statistics to write")]
    Empty,
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot encode JSON: {0}")]
    Json(#[from] serde_json::Error),
}

pub fn output_rows(stats: &CampaignStats) -> Vec<OutputRow> {
    let mut rows: Vec<(u8, OutputRow)> = stats
        .rows
        .iter()
        .flat_map(|s| {
            [(5u8, s.p5), (50u8, s.p50)].map(|(q, value)| {
                (
                    q,
                    OutputRow {
                        density: s.density,
                        regime: s.regime,
                        case: s.case,
                        percentile: format!("p{q}"),
                        throughput_bps: value,
                        samples: s.samples,
                    },
                )
            })
        })
        .collect();
    rows.sort_by(|(qa, a), (qb, b)| {
        a.case
            .cmp(&b.case)
            .then(a.regime.cmp(&b.regime))
            .then(a.density.total_cmp(&b.density))
            .then(qa.cmp(qb))
    });
    rows.into_iter().map(|(_, r)| r).collect()
}

pub fn render_csv(rows: &[OutputRow]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{}",
            r.density, r.regime, r.case, r.percentile, r.throughput_bps, r.samples
        );
    }
    out
}

pub fn render_json(rows: &[OutputRow]) -> Result<String, OutputError> {
    let mut s = serde_json::to_string_pretty(rows)?;
    s.push('\n');
    Ok(s)
}

pub fn render(stats: &CampaignStats, format: OutputFormat) -> Result<String, OutputError> {
    if stats.rows.is_empty() {
        return Err(OutputError::Empty);
    }
    let rows = output_rows(stats);
    match format {
        OutputFormat::Csv => Ok(render_csv(&rows)),
        OutputFormat::Json => render_json(&rows),
    }
}

pub fn write_results(
    stats: &CampaignStats,
    format: OutputFormat,
    path: impl AsRef<Path>,
) -> Result<(), OutputError> {
    let text = render(stats, format)?;
    write_file(path.as_ref(), &text)
}

/// Raw per-iteration dump, header
/// `density,regime,case,iteration,seed,carrier,bs,sinr_db,bandwidth_hz,load,rate_bps`.
/// Carrier, BS and SINR are empty for unassigned iterations.
pub fn render_samples_csv(samples: &[CellSamples]) -> String {
    let mut out =
        String::from("density,regime,case,iteration,seed,carrier,bs,sinr_db,bandwidth_hz,load,rate_bps\n");
    for cell in samples {
        for r in &cell.results {
            let carrier = r.carrier.map(|c| c.to_string()).unwrap_or_default();
            let bs = r.bs.map(|b| b.to_string()).unwrap_or_default();
            let sinr_db = if r.carrier.is_some() {
                r.sinr_db().to_string()
            } else {
                String::new()
            };
            let _ = writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{},{}",
                cell.density,
                cell.regime,
                cell.case,
                r.iteration,
                r.seed,
                carrier,
                bs,
                sinr_db,
                r.bandwidth,
                r.load,
                r.rate
            );
        }
    }
    out
}

pub fn write_samples(samples: &[CellSamples], path: impl AsRef<Path>) -> Result<(), OutputError> {
    write_file(path.as_ref(), &render_samples_csv(samples))
}

fn write_file(path: &Path, text: &str) -> Result<(), OutputError> {
    fs::write(path, text).map_err(|source| OutputError::Io {
        path: path.to_path_buf(),
        source,
    })
}
