use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::{BenchmarkRecord, EvalError};
use crate::planners::PlannerMode;

pub const CSV_HEADER: &str = "map_id,planner,seed,time_cost_s,node_count,initial_len,optimal_len";

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ReportFormat {
    Csv,
    Json,
}

impl FromStr for ReportFormat {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(ReportFormat::Csv),
            "json" => Ok(ReportFormat::Json),
            other => Err(EvalError::UnknownFormat(other.to_string())),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Csv => "csv",
            ReportFormat::Json => "json",
        })
    }
}

/// Medians of one (map, planner) cell; lengths over solved runs only.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellSummary {
    pub map: String,
    pub planner: String,
    pub runs: usize,
    pub solved: usize,
    pub median_time: f64,
    pub median_nodes: f64,
    pub median_init_len: Option<f64>,
    pub median_opt_len: Option<f64>,
}

/// Heatmap-guided vs uniform RRT* on runs sharing map and seed.
///
/// A pair is a win when the guided run solved and either the uniform run did
/// not or the guided value is strictly smaller.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PairedSummary {
    pub win_rate_nodes: f64,
    pub win_rate_init_len: f64,
    pub n_pairs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub per_cell: Vec<CellSummary>,
    pub paired: Option<PairedSummary>,
}

fn median(mut values: Vec<f64>) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_by(f64::total_cmp);
    let n = values.len();
    Some(if n % 2 == 1 {
        values[n / 2]
    } else {
        (values[n / 2 - 1] + values[n / 2]) / 2.0
    })
}

/// Summary pairing `heatmap_rrt_star` against `rrt_star` records.
pub fn summarize(records: &[BenchmarkRecord]) -> Summary {
    summarize_pair(
        records,
        PlannerMode::HeatmapRrtStar.as_str(),
        PlannerMode::RrtStar.as_str(),
    )
}

/// Summary with an explicit treatment/baseline planner pair.
pub fn summarize_pair(records: &[BenchmarkRecord], treatment: &str, baseline: &str) -> Summary {
    let mut cells: BTreeMap<(&str, &str), Vec<&BenchmarkRecord>> = BTreeMap::new();
    for r in records {
        cells.entry((&r.map_id, &r.planner)).or_default().push(r);
    }
    let per_cell = cells
        .into_iter()
        .map(|((map, planner), rs)| CellSummary {
            map: map.to_string(),
            planner: planner.to_string(),
            runs: rs.len(),
            solved: rs.iter().filter(|r| r.solved()).count(),
            median_time: median(rs.iter().map(|r| r.time_cost_s).collect()).unwrap_or(0.0),
            median_nodes: median(rs.iter().map(|r| r.node_count as f64).collect()).unwrap_or(0.0),
            median_init_len: median(rs.iter().filter_map(|r| r.initial_len).collect()),
            median_opt_len: median(rs.iter().filter_map(|r| r.optimal_len).collect()),
        })
        .collect();

    let by_key: BTreeMap<(&str, u64), &BenchmarkRecord> = records
        .iter()
        .filter(|r| r.planner == baseline)
        .map(|r| ((r.map_id.as_str(), r.seed), r))
        .collect();
    let (mut n, mut node_wins, mut len_wins) = (0usize, 0usize, 0usize);
    for t in records.iter().filter(|r| r.planner == treatment) {
        let Some(b) = by_key.get(&(t.map_id.as_str(), t.seed)) else {
            continue;
        };
        n += 1;
        if t.solved() && (!b.solved() || t.node_count < b.node_count) {
            node_wins += 1;
        }
        if let Some(tl) = t.initial_len {
            if b.initial_len.map_or(true, |bl| tl < bl) {
                len_wins += 1;
            }
        }
    }
    let paired = (n > 0).then(|| PairedSummary {
        win_rate_nodes: node_wins as f64 / n as f64,
        win_rate_init_len: len_wins as f64 / n as f64,
        n_pairs: n,
    });
    Summary { per_cell, paired }
}

/// CSV rows in (map, planner, seed) order, or the JSON summary.
pub fn emit_report(records: &[BenchmarkRecord], format: ReportFormat) -> Result<Vec<u8>, EvalError> {
    let mut sorted: Vec<&BenchmarkRecord> = records.iter().collect();
    sorted.sort_by(|a, b| a.key().cmp(&b.key()));
    match format {
        ReportFormat::Csv => {
            let mut out = Vec::new();
            {
                let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(&mut out);
                w.write_record(CSV_HEADER.split(','))?;
                for r in sorted {
                    w.serialize(r)?;
                }
                w.flush().map_err(csv::Error::from)?;
            }
            Ok(out)
        }
        ReportFormat::Json => {
            let owned: Vec<BenchmarkRecord> = sorted.into_iter().cloned().collect();
            let mut bytes = serde_json::to_vec_pretty(&summarize(&owned))?;
            bytes.push(b'\n');
            Ok(bytes)
        }
    }
}

/// Parses CSV produced by [`emit_report`].
pub fn parse_csv(bytes: &[u8]) -> Result<Vec<BenchmarkRecord>, EvalError> {
    let mut reader = csv::Reader::from_reader(bytes);
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    if header.join(",") != CSV_HEADER {
        return Err(EvalError::UnknownFormat(format!(
            "csv header `{}`",
            header.join(",")
        )));
    }
    Ok(reader.deserialize().collect::<Result<_, _>>()?)
}
