//! On-disk sweep output: per-run CSV, aggregate JSON and plot series.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::optimizers::Algorithm;

use super::{aggregate, AggregateMetrics, CurvePoint, MeanStderr, RunRecord, SweepResult};

/// Budgets per accuracy curve.
const CURVE_POINTS: usize = 24;

#[derive(Debug, Serialize, Deserialize)]
struct CsvRow {
    node_count: usize,
    algorithm: Algorithm,
    seed: u64,
    parallel_cfes: f64,
    sequential_cfes: f64,
    pareto_distance: Option<f64>,
    completion: Option<f64>,
    opf_size: usize,
    suboptimal_routes: Option<usize>,
}

#[derive(Debug, Serialize, Deserialize)]
struct Summary {
    groups: Vec<AggregateMetrics>,
}

/// Writes `results.csv`, `summary.json` and the `plotdata/` series.
pub fn emit_results(result: &SweepResult, dir: &Path) -> Result<()> {
    if result.records.is_empty() {
        return Err(Error::invalid("no run records to write"));
    }
    let plot_dir = dir.join("plotdata");
    fs::create_dir_all(&plot_dir).map_err(|e| Error::io(&plot_dir, e))?;

    let csv_path = dir.join("results.csv");
    let mut w = csv::Writer::from_path(&csv_path).map_err(|e| csv_error(&csv_path, e))?;
    for r in &result.records {
        w.serialize(CsvRow {
            node_count: r.node_count,
            algorithm: r.algorithm,
            seed: r.seed,
            parallel_cfes: r.parallel_cfes,
            sequential_cfes: r.sequential_cfes,
            pareto_distance: r.pareto_distance,
            completion: r.completion,
            opf_size: r.opf_size,
            suboptimal_routes: r.suboptimal_routes,
        })
        .map_err(|e| csv_error(&csv_path, e))?;
    }
    w.flush().map_err(|e| Error::io(&csv_path, e))?;

    let summary_path = dir.join("summary.json");
    let summary = Summary {
        groups: result.aggregates.clone(),
    };
    let text = serde_json::to_string_pretty(&summary)?;
    fs::write(&summary_path, text + "\n").map_err(|e| Error::io(&summary_path, e))?;

    write_complexity(&plot_dir.join("complexity_parallel.csv"), &result.aggregates, |a| {
        a.parallel_cfes
    })?;
    write_complexity(&plot_dir.join("complexity_sequential.csv"), &result.aggregates, |a| {
        a.sequential_cfes
    })?;
    let par = |c: &CurvePoint| c.parallel_cfes;
    let seq = |c: &CurvePoint| c.sequential_cfes;
    let dist = |c: Option<&CurvePoint>| c.and_then(|c| c.pareto_distance);
    let comp = |c: Option<&CurvePoint>| Some(c.map_or(0.0, |c| c.completion));
    write_curve(
        &plot_dir.join("distance_vs_parallel.csv"),
        result,
        par,
        dist,
        "pareto_distance",
    )?;
    write_curve(
        &plot_dir.join("distance_vs_sequential.csv"),
        result,
        seq,
        dist,
        "pareto_distance",
    )?;
    write_curve(
        &plot_dir.join("completion_vs_parallel.csv"),
        result,
        par,
        comp,
        "completion",
    )?;
    write_curve(
        &plot_dir.join("completion_vs_sequential.csv"),
        result,
        seq,
        comp,
        "completion",
    )?;
    Ok(())
}

fn csv_error(path: &Path, e: csv::Error) -> Error {
    Error::Parse(format!("{}: {e}", path.display()))
}

fn write_complexity(
    path: &Path,
    aggregates: &[AggregateMetrics],
    metric: impl Fn(&AggregateMetrics) -> MeanStderr,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record(["node_count", "algorithm", "mean_cfes", "stderr_cfes"])
        .map_err(|e| csv_error(path, e))?;
    for a in aggregates {
        let m = metric(a);
        w.write_record([
            a.node_count.to_string(),
            a.algorithm.to_string(),
            m.mean.to_string(),
            m.stderr.to_string(),
        ])
        .map_err(|e| csv_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// `count` budgets spaced evenly in log scale over `[lo, hi]`.
fn log_budgets(lo: f64, hi: f64, count: usize) -> Vec<f64> {
    if hi <= lo || count < 2 {
        return vec![hi];
    }
    let (a, b) = (lo.ln(), hi.ln());
    (0..count)
        .map(|i| (a + (b - a) * i as f64 / (count - 1) as f64).exp())
        .collect()
}

/// Mean accuracy over runs of the front each run held at a set of budgets.
fn write_curve(
    path: &Path,
    result: &SweepResult,
    cost: impl Fn(&CurvePoint) -> f64,
    metric: impl Fn(Option<&CurvePoint>) -> Option<f64>,
    column: &str,
) -> Result<()> {
    let mut w = csv::Writer::from_path(path).map_err(|e| csv_error(path, e))?;
    w.write_record([
        "node_count",
        "algorithm",
        "budget",
        &format!("mean_{column}"),
        &format!("stderr_{column}"),
        "runs",
    ])
    .map_err(|e| csv_error(path, e))?;
    for a in &result.aggregates {
        let runs: Vec<&RunRecord> = result
            .records_for(a.node_count, a.algorithm)
            .filter(|r| !r.curve.is_empty())
            .collect();
        if runs.is_empty() {
            continue;
        }
        let costs = runs.iter().flat_map(|r| r.curve.iter().map(&cost));
        let (lo, hi) = costs.fold((f64::INFINITY, 0.0f64), |(lo, hi), c| {
            (if c > 0.0 { lo.min(c) } else { lo }, hi.max(c))
        });
        if hi <= 0.0 {
            continue;
        }
        for budget in log_budgets(lo.min(hi), hi, CURVE_POINTS) {
            let samples: Vec<f64> = runs
                .iter()
                .filter_map(|r| metric(r.curve.iter().rev().find(|c| cost(c) <= budget)))
                .collect();
            let Some(m) = MeanStderr::of(&samples) else {
                continue;
            };
            w.write_record([
                a.node_count.to_string(),
                a.algorithm.to_string(),
                budget.to_string(),
                m.mean.to_string(),
                m.stderr.to_string(),
                samples.len().to_string(),
            ])
            .map_err(|e| csv_error(path, e))?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Reads the per-run rows of a `results.csv`. Curves are not stored there,
/// so the returned records carry none.
pub fn read_results_csv(path: &Path) -> Result<Vec<RunRecord>> {
    let mut reader = csv::Reader::from_path(path).map_err(|e| csv_error(path, e))?;
    let mut records: Vec<RunRecord> = Vec::new();
    for row in reader.deserialize() {
        let row: CsvRow = row.map_err(|e| csv_error(path, e))?;
        let run_index = records
            .iter()
            .filter(|r| r.node_count == row.node_count && r.algorithm == row.algorithm)
            .count();
        records.push(RunRecord {
            node_count: row.node_count,
            algorithm: row.algorithm,
            run_index,
            seed: row.seed,
            parallel_cfes: row.parallel_cfes,
            sequential_cfes: row.sequential_cfes,
            pareto_distance: row.pareto_distance,
            completion: row.completion,
            opf_size: row.opf_size,
            suboptimal_routes: row.suboptimal_routes,
            curve: Vec::new(),
        });
    }
    Ok(records)
}

pub fn read_summary(path: &Path) -> Result<Vec<AggregateMetrics>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let summary: Summary = serde_json::from_str(&text)?;
    Ok(summary.groups)
}

/// Recomputes the summary from a `results.csv`.
pub fn summarize_csv(path: &Path) -> Result<Vec<AggregateMetrics>> {
    Ok(aggregate(&read_results_csv(path)?))
}
