//! Monte-Carlo sweeps over node counts and algorithms.
//!
//! Every run draws a fresh topology from a seed derived from the master seed,
//! runs each selected algorithm on that same topology, and scores the result
//! against the brute-force front. Runs execute in parallel but results are
//! always reported in `(node_count, algorithm, run_index)` order, so a sweep
//! is reproducible bit for bit from its master seed.

use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{generate_topology, RadioConstants, Topology};
use crate::optimizers::{run_algorithm, Algorithm, OptimizerReport};
use crate::pareto::{strong_dominates, ParetoFront};
use crate::route::{count_routes, enumerate, RouteId};

mod emit;

pub use emit::{emit_results, read_results_csv, read_summary, summarize_csv};

/// Node counts from which the brute-force truth is no longer computed.
pub const ACCURACY_NODE_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub node_counts: Vec<usize>,
    #[serde(default = "default_runs")]
    pub runs_per_point: usize,
    pub algorithms: Vec<Algorithm>,
    #[serde(default)]
    pub master_seed: u64,
    #[serde(default)]
    pub radio: RadioConstants,
    pub output_dir: PathBuf,
}

fn default_runs() -> usize {
    1000
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        ExperimentConfig::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs_per_point == 0 {
            return Err(Error::invalid("runs_per_point must be at least 1"));
        }
        if self.node_counts.is_empty() || self.algorithms.is_empty() {
            return Err(Error::invalid("node_counts and algorithms must be non-empty"));
        }
        if let Some(n) = self.node_counts.iter().find(|&&n| n < 3) {
            return Err(Error::invalid(format!("node count {n} is below 3")));
        }
        if self.algorithms.contains(&Algorithm::Bf) {
            if let Some(n) = self.node_counts.iter().find(|&&n| n >= ACCURACY_NODE_LIMIT) {
                return Err(Error::invalid(format!("brute force is not run at {n} nodes")));
            }
        }
        for &n in &self.node_counts {
            count_routes(n)?;
        }
        self.radio.validate()
    }

    /// Selected algorithms in canonical order, without repeats.
    pub fn algorithm_order(&self) -> Vec<Algorithm> {
        Algorithm::ALL
            .into_iter()
            .filter(|a| self.algorithms.contains(a))
            .collect()
    }
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Seed of one run: SplitMix64 applied to the master seed, then folded with
/// the node count and the run index in turn.
pub fn derive_seed(master_seed: u64, node_count: usize, run_index: usize) -> u64 {
    let h = splitmix64(master_seed);
    let h = splitmix64(h ^ node_count as u64);
    splitmix64(h ^ run_index as u64)
}

/// Seed of one algorithm's RNG stream within a run.
pub fn algorithm_seed(run_seed: u64, algorithm: Algorithm) -> u64 {
    splitmix64(run_seed ^ (0xA5A5_0000 + algorithm as u64))
}

/// Brute-force reference for one topology.
pub struct GroundTruth {
    pub opf: ParetoFront,
    /// Number of strong dominators of every route, indexed by route id.
    pub dominators: Vec<u32>,
}

impl GroundTruth {
    pub fn new(topo: &Topology) -> Result<Self> {
        let routes = enumerate(topo.n_nodes)?;
        let uvs: Vec<_> = routes.iter().map(|r| topo.route_uv(r)).collect();
        let dominators: Vec<u32> = uvs
            .iter()
            .map(|x| uvs.iter().filter(|o| strong_dominates(o, x)).count() as u32)
            .collect();
        let opf = dominators
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(i, _)| (RouteId(i as u64), uvs[i]))
            .collect();
        Ok(GroundTruth { opf, dominators })
    }

    pub fn route_count(&self) -> usize {
        self.dominators.len()
    }

    /// Mean Pareto distance of `ids`, `None` for an empty set.
    pub fn mean_distance(&self, ids: &[RouteId]) -> Option<f64> {
        if ids.is_empty() {
            return None;
        }
        let n = self.route_count() as f64;
        let total: f64 = ids.iter().map(|id| self.dominators[id.0 as usize] as f64 / n).sum();
        Some(total / ids.len() as f64)
    }

    pub fn suboptimal(&self, ids: &[RouteId]) -> usize {
        ids.iter().filter(|id| self.dominators[id.0 as usize] > 0).count()
    }

    pub fn completion(&self, ids: &[RouteId]) -> f64 {
        let hit = ids.iter().filter(|id| self.opf.contains(**id)).count();
        hit as f64 / self.opf.len() as f64
    }
}

/// Accuracy of the front an optimizer held at one point of its run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub parallel_cfes: f64,
    pub sequential_cfes: f64,
    pub pareto_distance: Option<f64>,
    pub completion: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub node_count: usize,
    pub algorithm: Algorithm,
    pub run_index: usize,
    /// Seed the run's topology was drawn from.
    pub seed: u64,
    pub parallel_cfes: f64,
    pub sequential_cfes: f64,
    pub pareto_distance: Option<f64>,
    pub completion: Option<f64>,
    pub opf_size: usize,
    pub suboptimal_routes: Option<usize>,
    pub curve: Vec<CurvePoint>,
}

impl RunRecord {
    fn new(run_index: usize, seed: u64, report: &OptimizerReport, truth: Option<&GroundTruth>) -> Self {
        let ids: Vec<RouteId> = report.opf.ids().collect();
        let curve = match truth {
            Some(t) => report
                .checkpoints
                .iter()
                .map(|c| CurvePoint {
                    parallel_cfes: c.parallel_cfes,
                    sequential_cfes: c.sequential_cfes,
                    pareto_distance: t.mean_distance(&c.front),
                    completion: t.completion(&c.front),
                })
                .collect(),
            None => Vec::new(),
        };
        RunRecord {
            node_count: report.n_nodes,
            algorithm: report.algorithm,
            run_index,
            seed,
            parallel_cfes: report.ledger.parallel(),
            sequential_cfes: report.ledger.sequential(),
            pareto_distance: truth.and_then(|t| t.mean_distance(&ids)),
            completion: truth.map(|t| t.completion(&ids)),
            opf_size: ids.len(),
            suboptimal_routes: truth.map(|t| t.suboptimal(&ids)),
            curve,
        }
    }

    pub fn suboptimal_fraction(&self) -> Option<f64> {
        let sub = self.suboptimal_routes?;
        (self.opf_size > 0).then(|| sub as f64 / self.opf_size as f64)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanStderr {
    pub mean: f64,
    pub stderr: f64,
}

impl MeanStderr {
    /// Arithmetic mean and the standard error of the mean, `None` for no
    /// samples.
    pub fn of(samples: &[f64]) -> Option<Self> {
        if samples.is_empty() {
            return None;
        }
        let n = samples.len() as f64;
        let mean = samples.iter().sum::<f64>() / n;
        let stderr = if samples.len() > 1 {
            let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
            (var / n).sqrt()
        } else {
            0.0
        };
        Some(MeanStderr { mean, stderr })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateMetrics {
    pub node_count: usize,
    pub algorithm: Algorithm,
    pub runs: usize,
    pub parallel_cfes: MeanStderr,
    pub sequential_cfes: MeanStderr,
    pub pareto_distance: Option<MeanStderr>,
    pub completion: Option<MeanStderr>,
    /// Per-run share of exported routes that some route strongly dominates.
    pub suboptimal_fraction: Option<MeanStderr>,
    pub opf_size: MeanStderr,
}

/// Groups records by `(node_count, algorithm)` in order of first
/// appearance.
pub fn aggregate(records: &[RunRecord]) -> Vec<AggregateMetrics> {
    let mut keys: Vec<(usize, Algorithm)> = Vec::new();
    for r in records {
        if !keys.contains(&(r.node_count, r.algorithm)) {
            keys.push((r.node_count, r.algorithm));
        }
    }
    keys.into_iter()
        .map(|(node_count, algorithm)| {
            let group: Vec<&RunRecord> = records
                .iter()
                .filter(|r| r.node_count == node_count && r.algorithm == algorithm)
                .collect();
            let collect =
                |f: &dyn Fn(&RunRecord) -> Option<f64>| -> Vec<f64> { group.iter().filter_map(|r| f(r)).collect() };
            let all = |f: &dyn Fn(&RunRecord) -> f64| {
                MeanStderr::of(&collect(&|r| Some(f(r)))).expect("groups are non-empty")
            };
            AggregateMetrics {
                node_count,
                algorithm,
                runs: group.len(),
                parallel_cfes: all(&|r| r.parallel_cfes),
                sequential_cfes: all(&|r| r.sequential_cfes),
                pareto_distance: MeanStderr::of(&collect(&|r| r.pareto_distance)),
                completion: MeanStderr::of(&collect(&|r| r.completion)),
                suboptimal_fraction: MeanStderr::of(&collect(&|r| r.suboptimal_fraction())),
                opf_size: all(&|r| r.opf_size as f64),
            }
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct SweepResult {
    pub records: Vec<RunRecord>,
    pub aggregates: Vec<AggregateMetrics>,
}

impl SweepResult {
    pub fn get(&self, node_count: usize, algorithm: Algorithm) -> Option<&AggregateMetrics> {
        self.aggregates
            .iter()
            .find(|a| a.node_count == node_count && a.algorithm == algorithm)
    }

    pub fn records_for(&self, node_count: usize, algorithm: Algorithm) -> impl Iterator<Item = &RunRecord> {
        self.records
            .iter()
            .filter(move |r| r.node_count == node_count && r.algorithm == algorithm)
    }
}

/// One run: a topology, the truth if affordable, and every algorithm.
pub fn run_once(config: &ExperimentConfig, node_count: usize, run_index: usize) -> Result<Vec<RunRecord>> {
    let seed = derive_seed(config.master_seed, node_count, run_index);
    let topo = generate_topology(node_count, seed, config.radio)?;
    let truth = if node_count < ACCURACY_NODE_LIMIT {
        Some(GroundTruth::new(&topo)?)
    } else {
        None
    };
    config
        .algorithm_order()
        .into_iter()
        .map(|algorithm| {
            let report = run_algorithm(algorithm, &topo, algorithm_seed(seed, algorithm))?;
            Ok(RunRecord::new(run_index, seed, &report, truth.as_ref()))
        })
        .collect()
}

/// Runs the sweep without writing anything.
pub fn run_sweep_in_memory(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    let algorithms = config.algorithm_order();
    let mut records = Vec::new();
    for &n in &config.node_counts {
        let runs: Vec<Vec<RunRecord>> = (0..config.runs_per_point)
            .into_par_iter()
            .map(|i| run_once(config, n, i))
            .collect::<Result<_>>()?;
        for a in 0..algorithms.len() {
            records.extend(runs.iter().map(|per_algo| per_algo[a].clone()));
        }
    }
    let aggregates = aggregate(&records);
    Ok(SweepResult { records, aggregates })
}

/// Checks the output directory is writable, runs the sweep, and writes
/// `results.csv`, `summary.json` and `plotdata/`.
pub fn run_sweep(config: &ExperimentConfig) -> Result<SweepResult> {
    config.validate()?;
    ensure_writable(&config.output_dir)?;
    let result = run_sweep_in_memory(config)?;
    emit_results(&result, &config.output_dir)?;
    Ok(result)
}

fn ensure_writable(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let probe = dir.join(".write-probe");
    fs::write(&probe, b"").map_err(|e| Error::io(&probe, e))?;
    fs::remove_file(&probe).map_err(|e| Error::io(&probe, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(dir: &Path) -> ExperimentConfig {
        ExperimentConfig {
            node_counts: vec![5],
            runs_per_point: 3,
            algorithms: vec![Algorithm::Cdp, Algorithm::Eqpo],
            master_seed: 17,
            radio: RadioConstants::default(),
            output_dir: dir.to_path_buf(),
        }
    }

    #[test]
    fn seeds_are_distinct_and_stable() {
        assert_eq!(derive_seed(1, 5, 0), derive_seed(1, 5, 0));
        let mut seen = std::collections::HashSet::new();
        for n in 3..8 {
            for i in 0..100 {
                assert!(seen.insert(derive_seed(42, n, i)));
            }
        }
    }

    #[test]
    fn config_validation() {
        let dir = Path::new("/tmp");
        let mut c = config(dir);
        assert!(c.validate().is_ok());
        c.runs_per_point = 0;
        assert!(c.validate().is_err());
        let mut c = config(dir);
        c.node_counts = vec![2];
        assert!(c.validate().is_err());
        let mut c = config(dir);
        c.algorithms = vec![Algorithm::Bf];
        c.node_counts = vec![10];
        assert!(c.validate().is_err());
        assert!(
            ExperimentConfig::from_json(r#"{"node_counts":[5],"algorithms":["cdp"],"output_dir":"x","bogus":1}"#)
                .is_err()
        );
        let parsed =
            ExperimentConfig::from_json(r#"{"node_counts":[5],"algorithms":["cdp","eqpo"],"output_dir":"x"}"#).unwrap();
        assert_eq!(parsed.runs_per_point, 1000);
        assert_eq!(parsed.radio, RadioConstants::default());
    }

    #[test]
    fn cdp_single_run_is_complete() {
        let mut c = config(Path::new("/tmp"));
        c.runs_per_point = 1;
        c.algorithms = vec![Algorithm::Cdp];
        let result = run_sweep_in_memory(&c).unwrap();
        assert_eq!(result.records.len(), 1);
        assert_eq!(result.records[0].completion, Some(1.0));
        assert_eq!(result.records[0].pareto_distance, Some(0.0));
    }

    #[test]
    fn records_are_ordered() {
        let mut c = config(Path::new("/tmp"));
        c.node_counts = vec![4, 5];
        let result = run_sweep_in_memory(&c).unwrap();
        let keys: Vec<_> = result
            .records
            .iter()
            .map(|r| (r.node_count, r.algorithm, r.run_index))
            .collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        assert_eq!(result.aggregates.len(), 4);
    }

    #[test]
    fn mean_stderr() {
        assert_eq!(MeanStderr::of(&[]), None);
        assert_eq!(MeanStderr::of(&[2.0]).unwrap(), MeanStderr { mean: 2.0, stderr: 0.0 });
        let m = MeanStderr::of(&[1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(m.mean, 2.5);
        assert!((m.stderr - (5.0f64 / 3.0 / 4.0).sqrt()).abs() < 1e-15);
    }
}
