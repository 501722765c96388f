//! Route optimizers and their shared report type.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::net::{UtilitySource, UtilityVector};
use crate::pareto::{brute_force_opf, ParetoFront};
use crate::qsearch::CostLedger;
use crate::route::{self, Route, RouteId};

mod benchmark;
mod cdp;
mod eqpo;
mod pndqio;

pub use benchmark::{ndqio_benchmark, ndqo_benchmark};
pub use cdp::{cdp_run, cdp_run_with, SubrouteTest};
pub use eqpo::eqpo_run;
pub use pndqio::pndqio_run;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Bf,
    Cdp,
    Eqpo,
    Ndqo,
    Ndqio,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Bf,
        Algorithm::Cdp,
        Algorithm::Eqpo,
        Algorithm::Ndqo,
        Algorithm::Ndqio,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Bf => "bf",
            Algorithm::Cdp => "cdp",
            Algorithm::Eqpo => "eqpo",
            Algorithm::Ndqo => "ndqo",
            Algorithm::Ndqio => "ndqio",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown algorithm {s:?}")))
    }
}

/// Set sizes at the end of one trellis stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct StageCounts {
    /// Routes newly generated at this stage.
    pub generated: usize,
    pub opf: usize,
    pub survivors: usize,
}

/// Full membership of one trellis stage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageTrace {
    pub generated: Vec<RouteId>,
    pub opf: Vec<RouteId>,
    pub survivors: Vec<RouteId>,
}

impl StageTrace {
    pub fn counts(&self) -> StageCounts {
        StageCounts {
            generated: self.generated.len(),
            opf: self.opf.len(),
            survivors: self.survivors.len(),
        }
    }
}

/// The front held by an optimizer once it had spent a given cost.
#[derive(Debug, Clone, PartialEq)]
pub struct Checkpoint {
    pub parallel_cfes: f64,
    pub sequential_cfes: f64,
    pub front: Vec<RouteId>,
}

impl Checkpoint {
    fn record(trace: &mut Option<&mut Vec<Checkpoint>>, ledger: &CostLedger, front: &ParetoFront) {
        if let Some(trace) = trace {
            trace.push(Checkpoint {
                parallel_cfes: ledger.parallel(),
                sequential_cfes: ledger.sequential(),
                front: front.ids().collect(),
            });
        }
    }
}

#[derive(Debug, Clone)]
pub struct OptimizerReport {
    pub algorithm: Algorithm,
    pub n_nodes: usize,
    pub seed: Option<u64>,
    pub opf: ParetoFront,
    pub ledger: CostLedger,
    pub stages: Vec<StageTrace>,
    pub checkpoints: Vec<Checkpoint>,
}

#[derive(Serialize)]
struct ReportJson<'a> {
    algorithm: Algorithm,
    n_nodes: usize,
    seed: Option<u64>,
    opf: Vec<String>,
    parallel_cfes: f64,
    sequential_cfes: f64,
    stages: usize,
    per_stage_counts: &'a [[usize; 3]],
}

impl OptimizerReport {
    pub fn stages_processed(&self) -> usize {
        self.stages.len()
    }

    pub fn per_stage_counts(&self) -> Vec<StageCounts> {
        self.stages.iter().map(StageTrace::counts).collect()
    }

    pub fn opf_routes(&self) -> Vec<Route> {
        self.opf
            .ids()
            .map(|id| route::decode(id, self.n_nodes).expect("front holds valid route ids"))
            .collect()
    }

    pub fn to_json(&self) -> String {
        let counts: Vec<[usize; 3]> = self
            .per_stage_counts()
            .iter()
            .map(|c| [c.generated, c.opf, c.survivors])
            .collect();
        let doc = ReportJson {
            algorithm: self.algorithm,
            n_nodes: self.n_nodes,
            seed: self.seed,
            opf: self.opf_routes().iter().map(Route::to_string).collect(),
            parallel_cfes: self.ledger.parallel(),
            sequential_cfes: self.ledger.sequential(),
            stages: self.stages_processed(),
            per_stage_counts: &counts,
        };
        serde_json::to_string_pretty(&doc).expect("report is always serializable")
    }
}

/// Memoized UV lookups keyed by route index.
pub(crate) struct Evaluator<'a> {
    source: &'a dyn UtilitySource,
    n_nodes: usize,
    cache: HashMap<RouteId, UtilityVector>,
}

impl<'a> Evaluator<'a> {
    pub(crate) fn new(source: &'a dyn UtilitySource) -> Self {
        Evaluator {
            source,
            n_nodes: source.n_nodes(),
            cache: HashMap::new(),
        }
    }

    pub(crate) fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    pub(crate) fn route(&self, id: RouteId) -> Route {
        route::decode(id, self.n_nodes).expect("optimizers only handle valid ids")
    }

    pub(crate) fn id(&self, route: &Route) -> RouteId {
        route::encode(route, self.n_nodes).expect("optimizers only handle valid routes")
    }

    pub(crate) fn uv(&mut self, id: RouteId) -> UtilityVector {
        if let Some(uv) = self.cache.get(&id) {
            return *uv;
        }
        let uv = self.source.route_uv(&self.route(id));
        self.cache.insert(id, uv);
        uv
    }

    pub(crate) fn subroute_uv(&self, id: RouteId) -> Result<UtilityVector> {
        self.source.subroute_uv(&self.route(id))
    }

    /// Makes sure every id is cached, then hands out a read-only lookup.
    pub(crate) fn lookup<'s>(&'s mut self, ids: &[RouteId]) -> impl Fn(RouteId) -> UtilityVector + 's {
        for &id in ids {
            self.uv(id);
        }
        let cache = &self.cache;
        move |id| cache[&id]
    }

    pub(crate) fn pairs(&mut self, ids: &[RouteId]) -> Vec<(RouteId, UtilityVector)> {
        ids.iter().map(|&id| (id, self.uv(id))).collect()
    }
}

pub(crate) fn all_ids(n_nodes: usize) -> Result<Vec<RouteId>> {
    Ok((0..route::count_routes(n_nodes)?).map(RouteId).collect())
}

/// Exhaustive all-pairs search; charges `N (N - 1)` comparisons.
pub fn brute_force(source: &dyn UtilitySource) -> Result<OptimizerReport> {
    let mut eval = Evaluator::new(source);
    let ids = all_ids(eval.n_nodes())?;
    let pairs = eval.pairs(&ids);
    let opf = brute_force_opf(&pairs);
    let mut ledger = CostLedger::new();
    let n = pairs.len() as u64;
    ledger.charge_comparisons(n * n.saturating_sub(1));
    let mut checkpoints = Vec::new();
    Checkpoint::record(&mut Some(&mut checkpoints), &ledger, &opf);
    Ok(OptimizerReport {
        algorithm: Algorithm::Bf,
        n_nodes: eval.n_nodes(),
        seed: None,
        opf,
        ledger,
        stages: Vec::new(),
        checkpoints,
    })
}

/// Runs `algorithm` with its own RNG stream seeded from `seed`.
pub fn run_algorithm(algorithm: Algorithm, source: &dyn UtilitySource, seed: u64) -> Result<OptimizerReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = match algorithm {
        Algorithm::Bf => brute_force(source)?,
        Algorithm::Cdp => cdp_run(source)?,
        Algorithm::Eqpo => eqpo_run(source, &mut rng)?,
        Algorithm::Ndqo => ndqo_benchmark(source, &mut rng)?,
        Algorithm::Ndqio => ndqio_benchmark(source, &mut rng)?,
    };
    if matches!(algorithm, Algorithm::Eqpo | Algorithm::Ndqo | Algorithm::Ndqio) {
        report.seed = Some(seed);
    }
    Ok(report)
}
