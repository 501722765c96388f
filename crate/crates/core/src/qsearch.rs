//! Classical Monte-Carlo simulation of quantum search.
//!
//! Nothing here evolves a state vector. A search over `n` items of which `s`
//! are marked succeeds after `j` Grover iterations with probability
//! `sin^2((2j + 1) asin(sqrt(s / n)))`, so the simulator samples that outcome
//! directly and charges the oracle activations it would have cost. The
//! marked set is computed classically to obtain `s`, and is never exposed to
//! callers: they only see a [`SearchOutcome`].

use rand::Rng;

use crate::error::{Error, Result};
use crate::net::UtilityVector;
use crate::pareto::{strong_dominates, ParetoFront};
use crate::route::RouteId;

/// Number of utility functions compared side by side in hardware.
pub const HARDWARE_PARALLELISM: f64 = 3.0;

/// Growth factor of the BBHT iteration bound.
pub const BBHT_GROWTH: f64 = 6.0 / 5.0;

/// A search gives up once it has spent `ceil(4.5 sqrt(n))` oracle calls.
pub const BBHT_BUDGET_FACTOR: f64 = 4.5;

/// Cost of one oracle activation, in cost-function evaluations (CFEs).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ActivationCost {
    /// Execution-time proxy, discounted by hardware parallelism.
    pub parallel: f64,
    /// Power proxy: every dominance comparison counts.
    pub sequential: f64,
}

impl ActivationCost {
    /// One comparison, no parallelism.
    pub const CLASSICAL: ActivationCost = ActivationCost {
        parallel: 1.0,
        sequential: 1.0,
    };

    /// A single dominance comparison whose utility functions are compared in
    /// parallel.
    pub const DOMINANCE: ActivationCost = ActivationCost {
        parallel: 1.0 / HARDWARE_PARALLELISM,
        sequential: 1.0,
    };

    pub fn new(parallel: f64, sequential: f64) -> Result<Self> {
        if !(parallel >= 0.0 && sequential >= parallel && sequential.is_finite()) {
            return Err(Error::invalid(format!(
                "activation cost needs 0 <= parallel <= sequential, got ({parallel}, {sequential})"
            )));
        }
        Ok(ActivationCost { parallel, sequential })
    }

    /// A comparison against every member of a front of `width` routes,
    /// carried out in parallel.
    pub fn against_front(width: usize) -> Self {
        ActivationCost {
            parallel: 1.0,
            sequential: width.max(1) as f64,
        }
    }
}

/// Running totals of parallel and sequential CFEs.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct CostLedger {
    parallel: f64,
    sequential: f64,
}

impl CostLedger {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn parallel(&self) -> f64 {
        self.parallel
    }

    pub fn sequential(&self) -> f64 {
        self.sequential
    }

    pub fn charge(&mut self, cost: ActivationCost, activations: u64) {
        self.parallel += cost.parallel * activations as f64;
        self.sequential += cost.sequential * activations as f64;
    }

    /// Classical dominance comparisons, one CFE each in both domains.
    pub fn charge_comparisons(&mut self, comparisons: u64) {
        self.charge(ActivationCost::CLASSICAL, comparisons);
    }

    pub fn merge(&mut self, other: &CostLedger) {
        self.parallel += other.parallel;
        self.sequential += other.sequential;
    }
}

/// A marking function together with what each activation costs.
pub struct Oracle<P> {
    predicate: P,
    cost: ActivationCost,
}

impl<P: Fn(RouteId) -> bool> Oracle<P> {
    pub fn new(predicate: P, cost: ActivationCost) -> Self {
        Oracle { predicate, cost }
    }

    pub fn cost(&self) -> ActivationCost {
        self.cost
    }

    pub fn is_marked(&self, id: RouteId) -> bool {
        (self.predicate)(id)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOutcome {
    pub found: Option<RouteId>,
    pub oracle_calls: u64,
}

/// Probability that measuring after `j` Grover iterations yields one of `s`
/// marked items out of `n`.
pub fn grover_success_prob(j: u64, s: usize, n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("search space must be non-empty"));
    }
    if s > n {
        return Err(Error::invalid(format!("{s} marked items exceed space of {n}")));
    }
    Ok(success_prob(j, (s as f64 / n as f64).sqrt().asin()))
}

fn success_prob(j: u64, theta: f64) -> f64 {
    ((2 * j + 1) as f64 * theta).sin().powi(2)
}

/// Oracle-call budget after which a search over `n` items reports failure.
pub fn search_budget(n: usize) -> u64 {
    (BBHT_BUDGET_FACTOR * (n as f64).sqrt()).ceil() as u64
}

/// BBHT search for a marked item when the number of marked items is
/// unknown.
///
/// Each attempt draws `j` uniformly from `[0, ceil(m))`, runs `j` Grover
/// iterations and measures; verifying the measured item costs one more
/// activation. On failure `m` grows by [`BBHT_GROWTH`] up to `sqrt(n)`. The
/// last attempt is shortened so the total never exceeds [`search_budget`].
pub fn bbht_search<P, R>(
    space: &[RouteId],
    oracle: &Oracle<P>,
    rng: &mut R,
    ledger: &mut CostLedger,
) -> Result<SearchOutcome>
where
    P: Fn(RouteId) -> bool,
    R: Rng + ?Sized,
{
    if space.is_empty() {
        return Err(Error::invalid("search space must be non-empty"));
    }
    let marked: Vec<RouteId> = space.iter().copied().filter(|&id| oracle.is_marked(id)).collect();
    let n = space.len();
    let theta = (marked.len() as f64 / n as f64).sqrt().asin();
    let budget = search_budget(n);
    let m_cap = (n as f64).sqrt();

    let mut m = 1.0f64;
    let mut calls = 0u64;
    let mut found = None;
    while calls < budget {
        let j = rng.random_range(0..m.ceil() as u64).min(budget - calls - 1);
        calls += j + 1;
        if rng.random::<f64>() < success_prob(j, theta) {
            found = Some(marked[rng.random_range(0..marked.len())]);
            break;
        }
        m = (m * BBHT_GROWTH).min(m_cap);
    }
    ledger.charge(oracle.cost(), calls);
    Ok(SearchOutcome {
        found,
        oracle_calls: calls,
    })
}

/// Looks for a candidate that is not yet in `opf` and that no member of
/// `opf` strongly dominates. One activation compares a candidate against the
/// whole front in parallel.
pub fn backward_search<F, R>(
    candidates: &[RouteId],
    opf: &ParetoFront,
    uv: &F,
    rng: &mut R,
    ledger: &mut CostLedger,
) -> Result<SearchOutcome>
where
    F: Fn(RouteId) -> UtilityVector,
    R: Rng + ?Sized,
{
    let oracle = Oracle::new(
        |id| !opf.contains(id) && !opf.dominates(&uv(id)),
        ActivationCost::against_front(opf.len()),
    );
    bbht_search(candidates, &oracle, rng, ledger)
}

/// Repeatedly searches `pool` for a route strongly dominating the current
/// reference, moving to it when found. Returns the reference once a search
/// comes back empty.
pub fn dominance_chain<F, R>(
    start: RouteId,
    pool: &[RouteId],
    uv: &F,
    rng: &mut R,
    ledger: &mut CostLedger,
) -> Result<RouteId>
where
    F: Fn(RouteId) -> UtilityVector,
    R: Rng + ?Sized,
{
    dominance_chain_with_cost(start, pool, uv, ActivationCost::DOMINANCE, rng, ledger)
}

pub fn dominance_chain_with_cost<F, R>(
    start: RouteId,
    pool: &[RouteId],
    uv: &F,
    cost: ActivationCost,
    rng: &mut R,
    ledger: &mut CostLedger,
) -> Result<RouteId>
where
    F: Fn(RouteId) -> UtilityVector,
    R: Rng + ?Sized,
{
    if !pool.contains(&start) {
        return Err(Error::invalid(format!("chain start {start} is not in the pool")));
    }
    let mut reference = start;
    loop {
        let reference_uv = uv(reference);
        let oracle = Oracle::new(|id| strong_dominates(&uv(id), &reference_uv), cost);
        match bbht_search(pool, &oracle, rng, ledger)?.found {
            Some(better) => reference = better,
            None => return Ok(reference),
        }
    }
}
