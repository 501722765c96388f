//! Exact trellis dynamic programming.
//!
//! Stage 1 holds the direct route and every two-hop route. Each later stage
//! extends the previous survivors by one relay placed right before the
//! destination. A generated route survives only if no route considered so far
//! dominates its sub-route: a route whose sub-route is dominated cannot
//! produce a Pareto-optimal child, so pruning it loses nothing and the final
//! front is exact.

use std::collections::BTreeSet;

use crate::error::Result;
use crate::pareto::{brute_force_opf, strong_dominates, weak_dominates, ParetoFront};
use crate::qsearch::CostLedger;
use crate::route::RouteId;

use super::{Algorithm, Checkpoint, Evaluator, OptimizerReport, StageTrace};
use crate::net::UtilitySource;

/// Which dominance relation prunes a generated route via its sub-route.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SubrouteTest {
    /// Prune when some considered route strongly dominates the sub-route.
    /// Prunes a subset of what [`SubrouteTest::Weak`] prunes.
    #[default]
    Strong,
    /// Prune when some considered route weakly dominates the sub-route.
    Weak,
}

pub fn cdp_run(source: &dyn UtilitySource) -> Result<OptimizerReport> {
    cdp_run_with(source, SubrouteTest::default())
}

pub fn cdp_run_with(source: &dyn UtilitySource, test: SubrouteTest) -> Result<OptimizerReport> {
    let mut eval = Evaluator::new(source);
    let n = eval.n_nodes();
    let relays = n as u64 - 2;
    let last_stage = (n - 2).max(1);
    let mut ledger = CostLedger::new();
    let mut stages = Vec::new();
    let mut checkpoints = Vec::new();

    // The direct route followed by every single-relay route.
    let mut generated: Vec<RouteId> = (0..=relays).map(RouteId).collect();
    let mut opf = ParetoFront::new();
    let prunes = |a: &_, b: &_| match test {
        SubrouteTest::Strong => strong_dominates(a, b),
        SubrouteTest::Weak => weak_dominates(a, b),
    };

    for stage in 1..=last_stage {
        let pool: BTreeSet<RouteId> = generated.iter().copied().chain(opf.ids()).collect();
        let pool: Vec<RouteId> = pool.into_iter().collect();
        let pool_uvs = eval.pairs(&pool);
        let p = pool.len() as u64;
        opf = brute_force_opf(&pool_uvs);
        ledger.charge_comparisons(p * (p - 1));
        Checkpoint::record(&mut Some(&mut checkpoints), &ledger, &opf);

        let mut survivors = Vec::new();
        if stage < last_stage {
            let candidates: Vec<RouteId> = generated.iter().copied().filter(|id| id.0 != 0).collect();
            for &id in &candidates {
                let sub = eval.subroute_uv(id)?;
                if !pool_uvs.iter().any(|(_, uv)| prunes(uv, &sub)) {
                    survivors.push(id);
                }
            }
            ledger.charge_comparisons(candidates.len() as u64 * p);
        }

        stages.push(StageTrace {
            generated: generated.clone(),
            opf: opf.ids().collect(),
            survivors: survivors.clone(),
        });
        if survivors.is_empty() {
            break;
        }

        let children: BTreeSet<RouteId> = survivors
            .iter()
            .flat_map(|&id| eval.route(id).generate_append())
            .map(|r| eval.id(&r))
            .collect();
        generated = children.into_iter().collect();
    }

    Ok(OptimizerReport {
        algorithm: Algorithm::Cdp,
        n_nodes: n,
        seed: None,
        opf,
        ledger,
        stages,
        checkpoints,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{generate_topology, RadioConstants};
    use crate::optimizers::brute_force;

    #[test]
    fn matches_brute_force_on_small_networks() {
        for n in 2..=6 {
            for seed in 0..20 {
                let topo = generate_topology(n, seed, RadioConstants::default()).unwrap();
                let truth = brute_force(&topo).unwrap().opf;
                for test in [SubrouteTest::Strong, SubrouteTest::Weak] {
                    let report = cdp_run_with(&topo, test).unwrap();
                    assert_eq!(report.opf, truth, "n={n} seed={seed} {test:?}");
                    assert!(report.stages_processed() < n);
                }
            }
        }
    }

    #[test]
    fn weak_test_prunes_at_least_as_much() {
        for seed in 0..20 {
            let topo = generate_topology(7, seed, RadioConstants::default()).unwrap();
            let strong = cdp_run_with(&topo, SubrouteTest::Strong).unwrap();
            let weak = cdp_run_with(&topo, SubrouteTest::Weak).unwrap();
            assert!(weak.ledger.sequential() <= strong.ledger.sequential());
        }
    }
}
