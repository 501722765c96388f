//! Relaxed trellis driven by simulated quantum search.
//!
//! Compared with the exact trellis, only routes newly found Pareto-optimal at
//! a stage survive into the next, and children may receive the new relay in
//! any link rather than only before the destination.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::Result;
use crate::net::UtilitySource;
use crate::pareto::ParetoFront;
use crate::qsearch::CostLedger;
use crate::route::RouteId;

use super::pndqio::pndqio_traced;
use super::{Algorithm, Checkpoint, Evaluator, OptimizerReport, StageTrace};

pub fn eqpo_run<R: Rng + ?Sized>(source: &dyn UtilitySource, rng: &mut R) -> Result<OptimizerReport> {
    let mut eval = Evaluator::new(source);
    let n = eval.n_nodes();
    let direct = RouteId(0);
    let mut ledger = CostLedger::new();
    let mut stages = Vec::new();
    let mut checkpoints = Vec::new();

    let mut opf: ParetoFront = [(direct, eval.uv(direct))].into_iter().collect();
    let mut survivors = vec![direct];
    Checkpoint::record(&mut Some(&mut checkpoints), &ledger, &opf);

    for _stage in 1..n {
        let generated: BTreeSet<RouteId> = survivors
            .iter()
            .flat_map(|&id| eval.route(id).generate_insert_anywhere())
            .map(|r| eval.id(&r))
            .collect();
        // Survivors already span every relay: nothing left to explore.
        if generated.is_empty() {
            break;
        }
        let pool: Vec<RouteId> = generated
            .iter()
            .copied()
            .chain(opf.ids())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let next = {
            let uv = eval.lookup(&pool);
            pndqio_traced(&pool, &opf, &uv, rng, &mut ledger, Some(&mut checkpoints))?
        };
        survivors = next.ids().filter(|id| !opf.contains(*id)).collect();
        opf = next;
        stages.push(StageTrace {
            generated: generated.into_iter().collect(),
            opf: opf.ids().collect(),
            survivors: survivors.clone(),
        });
        if survivors.is_empty() {
            break;
        }
    }

    Ok(OptimizerReport {
        algorithm: Algorithm::Eqpo,
        n_nodes: n,
        seed: None,
        opf,
        ledger,
        stages,
        checkpoints,
    })
}
