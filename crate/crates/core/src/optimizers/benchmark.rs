//! Full-search quantum benchmarkers: they see the whole route space at once
//! and exploit no trellis structure.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::Result;
use crate::net::UtilitySource;
use crate::pareto::{brute_force_opf, ParetoFront};
use crate::qsearch::{dominance_chain_with_cost, ActivationCost, CostLedger};

use super::pndqio::pndqio_traced;
use super::{all_ids, Algorithm, Checkpoint, Evaluator, OptimizerReport, StageTrace};

/// Iterative search with an initially empty front, over every route in one
/// flat stage.
pub fn ndqio_benchmark<R: Rng + ?Sized>(source: &dyn UtilitySource, rng: &mut R) -> Result<OptimizerReport> {
    let mut eval = Evaluator::new(source);
    let n = eval.n_nodes();
    let ids = all_ids(n)?;
    let mut ledger = CostLedger::new();
    let mut checkpoints = Vec::new();
    let opf = {
        let uv = eval.lookup(&ids);
        pndqio_traced(&ids, &ParetoFront::new(), &uv, rng, &mut ledger, Some(&mut checkpoints))?
    };
    let stage = StageTrace {
        generated: ids,
        opf: opf.ids().collect(),
        survivors: Vec::new(),
    };
    Ok(OptimizerReport {
        algorithm: Algorithm::Ndqio,
        n_nodes: n,
        seed: None,
        opf,
        ledger,
        stages: vec![stage],
        checkpoints,
    })
}

/// One dominance chain from every route, charged without hardware
/// parallelism. The chain ends are pooled and filtered classically.
pub fn ndqo_benchmark<R: Rng + ?Sized>(source: &dyn UtilitySource, rng: &mut R) -> Result<OptimizerReport> {
    let mut eval = Evaluator::new(source);
    let n = eval.n_nodes();
    let ids = all_ids(n)?;
    let mut ledger = CostLedger::new();
    let mut checkpoints = Vec::new();
    let uv = eval.lookup(&ids);

    let mut ends = BTreeSet::new();
    for &start in &ids {
        let end = dominance_chain_with_cost(start, &ids, &uv, ActivationCost::CLASSICAL, rng, &mut ledger)?;
        if ends.insert(end) {
            let pooled: ParetoFront = ends.iter().map(|&id| (id, uv(id))).collect();
            Checkpoint::record(&mut Some(&mut checkpoints), &ledger, &pooled);
        }
    }
    let pooled: Vec<_> = ends.iter().map(|&id| (id, uv(id))).collect();
    let p = pooled.len() as u64;
    ledger.charge_comparisons(p * (p - 1));
    let opf = brute_force_opf(&pooled);
    Checkpoint::record(&mut Some(&mut checkpoints), &ledger, &opf);

    let stage = StageTrace {
        generated: ids,
        opf: opf.ids().collect(),
        survivors: Vec::new(),
    };
    Ok(OptimizerReport {
        algorithm: Algorithm::Ndqo,
        n_nodes: n,
        seed: None,
        opf,
        ledger,
        stages: vec![stage],
        checkpoints,
    })
}
