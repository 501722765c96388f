//! Front finding seeded with the front of the previous stage.

use rand::Rng;

use crate::error::{Error, Result};
use crate::net::UtilityVector;
use crate::pareto::ParetoFront;
use crate::qsearch::{backward_search, dominance_chain, ActivationCost, CostLedger};
use crate::route::RouteId;

use super::Checkpoint;

/// Consecutive empty backward searches after which the front is declared
/// complete.
const FAILURES_TO_STOP: u32 = 2;

/// Extends `prior_opf` with the non-dominated routes of `s_gen`.
///
/// Each round runs a backward search for a route the current front neither
/// holds nor dominates, climbs a dominance chain from it, evicts the front
/// members the chain's end dominates and inserts it. The loop stops after two
/// consecutive backward searches come back empty.
pub fn pndqio_run<F, R>(
    s_gen: &[RouteId],
    prior_opf: &ParetoFront,
    uv: &F,
    rng: &mut R,
    ledger: &mut CostLedger,
) -> Result<ParetoFront>
where
    F: Fn(RouteId) -> UtilityVector,
    R: Rng + ?Sized,
{
    pndqio_traced(s_gen, prior_opf, uv, rng, ledger, None)
}

pub(crate) fn pndqio_traced<F, R>(
    s_gen: &[RouteId],
    prior_opf: &ParetoFront,
    uv: &F,
    rng: &mut R,
    ledger: &mut CostLedger,
    mut trace: Option<&mut Vec<Checkpoint>>,
) -> Result<ParetoFront>
where
    F: Fn(RouteId) -> UtilityVector,
    R: Rng + ?Sized,
{
    if s_gen.is_empty() {
        return Err(Error::invalid("P-NDQIO needs a non-empty route set"));
    }
    let mut opf = prior_opf.clone();
    let mut discoveries = 0u64;
    let mut failures = 0;
    while failures < FAILURES_TO_STOP {
        match backward_search(s_gen, &opf, uv, rng, ledger)?.found {
            Some(candidate) => {
                failures = 0;
                let best = dominance_chain(candidate, s_gen, uv, rng, ledger)?;
                discoveries += 1;
                // Self-repair compares the newcomer with the prior front and
                // with everything discovered in this call.
                ledger.charge(ActivationCost::DOMINANCE, discoveries + prior_opf.len() as u64);
                opf.insert_with_repair(best, uv(best));
                Checkpoint::record(&mut trace, ledger, &opf);
            }
            None => failures += 1,
        }
    }
    Ok(opf)
}

#[cfg(test)]
mod tests {
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    use super::*;

    fn uv(ber: f64, power: f64, delay: u32) -> UtilityVector {
        UtilityVector { ber, power, delay }
    }

    #[test]
    fn dominated_stage_leaves_prior_untouched() {
        let uvs = [uv(0.1, 1.0, 1), uv(0.2, 2.0, 2), uv(0.3, 3.0, 3)];
        let lookup = |id: RouteId| uvs[id.0 as usize];
        let prior: ParetoFront = [(RouteId(0), uvs[0])].into_iter().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let mut ledger = CostLedger::new();
        let ids = [RouteId(0), RouteId(1), RouteId(2)];
        let out = pndqio_run(&ids, &prior, &lookup, &mut rng, &mut ledger).unwrap();
        assert_eq!(out, prior);
        // Exactly two timed-out backward searches over three items.
        assert_eq!(ledger.parallel(), 2.0 * 8.0);
    }

    #[test]
    fn self_repair_evicts_prior_member() {
        // Route 1 is in the prior front but route 2 dominates it.
        let uvs = [uv(0.01, 1.0, 1), uv(0.3, 5.0, 3), uv(0.2, 0.5, 2)];
        let lookup = |id: RouteId| uvs[id.0 as usize];
        let prior: ParetoFront = [(RouteId(0), uvs[0]), (RouteId(1), uvs[1])].into_iter().collect();
        for seed in 0..50 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut ledger = CostLedger::new();
            let out = pndqio_run(&[RouteId(2)], &prior, &lookup, &mut rng, &mut ledger).unwrap();
            assert_eq!(out.ids().collect::<Vec<_>>(), vec![RouteId(0), RouteId(2)]);
        }
    }

    #[test]
    fn empty_set_rejected() {
        let lookup = |_: RouteId| uv(0.1, 1.0, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(pndqio_run(&[], &ParetoFront::new(), &lookup, &mut rng, &mut CostLedger::new()).is_err());
    }
}
