use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use wmhn_core::golden::{self, OPTIMAL_FRONT, STAGE2_SURVIVORS};
use wmhn_core::net::generate_topology;
use wmhn_core::optimizers::{
    brute_force, cdp_run, cdp_run_with, eqpo_run, ndqio_benchmark, ndqo_benchmark, pndqio_run, run_algorithm,
    Algorithm, SubrouteTest,
};
use wmhn_core::qsearch::{backward_search, CostLedger};
use wmhn_core::route::{encode, Route};
use wmhn_core::{ParetoFront, RadioConstants, RouteId, UtilitySource};

fn id(route: &str) -> RouteId {
    encode(&route.parse::<Route>().unwrap(), golden::N_NODES).unwrap()
}

fn ids(routes: &[&str]) -> Vec<RouteId> {
    let mut out: Vec<RouteId> = routes.iter().map(|r| id(r)).collect();
    out.sort();
    out
}

fn front_of(table: &dyn UtilitySource, routes: &[&str]) -> ParetoFront {
    routes
        .iter()
        .map(|r| (id(r), table.route_uv(&r.parse().unwrap())))
        .collect()
}

#[test]
fn cdp_reference_trellis() {
    let table = golden::reference_table();
    let report = cdp_run(&table).unwrap();
    assert_eq!(report.opf.ids().collect::<Vec<_>>(), ids(&OPTIMAL_FRONT));
    assert_eq!(report.stages[1].survivors, ids(&STAGE2_SURVIVORS));
    assert_eq!(report.stages[0].survivors, ids(&["{1 2 5}", "{1 3 5}", "{1 4 5}"]));
    let generated: Vec<RouteId> = report.stages.iter().flat_map(|s| s.generated.iter().copied()).collect();
    assert!(!generated.contains(&id("{1 2 3 4 5}")));
    assert!(!generated.contains(&id("{1 2 4 3 5}")));
    assert_eq!(report.ledger.parallel(), report.ledger.sequential());
}

#[test]
fn weak_subroute_test_on_reference_table() {
    // {1 4 2 5}'s sub-route ties {1 3 5} in delay and loses on the rest.
    let table = golden::reference_table();
    let report = cdp_run_with(&table, SubrouteTest::Weak).unwrap();
    assert_eq!(
        report.stages[1].survivors,
        ids(&["{1 3 2 5}", "{1 3 4 5}", "{1 4 3 5}"])
    );
    assert_eq!(report.opf.ids().collect::<Vec<_>>(), ids(&OPTIMAL_FRONT));
}

#[test]
fn eqpo_reference_trellis() {
    let table = golden::reference_table();
    let mut exact = 0;
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let report = eqpo_run(&table, &mut rng).unwrap();
        if report.opf.ids().collect::<Vec<_>>() == ids(&OPTIMAL_FRONT)
            && report.stages.get(1).map(|s| s.survivors.clone()) == Some(vec![id("{1 3 2 5}")])
        {
            exact += 1;
        }
    }
    assert!(exact >= 196, "{exact}/200");
}

#[test]
fn backward_search_on_reference_stage_two() {
    let table = golden::reference_table();
    let stage1 = front_of(&table, &["{1 5}", "{1 2 5}", "{1 3 5}", "{1 4 5}"]);
    let generated = [
        "{1 2 3 5}",
        "{1 2 4 5}",
        "{1 3 2 5}",
        "{1 3 4 5}",
        "{1 4 2 5}",
        "{1 4 3 5}",
    ];
    let mut pool = ids(&generated);
    pool.extend(stage1.ids());
    let lookup = |rid: RouteId| table.get(rid).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..200 {
        let out = backward_search(&pool, &stage1, &lookup, &mut rng, &mut CostLedger::new()).unwrap();
        assert!(matches!(out.found, Some(r) if r == id("{1 3 2 5}")) || out.found.is_none());
    }
}

#[test]
fn pndqio_from_empty_front_on_short_routes() {
    let table = golden::reference_table();
    let routes = ["{1 5}", "{1 2 5}", "{1 3 5}", "{1 4 5}"];
    let s_gen = ids(&routes);
    let lookup = |rid: RouteId| table.get(rid).unwrap();
    let mut complete = 0;
    for seed in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut ledger = CostLedger::new();
        let front = pndqio_run(&s_gen, &ParetoFront::new(), &lookup, &mut rng, &mut ledger).unwrap();
        assert!(front.is_consistent());
        if front.ids().collect::<Vec<_>>() == s_gen {
            complete += 1;
        }
        assert!(ledger.sequential() >= ledger.parallel());
    }
    assert!(complete >= 190, "{complete}/200");
}

#[test]
fn benchmarkers_find_reference_front() {
    let table = golden::reference_table();
    let truth = ids(&OPTIMAL_FRONT);
    let trials = 300;
    let (mut ndqio_hits, mut ndqo_hits) = (0, 0);
    for seed in 0..trials {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a = ndqio_benchmark(&table, &mut rng).unwrap();
        ndqio_hits += usize::from(a.opf.ids().collect::<Vec<_>>() == truth);
        let b = ndqo_benchmark(&table, &mut rng).unwrap();
        ndqo_hits += usize::from(b.opf.ids().collect::<Vec<_>>() == truth);
        assert_eq!(b.ledger.parallel(), b.ledger.sequential());
    }
    assert!(ndqio_hits as f64 >= 0.99 * trials as f64, "ndqio {ndqio_hits}/{trials}");
    assert!(ndqo_hits as f64 >= 0.99 * trials as f64, "ndqo {ndqo_hits}/{trials}");
}

#[test]
fn cdp_matches_brute_force_on_random_networks() {
    for n in 3..=7 {
        for seed in 0..40 {
            let topo = generate_topology(n, seed, RadioConstants::default()).unwrap();
            let truth = brute_force(&topo).unwrap().opf;
            assert_eq!(cdp_run(&topo).unwrap().opf, truth, "n={n} seed={seed}");
            assert_eq!(
                cdp_run_with(&topo, SubrouteTest::Weak).unwrap().opf,
                truth,
                "n={n} seed={seed}"
            );
        }
    }
}

#[test]
fn eqpo_fronts_are_consistent_subsets() {
    for seed in 0..40 {
        let topo = generate_topology(7, seed, RadioConstants::default()).unwrap();
        let report = run_algorithm(Algorithm::Eqpo, &topo, seed).unwrap();
        assert!(report.opf.is_consistent());
        assert!(report.stages_processed() <= 6);
        assert_eq!(report.seed, Some(seed));
        assert!(report.ledger.sequential() >= report.ledger.parallel());
        // Survivors are exactly the members new to each stage front.
        for w in report.stages.windows(2) {
            let fresh: Vec<RouteId> = w[1].opf.iter().copied().filter(|r| !w[0].opf.contains(r)).collect();
            assert_eq!(w[1].survivors, fresh);
        }
    }
}

#[test]
fn runs_are_reproducible() {
    let topo = generate_topology(6, 9, RadioConstants::default()).unwrap();
    for algorithm in Algorithm::ALL {
        let a = run_algorithm(algorithm, &topo, 5).unwrap();
        let b = run_algorithm(algorithm, &topo, 5).unwrap();
        assert_eq!(a.to_json(), b.to_json(), "{algorithm}");
    }
}

#[test]
fn report_json_fields() {
    let table = golden::reference_table();
    let report = cdp_run(&table).unwrap();
    let doc: serde_json::Value = serde_json::from_str(&report.to_json()).unwrap();
    assert_eq!(doc["algorithm"], "cdp");
    assert_eq!(doc["n_nodes"], 5);
    assert_eq!(doc["opf"].as_array().unwrap().len(), 5);
    assert_eq!(doc["stages"], report.stages_processed());
    assert_eq!(doc["per_stage_counts"][1], serde_json::json!([6, 5, 4]));
    assert_eq!("ndqio".parse::<Algorithm>().unwrap(), Algorithm::Ndqio);
    assert!("quantum".parse::<Algorithm>().is_err());
}
