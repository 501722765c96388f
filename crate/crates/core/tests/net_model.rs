use proptest::prelude::*;
use wmhn_core::net::{additive_ber, bsc_combine, generate_topology, kronecker_delay, route_delay};
use wmhn_core::route::enumerate;
use wmhn_core::{RadioConstants, Topology, UtilitySource};

/// Independent link model: free-space loss with exponent 3 at 2.4 GHz
/// (lambda = 0.125 m), 20 dBm transmit power, Rayleigh-faded QPSK.
fn oracle_link(topo: &Topology, i: usize, j: usize) -> (f64, f64) {
    let [x1, y1] = topo.positions[i - 1];
    let [x2, y2] = topo.positions[j - 1];
    let d = ((x1 - x2).powi(2) + (y1 - y2).powi(2)).sqrt();
    let loss_db = 30.0 * (4.0 * std::f64::consts::PI * d / 0.125).log10();
    let gamma = 10f64.powf((20.0 - loss_db - topo.interference_dbm[j - 1]) / 10.0);
    let ber = (1.0 - (gamma / (1.0 + gamma)).sqrt()) / 2.0;
    (ber, 10f64.powf(loss_db / 10.0))
}

/// End-to-end BER via the product form of cascaded binary symmetric
/// channels, `(1 - prod(1 - 2 p_i)) / 2`.
fn oracle_route(topo: &Topology, nodes: &[usize]) -> (f64, f64) {
    let mut keep = 1.0;
    let mut power = 0.0;
    for w in nodes.windows(2) {
        let (p, l) = oracle_link(topo, w[0], w[1]);
        keep *= 1.0 - 2.0 * p;
        power += l;
    }
    ((1.0 - keep) / 2.0, power)
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

#[test]
fn route_uvs_match_independent_model() {
    for seed in 0..50 {
        let topo = generate_topology(6, seed, RadioConstants::default()).unwrap();
        for route in enumerate(6).unwrap() {
            let uv = topo.route_uv(&route);
            let (ber, power) = oracle_route(&topo, route.nodes());
            assert!(rel_close(uv.ber, ber, 1e-9), "{route}: {} vs {ber}", uv.ber);
            assert!(rel_close(uv.power, power, 1e-12), "{route}");
            assert_eq!(uv.delay, kronecker_delay(route.nodes()));
            assert_eq!(uv.delay, route_delay(&route));
        }
    }
}

#[test]
fn topology_geometry() {
    let topo = generate_topology(9, 5, RadioConstants::default()).unwrap();
    assert_eq!(topo.positions[0], [0.0, 0.0]);
    assert_eq!(topo.positions[8], [100.0, 100.0]);
    for p in &topo.positions[1..8] {
        assert!((0.0..=100.0).contains(&p[0]) && (0.0..=100.0).contains(&p[1]));
    }
    assert_eq!(topo.interference_dbm.len(), 9);
    assert!(generate_topology(1, 0, RadioConstants::default()).is_err());
}

#[test]
fn interference_statistics() {
    let samples: Vec<f64> = (0..400)
        .flat_map(|s| {
            generate_topology(10, s, RadioConstants::default())
                .unwrap()
                .interference_dbm
        })
        .collect();
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    let sd = (samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    // Standard error of the mean is 10 / sqrt(4000) ~ 0.16 dB.
    assert!((mean + 90.0).abs() < 0.8, "mean {mean}");
    assert!((sd - 10.0).abs() < 0.5, "sd {sd}");
}

#[test]
fn same_seed_same_topology() {
    let a = generate_topology(8, 77, RadioConstants::default()).unwrap();
    let b = generate_topology(8, 77, RadioConstants::default()).unwrap();
    assert_eq!(a.to_json(), b.to_json());
    let c = generate_topology(8, 78, RadioConstants::default()).unwrap();
    assert_ne!(a, c);
}

#[test]
fn json_file_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("topo.json");
    let topo = generate_topology(7, 3, RadioConstants::default()).unwrap();
    topo.save(&path).unwrap();
    let back = Topology::load(&path).unwrap();
    assert_eq!(back, topo);
    for route in enumerate(7).unwrap() {
        assert_eq!(back.route_uv(&route), topo.route_uv(&route));
    }
    assert!(Topology::load(&dir.path().join("missing.json")).is_err());
}

#[test]
fn malformed_topologies_rejected() {
    let topo = generate_topology(4, 1, RadioConstants::default()).unwrap();
    let mut doc: serde_json::Value = serde_json::from_str(&topo.to_json()).unwrap();
    doc["n_nodes"] = 5.into();
    assert!(Topology::from_json(&doc.to_string()).is_err());
    let mut doc: serde_json::Value = serde_json::from_str(&topo.to_json()).unwrap();
    doc["positions"][1] = serde_json::json!([0.0, 0.0]);
    assert!(Topology::from_json(&doc.to_string()).is_err());
    assert!(Topology::from_json("{").is_err());
}

#[test]
fn additive_form_examples() {
    let (sum, bound) = additive_ber(&[0.1, 0.2]);
    assert!((sum - 0.3).abs() < 1e-15);
    assert!((bound - 0.04).abs() < 1e-15);
    assert_eq!(additive_ber(&[0.25]), (0.25, 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn subroute_strictly_below_route(seed in any::<u64>(), n in 3usize..=7) {
        let topo = generate_topology(n, seed, RadioConstants::default()).unwrap();
        for route in enumerate(n).unwrap().iter().filter(|r| !r.is_direct()) {
            let full = topo.route_uv(route);
            let sub = UtilitySource::subroute_uv(&topo, route).unwrap();
            prop_assert!(sub.ber < full.ber);
            prop_assert!(sub.power < full.power);
            prop_assert!(sub.delay < full.delay);
        }
    }

    #[test]
    fn additive_ber_bounds(seed in any::<u64>()) {
        let topo = generate_topology(7, seed, RadioConstants::default()).unwrap();
        for route in enumerate(7).unwrap() {
            let exact = topo.route_ber(&route);
            let (approx, bound) = topo.route_ber_additive(&route);
            let slack = 8.0 * f64::EPSILON * approx;
            prop_assert!(approx - exact >= -slack);
            prop_assert!(approx - exact <= bound + slack);
        }
    }

    #[test]
    fn cascading_never_helps(p1 in 0.0f64..0.5, p2 in 1e-9f64..0.5) {
        let combined = bsc_combine(p1, p2);
        prop_assert!(combined > p1);
        prop_assert!(combined <= 0.5);
        prop_assert!((combined - bsc_combine(p2, p1)).abs() <= f64::EPSILON);
        // Product form of two cascaded binary symmetric channels.
        prop_assert!((combined - (1.0 - (1.0 - 2.0 * p1) * (1.0 - 2.0 * p2)) / 2.0).abs() < 1e-15);
    }
}
