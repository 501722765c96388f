//! A five-node reference network given directly as utility vectors.
//!
//! Node coordinates are not part of the scenario, so its routes are scored
//! through a [`UvTable`] instead of the channel model. Its optimal front is
//! `{1 5}`, `{1 2 5}`, `{1 3 5}`, `{1 4 5}`, `{1 3 2 5}`.

use crate::net::{UtilityVector, UvTable};
use crate::route::Route;

pub const N_NODES: usize = 5;

/// `(route, route UV, sub-route UV)`, each UV as `(BER, power, delay)`.
#[allow(clippy::type_complexity)]
const ROWS: [(&str, (f64, f64, u32), Option<(f64, f64, u32)>); 16] = [
    ("{1 5}", (4.52e-4, 74.15, 1), None),
    ("{1 2 5}", (2.52e-4, 73.10, 2), Some((2.52e-4, 73.10, 1))),
    ("{1 3 5}", (2.35e-4, 70.89, 2), Some((3.13e-5, 57.30, 1))),
    ("{1 4 5}", (1.43e-2, 71.76, 2), Some((1.41e-2, 67.50, 1))),
    ("{1 2 3 5}", (9.49e-4, 76.09, 3), Some((7.45e-4, 74.61, 2))),
    ("{1 2 4 5}", (1.91e-2, 75.72, 3), Some((1.89e-2, 74.46, 2))),
    ("{1 3 2 5}", (1.36e-4, 69.55, 3), Some((1.36e-4, 69.54, 2))),
    ("{1 3 4 5}", (1.29e-2, 71.74, 3), Some((1.28e-2, 67.46, 2))),
    ("{1 4 2 5}", (1.42e-2, 71.19, 3), Some((1.42e-2, 71.19, 2))),
    ("{1 4 3 5}", (1.46e-2, 73.50, 3), Some((1.44e-2, 70.27, 2))),
    ("{1 2 3 4 5}", (1.36e-2, 76.36, 4), Some((1.34e-2, 75.30, 3))),
    ("{1 2 4 3 5}", (1.94e-2, 76.50, 4), Some((1.92e-2, 75.18, 3))),
    ("{1 3 2 4 5}", (1.90e-2, 74.13, 4), Some((1.88e-2, 72.18, 3))),
    ("{1 3 4 2 5}", (1.28e-2, 71.18, 4), Some((1.28e-2, 71.17, 3))),
    ("{1 4 2 3 5}", (1.49e-2, 75.23, 4), Some((1.47e-2, 73.35, 3))),
    ("{1 4 3 2 5}", (1.45e-2, 72.82, 4), Some((1.45e-2, 72.81, 3))),
];

pub const OPTIMAL_FRONT: [&str; 5] = ["{1 5}", "{1 2 5}", "{1 3 5}", "{1 4 5}", "{1 3 2 5}"];

/// Three-hop routes whose sub-route no considered route dominates.
pub const STAGE2_SURVIVORS: [&str; 4] = ["{1 3 2 5}", "{1 3 4 5}", "{1 4 2 5}", "{1 4 3 5}"];

fn to_uv((ber, power, delay): (f64, f64, u32)) -> UtilityVector {
    UtilityVector::new(ber, power, delay).expect("reference UVs are valid")
}

pub fn reference_table() -> UvTable {
    let entries = ROWS.iter().map(|(route, uv, sub)| {
        let route: Route = route.parse().expect("reference routes are valid");
        (route, to_uv(*uv), sub.map(to_uv))
    });
    UvTable::new(N_NODES, entries).expect("reference table covers every route")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::UtilitySource;
    use crate::pareto::{brute_force_opf, pareto_distance};
    use crate::route::{encode, enumerate};

    #[test]
    fn injected_vectors_returned_verbatim() {
        let table = reference_table();
        for (route, uv, _) in ROWS {
            let route: Route = route.parse().unwrap();
            assert_eq!(table.route_uv(&route), to_uv(uv));
        }
    }

    #[test]
    fn brute_force_front() {
        let table = reference_table();
        let pairs: Vec<_> = enumerate(N_NODES)
            .unwrap()
            .iter()
            .map(|r| (encode(r, N_NODES).unwrap(), table.route_uv(r)))
            .collect();
        let front = brute_force_opf(&pairs);
        let expected: Vec<_> = OPTIMAL_FRONT
            .iter()
            .map(|s| encode(&s.parse().unwrap(), N_NODES).unwrap())
            .collect();
        assert_eq!(front.ids().collect::<Vec<_>>(), expected);

        let all: Vec<_> = pairs.iter().map(|(_, uv)| *uv).collect();
        for (id, uv) in &pairs {
            let d = pareto_distance(uv, &all).unwrap();
            assert_eq!(d == 0.0, front.contains(*id));
        }
        // {1 2 3 5} is strongly dominated by {1 5}, {1 2 5} and {1 3 5}.
        let x = table.route_uv(&"{1 2 3 5}".parse().unwrap());
        assert_eq!(pareto_distance(&x, &all).unwrap(), 3.0 / 16.0);
    }
}
