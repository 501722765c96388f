use proptest::prelude::*;
use wmhn_core::pareto::{
    brute_force_front, brute_force_opf, compare, pareto_completion, pareto_distance, strong_dominates, weak_dominates,
    Dominance, Optimality,
};
use wmhn_core::{ParetoFront, RouteId, UtilityVector};

// Small discrete grids so that ties and equal components are common.
fn uv_strategy() -> impl Strategy<Value = UtilityVector> {
    (0u32..6, 0u32..6, 1u32..5).prop_map(|(b, p, d)| UtilityVector::new(b as f64 * 0.01, 60.0 + p as f64, d).unwrap())
}

fn population() -> impl Strategy<Value = Vec<(RouteId, UtilityVector)>> {
    prop::collection::vec(uv_strategy(), 1..40).prop_map(|uvs| {
        uvs.into_iter()
            .enumerate()
            .map(|(i, uv)| (RouteId(i as u64), uv))
            .collect()
    })
}

fn naive_front(routes: &[(RouteId, UtilityVector)]) -> Vec<RouteId> {
    routes
        .iter()
        .filter(|(_, x)| {
            !routes.iter().any(|(_, y)| {
                let (a, b) = (y.components(), x.components());
                (0..3).all(|k| a[k] < b[k])
            })
        })
        .map(|(id, _)| *id)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn strong_dominance_is_strict_partial_order(a in uv_strategy(), b in uv_strategy(), c in uv_strategy()) {
        prop_assert!(!strong_dominates(&a, &a));
        prop_assert!(!(strong_dominates(&a, &b) && strong_dominates(&b, &a)));
        if strong_dominates(&a, &b) && strong_dominates(&b, &c) {
            prop_assert!(strong_dominates(&a, &c));
        }
        if strong_dominates(&a, &b) {
            prop_assert!(weak_dominates(&a, &b));
        }
        prop_assert!(!weak_dominates(&a, &a));
    }

    #[test]
    fn compare_is_consistent(a in uv_strategy(), b in uv_strategy()) {
        let flipped = match compare(&a, &b) {
            Dominance::StrongDominates => Dominance::StronglyDominatedBy,
            Dominance::WeakDominates => Dominance::WeaklyDominatedBy,
            Dominance::Equal => Dominance::Equal,
            Dominance::Incomparable => Dominance::Incomparable,
            Dominance::WeaklyDominatedBy => Dominance::WeakDominates,
            Dominance::StronglyDominatedBy => Dominance::StrongDominates,
        };
        prop_assert_eq!(compare(&b, &a), flipped);
        prop_assert_eq!(compare(&a, &b) == Dominance::StrongDominates, strong_dominates(&a, &b));
        prop_assert_eq!(compare(&a, &b) == Dominance::Equal, a == b);
    }

    #[test]
    fn opf_is_zero_distance_set(routes in population()) {
        let front = brute_force_opf(&routes);
        prop_assert_eq!(front.ids().collect::<Vec<_>>(), naive_front(&routes));
        prop_assert!(front.is_consistent());
        prop_assert!(!front.is_empty());
        let all: Vec<_> = routes.iter().map(|(_, uv)| *uv).collect();
        for (id, uv) in &routes {
            let d = pareto_distance(uv, &all).unwrap();
            prop_assert!((0.0..1.0).contains(&d));
            prop_assert_eq!(d == 0.0, front.contains(*id));
        }
        prop_assert_eq!(pareto_completion(&front, &front).unwrap(), 1.0);
    }

    #[test]
    fn strong_front_within_weak_front(routes in population()) {
        let weak = brute_force_front(&routes, Optimality::Weak);
        let strong = brute_force_front(&routes, Optimality::Strong);
        for id in strong.ids() {
            prop_assert!(weak.contains(id));
        }
    }

    #[test]
    fn dominated_addition_keeps_front(routes in population(), pick in any::<prop::sample::Index>()) {
        let front = brute_force_opf(&routes);
        let (_, base) = routes[pick.index(routes.len())];
        let worse = UtilityVector::new(base.ber + 0.01, base.power + 1.0, base.delay + 1).unwrap();
        let mut extended = routes.clone();
        extended.push((RouteId(routes.len() as u64), worse));
        prop_assert_eq!(brute_force_opf(&extended), front);
    }

    #[test]
    fn incremental_repair_matches_batch(routes in population()) {
        // Feeding every route through self-repair in reverse order,
        // skipping dominated newcomers, rebuilds the batch front.
        let mut front = ParetoFront::new();
        for (id, uv) in routes.iter().rev() {
            if !front.dominates(uv) {
                front.insert_with_repair(*id, *uv);
            }
        }
        prop_assert_eq!(front, brute_force_opf(&routes));
    }
}

#[test]
fn distance_rejects_empty_population() {
    let uv = UtilityVector::new(0.1, 1.0, 1).unwrap();
    assert!(pareto_distance(&uv, &[]).is_err());
    assert!(pareto_completion(&ParetoFront::new(), &ParetoFront::new()).is_err());
}
