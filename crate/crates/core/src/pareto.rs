//! Pareto dominance, the brute-force optimal front, and the accuracy metrics
//! used to score optimizer output.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::net::UtilityVector;
use crate::route::RouteId;

/// Full outcome of comparing `a` against `b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dominance {
    /// Every component of `a` is strictly smaller.
    StrongDominates,
    /// `a <= b` everywhere, strictly somewhere, but not everywhere.
    WeakDominates,
    Equal,
    Incomparable,
    WeaklyDominatedBy,
    StronglyDominatedBy,
}

pub fn compare(a: &UtilityVector, b: &UtilityVector) -> Dominance {
    compare_components(&a.components(), &b.components())
}

fn compare_components(a: &[f64], b: &[f64]) -> Dominance {
    assert_eq!(a.len(), b.len(), "utility vectors of different arity");
    let (mut less, mut greater) = (0, 0);
    for (x, y) in a.iter().zip(b) {
        if x < y {
            less += 1;
        } else if x > y {
            greater += 1;
        }
    }
    let k = a.len();
    match (less, greater) {
        (0, 0) => Dominance::Equal,
        (l, 0) if l == k => Dominance::StrongDominates,
        (_, 0) => Dominance::WeakDominates,
        (0, g) if g == k => Dominance::StronglyDominatedBy,
        (0, _) => Dominance::WeaklyDominatedBy,
        _ => Dominance::Incomparable,
    }
}

pub fn strong_dominates(a: &UtilityVector, b: &UtilityVector) -> bool {
    a.ber < b.ber && a.power < b.power && a.delay < b.delay
}

/// `a <= b` componentwise with at least one strict inequality.
pub fn weak_dominates(a: &UtilityVector, b: &UtilityVector) -> bool {
    let le = a.ber <= b.ber && a.power <= b.power && a.delay <= b.delay;
    le && (a.ber < b.ber || a.power < b.power || a.delay < b.delay)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Optimality {
    /// No member is strongly dominated by any route.
    #[default]
    Weak,
    /// No member is weakly dominated by any route.
    Strong,
}

/// A set of routes with their UVs, kept sorted by route index.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ParetoFront {
    members: BTreeMap<RouteId, UtilityVector>,
}

impl ParetoFront {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, id: RouteId) -> bool {
        self.members.contains_key(&id)
    }

    pub fn ids(&self) -> impl Iterator<Item = RouteId> + '_ {
        self.members.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (RouteId, &UtilityVector)> + '_ {
        self.members.iter().map(|(id, uv)| (*id, uv))
    }

    /// True if some member strongly dominates `uv`.
    pub fn dominates(&self, uv: &UtilityVector) -> bool {
        self.members.values().any(|m| strong_dominates(m, uv))
    }

    /// Evicts every member strongly dominated by `uv`, then inserts it.
    /// Returns the number of comparisons made.
    pub fn insert_with_repair(&mut self, id: RouteId, uv: UtilityVector) -> usize {
        let compared = self.members.len();
        self.members.retain(|_, m| !strong_dominates(&uv, m));
        self.members.insert(id, uv);
        compared
    }

    /// True if no member strongly dominates another.
    pub fn is_consistent(&self) -> bool {
        self.members
            .values()
            .all(|a| !self.members.values().any(|b| strong_dominates(b, a)))
    }
}

impl FromIterator<(RouteId, UtilityVector)> for ParetoFront {
    fn from_iter<I: IntoIterator<Item = (RouteId, UtilityVector)>>(iter: I) -> Self {
        ParetoFront {
            members: iter.into_iter().collect(),
        }
    }
}

/// All-pairs filter: keeps every route that no other route strongly
/// dominates.
pub fn brute_force_opf(routes: &[(RouteId, UtilityVector)]) -> ParetoFront {
    brute_force_front(routes, Optimality::Weak)
}

pub fn brute_force_front(routes: &[(RouteId, UtilityVector)], optimality: Optimality) -> ParetoFront {
    let beaten = |a: &UtilityVector, b: &UtilityVector| match optimality {
        Optimality::Weak => strong_dominates(a, b),
        Optimality::Strong => weak_dominates(a, b),
    };
    routes
        .iter()
        .filter(|(_, uv)| !routes.iter().any(|(_, other)| beaten(other, uv)))
        .map(|(id, uv)| (*id, *uv))
        .collect()
}

/// Fraction of `all` that strongly dominates `x`.
pub fn pareto_distance(x: &UtilityVector, all: &[UtilityVector]) -> Result<f64> {
    if all.is_empty() {
        return Err(Error::invalid("Pareto distance over an empty population"));
    }
    let dominators = all.iter().filter(|o| strong_dominates(o, x)).count();
    Ok(dominators as f64 / all.len() as f64)
}

/// Fraction of `truth` recovered in `found`.
pub fn pareto_completion(found: &ParetoFront, truth: &ParetoFront) -> Result<f64> {
    if truth.is_empty() {
        return Err(Error::invalid("Pareto completion against an empty front"));
    }
    let hit = truth.ids().filter(|id| found.contains(*id)).count();
    Ok(hit as f64 / truth.len() as f64)
}
