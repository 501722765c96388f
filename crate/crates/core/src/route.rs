//! Legitimate routes, their canonical indexing, and the two generation rules.
//!
//! Node ids are 1-based: the source is node `1`, the destination is node
//! `n_nodes`, and relays are `2..=n_nodes - 1`. A legitimate route visits each
//! relay at most once.
//!
//! Routes are indexed by their position in a canonical listing: first by hop
//! count, then lexicographically by relay sequence. Within a hop-count block
//! the rank is a mixed-radix (factoradic-style) number whose digits are the
//! positions of each relay among the relays not yet used.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Position of a route in the canonical listing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct RouteId(pub u64);

impl fmt::Display for RouteId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Route {
    nodes: Vec<usize>,
}

/// The SN-to-last-relay prefix of a route. Not itself a legitimate route.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RoutePrefix {
    nodes: Vec<usize>,
}

impl Route {
    /// Validates `nodes` as a route of a network with `n_nodes` nodes.
    pub fn new(nodes: Vec<usize>, n_nodes: usize) -> Result<Self> {
        if n_nodes < 2 {
            return Err(Error::invalid(format!("n_nodes must be at least 2, got {n_nodes}")));
        }
        if nodes.len() < 2 {
            return Err(Error::invalid("a route needs at least the source and destination"));
        }
        if nodes[0] != 1 {
            return Err(Error::invalid(format!("route must start at node 1, got {}", nodes[0])));
        }
        if *nodes.last().unwrap() != n_nodes {
            return Err(Error::invalid(format!(
                "route must end at node {n_nodes}, got {}",
                nodes.last().unwrap()
            )));
        }
        let mut seen = vec![false; n_nodes + 1];
        for &relay in &nodes[1..nodes.len() - 1] {
            if relay < 2 || relay >= n_nodes {
                return Err(Error::invalid(format!("node {relay} is not a relay")));
            }
            if seen[relay] {
                return Err(Error::invalid(format!("relay {relay} visited twice")));
            }
            seen[relay] = true;
        }
        Ok(Route { nodes })
    }

    pub fn direct(n_nodes: usize) -> Result<Self> {
        Route::new(vec![1, n_nodes], n_nodes)
    }

    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn relays(&self) -> &[usize] {
        &self.nodes[1..self.nodes.len() - 1]
    }

    pub fn hops(&self) -> usize {
        self.nodes.len() - 1
    }

    pub fn n_nodes(&self) -> usize {
        *self.nodes.last().unwrap()
    }

    pub fn is_direct(&self) -> bool {
        self.nodes.len() == 2
    }

    /// Drops the destination, leaving the route up to its last relay.
    pub fn subroute(&self) -> Result<RoutePrefix> {
        if self.is_direct() {
            return Err(Error::invalid("the direct route has no sub-route"));
        }
        Ok(RoutePrefix {
            nodes: self.nodes[..self.nodes.len() - 1].to_vec(),
        })
    }

    fn unused_relays(&self) -> Vec<usize> {
        let n = self.n_nodes();
        let mut used = vec![false; n + 1];
        for &r in self.relays() {
            used[r] = true;
        }
        (2..n).filter(|&r| !used[r]).collect()
    }

    fn with_inserted(&self, position: usize, relay: usize) -> Route {
        let mut nodes = Vec::with_capacity(self.nodes.len() + 1);
        nodes.extend_from_slice(&self.nodes[..position]);
        nodes.push(relay);
        nodes.extend_from_slice(&self.nodes[position..]);
        Route { nodes }
    }

    /// Children obtained by inserting one unused relay right before the
    /// destination.
    pub fn generate_append(&self) -> Vec<Route> {
        let before_dn = self.nodes.len() - 1;
        self.unused_relays()
            .into_iter()
            .map(|relay| self.with_inserted(before_dn, relay))
            .collect()
    }

    /// Children obtained by inserting one unused relay into any link of the
    /// route. The result is sorted and free of duplicates.
    pub fn generate_insert_anywhere(&self) -> Vec<Route> {
        let unused = self.unused_relays();
        let mut out = BTreeSet::new();
        for position in 1..self.nodes.len() {
            for &relay in &unused {
                out.insert(self.with_inserted(position, relay));
            }
        }
        out.into_iter().collect()
    }
}

impl RoutePrefix {
    pub fn nodes(&self) -> &[usize] {
        &self.nodes
    }

    pub fn hops(&self) -> usize {
        self.nodes.len() - 1
    }
}

fn write_braced(f: &mut fmt::Formatter<'_>, nodes: &[usize]) -> fmt::Result {
    f.write_str("{")?;
    for (i, n) in nodes.iter().enumerate() {
        if i > 0 {
            f.write_str(" ")?;
        }
        write!(f, "{n}")?;
    }
    f.write_str("}")
}

impl fmt::Display for Route {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_braced(f, &self.nodes)
    }
}

impl fmt::Display for RoutePrefix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_braced(f, &self.nodes)
    }
}

/// Parses the `{1 3 2 5}` notation. The destination id fixes `n_nodes`.
impl FromStr for Route {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::Parse(format!("route {s:?} is not of the form {{1 ... n}}")))?;
        let nodes = inner
            .split_whitespace()
            .map(|tok| {
                tok.parse::<usize>()
                    .map_err(|_| Error::Parse(format!("bad node id {tok:?} in route {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        let n_nodes = *nodes.last().ok_or_else(|| Error::Parse(format!("empty route {s:?}")))?;
        Route::new(nodes, n_nodes)
    }
}

/// Number of `k`-permutations of `m` items, `m! / (m - k)!`.
fn falling(m: u64, k: u64) -> Option<u64> {
    (0..k).try_fold(1u64, |acc, i| acc.checked_mul(m - i))
}

fn relay_count(n_nodes: usize) -> Result<u64> {
    if n_nodes < 2 {
        return Err(Error::invalid(format!("n_nodes must be at least 2, got {n_nodes}")));
    }
    Ok(n_nodes as u64 - 2)
}

fn overflow(n_nodes: usize) -> Error {
    Error::invalid(format!("route count for {n_nodes} nodes overflows 64 bits"))
}

/// Total number of legitimate routes, `sum_{k=0..M} M!/(M-k)!` with
/// `M = n_nodes - 2`.
pub fn count_routes(n_nodes: usize) -> Result<u64> {
    let m = relay_count(n_nodes)?;
    (0..=m).try_fold(0u64, |acc, k| {
        falling(m, k)
            .and_then(|p| acc.checked_add(p))
            .ok_or_else(|| overflow(n_nodes))
    })
}

/// Index of the first route with `k` relays.
fn block_offset(m: u64, k: u64) -> Option<u64> {
    (0..k).try_fold(0u64, |acc, t| acc.checked_add(falling(m, t)?))
}

pub fn encode(route: &Route, n_nodes: usize) -> Result<RouteId> {
    let m = relay_count(n_nodes)?;
    if route.n_nodes() != n_nodes {
        return Err(Error::invalid(format!(
            "route {route} does not belong to a {n_nodes}-node network"
        )));
    }
    let relays = route.relays();
    let k = relays.len() as u64;
    let mut index = block_offset(m, k).ok_or_else(|| overflow(n_nodes))?;
    let mut available: Vec<usize> = (2..n_nodes).collect();
    for (i, &relay) in relays.iter().enumerate() {
        let digit = available.iter().position(|&r| r == relay).unwrap() as u64;
        available.remove(digit as usize);
        let i = i as u64;
        let block = falling(m - i - 1, k - i - 1).ok_or_else(|| overflow(n_nodes))?;
        index = digit
            .checked_mul(block)
            .and_then(|d| index.checked_add(d))
            .ok_or_else(|| overflow(n_nodes))?;
    }
    Ok(RouteId(index))
}

pub fn decode(id: RouteId, n_nodes: usize) -> Result<Route> {
    let m = relay_count(n_nodes)?;
    let total = count_routes(n_nodes)?;
    if id.0 >= total {
        return Err(Error::invalid(format!(
            "route index {id} out of range for {n_nodes} nodes ({total} routes)"
        )));
    }
    let mut rank = id.0;
    let mut k = 0u64;
    // Cannot overflow: every block is bounded by `total`.
    loop {
        let size = falling(m, k).unwrap();
        if rank < size {
            break;
        }
        rank -= size;
        k += 1;
    }
    let mut available: Vec<usize> = (2..n_nodes).collect();
    let mut nodes = Vec::with_capacity(k as usize + 2);
    nodes.push(1);
    for i in 0..k {
        let block = falling(m - i - 1, k - i - 1).unwrap();
        let digit = (rank / block) as usize;
        rank %= block;
        nodes.push(available.remove(digit));
    }
    nodes.push(n_nodes);
    Ok(Route { nodes })
}

/// Every legitimate route, in index order.
pub fn enumerate(n_nodes: usize) -> Result<Vec<Route>> {
    let total = count_routes(n_nodes)?;
    let total = usize::try_from(total).map_err(|_| overflow(n_nodes))?;
    let relays: Vec<usize> = (2..n_nodes).collect();
    let mut out = Vec::with_capacity(total);
    let mut prefix = vec![1];
    let mut used = vec![false; n_nodes + 1];
    for k in 0..=relays.len() {
        extend_permutations(&relays, k, &mut prefix, &mut used, n_nodes, &mut out);
    }
    Ok(out)
}

fn extend_permutations(
    relays: &[usize],
    remaining: usize,
    prefix: &mut Vec<usize>,
    used: &mut [bool],
    n_nodes: usize,
    out: &mut Vec<Route>,
) {
    if remaining == 0 {
        let mut nodes = prefix.clone();
        nodes.push(n_nodes);
        out.push(Route { nodes });
        return;
    }
    for &r in relays {
        if used[r] {
            continue;
        }
        used[r] = true;
        prefix.push(r);
        extend_permutations(relays, remaining - 1, prefix, used, n_nodes, out);
        prefix.pop();
        used[r] = false;
    }
}
