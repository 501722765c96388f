//! Network model: random topologies, per-link channel quality, and the
//! per-route utility vector `[BER, power, delay]`.
//!
//! Links use uncoded QPSK over Rayleigh fading with decode-and-forward
//! relaying. The receiver's interference level acts as its noise floor, so a
//! link's mean SNR is `tx_power - path_loss - interference_rx` in dB.

use std::collections::HashMap;
use std::f64::consts::PI;
use std::io;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::route::{self, Route, RouteId};

/// Side of the square coverage area in meters.
pub const AREA_SIDE_M: f64 = 100.0;

/// Relays closer than this to another node are redrawn.
const MIN_SEPARATION_M: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioConstants {
    pub pathloss_exponent: f64,
    /// Carrier wavelength in meters.
    pub carrier_wavelength: f64,
    /// Transmit power in dBm.
    pub tx_power: f64,
    /// Mean per-node interference in dBm.
    pub interference_mean: f64,
    /// Standard deviation of the per-node interference in dB.
    pub interference_std: f64,
}

impl Default for RadioConstants {
    fn default() -> Self {
        RadioConstants {
            pathloss_exponent: 3.0,
            carrier_wavelength: 0.125,
            tx_power: 20.0,
            interference_mean: -90.0,
            interference_std: 10.0,
        }
    }
}

impl RadioConstants {
    pub fn validate(&self) -> Result<()> {
        let finite = [
            self.pathloss_exponent,
            self.carrier_wavelength,
            self.tx_power,
            self.interference_mean,
            self.interference_std,
        ]
        .iter()
        .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("radio constants must be finite"));
        }
        if self.pathloss_exponent <= 0.0 {
            return Err(Error::invalid("path-loss exponent must be positive"));
        }
        if self.carrier_wavelength <= 0.0 {
            return Err(Error::invalid("carrier wavelength must be positive"));
        }
        if self.interference_std < 0.0 {
            return Err(Error::invalid("interference std must be non-negative"));
        }
        Ok(())
    }
}

/// `[BER, power, delay]` of a route or sub-route; all components are
/// minimized.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UtilityVector {
    pub ber: f64,
    /// Sum of the per-hop linear path losses.
    pub power: f64,
    /// Hop count.
    pub delay: u32,
}

impl UtilityVector {
    pub const COMPONENTS: usize = 3;

    pub fn new(ber: f64, power: f64, delay: u32) -> Result<Self> {
        if !(ber.is_finite() && (0.0..=0.5).contains(&ber)) {
            return Err(Error::invalid(format!("BER {ber} outside [0, 0.5]")));
        }
        if !(power.is_finite() && power >= 0.0) {
            return Err(Error::invalid(format!("power {power} must be finite and non-negative")));
        }
        Ok(UtilityVector { ber, power, delay })
    }

    pub fn components(&self) -> [f64; 3] {
        [self.ber, self.power, f64::from(self.delay)]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Topology {
    pub n_nodes: usize,
    /// `positions[0]` is the source, `positions[n_nodes - 1]` the destination.
    pub positions: Vec<[f64; 2]>,
    pub interference_dbm: Vec<f64>,
    pub constants: RadioConstants,
}

pub fn dbm_to_linear(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// Average bit error probability of coherent QPSK (per bit) over Rayleigh
/// fading at mean SNR `snr` (linear).
pub fn rayleigh_qpsk_ber(snr: f64) -> f64 {
    0.5 * (1.0 - (snr / (1.0 + snr)).sqrt())
}

/// Output error rate of two cascaded binary symmetric channels.
pub fn bsc_combine(p1: f64, p2: f64) -> f64 {
    p1 + p2 - 2.0 * p1 * p2
}

pub fn generate_topology(n_nodes: usize, seed: u64, constants: RadioConstants) -> Result<Topology> {
    if n_nodes < 2 {
        return Err(Error::invalid(format!("n_nodes must be at least 2, got {n_nodes}")));
    }
    constants.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut positions = Vec::with_capacity(n_nodes);
    positions.push([0.0, 0.0]);
    positions.push([AREA_SIDE_M, AREA_SIDE_M]);
    for _ in 2..n_nodes {
        let p = loop {
            let candidate = [rng.random_range(0.0..=AREA_SIDE_M), rng.random_range(0.0..=AREA_SIDE_M)];
            if positions.iter().all(|q| distance(q, &candidate) >= MIN_SEPARATION_M) {
                break candidate;
            }
        };
        positions.push(p);
    }
    // Destination goes last.
    let dn = positions.remove(1);
    positions.push(dn);

    let noise = Normal::new(constants.interference_mean, constants.interference_std)
        .map_err(|e| Error::invalid(format!("interference distribution: {e}")))?;
    let interference_dbm = (0..n_nodes).map(|_| noise.sample(&mut rng)).collect();

    Ok(Topology {
        n_nodes,
        positions,
        interference_dbm,
        constants,
    })
}

fn distance(a: &[f64; 2], b: &[f64; 2]) -> f64 {
    (a[0] - b[0]).hypot(a[1] - b[1])
}

impl Topology {
    pub fn validate(&self) -> Result<()> {
        if self.n_nodes < 2 {
            return Err(Error::invalid(format!(
                "n_nodes must be at least 2, got {}",
                self.n_nodes
            )));
        }
        if self.positions.len() != self.n_nodes || self.interference_dbm.len() != self.n_nodes {
            return Err(Error::invalid(format!(
                "expected {} positions and interference levels, got {} and {}",
                self.n_nodes,
                self.positions.len(),
                self.interference_dbm.len()
            )));
        }
        self.constants.validate()?;
        if self
            .positions
            .iter()
            .flatten()
            .chain(&self.interference_dbm)
            .any(|v| !v.is_finite())
        {
            return Err(Error::invalid("topology contains non-finite values"));
        }
        for i in 0..self.n_nodes {
            for j in i + 1..self.n_nodes {
                if distance(&self.positions[i], &self.positions[j]) < MIN_SEPARATION_M {
                    return Err(Error::invalid(format!("nodes {} and {} coincide", i + 1, j + 1)));
                }
            }
        }
        Ok(())
    }

    fn check_link(&self, i: usize, j: usize) -> Result<()> {
        for id in [i, j] {
            if id < 1 || id > self.n_nodes {
                return Err(Error::invalid(format!("node {id} out of range 1..={}", self.n_nodes)));
            }
        }
        if i == j {
            return Err(Error::invalid(format!("link {i}->{j} has zero length")));
        }
        Ok(())
    }

    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        self.check_link(i, j)?;
        Ok(distance(&self.positions[i - 1], &self.positions[j - 1]))
    }

    /// Free-space-style path loss in dB between nodes `i` and `j` (1-based).
    pub fn path_loss_db(&self, i: usize, j: usize) -> Result<f64> {
        self.check_link(i, j)?;
        Ok(self.path_loss_db_unchecked(i, j))
    }

    fn path_loss_db_unchecked(&self, i: usize, j: usize) -> f64 {
        let d = distance(&self.positions[i - 1], &self.positions[j - 1]);
        let c = &self.constants;
        10.0 * c.pathloss_exponent * (4.0 * PI * d / c.carrier_wavelength).log10()
    }

    /// Mean received SNR (linear) of the link `i -> j`.
    pub fn link_snr(&self, i: usize, j: usize) -> Result<f64> {
        self.check_link(i, j)?;
        Ok(self.link_snr_unchecked(i, j))
    }

    fn link_snr_unchecked(&self, i: usize, j: usize) -> f64 {
        let snr_db = self.constants.tx_power - self.path_loss_db_unchecked(i, j) - self.interference_dbm[j - 1];
        dbm_to_linear(snr_db)
    }

    pub fn link_ber(&self, i: usize, j: usize) -> Result<f64> {
        self.check_link(i, j)?;
        Ok(rayleigh_qpsk_ber(self.link_snr_unchecked(i, j)))
    }

    fn check_path(&self, nodes: &[usize]) -> Result<()> {
        if nodes.len() < 2 {
            return Err(Error::invalid("a path needs at least one hop"));
        }
        nodes.windows(2).try_for_each(|w| self.check_link(w[0], w[1]))
    }

    fn hop_bers<'a>(&'a self, nodes: &'a [usize]) -> impl Iterator<Item = f64> + 'a {
        nodes
            .windows(2)
            .map(|w| rayleigh_qpsk_ber(self.link_snr_unchecked(w[0], w[1])))
    }

    pub fn path_power(&self, nodes: &[usize]) -> Result<f64> {
        self.check_path(nodes)?;
        Ok(nodes
            .windows(2)
            .map(|w| dbm_to_linear(self.path_loss_db_unchecked(w[0], w[1])))
            .sum())
    }

    pub fn path_ber(&self, nodes: &[usize]) -> Result<f64> {
        self.check_path(nodes)?;
        Ok(self.hop_bers(nodes).fold(0.0, bsc_combine))
    }

    /// Utility vector of an arbitrary loop-free node path (route or prefix).
    pub fn path_uv(&self, nodes: &[usize]) -> Result<UtilityVector> {
        let ber = self.path_ber(nodes)?;
        let power = self.path_power(nodes)?;
        Ok(UtilityVector {
            ber,
            power,
            delay: (nodes.len() - 1) as u32,
        })
    }

    pub fn route_power(&self, route: &Route) -> f64 {
        self.path_power(route.nodes()).expect("route belongs to this topology")
    }

    pub fn route_ber(&self, route: &Route) -> f64 {
        self.path_ber(route.nodes()).expect("route belongs to this topology")
    }

    pub fn route_uv(&self, route: &Route) -> UtilityVector {
        self.path_uv(route.nodes()).expect("route belongs to this topology")
    }

    /// Sum of the hop BERs together with the bound on its excess over the
    /// exact cascaded BER: the sum over ordered pairs of distinct hops of
    /// the product of their BERs.
    pub fn route_ber_additive(&self, route: &Route) -> (f64, f64) {
        let hops: Vec<f64> = self.hop_bers(route.nodes()).collect();
        additive_ber(&hops)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let topo: Topology = serde_json::from_str(text)?;
        topo.validate()?;
        Ok(topo)
    }

    /// JSON with every float written as 17 significant digits in exponential
    /// notation.
    pub fn to_json(&self) -> String {
        let mut buf = Vec::new();
        let mut ser = serde_json::Serializer::with_formatter(&mut buf, ScientificFormatter);
        self.serialize(&mut ser).expect("topology is always serializable");
        String::from_utf8(buf).expect("serde_json emits UTF-8")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Topology::from_json(&text)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()).map_err(|e| Error::io(path, e))
    }
}

/// `(sum of hop BERs, pairwise-product bound)` for a list of hop BERs.
pub fn additive_ber(hops: &[f64]) -> (f64, f64) {
    let sum: f64 = hops.iter().sum();
    // sum over i != j of p_i p_j = (sum p)^2 - sum p^2, computed directly to
    // avoid cancellation.
    let mut bound = 0.0;
    for (i, pi) in hops.iter().enumerate() {
        for pj in &hops[i + 1..] {
            bound += 2.0 * pi * pj;
        }
    }
    (sum, bound)
}

/// Hop count via the Kronecker-delta form `sum (1 - delta(x_i, x_{i+1}))`.
pub fn kronecker_delay(nodes: &[usize]) -> u32 {
    nodes.windows(2).filter(|w| w[0] != w[1]).count() as u32
}

pub fn route_delay(route: &Route) -> u32 {
    route.hops() as u32
}

struct ScientificFormatter;

impl serde_json::ser::Formatter for ScientificFormatter {
    fn write_f64<W: ?Sized + io::Write>(&mut self, writer: &mut W, value: f64) -> io::Result<()> {
        write!(writer, "{value:.16e}")
    }
}

/// Anything that can score routes and their sub-routes.
pub trait UtilitySource: Sync {
    fn n_nodes(&self) -> usize;

    fn route_uv(&self, route: &Route) -> UtilityVector;

    /// UV of the route minus its last hop. Fails for the direct route.
    fn subroute_uv(&self, route: &Route) -> Result<UtilityVector>;
}

impl UtilitySource for Topology {
    fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    fn route_uv(&self, route: &Route) -> UtilityVector {
        Topology::route_uv(self, route)
    }

    fn subroute_uv(&self, route: &Route) -> Result<UtilityVector> {
        let prefix = route.subroute()?;
        self.path_uv(prefix.nodes())
    }
}

/// Externally supplied utility vectors keyed by route, bypassing the channel
/// model. Every legitimate route must have a UV, and every multi-hop route a
/// sub-route UV.
#[derive(Debug, Clone)]
pub struct UvTable {
    n_nodes: usize,
    routes: HashMap<RouteId, UtilityVector>,
    subroutes: HashMap<RouteId, UtilityVector>,
}

impl UvTable {
    /// `entries` holds `(route, route UV, sub-route UV)`; the sub-route UV is
    /// `None` only for the direct route.
    pub fn new(
        n_nodes: usize,
        entries: impl IntoIterator<Item = (Route, UtilityVector, Option<UtilityVector>)>,
    ) -> Result<Self> {
        let mut routes = HashMap::new();
        let mut subroutes = HashMap::new();
        for (r, uv, sub) in entries {
            let id = route::encode(&r, n_nodes)?;
            if routes.insert(id, uv).is_some() {
                return Err(Error::invalid(format!("duplicate UV for route {r}")));
            }
            match (r.is_direct(), sub) {
                (true, None) => {}
                (true, Some(_)) => {
                    return Err(Error::invalid("the direct route has no sub-route UV"));
                }
                (false, Some(s)) => {
                    subroutes.insert(id, s);
                }
                (false, None) => {
                    return Err(Error::invalid(format!("missing sub-route UV for {r}")));
                }
            }
        }
        let total = route::count_routes(n_nodes)?;
        if routes.len() as u64 != total {
            return Err(Error::invalid(format!(
                "UV table covers {} of {total} routes",
                routes.len()
            )));
        }
        Ok(UvTable {
            n_nodes,
            routes,
            subroutes,
        })
    }

    pub fn get(&self, id: RouteId) -> Option<UtilityVector> {
        self.routes.get(&id).copied()
    }
}

impl UtilitySource for UvTable {
    fn n_nodes(&self) -> usize {
        self.n_nodes
    }

    fn route_uv(&self, route: &Route) -> UtilityVector {
        let id = route::encode(route, self.n_nodes).expect("route belongs to this table");
        self.routes[&id]
    }

    fn subroute_uv(&self, route: &Route) -> Result<UtilityVector> {
        route.subroute()?;
        let id = route::encode(route, self.n_nodes)?;
        Ok(self.subroutes[&id])
    }
}
