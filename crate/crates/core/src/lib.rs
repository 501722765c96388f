//! Pareto-optimal routing for wireless multihop networks.
//!
//! The crate models a fully connected network of a source, a destination and
//! a cloud of relays, scores every loop-free route by its utility vector
//! `[BER, power, delay]`, and finds the set of routes that no other route
//! strongly dominates. Several optimizers are provided:
//!
//! * [`optimizers::brute_force`], the all-pairs ground truth;
//! * [`optimizers::cdp_run`], an exact trellis dynamic program that prunes
//!   routes whose sub-route is already dominated;
//! * [`optimizers::eqpo_run`], a relaxed trellis driven by a classically
//!   simulated quantum search core ([`qsearch`]);
//! * [`optimizers::ndqio_benchmark`] and [`optimizers::ndqo_benchmark`], the
//!   full-search quantum benchmarkers.
//!
//! Every quantum search call is accounted in a [`qsearch::CostLedger`] of
//! parallel and sequential cost-function evaluations, which the experiment
//! [`harness`] aggregates across Monte-Carlo sweeps.

pub mod error;
pub mod golden;
pub mod harness;
pub mod net;
pub mod optimizers;
pub mod pareto;
pub mod qsearch;
pub mod route;

pub use error::{Error, Result};
pub use net::{RadioConstants, Topology, UtilitySource, UtilityVector, UvTable};
pub use pareto::ParetoFront;
pub use qsearch::CostLedger;
pub use route::{Route, RouteId};
