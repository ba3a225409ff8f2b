//! Deterministic online call admission control on hexagonal cellular
//! networks.
//!
//! The crate bundles the online algorithms (greedy, the 2:2:2:1 reservation
//! scheme and its x:y family, and the directional thirds scheme for
//! triangle-free layouts), the adversaries that drive them, an exact offline
//! optimum for small instances, and exact-arithmetic checkers for the
//! amortized accounting behind the competitive-ratio bounds.

pub mod adversary;
pub mod error;
pub mod harness;
pub mod hexnet;
pub mod ledger;
pub mod offline_opt;
pub mod online_algs;
pub mod spectrum;

pub use error::{Error, Result};
pub use hexnet::{color_of, CellId, Color, NeighborConfig, Network};
pub use offline_opt::{exact_optimum, DemandVector, OptimumWitness};
pub use online_algs::{run_sequence, Algorithm, Outcome, RunTrace};
pub use spectrum::{AssignmentState, Direction, FreqRange, Frequency, FrequencyPartition};
