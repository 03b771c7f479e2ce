//! Exact graph-pebbling toolkit.
//!
//! A pebbling move removes two pebbles from a vertex and places one pebble on
//! an adjacent vertex. This crate computes exact reachability statistics for
//! pebble distributions on small graphs, the cooperation/excess machinery that
//! connects distributions to coverage, the auxiliary-graph transformation
//! engine used to certify the `coop - DC <= (Δ-2)·CE` inequality, closed-form
//! lower bounds on the optimal pebbling number (including the `⌈2mn/13⌉` torus
//! bound), an LP/ILP model emitter, and an exact optimal-pebbling solver for
//! desk-scale graphs.
//!
//! The crate is organized around the pipeline:
//!
//! * [`graph`] — immutable graphs with precomputed all-pairs distances,
//!   plus generators for paths, cycles, grids and tori.
//! * [`engine`] — exact `reach`, excess, coverage and solvability by
//!   exhaustive search over distribution states.
//! * [`decompose`] — unit decompositions and cooperation statistics
//!   (`coop`, `DC`, `CE`, per-vertex cooperation excess, `M` values,
//!   coopexcess paths and C-blocks).
//! * [`aux`] — the labeled auxiliary graph and its transformations,
//!   with the invariant audits that certify the per-instance inequality.
//! * [`bounds`] — effect, fractional/structural/grid lower bounds and
//!   LP-format model emission.
//! * [`solver`] — exact optimal pebbling number by size-ordered search.
//! * [`verify`] — the empirical verification suites behind `pebble verify`.

pub mod aux;
pub mod bounds;
pub mod cli;
pub mod decompose;
pub mod engine;
mod error;
pub mod graph;
pub mod solver;
pub mod verify;

pub use decompose::{CooperationReport, Trajectory, UnitDistribution};
pub use engine::{PebbleDistribution, PebblingMove, ReachabilityReport};
pub use error::Error;
pub use graph::{Graph, GraphSpec, Vertex};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
