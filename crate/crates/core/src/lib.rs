//! Effective resistances on finite graphs and planar lattices.
//!
//! - [`graph`]: simple graphs with exact or float conductances, subdivision,
//!   and the edge-list format.
//! - [`lattice`]: square, triangular, hexagonal and truncated-square balls
//!   and tori.
//! - [`exact`]: big-rational resistances, hitting times and walk traces.
//! - [`solver`]: conjugate-gradient resistances and infinite-lattice
//!   extrapolation.
//! - [`walks`]: walk enumeration and closed-walk counts.
//! - [`foster`]: Foster identities on finite graphs and lattice sum rules.
//! - [`randwalk`]: Monte Carlo first-passage times.

pub mod closed_form;
pub mod error;
pub mod exact;
pub mod foster;
pub mod graph;
pub mod lattice;
pub mod par;
pub mod randwalk;
pub mod solver;
pub mod suite;
pub mod walks;

pub use error::{FosterError, GraphError, LatticeError, OracleError, SimError, SolveError, WalkError};
pub use graph::{Graph, GraphBuilder, Scalar, ScalarKind, VertexId};
pub use lattice::{BoundaryMode, LatticeFamily, LatticeGraph, PairClass, Site};
