//! Simulation toolkit for a discrete model of space built from root-lattice
//! 1-skeleta with tadpole registries.
//!
//! The crate provides:
//!
//! - [`lattice`] — construction of finite lattice balls for the A3/B3/C3 root
//!   systems plus square and cubic reference lattices, adjacency queries, and
//!   Voronoi cell descriptors;
//! - [`words`] — the path-word algebra over spatial generators and tadpole
//!   rotations: reduction, displacement, rotation charge, and walks with
//!   fermionic edge accounting;
//! - [`topology`] — edge contraction with exact, registry-preserving undo,
//!   and midpoint edge splitting with cell connections;
//! - [`observables`] — the commutator-loop curvature operator and the
//!   entropy of contraction configurations;
//! - [`dynamics`] — stochastic expansion by edge splitting and zero-intercept
//!   recession-rate fits;
//! - [`spectral`] — random-walk return probabilities, spectral dimension
//!   estimation, and long-range face reattachment;
//! - [`experiment`] — reproducible experiment configs with byte-stable CSV
//!   and JSON outputs;
//! - [`io`] — the versioned complex document and the replay format.

pub mod dynamics;
pub mod error;
pub mod experiment;
pub mod io;
pub mod lattice;
pub mod observables;
pub mod spectral;
pub mod topology;
pub mod words;

pub use error::{Error, Result};
pub use lattice::{build_lattice, build_path, voronoi_cell, LatticeComplex, RootSystemKind};
