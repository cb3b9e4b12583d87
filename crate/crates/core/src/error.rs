//! Error types shared across the crate.

use crate::lattice::{EdgeId, VertexId};
use thiserror::Error;

/// Everything that can go wrong while building, mutating, or measuring a
/// complex.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("unknown edge {0}")]
    UnknownEdge(EdgeId),

    #[error("reducible root systems are not supported: {0}")]
    ReducibleSystem(String),

    #[error("unsupported root system: {0}")]
    UnsupportedSystem(String),

    #[error("generator index {index} out of range for {system} ({count} generators)")]
    GeneratorOutOfRange {
        index: usize,
        system: String,
        count: usize,
    },

    #[error("edge {0} is a tadpole (both endpoints currently coincide)")]
    TadpoleEdge(EdgeId),

    #[error("edge {0} is not live")]
    EdgeNotLive(EdgeId),

    #[error("decontraction out of order: record {0} is not the newest entry involving its survivor")]
    OutOfOrderDecontraction(u64),

    #[error("no contraction record with sequence number {0}")]
    UnknownRecord(u64),

    #[error("dead end: no live {letter} edge leaves constituent {at}")]
    DeadEnd { at: VertexId, letter: String },

    #[error("fermionic rule violated: directed edge {edge} walked twice in direction {dir:+}")]
    FermionicViolation { edge: EdgeId, dir: i8 },

    #[error("letter {0} cannot act on a complex")]
    InvalidWalkLetter(String),

    #[error("holonomy undefined at {base}: {reason}")]
    HolonomyUndefined {
        base: VertexId,
        reason: String,
        /// Directed edges traversed before the walk died.
        partial: Vec<(EdgeId, i8)>,
    },

    #[error("inadmissible contraction set: {0}")]
    InadmissibleSet(String),

    #[error("vertices {0} and {1} are not connected by live edges")]
    Unreachable(VertexId, VertexId),

    #[error("insufficient sample span: {0}")]
    InsufficientSpan(String),

    #[error("insufficient statistics: return probability is zero at t={0} inside the fit window")]
    InsufficientStatistics(usize),

    #[error("cannot compare cyclic with non-cyclic words")]
    CyclicMismatch,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid complex document: {0}")]
    InvalidDocument(String),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
