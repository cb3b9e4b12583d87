//! Operational semantics of words on a complex: walking, constituent
//! resolution at merged vertices, and the fermionic traversal rule.

use crate::error::{Error, Result};
use crate::lattice::{EdgeId, EdgeLabel, LatticeComplex, VertexId};
use crate::words::{Letter, Sign, Word};
use std::collections::{BTreeMap, BTreeSet};

/// Whether a fermionic violation aborts the walk or is merely recorded.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FermionicMode {
    #[default]
    Strict,
    Permissive,
}

/// State carried along a walk. `occupied_constituent` is the original vertex
/// identity the walk sits on inside the (possibly merged) current vertex; a
/// spatial letter moves along the unique live edge with that generator label
/// leaving the occupied constituent.
#[derive(Debug, Clone)]
pub struct WalkState {
    pub current_vertex: VertexId,
    pub occupied_constituent: VertexId,
    /// Directed spatial edges traversed, as (edge, traversal direction).
    pub traversed_directed_edges: BTreeSet<(EdgeId, Sign)>,
    /// Every traversal in order, repeats included.
    pub step_log: Vec<(EdgeId, Sign)>,
    /// Tadpole rotations consumed per vertex, in order. Each rotation uses
    /// the registry entry with the lowest index not yet used by this walk;
    /// indices beyond the materialized ones are touched lazily.
    pub tadpole_rotations: BTreeMap<VertexId, Vec<i8>>,
}

impl WalkState {
    fn start(complex: &LatticeComplex, at: VertexId) -> Self {
        WalkState {
            current_vertex: complex.rep(at),
            occupied_constituent: at,
            traversed_directed_edges: BTreeSet::new(),
            step_log: Vec::new(),
            tadpole_rotations: BTreeMap::new(),
        }
    }
}

/// True when no directed spatial edge was traversed twice. Tadpole rotations
/// are exempt from the rule.
pub fn validate_fermionic(state: &WalkState) -> bool {
    let mut seen = BTreeSet::new();
    state.step_log.iter().all(|step| seen.insert(*step))
}

/// Resolves one spatial step from an occupied constituent. The positive
/// direction of an edge is its base→head orientation.
pub(crate) fn spatial_step(
    complex: &LatticeComplex,
    occupied: VertexId,
    generator: u8,
    sign: Sign,
) -> Result<(EdgeId, VertexId)> {
    for &e in complex.incident_of(occupied) {
        let data = complex.edge(e)?;
        if !data.is_live() || data.label != EdgeLabel::Generator(generator) {
            continue;
        }
        match sign {
            Sign::Pos if data.base == occupied => return Ok((e, data.head)),
            Sign::Neg if data.head == occupied => return Ok((e, data.base)),
            _ => {}
        }
    }
    Err(Error::DeadEnd {
        at: occupied,
        letter: Letter::spatial(generator, sign).to_string(),
    })
}

/// Walks a word letter by letter from `start`. Only level-0 spatial letters
/// and tadpole letters act on a complex; refined and half-rotation letters
/// are algebraic only.
pub fn walk(
    complex: &LatticeComplex,
    start: VertexId,
    word: &Word,
    mode: FermionicMode,
) -> Result<WalkState> {
    if !complex.contains_vertex(start) {
        return Err(Error::UnknownVertex(start));
    }
    let mut state = WalkState::start(complex, start);
    for letter in &word.letters {
        step(complex, &mut state, *letter, mode)?;
    }
    Ok(state)
}

pub(crate) fn step(
    complex: &LatticeComplex,
    state: &mut WalkState,
    letter: Letter,
    mode: FermionicMode,
) -> Result<()> {
    match letter {
        Letter::HalfRotation { .. } => {
            return Err(Error::InvalidWalkLetter(letter.to_string()));
        }
        Letter::Spatial { level, .. } if level > 0 => {
            return Err(Error::InvalidWalkLetter(letter.to_string()));
        }
        Letter::Tadpole { sign } => {
            state
                .tadpole_rotations
                .entry(state.current_vertex)
                .or_default()
                .push(sign.as_i8());
        }
        Letter::Spatial { generator, sign, .. } => {
            let (edge, landing) = spatial_step(complex, state.occupied_constituent, generator, sign)?;
            if !state.traversed_directed_edges.insert((edge, sign))
                && mode == FermionicMode::Strict
            {
                return Err(Error::FermionicViolation { edge, dir: sign.as_i8() });
            }
            state.step_log.push((edge, sign));
            state.occupied_constituent = landing;
            state.current_vertex = complex.rep(landing);
        }
    }
    Ok(())
}
