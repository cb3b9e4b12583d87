//! Versioned JSON document for complexes and the replay format that rebuilds
//! a complex from its construction parameters plus an ordered operation list.

use crate::error::{Error, Result};
use crate::lattice::{
    build_lattice, build_path, Coords, EdgeData, EdgeId, EdgeLabel, EdgeStatus, LatticeComplex,
    RootSystem, RootSystemKind, TadpoleRegistry, VertexData, VertexId,
};
use crate::topology::{contract, decontract_last, split_edge, ContractionRecord};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

pub const COMPLEX_FORMAT_VERSION: u32 = 1;
pub const REPLAY_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VertexDoc {
    pub id: VertexId,
    pub coords: Coords,
    pub tadpoles: TadpoleRegistry,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EdgeDoc {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
    pub generator: EdgeLabel,
    pub status: EdgeStatus,
}

/// On-disk form of a complex. Vertices are the current (live) ones; absorbed
/// identities are recoverable from the contraction log.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexDoc {
    pub version: u32,
    pub system: RootSystemKind,
    pub vertices: Vec<VertexDoc>,
    pub edges: Vec<EdgeDoc>,
    pub contraction_log: Vec<ContractionRecord>,
    pub rng_seed: u64,
}

impl LatticeComplex {
    pub fn to_doc(&self) -> ComplexDoc {
        ComplexDoc {
            version: COMPLEX_FORMAT_VERSION,
            system: self.kind(),
            vertices: self
                .live_vertices()
                .map(|v| {
                    let d = self.vertex(v).expect("live vertex");
                    VertexDoc { id: v, coords: d.coords, tadpoles: d.registry.clone() }
                })
                .collect(),
            edges: self
                .edges()
                .map(|e| EdgeDoc {
                    id: e.id,
                    u: e.base,
                    v: e.head,
                    generator: e.label,
                    status: e.status,
                })
                .collect(),
            contraction_log: self.contraction_log().to_vec(),
            rng_seed: self.rng_seed(),
        }
    }

    pub fn from_doc(doc: &ComplexDoc) -> Result<Self> {
        if doc.version != COMPLEX_FORMAT_VERSION {
            return Err(Error::InvalidDocument(format!(
                "unsupported complex format version {}",
                doc.version
            )));
        }
        let mut complex = LatticeComplex::empty(RootSystem::new(doc.system));
        complex.set_rng_seed(doc.rng_seed);

        let mut vertices: BTreeMap<VertexId, VertexData> = BTreeMap::new();
        for v in &doc.vertices {
            if vertices
                .insert(v.id, VertexData { coords: v.coords, registry: v.tadpoles.clone() })
                .is_some()
            {
                return Err(Error::InvalidDocument(format!("duplicate vertex {}", v.id)));
            }
        }
        // Absorbed vertices come back from the log, carrying empty registries
        // until decontraction restores them.
        for r in &doc.contraction_log {
            if vertices.contains_key(&r.absorbed) {
                return Err(Error::InvalidDocument(format!(
                    "absorbed vertex {} also listed as live",
                    r.absorbed
                )));
            }
            vertices.insert(
                r.absorbed,
                VertexData { coords: r.absorbed_coords, registry: TadpoleRegistry::default() },
            );
        }
        for (id, data) in vertices {
            complex.insert_raw_vertex(id, data);
        }
        // Insert in id order so the incidence lists come out ascending even
        // for hand-written documents.
        let mut edges: Vec<&EdgeDoc> = doc.edges.iter().collect();
        edges.sort_by_key(|e| e.id);
        let mut edge_ids = std::collections::BTreeSet::new();
        for e in edges {
            if !edge_ids.insert(e.id) {
                return Err(Error::InvalidDocument(format!("duplicate edge {}", e.id)));
            }
            complex.insert_raw_edge(EdgeData {
                id: e.id,
                base: e.u,
                head: e.v,
                label: e.generator,
                status: e.status,
            });
        }
        if !doc.contraction_log.windows(2).all(|w| w[0].seq < w[1].seq) {
            return Err(Error::InvalidDocument(
                "contraction log sequence numbers must be strictly increasing".into(),
            ));
        }
        let mut next_seq = 0;
        for r in &doc.contraction_log {
            complex.merge(r.survivor, r.absorbed);
            next_seq = next_seq.max(r.seq + 1);
        }
        complex.restore_log_state(doc.contraction_log.clone(), next_seq);

        let (mut next_v, mut next_e, next_seq) = complex.id_watermarks();
        for v in doc.vertices.iter().map(|v| v.id.0).chain(
            doc.contraction_log
                .iter()
                .flat_map(|r| [r.survivor.0, r.absorbed.0]),
        ) {
            next_v = next_v.max(v + 1);
        }
        for e in doc.edges.iter().map(|e| e.id.0) {
            next_e = next_e.max(e + 1);
        }
        complex.set_id_watermarks(next_v, next_e, next_seq);

        complex.validate()?;
        Ok(complex)
    }

    /// Canonical pretty JSON with a trailing newline; byte-stable for a given
    /// complex state.
    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(&self.to_doc()).expect("serializable");
        s.push('\n');
        s
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let doc: ComplexDoc = serde_json::from_str(text)?;
        Self::from_doc(&doc)
    }
}

// ---- replay ------------------------------------------------------------

/// How the base complex of a replay or experiment is constructed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ComplexSource {
    System { system: RootSystemKind, extent: u32 },
    Path { path: u32 },
}

impl ComplexSource {
    pub fn build(&self) -> LatticeComplex {
        match *self {
            ComplexSource::System { system, extent } => build_lattice(system, extent),
            ComplexSource::Path { path } => build_path(path),
        }
    }
}

/// One topology operation in a replay.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "op", rename_all = "lowercase")]
pub enum ReplayOp {
    Contract { edge: EdgeId },
    Decontract {},
    Split { edge: EdgeId },
    /// One stochastic half-time step; the rng continues from the replay seed.
    Step { p: f64 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReplayDoc {
    pub version: u32,
    pub build: ComplexSource,
    #[serde(default)]
    pub seed: u64,
    pub ops: Vec<ReplayOp>,
}

/// Applies an ordered operation list to an existing complex. Stochastic
/// steps consume one shared rng seeded from `seed`.
pub fn apply_ops(complex: &mut LatticeComplex, ops: &[ReplayOp], seed: u64) -> Result<()> {
    use rand::SeedableRng;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    for op in ops {
        match op {
            ReplayOp::Contract { edge } => {
                contract(complex, *edge)?;
            }
            ReplayOp::Decontract {} => {
                decontract_last(complex)?;
            }
            ReplayOp::Split { edge } => {
                split_edge(complex, *edge)?;
            }
            ReplayOp::Step { p } => {
                crate::dynamics::step_halftime(complex, *p, &mut rng)?;
            }
        }
    }
    Ok(())
}

/// Reconstructs a complex from build parameters and the ordered operation
/// list.
pub fn apply_replay(doc: &ReplayDoc) -> Result<LatticeComplex> {
    if doc.version != REPLAY_FORMAT_VERSION {
        return Err(Error::InvalidDocument(format!(
            "unsupported replay format version {}",
            doc.version
        )));
    }
    let mut complex = doc.build.build();
    complex.set_rng_seed(doc.seed);
    apply_ops(&mut complex, &doc.ops, doc.seed)?;
    Ok(complex)
}
