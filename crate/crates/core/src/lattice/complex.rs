//! The mutable 1-skeleton: vertices with tadpole registries, a directed-capable
//! edge multiset, merge bookkeeping for contractions, and derived adjacency.
//!
//! Edges store their *original* endpoints. Contraction never rewrites an
//! edge; it only records that one endpoint identity now stands for another.
//! Current adjacency is always viewed through `rep()`, which makes
//! decontraction an exact inverse and keeps constituent identities available
//! to walks that need to resolve merged vertices.

use crate::error::{Error, Result};
use crate::lattice::roots::{Coords, RootSystem, RootSystemKind};
use crate::topology::ContractionRecord;
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub u32);

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct EdgeId(pub u32);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "v{}", self.0)
    }
}

impl fmt::Display for EdgeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "e{}", self.0)
    }
}

/// One directed tadpole materialized in a registry.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TadpoleEntry {
    pub index: i64,
    pub orientation: i8,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub provenance: Option<VertexId>,
}

/// Ordered, integer-indexed set of directed tadpoles at a vertex. The index
/// set is conceptually countable; only touched entries are materialized.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TadpoleRegistry {
    pub entries: Vec<TadpoleEntry>,
}

impl TadpoleRegistry {
    /// Fresh registry with the single entry every new vertex starts with.
    pub fn fresh() -> Self {
        Self {
            entries: vec![TadpoleEntry { index: 0, orientation: 1, provenance: None }],
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest index strictly above every materialized one.
    pub fn next_index(&self) -> i64 {
        self.entries.last().map_or(0, |e| e.index + 1)
    }

    pub fn validate(&self) -> Result<()> {
        for pair in self.entries.windows(2) {
            if pair[0].index >= pair[1].index {
                return Err(Error::InvalidDocument(format!(
                    "tadpole indices not strictly increasing: {} then {}",
                    pair[0].index, pair[1].index
                )));
            }
        }
        for e in &self.entries {
            if e.orientation != 1 && e.orientation != -1 {
                return Err(Error::InvalidDocument(format!(
                    "tadpole orientation must be ±1, got {}",
                    e.orientation
                )));
            }
        }
        Ok(())
    }
}

/// Edge label: a lattice generator, a cell-link created by edge splitting, or
/// a reattachment shortcut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EdgeLabel {
    /// 0-based generator index; the edge's base→head direction is the
    /// generator's positive root direction.
    Generator(u8),
    Cell,
    Shortcut,
}

impl fmt::Display for EdgeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EdgeLabel::Generator(g) => write!(f, "x{}", g + 1),
            EdgeLabel::Cell => f.write_str("cell"),
            EdgeLabel::Shortcut => f.write_str("shortcut"),
        }
    }
}

impl std::str::FromStr for EdgeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cell" => Ok(EdgeLabel::Cell),
            "shortcut" => Ok(EdgeLabel::Shortcut),
            _ => {
                let idx = s
                    .strip_prefix('x')
                    .and_then(|n| n.parse::<u16>().ok())
                    .filter(|n| (1..=256).contains(n))
                    .ok_or_else(|| Error::Parse(format!("bad edge label {s:?}")))?;
                Ok(EdgeLabel::Generator((idx - 1) as u8))
            }
        }
    }
}

impl Serialize for EdgeLabel {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for EdgeLabel {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EdgeStatus {
    Live,
    Contracted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeData {
    pub id: EdgeId,
    /// Original endpoint at the tail of the label's positive direction.
    pub base: VertexId,
    /// Original endpoint at the head of the label's positive direction.
    pub head: VertexId,
    pub label: EdgeLabel,
    pub status: EdgeStatus,
}

impl EdgeData {
    pub fn is_live(&self) -> bool {
        self.status == EdgeStatus::Live
    }

    /// The original endpoint other than `v` (which must be one of the two).
    pub fn other(&self, v: VertexId) -> VertexId {
        if self.base == v {
            self.head
        } else {
            self.base
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexData {
    pub coords: Coords,
    pub registry: TadpoleRegistry,
}

/// Read-only dense-index view of the live 1-skeleton, for breadth-first
/// search and walker ensembles over large complexes.
pub struct Snapshot {
    pub verts: Vec<VertexId>,
    pub index: HashMap<VertexId, usize>,
    /// Per vertex: one entry per incident live edge. Self-loops appear once.
    pub adj: Vec<Vec<(usize, EdgeId)>>,
}

impl Snapshot {
    /// Hop distances from `src` over live edges; `u32::MAX` marks unreachable.
    pub fn distances_from(&self, src: usize) -> Vec<u32> {
        let mut dist = vec![u32::MAX; self.verts.len()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            let d = dist[v] + 1;
            for &(w, _) in &self.adj[v] {
                if dist[w] == u32::MAX {
                    dist[w] = d;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Early-exit hop distance between two dense indices.
    pub fn distance(&self, src: usize, dst: usize) -> Option<u32> {
        if src == dst {
            return Some(0);
        }
        let mut dist = vec![u32::MAX; self.verts.len()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(v) = queue.pop_front() {
            let d = dist[v] + 1;
            for &(w, _) in &self.adj[v] {
                if dist[w] == u32::MAX {
                    if w == dst {
                        return Some(d);
                    }
                    dist[w] = d;
                    queue.push_back(w);
                }
            }
        }
        None
    }
}

/// Mutable 1-skeleton of a lattice complex.
#[derive(Debug, Clone)]
pub struct LatticeComplex {
    system: RootSystem,
    /// Every vertex identity ever created, including absorbed ones.
    vertices: BTreeMap<VertexId, VertexData>,
    /// Live and contracted edges; split edges are removed outright.
    edges: BTreeMap<EdgeId, EdgeData>,
    /// Original endpoint → incident edge ids, ascending.
    incident: BTreeMap<VertexId, Vec<EdgeId>>,
    /// Absorbed vertex → its survivor (direct parent; chase for the rep).
    merged_into: BTreeMap<VertexId, VertexId>,
    /// Representative → its constituent group, survivor-group first. Only
    /// present for groups of size > 1.
    groups: BTreeMap<VertexId, Vec<VertexId>>,
    contraction_log: Vec<ContractionRecord>,
    next_vertex: u32,
    next_edge: u32,
    next_seq: u64,
    rng_seed: u64,
}

impl LatticeComplex {
    pub(crate) fn empty(system: RootSystem) -> Self {
        Self {
            system,
            vertices: BTreeMap::new(),
            edges: BTreeMap::new(),
            incident: BTreeMap::new(),
            merged_into: BTreeMap::new(),
            groups: BTreeMap::new(),
            contraction_log: Vec::new(),
            next_vertex: 0,
            next_edge: 0,
            next_seq: 0,
            rng_seed: 0,
        }
    }

    pub fn system(&self) -> &RootSystem {
        &self.system
    }

    pub fn kind(&self) -> RootSystemKind {
        self.system.kind()
    }

    pub fn rng_seed(&self) -> u64 {
        self.rng_seed
    }

    pub fn set_rng_seed(&mut self, seed: u64) {
        self.rng_seed = seed;
    }

    // ---- vertices ------------------------------------------------------

    pub(crate) fn add_vertex(&mut self, coords: Coords, registry: TadpoleRegistry) -> VertexId {
        let id = VertexId(self.next_vertex);
        self.next_vertex += 1;
        self.vertices.insert(id, VertexData { coords, registry });
        self.incident.insert(id, Vec::new());
        id
    }

    pub fn vertex(&self, v: VertexId) -> Result<&VertexData> {
        self.vertices.get(&v).ok_or(Error::UnknownVertex(v))
    }

    pub(crate) fn vertex_mut(&mut self, v: VertexId) -> Result<&mut VertexData> {
        self.vertices.get_mut(&v).ok_or(Error::UnknownVertex(v))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v)
    }

    /// Current representative of a (possibly absorbed) vertex identity.
    pub fn rep(&self, v: VertexId) -> VertexId {
        let mut cur = v;
        while let Some(&p) = self.merged_into.get(&cur) {
            cur = p;
        }
        cur
    }

    pub fn is_live_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains_key(&v) && !self.merged_into.contains_key(&v)
    }

    /// Live representative vertices, ascending.
    pub fn live_vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices
            .keys()
            .copied()
            .filter(move |v| !self.merged_into.contains_key(v))
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len() - self.merged_into.len()
    }

    /// Constituent identities merged into the representative `rep`,
    /// survivor-group first. A lone vertex is its own group.
    pub fn constituents(&self, rep: VertexId) -> Vec<VertexId> {
        self.groups.get(&rep).cloned().unwrap_or_else(|| vec![rep])
    }

    /// First live vertex carrying exactly these embedding coordinates.
    pub fn find_vertex(&self, coords: Coords) -> Option<VertexId> {
        self.vertices
            .iter()
            .find(|(id, d)| d.coords == coords && !self.merged_into.contains_key(id))
            .map(|(id, _)| *id)
    }

    // ---- edges ---------------------------------------------------------

    pub(crate) fn add_edge(&mut self, base: VertexId, head: VertexId, label: EdgeLabel) -> EdgeId {
        let id = EdgeId(self.next_edge);
        self.next_edge += 1;
        self.edges.insert(id, EdgeData { id, base, head, label, status: EdgeStatus::Live });
        self.incident.entry(base).or_default().push(id);
        if head != base {
            self.incident.entry(head).or_default().push(id);
        }
        id
    }

    /// Removes an edge outright (used by splitting, which replaces it).
    pub(crate) fn remove_edge(&mut self, id: EdgeId) -> Result<EdgeData> {
        let data = self.edges.remove(&id).ok_or(Error::UnknownEdge(id))?;
        for v in [data.base, data.head] {
            if let Some(list) = self.incident.get_mut(&v) {
                list.retain(|&e| e != id);
            }
        }
        Ok(data)
    }

    pub fn edge(&self, e: EdgeId) -> Result<&EdgeData> {
        self.edges.get(&e).ok_or(Error::UnknownEdge(e))
    }

    pub(crate) fn edge_mut(&mut self, e: EdgeId) -> Result<&mut EdgeData> {
        self.edges.get_mut(&e).ok_or(Error::UnknownEdge(e))
    }

    pub fn edges(&self) -> impl Iterator<Item = &EdgeData> {
        self.edges.values()
    }

    pub fn live_edges(&self) -> impl Iterator<Item = &EdgeData> {
        self.edges.values().filter(|e| e.is_live())
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn live_edge_count(&self) -> usize {
        self.live_edges().count()
    }

    /// True when the edge's endpoints currently coincide.
    pub fn is_tadpole(&self, e: EdgeId) -> Result<bool> {
        let edge = self.edge(e)?;
        Ok(self.rep(edge.base) == self.rep(edge.head))
    }

    /// Lowest-id live edge currently joining the two vertices.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        let (ru, rv) = (self.rep(u), self.rep(v));
        for c in self.constituents(ru) {
            if let Some(list) = self.incident.get(&c) {
                for &e in list {
                    let data = &self.edges[&e];
                    if !data.is_live() {
                        continue;
                    }
                    let (a, b) = (self.rep(data.base), self.rep(data.head));
                    if (a == ru && b == rv) || (a == rv && b == ru) {
                        return Some(e);
                    }
                }
            }
        }
        None
    }

    /// Incident edge ids of one original constituent, ascending.
    pub(crate) fn incident_of(&self, v: VertexId) -> &[EdgeId] {
        self.incident.get(&v).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Live adjacency of the vertex's current representative, sorted by edge
    /// identity. Self-loops appear once, listing the vertex itself.
    pub fn neighbors(&self, v: VertexId) -> Result<Vec<(VertexId, EdgeId)>> {
        if !self.contains_vertex(v) {
            return Err(Error::UnknownVertex(v));
        }
        let rep = self.rep(v);
        let mut seen = BTreeSet::new();
        for c in self.constituents(rep) {
            for &e in self.incident_of(c) {
                if self.edges[&e].is_live() {
                    seen.insert(e);
                }
            }
        }
        Ok(seen
            .into_iter()
            .map(|e| {
                let data = &self.edges[&e];
                let (a, b) = (self.rep(data.base), self.rep(data.head));
                let other = if a == rep { b } else { a };
                (other, e)
            })
            .collect())
    }

    pub fn degree(&self, v: VertexId) -> Result<usize> {
        Ok(self.neighbors(v)?.len())
    }

    // ---- merge bookkeeping (driven by the topology module) --------------

    pub(crate) fn merge(&mut self, survivor: VertexId, absorbed: VertexId) {
        debug_assert!(!self.merged_into.contains_key(&survivor));
        debug_assert!(!self.merged_into.contains_key(&absorbed));
        self.merged_into.insert(absorbed, survivor);
        let mut group = self.groups.remove(&survivor).unwrap_or_else(|| vec![survivor]);
        group.extend(self.groups.remove(&absorbed).unwrap_or_else(|| vec![absorbed]));
        self.groups.insert(survivor, group);
    }

    pub(crate) fn unmerge(&mut self, survivor: VertexId, absorbed: VertexId) {
        self.merged_into.remove(&absorbed);
        if let Some(group) = self.groups.remove(&survivor) {
            let (g_s, g_a): (Vec<_>, Vec<_>) =
                group.into_iter().partition(|&c| self.rep(c) == survivor);
            if g_s.len() > 1 {
                self.groups.insert(survivor, g_s);
            }
            if g_a.len() > 1 {
                self.groups.insert(absorbed, g_a);
            }
        }
    }

    pub fn contraction_log(&self) -> &[ContractionRecord] {
        &self.contraction_log
    }

    pub(crate) fn push_record(&mut self, mut record: ContractionRecord) -> ContractionRecord {
        record.seq = self.next_seq;
        self.next_seq += 1;
        self.contraction_log.push(record.clone());
        record
    }

    pub(crate) fn remove_record(&mut self, seq: u64) {
        self.contraction_log.retain(|r| r.seq != seq);
    }

    pub(crate) fn restore_log_state(&mut self, log: Vec<ContractionRecord>, next_seq: u64) {
        self.contraction_log = log;
        self.next_seq = next_seq;
    }

    pub(crate) fn id_watermarks(&self) -> (u32, u32, u64) {
        (self.next_vertex, self.next_edge, self.next_seq)
    }

    pub(crate) fn set_id_watermarks(&mut self, v: u32, e: u32, seq: u64) {
        self.next_vertex = v;
        self.next_edge = e;
        self.next_seq = seq;
    }

    pub(crate) fn insert_raw_vertex(&mut self, id: VertexId, data: VertexData) {
        self.vertices.insert(id, data);
        self.incident.entry(id).or_default();
    }

    pub(crate) fn insert_raw_edge(&mut self, data: EdgeData) {
        let id = data.id;
        let (base, head) = (data.base, data.head);
        self.edges.insert(id, data);
        self.incident.entry(base).or_default().push(id);
        if head != base {
            self.incident.entry(head).or_default().push(id);
        }
    }

    // ---- snapshot & validation -----------------------------------------

    /// Dense live-adjacency view for search and walker ensembles.
    pub fn snapshot(&self) -> Snapshot {
        let verts: Vec<VertexId> = self.live_vertices().collect();
        let index: HashMap<VertexId, usize> =
            verts.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let mut adj = vec![Vec::new(); verts.len()];
        for e in self.live_edges() {
            let a = index[&self.rep(e.base)];
            let b = index[&self.rep(e.head)];
            adj[a].push((b, e.id));
            if a != b {
                adj[b].push((a, e.id));
            }
        }
        for list in &mut adj {
            list.sort_by_key(|&(_, e)| e);
        }
        Snapshot { verts, index, adj }
    }

    /// Full-structure consistency check.
    pub fn validate(&self) -> Result<()> {
        for (id, e) in &self.edges {
            if *id != e.id {
                return Err(Error::InvalidDocument(format!("edge {id} stored under wrong key")));
            }
            for v in [e.base, e.head] {
                if !self.vertices.contains_key(&v) {
                    return Err(Error::InvalidDocument(format!("edge {id} references missing {v}")));
                }
                if !self.incident_of(v).contains(id) {
                    return Err(Error::InvalidDocument(format!("edge {id} missing from incidence of {v}")));
                }
            }
            if e.base == e.head {
                return Err(Error::InvalidDocument(format!(
                    "edge {id} has identical original endpoints"
                )));
            }
        }
        for (v, list) in &self.incident {
            for e in list {
                let data = self.edges.get(e).ok_or_else(|| {
                    Error::InvalidDocument(format!("incidence of {v} references missing {e}"))
                })?;
                if data.base != *v && data.head != *v {
                    return Err(Error::InvalidDocument(format!("{e} listed at non-endpoint {v}")));
                }
            }
            if !list.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::InvalidDocument(format!("incidence of {v} not ascending")));
            }
        }
        // Contracted edges appear in the log exactly once, and their
        // endpoints currently coincide.
        let mut logged: BTreeMap<EdgeId, usize> = BTreeMap::new();
        for r in &self.contraction_log {
            *logged.entry(r.edge).or_default() += 1;
        }
        for (id, e) in &self.edges {
            let n = logged.get(id).copied().unwrap_or(0);
            match e.status {
                EdgeStatus::Contracted => {
                    if n != 1 {
                        return Err(Error::InvalidDocument(format!(
                            "contracted edge {id} appears {n} times in the log"
                        )));
                    }
                    if self.rep(e.base) != self.rep(e.head) {
                        return Err(Error::InvalidDocument(format!(
                            "contracted edge {id} has unmerged endpoints"
                        )));
                    }
                }
                EdgeStatus::Live => {
                    if n != 0 {
                        return Err(Error::InvalidDocument(format!(
                            "live edge {id} appears in the contraction log"
                        )));
                    }
                }
            }
        }
        for (v, data) in &self.vertices {
            data.registry.validate()?;
            if self.merged_into.contains_key(v) && !data.registry.is_empty() {
                return Err(Error::InvalidDocument(format!(
                    "absorbed vertex {v} still owns registry entries"
                )));
            }
        }
        for (&absorbed, &survivor) in &self.merged_into {
            if !self.vertices.contains_key(&absorbed) || !self.vertices.contains_key(&survivor) {
                return Err(Error::InvalidDocument("merge map references missing vertex".into()));
            }
            // rep() must terminate: walk with a step budget.
            let mut cur = absorbed;
            for _ in 0..=self.merged_into.len() {
                match self.merged_into.get(&cur) {
                    Some(&p) => cur = p,
                    None => break,
                }
            }
            if self.merged_into.contains_key(&cur) {
                return Err(Error::InvalidDocument("merge map contains a cycle".into()));
            }
        }
        for (rep, group) in &self.groups {
            if self.merged_into.contains_key(rep) {
                return Err(Error::InvalidDocument(format!("group keyed by absorbed vertex {rep}")));
            }
            for c in group {
                if self.rep(*c) != *rep {
                    return Err(Error::InvalidDocument(format!(
                        "group member {c} does not resolve to {rep}"
                    )));
                }
            }
        }
        Ok(())
    }

    /// GraphViz rendering of the live 1-skeleton.
    pub fn to_dot(&self) -> String {
        use std::fmt::Write;
        let mut out = String::from("graph skeleton {\n");
        for v in self.live_vertices() {
            let d = &self.vertices[&v];
            let _ = writeln!(
                out,
                "  v{} [label=\"v{} ({},{},{})\"];",
                v.0, v.0, d.coords[0], d.coords[1], d.coords[2]
            );
        }
        for e in self.live_edges() {
            let _ = writeln!(
                out,
                "  v{} -- v{} [label=\"{}\"];",
                self.rep(e.base).0,
                self.rep(e.head).0,
                e.label
            );
        }
        out.push_str("}\n");
        out
    }
}
