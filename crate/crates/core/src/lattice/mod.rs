//! Finite portions of the canonical lattices and their adjacency structure.

mod complex;
mod roots;
mod voronoi;

pub use complex::{
    EdgeData, EdgeId, EdgeLabel, EdgeStatus, LatticeComplex, Snapshot, TadpoleEntry,
    TadpoleRegistry, VertexData, VertexId,
};
pub use roots::{Coords, RootSystem, RootSystemKind};
pub use voronoi::{voronoi_cell, VoronoiCellDescriptor};

use std::collections::{BTreeMap, VecDeque};

/// Builds the ball of the given graph radius around the origin of the lattice
/// generated by the root system. Vertex identities are assigned by
/// (hop distance, coordinates), so the origin is always vertex 0 and
/// identical inputs yield identical complexes.
pub fn build_lattice(kind: RootSystemKind, extent: u32) -> LatticeComplex {
    let system = RootSystem::new(kind);
    let roots = system.roots();

    let mut depth: BTreeMap<Coords, u32> = BTreeMap::new();
    depth.insert([0, 0, 0], 0);
    let mut queue = VecDeque::new();
    queue.push_back([0i64, 0, 0]);
    while let Some(p) = queue.pop_front() {
        let d = depth[&p];
        if d == extent {
            continue;
        }
        for r in &roots {
            let q = [p[0] + r[0], p[1] + r[1], p[2] + r[2]];
            if let std::collections::btree_map::Entry::Vacant(slot) = depth.entry(q) {
                slot.insert(d + 1);
                queue.push_back(q);
            }
        }
    }

    let mut order: Vec<(u32, Coords)> = depth.iter().map(|(c, d)| (*d, *c)).collect();
    order.sort();

    let mut complex = LatticeComplex::empty(system.clone());
    let mut id_of: BTreeMap<Coords, VertexId> = BTreeMap::new();
    for (_, coords) in &order {
        let id = complex.add_vertex(*coords, TadpoleRegistry::fresh());
        id_of.insert(*coords, id);
    }
    for (_, coords) in &order {
        let base = id_of[coords];
        for (g, root) in system.generators().iter().enumerate() {
            let target = [coords[0] + root[0], coords[1] + root[1], coords[2] + root[2]];
            if let Some(&head) = id_of.get(&target) {
                complex.add_edge(base, head, EdgeLabel::Generator(g as u8));
            }
        }
    }
    complex
}

/// Builds an isolated path of `length` edges along the first square-lattice
/// generator: vertices (0,0)..(length,0). Paths are the reference family for
/// expansion experiments because they carry no cells.
pub fn build_path(length: u32) -> LatticeComplex {
    let system = RootSystem::new(RootSystemKind::Square2D);
    let mut complex = LatticeComplex::empty(system);
    let mut prev = None;
    for i in 0..=length {
        let v = complex.add_vertex([i as i64, 0, 0], TadpoleRegistry::fresh());
        if let Some(p) = prev {
            complex.add_edge(p, v, EdgeLabel::Generator(0));
        }
        prev = Some(v);
    }
    complex
}
