//! Combinatorial recovery of tiling cells and 2-faces from the adjacency
//! table. Nothing here reads embedding coordinates, so the enumeration keeps
//! working on mutated complexes.

use crate::lattice::{LatticeComplex, VertexId};
use crate::lattice::RootSystemKind;
use std::collections::{BTreeSet, HashMap};

pub(crate) struct AdjCache<'a> {
    complex: &'a LatticeComplex,
    sets: HashMap<VertexId, BTreeSet<VertexId>>,
}

impl<'a> AdjCache<'a> {
    pub(crate) fn new(complex: &'a LatticeComplex) -> Self {
        Self { complex, sets: HashMap::new() }
    }

    /// Rep-level neighbor set, excluding the vertex itself.
    pub(crate) fn set(&mut self, v: VertexId) -> &BTreeSet<VertexId> {
        let complex = self.complex;
        self.sets.entry(v).or_insert_with(|| {
            complex
                .neighbors(v)
                .map(|ns| ns.into_iter().map(|(w, _)| w).filter(|&w| w != v).collect())
                .unwrap_or_default()
        })
    }

    pub(crate) fn adjacent(&mut self, a: VertexId, b: VertexId) -> bool {
        self.set(a).contains(&b)
    }
}

/// Triangles containing the live edge (u, v): one per common neighbor.
fn triangles(cache: &mut AdjCache<'_>, u: VertexId, v: VertexId) -> Vec<BTreeSet<VertexId>> {
    let nu = cache.set(u).clone();
    let nv = cache.set(v);
    nu.intersection(nv)
        .filter(|&&w| w != u && w != v)
        .map(|&w| [u, v, w].into_iter().collect())
        .collect()
}

/// Chordless 4-cycles u−v−t−w−u containing the live edge (u, v). Returned as
/// (w, t) corner pairs: w adjacent to u, t adjacent to v.
fn square_corners(cache: &mut AdjCache<'_>, u: VertexId, v: VertexId) -> Vec<(VertexId, VertexId)> {
    let nu = cache.set(u).clone();
    let nv = cache.set(v).clone();
    let mut out = Vec::new();
    for &w in &nu {
        if w == v || nv.contains(&w) {
            continue;
        }
        for &t in &nv {
            if t == u || t == w || nu.contains(&t) {
                continue;
            }
            if cache.adjacent(w, t) {
                out.push((w, t));
            }
        }
    }
    out
}

fn squares(cache: &mut AdjCache<'_>, u: VertexId, v: VertexId) -> Vec<BTreeSet<VertexId>> {
    square_corners(cache, u, v)
        .into_iter()
        .map(|(w, t)| [u, v, t, w].into_iter().collect())
        .collect()
}

/// Unit cubes containing the live edge (u, v), recovered as pairs of
/// chordless squares through the edge completed by an opposite square.
fn cubes(cache: &mut AdjCache<'_>, u: VertexId, v: VertexId) -> Vec<BTreeSet<VertexId>> {
    let corners = square_corners(cache, u, v);
    let mut found: BTreeSet<BTreeSet<VertexId>> = BTreeSet::new();
    for i in 0..corners.len() {
        for j in (i + 1)..corners.len() {
            let (w1, t1) = corners[i];
            let (w2, t2) = corners[j];
            if w1 == w2 || w1 == t2 || t1 == w2 || t1 == t2 {
                continue;
            }
            let skip: BTreeSet<VertexId> = [u, v, w1, t1, w2, t2].into_iter().collect();
            let gs: Vec<VertexId> = {
                let n1 = cache.set(t1).clone();
                let n2 = cache.set(t2);
                n1.intersection(n2).filter(|g| !skip.contains(g)).copied().collect()
            };
            let hs: Vec<VertexId> = {
                let n1 = cache.set(w1).clone();
                let n2 = cache.set(w2);
                n1.intersection(n2).filter(|h| !skip.contains(h)).copied().collect()
            };
            for &g in &gs {
                for &h in &hs {
                    if g != h && cache.adjacent(g, h) {
                        let mut cell = skip.clone();
                        cell.insert(g);
                        cell.insert(h);
                        found.insert(cell);
                    }
                }
            }
        }
    }
    found.into_iter().collect()
}

/// The tiling cells incident to the live edge with current endpoints (u, v),
/// as rep-level vertex sets. The cycle family depends on the root system.
pub(crate) fn incident_cells(
    complex: &LatticeComplex,
    u: VertexId,
    v: VertexId,
) -> Vec<BTreeSet<VertexId>> {
    use crate::lattice::RootSystemKind::*;
    let mut cache = AdjCache::new(complex);
    match complex.kind() {
        Square2D => squares(&mut cache, u, v),
        Cubic3D => cubes(&mut cache, u, v),
        A3 | B3 | C3 => triangles(&mut cache, u, v),
    }
}

/// All 2-faces of the live skeleton, deduplicated, in canonical order
/// (each face as its ascending vertex list, faces sorted lexicographically).
pub(crate) fn all_faces(complex: &LatticeComplex) -> Vec<Vec<VertexId>> {
    let mut cache = AdjCache::new(complex);
    let mut set: BTreeSet<Vec<VertexId>> = BTreeSet::new();
    let edges: Vec<(VertexId, VertexId)> = complex
        .live_edges()
        .map(|e| (complex.rep(e.base), complex.rep(e.head)))
        .filter(|(a, b)| a != b)
        .collect();
    let triangles_wanted = matches!(
        complex.kind(),
        RootSystemKind::A3 | RootSystemKind::B3 | RootSystemKind::C3
    );
    for (u, v) in edges {
        let faces = if triangles_wanted {
            triangles(&mut cache, u, v)
        } else {
            squares(&mut cache, u, v)
        };
        for f in faces {
            set.insert(f.into_iter().collect());
        }
    }
    set.into_iter().collect()
}
