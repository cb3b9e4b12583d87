//! Voronoi cell of the origin in the lattice generated by a root system,
//! computed against all lattice points within graph radius 2.

use crate::lattice::roots::{Coords, RootSystem, RootSystemKind};
use std::collections::BTreeSet;

/// Shape summary of the origin's Voronoi cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VoronoiCellDescriptor {
    pub face_count: usize,
    /// Lattice vectors whose bisector half-spaces are active on the boundary.
    pub face_normals: Vec<Coords>,
}

/// Lattice points reachable from the origin in at most two root steps,
/// excluding the origin itself.
pub(crate) fn two_ball(system: &RootSystem) -> Vec<Coords> {
    let roots = system.roots();
    let mut pts = BTreeSet::new();
    for r in &roots {
        pts.insert(*r);
        for s in &roots {
            pts.insert([r[0] + s[0], r[1] + s[1], r[2] + s[2]]);
        }
    }
    pts.remove(&[0, 0, 0]);
    pts.into_iter().collect()
}

/// Half-space intersection over the radius-2 point set. A point p
/// contributes a facet exactly when its bisector midpoint p/2 lies strictly
/// closer to the origin than to every other candidate point q, i.e.
/// |p/2 − q|² > |p/2|², which in integers is p·q < q·q.
pub fn voronoi_cell(kind: RootSystemKind) -> VoronoiCellDescriptor {
    let system = RootSystem::new(kind);
    let candidates = two_ball(&system);
    let mut face_normals = Vec::new();
    'outer: for p in &candidates {
        for q in &candidates {
            if q == p {
                continue;
            }
            let pq = p[0] * q[0] + p[1] * q[1] + p[2] * q[2];
            let qq = q[0] * q[0] + q[1] * q[1] + q[2] * q[2];
            if pq >= qq {
                continue 'outer;
            }
        }
        face_normals.push(*p);
    }
    face_normals.sort();
    VoronoiCellDescriptor { face_count: face_normals.len(), face_normals }
}
