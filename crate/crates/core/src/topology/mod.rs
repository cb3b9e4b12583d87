//! Topology-modification primitives: contraction, decontraction, and edge
//! splitting, with exact tadpole-registry bookkeeping.

pub(crate) mod cells;

use crate::error::{Error, Result};
use crate::lattice::{
    Coords, EdgeId, EdgeLabel, EdgeStatus, LatticeComplex, TadpoleEntry, TadpoleRegistry, VertexId,
};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Invertible log entry for one contraction. `survivor_registry` and
/// `absorbed_registry` are the exact pre-merge registries, so applying the
/// record backwards restores both sides bit for bit.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractionRecord {
    pub seq: u64,
    pub edge: EdgeId,
    pub survivor: VertexId,
    pub absorbed: VertexId,
    pub absorbed_coords: Coords,
    pub survivor_registry: TadpoleRegistry,
    pub absorbed_registry: TadpoleRegistry,
    /// Live edges that joined the same two vertices and therefore became
    /// spatial tadpoles at the survivor.
    pub forced_tadpoles: Vec<EdgeId>,
}

/// Contracts a live non-tadpole edge: its current endpoints merge into the
/// lower identity, the edge itself leaves the adjacency without forming a
/// tadpole, the two registries unite survivor-first preserving order and
/// orientation, and any other live edge between the same two vertices
/// becomes a spatial tadpole at the survivor.
pub fn contract(complex: &mut LatticeComplex, edge: EdgeId) -> Result<ContractionRecord> {
    let data = complex.edge(edge)?.clone();
    if data.status != EdgeStatus::Live {
        return Err(Error::EdgeNotLive(edge));
    }
    let (ru, rv) = (complex.rep(data.base), complex.rep(data.head));
    if ru == rv {
        return Err(Error::TadpoleEdge(edge));
    }
    let survivor = ru.min(rv);
    let absorbed = ru.max(rv);

    let mut forced = BTreeSet::new();
    for c in complex.constituents(absorbed) {
        for &e in complex.incident_of(c) {
            if e == edge {
                continue;
            }
            let d = complex.edge(e)?;
            if !d.is_live() {
                continue;
            }
            let (a, b) = (complex.rep(d.base), complex.rep(d.head));
            if (a, b) == (survivor, absorbed) || (a, b) == (absorbed, survivor) {
                forced.insert(e);
            }
        }
    }

    let survivor_registry = complex.vertex(survivor)?.registry.clone();
    let absorbed_registry = complex.vertex(absorbed)?.registry.clone();
    let absorbed_coords = complex.vertex(absorbed)?.coords;

    // Unite the registries: survivor block first, absorbed block appended
    // with fresh indices continuing the survivor's, order and orientation
    // preserved, constituents recorded in the provenance tags.
    let absorbed_entries = std::mem::take(&mut complex.vertex_mut(absorbed)?.registry.entries);
    {
        let reg = &mut complex.vertex_mut(survivor)?.registry;
        for entry in &mut reg.entries {
            entry.provenance.get_or_insert(survivor);
        }
        for (next, mut entry) in (reg.next_index()..).zip(absorbed_entries) {
            entry.index = next;
            entry.provenance.get_or_insert(absorbed);
            reg.entries.push(entry);
        }
    }

    complex.merge(survivor, absorbed);
    complex.edge_mut(edge)?.status = EdgeStatus::Contracted;

    let record = complex.push_record(ContractionRecord {
        seq: 0,
        edge,
        survivor,
        absorbed,
        absorbed_coords,
        survivor_registry,
        absorbed_registry,
        forced_tadpoles: forced.into_iter().collect(),
    });
    Ok(record)
}

/// Undoes the contraction with the given sequence number. The record must be
/// the newest log entry involving its survivor (the log is a stack per
/// merged component).
pub fn decontract(complex: &mut LatticeComplex, seq: u64) -> Result<ContractionRecord> {
    let log = complex.contraction_log();
    let pos = log
        .iter()
        .position(|r| r.seq == seq)
        .ok_or(Error::UnknownRecord(seq))?;
    let record = log[pos].clone();
    for later in &log[pos + 1..] {
        if later.survivor == record.survivor || later.absorbed == record.survivor {
            return Err(Error::OutOfOrderDecontraction(seq));
        }
    }

    complex.unmerge(record.survivor, record.absorbed);
    complex.vertex_mut(record.survivor)?.registry = record.survivor_registry.clone();
    complex.vertex_mut(record.absorbed)?.registry = record.absorbed_registry.clone();
    complex.edge_mut(record.edge)?.status = EdgeStatus::Live;
    complex.remove_record(seq);
    Ok(record)
}

/// Undoes the most recent contraction.
pub fn decontract_last(complex: &mut LatticeComplex) -> Result<ContractionRecord> {
    let seq = complex
        .contraction_log()
        .last()
        .map(|r| r.seq)
        .ok_or(Error::OutOfOrderDecontraction(0))?;
    decontract(complex, seq)
}

/// Splits a live non-tadpole edge at a fresh midpoint vertex. The midpoint
/// takes over the edge as two halves, gains one edge to every vertex of every
/// tiling cell incident to the split edge, and receives a fresh registry with
/// one tadpole. Per the round-up rule the midpoint is referred to the lower
/// endpoint, whose materialized registry splits at ceil(n/2): the upper
/// floor(n/2) entries re-home to the midpoint with order preserved.
///
/// Returns the midpoint's identity.
pub fn split_edge(complex: &mut LatticeComplex, edge: EdgeId) -> Result<VertexId> {
    let data = complex.edge(edge)?.clone();
    if data.status != EdgeStatus::Live {
        return Err(Error::EdgeNotLive(edge));
    }
    let (ru, rv) = (complex.rep(data.base), complex.rep(data.head));
    if ru == rv {
        return Err(Error::TadpoleEdge(edge));
    }

    let cells = cells::incident_cells(complex, ru, rv);
    let mut cell_vertices: BTreeSet<VertexId> = cells.into_iter().flatten().collect();
    cell_vertices.remove(&ru);
    cell_vertices.remove(&rv);

    let donor = ru.min(rv);
    let donor_coords = complex.vertex(donor)?.coords;

    // Re-home the donor's entries above the ceil(n/2) split point.
    let moved: Vec<TadpoleEntry> = {
        let reg = &mut complex.vertex_mut(donor)?.registry;
        let keep = reg.entries.len().div_ceil(2);
        reg.entries.split_off(keep)
    };
    let mut registry = TadpoleRegistry::fresh();
    for (i, mut entry) in moved.into_iter().enumerate() {
        entry.index = 1 + i as i64;
        registry.entries.push(entry);
    }

    let midpoint = complex.add_vertex(donor_coords, registry);
    complex.remove_edge(edge)?;
    complex.add_edge(data.base, midpoint, data.label);
    complex.add_edge(midpoint, data.head, data.label);
    for w in cell_vertices {
        complex.add_edge(midpoint, w, EdgeLabel::Cell);
    }
    Ok(midpoint)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, build_path, RootSystemKind};

    fn edge_between(k: &LatticeComplex, a: Coords, b: Coords) -> EdgeId {
        let u = k.find_vertex(a).unwrap();
        let v = k.find_vertex(b).unwrap();
        k.find_edge(u, v).unwrap()
    }

    #[test]
    fn contracting_a_path_edge_merges_registries_survivor_first() {
        let mut k = build_path(2); // a - b - c
        let e = edge_between(&k, [0, 0, 0], [1, 0, 0]);
        let record = contract(&mut k, e).unwrap();
        k.validate().unwrap();

        assert_eq!(k.vertex_count(), 2);
        assert_eq!(k.live_edge_count(), 1);
        assert!(
            k.neighbors(record.survivor).unwrap().iter().all(|&(_, id)| id != e),
            "contracted edge still listed in adjacency"
        );
        let reg = &k.vertex(record.survivor).unwrap().registry;
        assert_eq!(reg.len(), 2);
        assert_eq!(reg.entries[0].provenance, Some(record.survivor));
        assert_eq!(reg.entries[1].provenance, Some(record.absorbed));
        assert_eq!(reg.entries[0].index, 0);
        assert_eq!(reg.entries[1].index, 1);
    }

    #[test]
    fn double_edge_contraction_forces_a_spatial_tadpole() {
        // Contract two sides of an FCC triangle: the third side becomes a
        // double edge first, then a self-loop.
        let mut k = build_lattice(RootSystemKind::A3, 2);
        let u = k.find_vertex([0, 0, 0]).unwrap();
        let v = k.find_vertex([1, 1, 0]).unwrap();
        let w = k.find_vertex([1, 0, 1]).unwrap();
        let e_uv = k.find_edge(u, v).unwrap();
        contract(&mut k, e_uv).unwrap();

        let e_sw = k.find_edge(u, w).unwrap();
        let record = contract(&mut k, e_sw).unwrap();
        k.validate().unwrap();
        assert_eq!(record.forced_tadpoles.len(), 1);
        let loop_edge = record.forced_tadpoles[0];
        assert!(k.is_tadpole(loop_edge).unwrap());
        assert!(k.edge(loop_edge).unwrap().is_live());
    }

    #[test]
    fn contract_then_decontract_restores_everything() {
        let mut k = build_lattice(RootSystemKind::Square2D, 2);
        let before = k.to_json_string();
        let e = edge_between(&k, [0, 0, 0], [1, 0, 0]);
        let record = contract(&mut k, e).unwrap();
        decontract(&mut k, record.seq).unwrap();
        k.validate().unwrap();
        assert_eq!(before, k.to_json_string());
    }

    #[test]
    fn nested_contractions_undo_in_lifo_order() {
        let mut k = build_path(3);
        let e0 = edge_between(&k, [0, 0, 0], [1, 0, 0]);
        let e1 = edge_between(&k, [2, 0, 0], [3, 0, 0]);
        let before = k.to_json_string();

        let r0 = contract(&mut k, e0).unwrap();
        let r1 = contract(&mut k, e1).unwrap();
        // Independent components may be undone in any order.
        decontract(&mut k, r0.seq).unwrap();
        decontract(&mut k, r1.seq).unwrap();
        assert_eq!(before, k.to_json_string());

        // Same-survivor records must come off newest first.
        let r0 = contract(&mut k, e0).unwrap();
        let survivor = r0.survivor;
        let next = k.neighbors(survivor).unwrap()[0].1;
        let r1 = contract(&mut k, next).unwrap();
        assert_eq!(r1.survivor, survivor);
        assert!(matches!(
            decontract(&mut k, r0.seq),
            Err(Error::OutOfOrderDecontraction(_))
        ));
        decontract(&mut k, r1.seq).unwrap();
        decontract(&mut k, r0.seq).unwrap();
        assert_eq!(before, k.to_json_string());
    }

    #[test]
    fn decontract_on_empty_log_is_a_state_error() {
        let mut k = build_path(2);
        assert!(decontract_last(&mut k).is_err());
    }

    #[test]
    fn contracting_a_tadpole_or_dead_edge_errors() {
        let mut k = build_lattice(RootSystemKind::A3, 2);
        let u = k.find_vertex([0, 0, 0]).unwrap();
        let v = k.find_vertex([1, 1, 0]).unwrap();
        let w = k.find_vertex([1, 0, 1]).unwrap();
        let e_uv = k.find_edge(u, v).unwrap();
        contract(&mut k, e_uv).unwrap();
        assert!(matches!(contract(&mut k, e_uv), Err(Error::EdgeNotLive(_))));

        let e_sw = k.find_edge(u, w).unwrap();
        let record = contract(&mut k, e_sw).unwrap();
        let loop_edge = record.forced_tadpoles[0];
        assert!(matches!(contract(&mut k, loop_edge), Err(Error::TadpoleEdge(_))));
        assert!(matches!(split_edge(&mut k, loop_edge), Err(Error::TadpoleEdge(_))));
    }

    #[test]
    fn splitting_an_isolated_edge_makes_a_degree_two_midpoint() {
        let mut k = build_path(1);
        let e = k.edges().next().unwrap().id;
        let m = split_edge(&mut k, e).unwrap();
        k.validate().unwrap();
        assert_eq!(k.vertex_count(), 3);
        assert_eq!(k.live_edge_count(), 2);
        assert_eq!(k.degree(m).unwrap(), 2);
        // One fresh tadpole; the donor's single entry sits below the
        // round-up split point and stays put.
        assert_eq!(k.vertex(m).unwrap().registry.len(), 1);
        assert_eq!(k.vertex(VertexId(0)).unwrap().registry.len(), 1);
    }

    #[test]
    fn split_rehomes_the_upper_block_of_a_grown_registry() {
        // Give the lower endpoint a three-entry registry by contracting two
        // edges into it, then split one of its remaining edges: ceil(3/2)=2
        // entries stay, the top one moves behind the fresh tadpole.
        let mut k = build_path(4);
        let e01 = edge_between(&k, [0, 0, 0], [1, 0, 0]);
        let e12 = edge_between(&k, [1, 0, 0], [2, 0, 0]);
        contract(&mut k, e01).unwrap();
        contract(&mut k, e12).unwrap();
        let survivor = VertexId(0);
        assert_eq!(k.vertex(survivor).unwrap().registry.len(), 3);

        let e = k.neighbors(survivor).unwrap()[0].1;
        let m = split_edge(&mut k, e).unwrap();
        k.validate().unwrap();
        let donor_reg = &k.vertex(survivor).unwrap().registry;
        let mid_reg = &k.vertex(m).unwrap().registry;
        assert_eq!(donor_reg.len(), 2);
        assert_eq!(mid_reg.len(), 2);
        assert_eq!(mid_reg.entries[0].index, 0);
        assert_eq!(mid_reg.entries[0].provenance, None);
        // The moved entry keeps its orientation and provenance tag.
        assert_eq!(mid_reg.entries[1].index, 1);
        assert!(mid_reg.entries[1].provenance.is_some());
    }

    #[test]
    fn splitting_a_square_interior_edge_connects_both_faces() {
        // Two incident unit squares share exactly the endpoints, so the
        // midpoint sees six distinct cell vertices: the two subdivision far
        // ends plus the four outer corners.
        let mut k = build_lattice(RootSystemKind::Square2D, 3);
        let e = edge_between(&k, [0, 0, 0], [1, 0, 0]);
        let vertices_before = k.vertex_count();
        let edges_before = k.live_edge_count();
        let m = split_edge(&mut k, e).unwrap();
        k.validate().unwrap();
        assert_eq!(k.degree(m).unwrap(), 6);
        let nbr_coords: std::collections::BTreeSet<Coords> = k
            .neighbors(m)
            .unwrap()
            .iter()
            .map(|(v, _)| k.vertex(*v).unwrap().coords)
            .collect();
        let expected: std::collections::BTreeSet<Coords> = [
            [0, 0, 0],
            [1, 0, 0],
            [0, 1, 0],
            [1, 1, 0],
            [0, -1, 0],
            [1, -1, 0],
        ]
        .into_iter()
        .collect();
        assert_eq!(nbr_coords, expected);
        assert_eq!(k.vertex_count(), vertices_before + 1);
        assert_eq!(k.live_edge_count(), edges_before + 1 + 4);
    }

    #[test]
    fn splitting_a_cubic_interior_edge_gives_degree_eighteen() {
        let mut k = build_lattice(RootSystemKind::Cubic3D, 3);
        let e = edge_between(&k, [0, 0, 0], [1, 0, 0]);
        let m = split_edge(&mut k, e).unwrap();
        k.validate().unwrap();
        assert_eq!(k.degree(m).unwrap(), 18);
    }

    #[test]
    fn split_adds_exactly_one_tadpole_entry() {
        let mut k = build_lattice(RootSystemKind::Square2D, 2);
        let total = |k: &LatticeComplex| -> usize {
            k.live_vertices().map(|v| k.vertex(v).unwrap().registry.len()).sum()
        };
        let before = total(&k);
        let e = edge_between(&k, [0, 0, 0], [1, 0, 0]);
        split_edge(&mut k, e).unwrap();
        assert_eq!(total(&k), before + 1);
    }

    #[test]
    fn splitting_a_contracted_edge_is_rejected() {
        let mut k = build_path(3);
        let e = edge_between(&k, [1, 0, 0], [2, 0, 0]);
        contract(&mut k, e).unwrap();
        assert!(matches!(split_edge(&mut k, e), Err(Error::EdgeNotLive(_))));
    }

    #[test]
    fn contract_preserves_the_orientation_multiset() {
        let mut k = build_lattice(RootSystemKind::A3, 2);
        let orientations = |k: &LatticeComplex| -> Vec<i8> {
            let mut v: Vec<i8> = k
                .live_vertices()
                .flat_map(|w| k.vertex(w).unwrap().registry.entries.iter().map(|e| e.orientation))
                .collect();
            v.sort();
            v
        };
        let before = orientations(&k);
        let u = k.find_vertex([0, 0, 0]).unwrap();
        let v = k.find_vertex([1, 1, 0]).unwrap();
        let e_uv = k.find_edge(u, v).unwrap();
        contract(&mut k, e_uv).unwrap();
        assert_eq!(orientations(&k), before);
    }
}
