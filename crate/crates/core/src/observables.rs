//! Static observables of a configured complex: the curvature operator read
//! off a commutator loop next to a contraction, and the entropy of a
//! prospective contraction set.

use crate::error::{Error, Result};
use crate::lattice::{EdgeId, EdgeLabel, LatticeComplex, VertexId};
use crate::words::{walk, FermionicMode, Letter, Sign, Word};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

/// How walks rooted at a merged vertex pick their starting constituent.
/// The default sends the commutator loop through the absorbed constituent
/// and a leading z-step through the survivor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ResolutionPolicy {
    #[default]
    LoopAbsorbedZSurvivor,
    LoopSurvivorZAbsorbed,
}

/// Outcome of the curvature operator R_base(x, y) applied to z: the two
/// route endpoints and a shortest walkable path connecting them.
#[derive(Debug, Clone)]
pub struct HolonomyResult {
    /// Endpoint of [x y x⁻¹ y⁻¹ z] — loop first, then z.
    pub endpoint_first_then_z: VertexId,
    /// Endpoint of [z x y x⁻¹ y⁻¹] — z first, then the loop.
    pub z_first_then_endpoint: VertexId,
    /// Shortest generator-edge path from the first endpoint to the second,
    /// as a walkable word. Empty iff the endpoints coincide.
    pub connecting_path: Word,
}

impl HolonomyResult {
    pub fn is_flat(&self) -> bool {
        self.connecting_path.is_empty()
    }
}

fn commutator(x: u8, y: u8) -> Vec<Letter> {
    vec![
        Letter::spatial(x, Sign::Pos),
        Letter::spatial(y, Sign::Pos),
        Letter::spatial(x, Sign::Neg),
        Letter::spatial(y, Sign::Neg),
    ]
}

/// Computes the curvature value R_base(x, y) z with the default resolution.
pub fn curvature(
    complex: &LatticeComplex,
    base: VertexId,
    x: u8,
    y: u8,
    z: u8,
) -> Result<HolonomyResult> {
    curvature_with_policy(complex, base, x, y, z, ResolutionPolicy::default())
}

pub fn curvature_with_policy(
    complex: &LatticeComplex,
    base: VertexId,
    x: u8,
    y: u8,
    z: u8,
    policy: ResolutionPolicy,
) -> Result<HolonomyResult> {
    let gens = complex.system().generator_count();
    for g in [x, y, z] {
        complex.system().generator(g as usize).map_err(|_| Error::GeneratorOutOfRange {
            index: g as usize,
            system: complex.kind().name().to_string(),
            count: gens,
        })?;
    }
    if !complex.contains_vertex(base) {
        return Err(Error::UnknownVertex(base));
    }

    // At a merged base the two routes resolve to different constituents,
    // which is exactly where the holonomy comes from.
    let rep = complex.rep(base);
    let (loop_start, z_start) = match complex
        .contraction_log()
        .iter()
        .rev()
        .find(|r| r.survivor == rep)
    {
        Some(record) => match policy {
            ResolutionPolicy::LoopAbsorbedZSurvivor => (record.absorbed, record.survivor),
            ResolutionPolicy::LoopSurvivorZAbsorbed => (record.survivor, record.absorbed),
        },
        None => (base, base),
    };

    let mut loop_then_z = commutator(x, y);
    loop_then_z.push(Letter::spatial(z, Sign::Pos));
    let mut z_then_loop = vec![Letter::spatial(z, Sign::Pos)];
    z_then_loop.extend(commutator(x, y));

    // The operator is a geometric probe: its walks may legitimately revisit
    // a directed edge (e.g. z equal to x), so they run permissively.
    let run = |start: VertexId, letters: Vec<Letter>| -> Result<VertexId> {
        walk(complex, start, &Word::open(letters), FermionicMode::Permissive)
            .map(|state| state.occupied_constituent)
            .map_err(|err| match err {
                Error::DeadEnd { at, letter } => Error::HolonomyUndefined {
                    base,
                    reason: format!("dead end at {at} on {letter}"),
                    partial: Vec::new(),
                },
                other => other,
            })
    };

    let c = run(loop_start, loop_then_z)?;
    let d = run(z_start, z_then_loop)?;
    let connecting_path = shortest_walk_word(complex, c, d)?;
    Ok(HolonomyResult {
        endpoint_first_then_z: c,
        z_first_then_endpoint: d,
        connecting_path,
    })
}

/// Breadth-first search in constituent space over live generator edges,
/// ties broken by lexicographic edge identity, returning a word that walks
/// from `from` to (any constituent of) `to`'s current vertex.
fn shortest_walk_word(complex: &LatticeComplex, from: VertexId, to: VertexId) -> Result<Word> {
    let target = complex.rep(to);
    if complex.rep(from) == target {
        return Ok(Word::open(Vec::new()));
    }
    let mut parent: BTreeMap<VertexId, (VertexId, Letter)> = BTreeMap::new();
    let mut queue = VecDeque::new();
    queue.push_back(from);
    let mut found = None;
    'search: while let Some(v) = queue.pop_front() {
        for &e in complex.incident_of(v) {
            let data = complex.edge(e)?;
            let EdgeLabel::Generator(g) = data.label else { continue };
            if !data.is_live() {
                continue;
            }
            let (next, sign) = if data.base == v {
                (data.head, Sign::Pos)
            } else {
                (data.base, Sign::Neg)
            };
            if next == from || parent.contains_key(&next) {
                continue;
            }
            parent.insert(next, (v, Letter::spatial(g, sign)));
            if complex.rep(next) == target {
                found = Some(next);
                break 'search;
            }
            queue.push_back(next);
        }
    }
    let Some(mut cursor) = found else {
        return Err(Error::Unreachable(from, to));
    };
    let mut letters = Vec::new();
    while cursor != from {
        let (prev, letter) = parent[&cursor];
        letters.push(letter);
        cursor = prev;
    }
    letters.reverse();
    Ok(Word::open(letters))
}

/// Entropy result: S together with the counted witness vertices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EntropyResult {
    pub s: i64,
    pub witnesses: Vec<VertexId>,
}

/// Entropy of a prospective contraction set: minus the number of distinct
/// vertices that are not endpoints of any edge in the set but neighbour an
/// endpoint through a live edge. Tadpoles connect a vertex to itself and
/// never contribute.
pub fn entropy(complex: &LatticeComplex, contraction_set: &[EdgeId]) -> Result<EntropyResult> {
    let mut ids = BTreeSet::new();
    for &e in contraction_set {
        if !ids.insert(e) {
            return Err(Error::InadmissibleSet(format!("edge {e} listed twice")));
        }
    }

    // Joint admissibility: merging the set in ascending id order must never
    // reach an edge whose endpoints have already been identified.
    let mut proxy: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    fn find(proxy: &BTreeMap<VertexId, VertexId>, mut v: VertexId) -> VertexId {
        while let Some(&p) = proxy.get(&v) {
            v = p;
        }
        v
    }
    let mut endpoints = BTreeSet::new();
    for &e in &ids {
        let data = complex.edge(e)?;
        if !data.is_live() {
            return Err(Error::EdgeNotLive(e));
        }
        let (ru, rv) = (complex.rep(data.base), complex.rep(data.head));
        if ru == rv {
            return Err(Error::TadpoleEdge(e));
        }
        endpoints.insert(ru);
        endpoints.insert(rv);
        let (fu, fv) = (find(&proxy, ru), find(&proxy, rv));
        if fu == fv {
            return Err(Error::InadmissibleSet(format!(
                "edge {e} becomes a tadpole after earlier merges in the set"
            )));
        }
        proxy.insert(fu.max(fv), fu.min(fv));
    }

    let mut witnesses = BTreeSet::new();
    for &p in &endpoints {
        for (nbr, _) in complex.neighbors(p)? {
            if !endpoints.contains(&nbr) && nbr != p {
                witnesses.insert(nbr);
            }
        }
    }
    Ok(EntropyResult { s: -(witnesses.len() as i64), witnesses: witnesses.into_iter().collect() })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{build_lattice, RootSystemKind};
    use crate::topology::contract;

    fn edge(k: &LatticeComplex, a: [i64; 3], b: [i64; 3]) -> EdgeId {
        k.find_edge(k.find_vertex(a).unwrap(), k.find_vertex(b).unwrap()).unwrap()
    }

    #[test]
    fn snowflake_entropy_is_minus_six() {
        let k = build_lattice(RootSystemKind::Square2D, 4);
        let r = entropy(&k, &[edge(&k, [0, 0, 0], [1, 0, 0])]).unwrap();
        assert_eq!(r.s, -6);
        assert_eq!(r.witnesses.len(), 6);
    }

    #[test]
    fn collinear_pair_entropy_is_minus_eight() {
        let k = build_lattice(RootSystemKind::Square2D, 4);
        let set = [edge(&k, [0, 0, 0], [1, 0, 0]), edge(&k, [1, 0, 0], [2, 0, 0])];
        assert_eq!(entropy(&k, &set).unwrap().s, -8);
    }

    #[test]
    fn corner_pair_entropy_is_minus_seven() {
        let k = build_lattice(RootSystemKind::Square2D, 4);
        let set = [edge(&k, [0, 0, 0], [1, 0, 0]), edge(&k, [1, 0, 0], [1, 1, 0])];
        assert_eq!(entropy(&k, &set).unwrap().s, -7);
    }

    #[test]
    fn empty_set_has_zero_entropy() {
        let k = build_lattice(RootSystemKind::Square2D, 2);
        assert_eq!(entropy(&k, &[]).unwrap().s, 0);
    }

    #[test]
    fn far_separated_contractions_add_up() {
        let k = build_lattice(RootSystemKind::Square2D, 5);
        let set = [edge(&k, [-4, 0, 0], [-3, 0, 0]), edge(&k, [3, 0, 0], [4, 0, 0])];
        assert_eq!(entropy(&k, &set).unwrap().s, -12);
    }

    #[test]
    fn entropy_never_counts_an_endpoint() {
        let k = build_lattice(RootSystemKind::Square2D, 4);
        let set = [
            edge(&k, [0, 0, 0], [1, 0, 0]),
            edge(&k, [1, 0, 0], [1, 1, 0]),
            edge(&k, [1, 1, 0], [0, 1, 0]),
        ];
        let r = entropy(&k, &set).unwrap();
        let endpoints: BTreeSet<VertexId> = set
            .iter()
            .flat_map(|&e| {
                let d = k.edge(e).unwrap();
                [d.base, d.head]
            })
            .collect();
        for w in &r.witnesses {
            assert!(!endpoints.contains(w));
        }
    }

    #[test]
    fn closing_a_cycle_inside_the_set_is_inadmissible() {
        let k = build_lattice(RootSystemKind::Square2D, 3);
        let set = [
            edge(&k, [0, 0, 0], [1, 0, 0]),
            edge(&k, [1, 0, 0], [1, 1, 0]),
            edge(&k, [1, 1, 0], [0, 1, 0]),
            edge(&k, [0, 1, 0], [0, 0, 0]),
        ];
        assert!(matches!(entropy(&k, &set), Err(Error::InadmissibleSet(_))));
    }

    #[test]
    fn flat_lattice_has_empty_holonomy() {
        // Extent 3 keeps the displaced commutator loop inside the ball.
        let k = build_lattice(RootSystemKind::Cubic3D, 3);
        let o = k.find_vertex([0, 0, 0]).unwrap();
        let r = curvature(&k, o, 0, 1, 2).unwrap();
        assert!(r.is_flat());
        assert_eq!(
            k.rep(r.endpoint_first_then_z),
            k.rep(r.z_first_then_endpoint)
        );
    }

    #[test]
    fn contracted_x_edge_produces_a_unit_holonomy() {
        let mut k = build_lattice(RootSystemKind::Cubic3D, 3);
        let a = k.find_vertex([0, 0, 0]).unwrap();
        let b = k.find_vertex([1, 0, 0]).unwrap();
        let e_ab = k.find_edge(a, b).unwrap();
        contract(&mut k, e_ab).unwrap();

        let r = curvature(&k, a, 0, 1, 2).unwrap();
        assert_eq!(k.vertex(r.endpoint_first_then_z).unwrap().coords, [1, 0, 1]);
        assert_eq!(k.vertex(r.z_first_then_endpoint).unwrap().coords, [0, 0, 1]);
        assert_eq!(r.connecting_path.len(), 1);

        // The connecting word really walks from c to d.
        let end = walk(&k, r.endpoint_first_then_z, &r.connecting_path, FermionicMode::Strict)
            .unwrap();
        assert_eq!(k.rep(end.current_vertex), k.rep(r.z_first_then_endpoint));
    }

    #[test]
    fn swapped_policy_mirrors_the_assignment() {
        // Loop in the (y, z) plane with a y-valued z-step: both routes stay
        // clear of the contracted x edge under either policy. Extent 4 keeps
        // the swapped route's excursion inside the ball.
        let mut k = build_lattice(RootSystemKind::Cubic3D, 4);
        let a = k.find_vertex([0, 0, 0]).unwrap();
        let b = k.find_vertex([1, 0, 0]).unwrap();
        let e_ab = k.find_edge(a, b).unwrap();
        contract(&mut k, e_ab).unwrap();

        let r = curvature(&k, a, 1, 2, 1).unwrap();
        assert_eq!(k.vertex(r.endpoint_first_then_z).unwrap().coords, [1, 1, 0]);
        assert_eq!(k.vertex(r.z_first_then_endpoint).unwrap().coords, [0, 1, 0]);
        assert_eq!(r.connecting_path.len(), 1);

        let s = curvature_with_policy(&k, a, 1, 2, 1, ResolutionPolicy::LoopSurvivorZAbsorbed)
            .unwrap();
        assert_eq!(k.vertex(s.endpoint_first_then_z).unwrap().coords, [0, 1, 0]);
        assert_eq!(k.vertex(s.z_first_then_endpoint).unwrap().coords, [1, 1, 0]);
    }

    #[test]
    fn z_parallel_to_the_contracted_direction_is_undefined() {
        // With z = x the z-first route must leave the survivor constituent
        // along its x edge, which is exactly the contracted one: the walk
        // dead-ends and the operator reports the holonomy as undefined.
        let mut k = build_lattice(RootSystemKind::Cubic3D, 3);
        let a = k.find_vertex([0, 0, 0]).unwrap();
        let b = k.find_vertex([1, 0, 0]).unwrap();
        let e_ab = k.find_edge(a, b).unwrap();
        contract(&mut k, e_ab).unwrap();
        assert!(matches!(
            curvature(&k, a, 1, 2, 0),
            Err(Error::HolonomyUndefined { .. })
        ));
    }

    #[test]
    fn missing_route_reports_holonomy_undefined() {
        // z chosen so the z-first walk leaves the complex: base at the
        // boundary with z pointing outward.
        let k = build_lattice(RootSystemKind::Cubic3D, 1);
        let o = k.find_vertex([0, 0, 0]).unwrap();
        let r = curvature(&k, o, 0, 1, 2);
        assert!(matches!(r, Err(Error::HolonomyUndefined { .. })));
    }
}
