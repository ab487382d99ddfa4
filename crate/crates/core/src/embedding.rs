//! Dart-based combinatorial maps for orientable 2-cell embeddings.
//!
//! A [`CombEmbedding`] stores, for every vertex, the cyclic
//! counterclockwise order of its incident darts (a rotation system).
//! This determines a 2-cell embedding of the underlying multigraph in a
//! closed orientable surface up to homeomorphism; faces are recovered by
//! the face-tracing rule `succ(d) = rotation_next(twin(d))`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::graph::MultiGraph;
use crate::unionfind::UnionFind;

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VertexId(pub usize);

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct EdgeId(pub usize);

/// Which end of an edge a dart is: `A` sits at `endpoints().0`, `B` at
/// `endpoints().1`. For a loop both darts sit at the same vertex but
/// remain distinct.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum End {
    A,
    B,
}

impl End {
    pub fn flip(self) -> End {
        match self {
            End::A => End::B,
            End::B => End::A,
        }
    }
}

/// One of the two directed ends of an edge; the atomic unit of the map.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Dart {
    pub edge: EdgeId,
    pub end: End,
}

impl Dart {
    pub fn new(edge: EdgeId, end: End) -> Self {
        Dart { edge, end }
    }

    /// The other dart of the same edge (a fixed-point-free involution).
    pub fn twin(self) -> Dart {
        Dart {
            edge: self.edge,
            end: self.end.flip(),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FaceId(pub usize);

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

impl fmt::Display for Dart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let tag = match self.end {
            End::A => 'a',
            End::B => 'b',
        };
        write!(f, "e{}{}", self.edge.0, tag)
    }
}

impl fmt::Display for FaceId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{}", self.0)
    }
}

/// A rotation system on a multigraph: the combinatorial form of a 2-cell
/// embedding in an orientable closed surface.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombEmbedding {
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    rotations: BTreeMap<VertexId, Vec<Dart>>,
}

impl CombEmbedding {
    pub fn new() -> Self {
        CombEmbedding {
            edges: BTreeMap::new(),
            rotations: BTreeMap::new(),
        }
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.rotations.entry(v).or_default();
    }

    /// Adds an edge and appends its darts at the end of the endpoint
    /// rotations (dart `A` at `u`, dart `B` at `w`). Builder convenience;
    /// edits that care about cyclic position use the `edit` module.
    pub fn add_edge(&mut self, e: EdgeId, u: VertexId, w: VertexId) {
        assert!(
            !self.edges.contains_key(&e),
            "duplicate edge id {e} in embedding"
        );
        self.edges.insert(e, (u, w));
        self.rotations.entry(u).or_default().push(Dart::new(e, End::A));
        self.rotations.entry(w).or_default().push(Dart::new(e, End::B));
    }

    /// Builds an embedding from explicit rotations. The rotations are
    /// taken verbatim; call [`CombEmbedding::validate`] afterwards.
    pub fn from_rotations(
        edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
        rotations: BTreeMap<VertexId, Vec<Dart>>,
    ) -> Self {
        CombEmbedding { edges, rotations }
    }

    pub fn vertex_count(&self) -> usize {
        self.rotations.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.rotations.keys().copied()
    }

    pub fn edge_ids(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.edges.keys().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, w))| (e, u, w))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.rotations.contains_key(&v)
    }

    pub fn contains_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        self.endpoints(e).map(|(u, w)| u == w).unwrap_or(false)
    }

    /// The vertex a dart is incident to.
    pub fn vertex_of(&self, d: Dart) -> Option<VertexId> {
        self.endpoints(d.edge).map(|(u, w)| match d.end {
            End::A => u,
            End::B => w,
        })
    }

    /// The cyclic counterclockwise dart order at `v`.
    pub fn rotation(&self, v: VertexId) -> Option<&[Dart]> {
        self.rotations.get(&v).map(|r| r.as_slice())
    }

    pub fn degree(&self, v: VertexId) -> usize {
        self.rotations.get(&v).map(|r| r.len()).unwrap_or(0)
    }

    /// All darts in ascending `(edge, end)` order.
    pub fn darts(&self) -> impl Iterator<Item = Dart> + '_ {
        self.edges.keys().flat_map(|&e| {
            [Dart::new(e, End::A), Dart::new(e, End::B)].into_iter()
        })
    }

    /// Next dart counterclockwise after `d` around its vertex.
    /// Requires `d` to be present in its vertex rotation.
    pub fn rotation_next(&self, d: Dart) -> Dart {
        let v = self.vertex_of(d).expect("dart of unknown edge");
        let rot = &self.rotations[&v];
        let i = rot
            .iter()
            .position(|&x| x == d)
            .expect("dart missing from its rotation");
        rot[(i + 1) % rot.len()]
    }

    /// Previous dart counterclockwise (= next clockwise).
    pub fn rotation_prev(&self, d: Dart) -> Dart {
        let v = self.vertex_of(d).expect("dart of unknown edge");
        let rot = &self.rotations[&v];
        let i = rot
            .iter()
            .position(|&x| x == d)
            .expect("dart missing from its rotation");
        rot[(i + rot.len() - 1) % rot.len()]
    }

    /// Face-tracing successor: traverse the edge, then turn to the next
    /// dart counterclockwise. Orbits of this map are the face walks.
    pub fn face_succ(&self, d: Dart) -> Dart {
        self.rotation_next(d.twin())
    }

    pub(crate) fn rotation_mut(&mut self, v: VertexId) -> &mut Vec<Dart> {
        self.rotations.get_mut(&v).expect("unknown vertex")
    }

    pub(crate) fn insert_edge_raw(&mut self, e: EdgeId, u: VertexId, w: VertexId) {
        let prev = self.edges.insert(e, (u, w));
        assert!(prev.is_none(), "duplicate edge id {e}");
    }

    pub(crate) fn remove_edge_raw(&mut self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.remove(&e)
    }

    pub(crate) fn remove_vertex_raw(&mut self, v: VertexId) {
        self.rotations.remove(&v);
    }

    /// Smallest unused vertex id.
    pub fn fresh_vertex_id(&self) -> VertexId {
        VertexId(self.rotations.keys().map(|v| v.0 + 1).max().unwrap_or(0))
    }

    /// Smallest unused edge id.
    pub fn fresh_edge_id(&self) -> EdgeId {
        EdgeId(self.edges.keys().map(|e| e.0 + 1).max().unwrap_or(0))
    }

    /// Forgets the rotations.
    pub fn abstract_graph(&self) -> MultiGraph {
        let mut g = MultiGraph::new();
        for v in self.vertices() {
            g.add_vertex(v);
        }
        for (e, u, w) in self.edges() {
            g.add_edge(e, u, w);
        }
        g
    }

    /// Rotates every rotation to start at its least dart. Cyclic orders
    /// are untouched; two embeddings are equal as maps iff their
    /// canonical forms are equal as values.
    pub fn canonicalize(&self) -> CombEmbedding {
        let mut out = self.clone();
        for rot in out.rotations.values_mut() {
            if let Some(min_pos) = rot
                .iter()
                .enumerate()
                .min_by_key(|(_, d)| **d)
                .map(|(i, _)| i)
            {
                rot.rotate_left(min_pos);
            }
        }
        out
    }

    /// Checks every invariant and reports all violations found.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();

        if self.rotations.is_empty() {
            violations.push(Violation::NoVertices);
            return ValidationReport { violations };
        }

        // Endpoints of every edge must be known vertices.
        for (&e, &(u, w)) in &self.edges {
            for v in [u, w] {
                if !self.rotations.contains_key(&v) {
                    violations.push(Violation::UnknownEndpoint { edge: e, vertex: v });
                }
            }
        }

        // Every dart appears exactly once, in the rotation of its own vertex.
        let mut seen: BTreeMap<Dart, VertexId> = BTreeMap::new();
        for (&v, rot) in &self.rotations {
            for &d in rot {
                match self.vertex_of(d) {
                    None => violations.push(Violation::UnknownEdgeInRotation { dart: d, vertex: v }),
                    Some(home) if home != v => {
                        violations.push(Violation::DartMisplaced {
                            dart: d,
                            listed_at: v,
                            belongs_at: home,
                        });
                    }
                    Some(_) => {
                        if let Some(&first) = seen.get(&d) {
                            violations.push(Violation::DartRepeated {
                                dart: d,
                                first_at: first,
                                again_at: v,
                            });
                        } else {
                            seen.insert(d, v);
                        }
                    }
                }
            }
        }
        for d in self.darts() {
            if !seen.contains_key(&d) {
                violations.push(Violation::DartMissing { dart: d });
            }
        }

        // Connectivity of the underlying graph.
        let index: BTreeMap<VertexId, usize> = self
            .rotations
            .keys()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut uf = UnionFind::new(index.len());
        for &(u, w) in self.edges.values() {
            if let (Some(&iu), Some(&iw)) = (index.get(&u), index.get(&w)) {
                uf.union(iu, iw);
            }
        }
        if uf.class_count() != 1 {
            violations.push(Violation::Disconnected {
                components: uf.class_count(),
            });
        }

        // Euler characteristic, only meaningful once the structure is sound.
        if violations.is_empty() {
            let faces = self.face_structure_unchecked();
            let chi = self.vertex_count() as i64 - self.edge_count() as i64
                + faces.face_count() as i64;
            if chi.rem_euclid(2) != 0 {
                violations.push(Violation::OddEulerCharacteristic { chi });
            } else if chi > 2 {
                violations.push(Violation::EulerCharacteristicTooLarge { chi });
            }
        }

        ValidationReport { violations }
    }

    /// Traces all face walks. Fails if the embedding is invalid.
    pub fn trace_faces(&self) -> Result<FaceStructure, InvalidEmbedding> {
        let report = self.validate();
        if !report.pass() {
            return Err(InvalidEmbedding { report });
        }
        Ok(self.face_structure_unchecked())
    }

    /// Face tracing without validation. Callers must guarantee that every
    /// dart sits exactly once in the rotation of its own vertex.
    pub(crate) fn face_structure_unchecked(&self) -> FaceStructure {
        let mut walks = Vec::new();
        let mut dart_face: BTreeMap<Dart, FaceId> = BTreeMap::new();
        // Darts in ascending order; each orbit starts at its least dart,
        // so faces come out sorted by least contained dart.
        for start in self.darts() {
            if dart_face.contains_key(&start) {
                continue;
            }
            let id = FaceId(walks.len());
            let mut walk = Vec::new();
            let mut d = start;
            loop {
                walk.push(d);
                dart_face.insert(d, id);
                d = self.face_succ(d);
                if d == start {
                    break;
                }
            }
            walks.push(FaceWalk { id, darts: walk });
        }
        // A single vertex with no edges still bounds one region.
        if walks.is_empty() && self.vertex_count() == 1 {
            walks.push(FaceWalk {
                id: FaceId(0),
                darts: Vec::new(),
            });
        }
        FaceStructure { walks, dart_face }
    }

    /// Vertex, edge, region counts plus Euler characteristic and genus.
    pub fn stats(&self) -> Result<SurfaceStats, InvalidEmbedding> {
        let faces = self.trace_faces()?;
        let p = self.vertex_count();
        let q = self.edge_count();
        let r = faces.face_count();
        let chi = p as i64 - q as i64 + r as i64;
        // validate() already rejected odd or > 2 characteristics.
        let genus = ((2 - chi) / 2) as u32;
        Ok(SurfaceStats {
            p,
            q,
            r,
            euler_characteristic: chi,
            genus,
        })
    }
}

impl Default for CombEmbedding {
    fn default() -> Self {
        Self::new()
    }
}

/// One traced region boundary: the cyclic dart sequence of the walk.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FaceWalk {
    pub id: FaceId,
    pub darts: Vec<Dart>,
}

impl FaceWalk {
    pub fn len(&self) -> usize {
        self.darts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.darts.is_empty()
    }

    /// Vertex at each boundary occurrence (`vertex_of` of each walk dart).
    pub fn occurrence_vertices(&self, emb: &CombEmbedding) -> Vec<VertexId> {
        self.darts
            .iter()
            .map(|&d| emb.vertex_of(d).expect("walk dart of unknown edge"))
            .collect()
    }
}

/// All face walks of an embedding plus the dart-to-face index.
#[derive(Clone, Debug)]
pub struct FaceStructure {
    walks: Vec<FaceWalk>,
    dart_face: BTreeMap<Dart, FaceId>,
}

impl FaceStructure {
    pub fn face_count(&self) -> usize {
        self.walks.len()
    }

    pub fn walks(&self) -> &[FaceWalk] {
        &self.walks
    }

    pub fn walk(&self, f: FaceId) -> &FaceWalk {
        &self.walks[f.0]
    }

    pub fn contains(&self, f: FaceId) -> bool {
        f.0 < self.walks.len()
    }

    /// Face whose walk contains `d`.
    pub fn face_of(&self, d: Dart) -> FaceId {
        self.dart_face[&d]
    }

    /// Face on the other side of `d`'s edge.
    pub fn face_across(&self, d: Dart) -> FaceId {
        self.dart_face[&d.twin()]
    }

    /// Faces incident to `v` through its corners, ascending, deduplicated.
    pub fn faces_at_vertex(&self, emb: &CombEmbedding, v: VertexId) -> Vec<FaceId> {
        let mut out: BTreeSet<FaceId> = BTreeSet::new();
        if let Some(rot) = emb.rotation(v) {
            for &d in rot {
                // The corner ending at dart d belongs to the face whose
                // walk contains d.
                out.insert(self.face_of(d));
            }
        }
        if emb.degree(v) == 0 && self.walks.len() == 1 {
            out.insert(FaceId(0));
        }
        out.into_iter().collect()
    }
}

/// Exact surface bookkeeping for a valid embedding.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SurfaceStats {
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub euler_characteristic: i64,
    pub genus: u32,
}

/// A single invariant violation, pointing at the offending element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NoVertices,
    UnknownEndpoint { edge: EdgeId, vertex: VertexId },
    UnknownEdgeInRotation { dart: Dart, vertex: VertexId },
    DartMisplaced {
        dart: Dart,
        listed_at: VertexId,
        belongs_at: VertexId,
    },
    DartRepeated {
        dart: Dart,
        first_at: VertexId,
        again_at: VertexId,
    },
    DartMissing { dart: Dart },
    Disconnected { components: usize },
    OddEulerCharacteristic { chi: i64 },
    EulerCharacteristicTooLarge { chi: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoVertices => write!(f, "embedding has no vertices"),
            Violation::UnknownEndpoint { edge, vertex } => {
                write!(f, "edge {edge} references unknown vertex {vertex}")
            }
            Violation::UnknownEdgeInRotation { dart, vertex } => {
                write!(f, "rotation of {vertex} lists dart {dart} of an unknown edge")
            }
            Violation::DartMisplaced {
                dart,
                listed_at,
                belongs_at,
            } => write!(
                f,
                "dart {dart} listed at {listed_at} but belongs at {belongs_at}"
            ),
            Violation::DartRepeated {
                dart,
                first_at,
                again_at,
            } => write!(
                f,
                "dart {dart} appears more than once (at {first_at} and {again_at})"
            ),
            Violation::DartMissing { dart } => {
                write!(f, "dart {dart} missing from every rotation")
            }
            Violation::Disconnected { components } => {
                write!(f, "underlying graph has {components} components, expected 1")
            }
            Violation::OddEulerCharacteristic { chi } => {
                write!(f, "Euler characteristic {chi} is odd")
            }
            Violation::EulerCharacteristicTooLarge { chi } => {
                write!(f, "Euler characteristic {chi} exceeds 2")
            }
        }
    }
}

/// Outcome of [`CombEmbedding::validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn pass(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.pass() {
            write!(f, "ok")
        } else {
            for (i, v) in self.violations.iter().enumerate() {
                if i > 0 {
                    write!(f, "; ")?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        }
    }
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("invalid embedding: {report}")]
pub struct InvalidEmbedding {
    pub report: ValidationReport,
}

/// Result of a budgeted exhaustive rotation-system search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GenusSearchOutcome {
    /// First embedding with the requested genus in enumeration order.
    Found(CombEmbedding),
    /// The whole (reduced) rotation space was enumerated; none matches.
    NoneExists { examined: u64 },
    /// Budget ran out before the space was exhausted.
    Unknown { examined: u64 },
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
pub enum GenusSearchError {
    #[error("input graph is not connected")]
    Disconnected,
}

/// Exhaustively searches rotation systems of `graph` for an embedding of
/// the requested genus.
///
/// The space is reduced by enumerating, at the least vertex of degree at
/// least 3, only cyclic orders that are lexicographically no larger than
/// their own reversal: reversing every rotation is a mirror embedding
/// with the same face count, so the quotient is genus-complete.
pub fn find_embedding_with_genus(
    graph: &MultiGraph,
    target_genus: u32,
    budget: u64,
) -> Result<GenusSearchOutcome, GenusSearchError> {
    if !graph.is_connected() {
        return Err(GenusSearchError::Disconnected);
    }

    // Darts at each vertex in ascending order; loops contribute both ends.
    let mut darts_at: BTreeMap<VertexId, Vec<Dart>> = BTreeMap::new();
    for v in graph.vertices() {
        darts_at.insert(v, Vec::new());
    }
    for (e, u, w) in graph.edges() {
        darts_at.get_mut(&u).unwrap().push(Dart::new(e, End::A));
        darts_at.get_mut(&w).unwrap().push(Dart::new(e, End::B));
    }
    for list in darts_at.values_mut() {
        list.sort();
    }

    let reflection_vertex = darts_at
        .iter()
        .find(|(_, list)| list.len() >= 3)
        .map(|(&v, _)| v);

    // Candidate rotations per vertex: first dart pinned to kill cyclic
    // shifts, remaining darts permuted lexicographically.
    let vertices: Vec<VertexId> = darts_at.keys().copied().collect();
    let candidates: Vec<Vec<Vec<Dart>>> = vertices
        .iter()
        .map(|&v| {
            let list = &darts_at[&v];
            if list.is_empty() {
                return vec![Vec::new()];
            }
            let head = list[0];
            let mut out = Vec::new();
            permutations_lex(&list[1..], &mut |perm| {
                if Some(v) == reflection_vertex {
                    let rev: Vec<Dart> = perm.iter().rev().copied().collect();
                    if perm > &rev[..] {
                        return;
                    }
                }
                let mut rot = Vec::with_capacity(list.len());
                rot.push(head);
                rot.extend_from_slice(perm);
                out.push(rot);
            });
            out
        })
        .collect();

    let edges: BTreeMap<EdgeId, (VertexId, VertexId)> =
        graph.edges().map(|(e, u, w)| (e, (u, w))).collect();
    let p = vertices.len() as i64;
    let q = edges.len() as i64;

    let mut choice = vec![0usize; vertices.len()];
    let mut examined: u64 = 0;
    loop {
        if examined >= budget {
            return Ok(GenusSearchOutcome::Unknown { examined });
        }
        examined += 1;

        let rotations: BTreeMap<VertexId, Vec<Dart>> = vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, candidates[i][choice[i]].clone()))
            .collect();
        let emb = CombEmbedding::from_rotations(edges.clone(), rotations);
        let r = emb.face_structure_unchecked().face_count() as i64;
        let chi = p - q + r;
        if chi == 2 - 2 * target_genus as i64 {
            debug_assert!(emb.validate().pass());
            return Ok(GenusSearchOutcome::Found(emb));
        }

        // Advance the odometer, least-significant (last vertex) first.
        let mut pos = vertices.len();
        loop {
            if pos == 0 {
                return Ok(GenusSearchOutcome::NoneExists { examined });
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < candidates[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}

/// Visits all permutations of `items` in lexicographic order.
fn permutations_lex<T: Ord + Copy>(items: &[T], visit: &mut impl FnMut(&[T])) {
    let mut perm: Vec<T> = items.to_vec();
    perm.sort();
    loop {
        visit(&perm);
        if !next_permutation(&mut perm) {
            break;
        }
    }
}

fn next_permutation<T: Ord>(arr: &mut [T]) -> bool {
    if arr.len() < 2 {
        return false;
    }
    let mut i = arr.len() - 1;
    while i > 0 && arr[i - 1] >= arr[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = arr.len() - 1;
    while arr[j] <= arr[i - 1] {
        j -= 1;
    }
    arr.swap(i - 1, j);
    arr[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn triangle() -> CombEmbedding {
        let mut emb = CombEmbedding::new();
        emb.add_edge(EdgeId(0), VertexId(0), VertexId(1));
        emb.add_edge(EdgeId(1), VertexId(1), VertexId(2));
        emb.add_edge(EdgeId(2), VertexId(2), VertexId(0));
        emb
    }

    #[test]
    fn triangle_validates_and_has_two_faces() {
        let emb = triangle();
        assert!(emb.validate().pass());
        let faces = emb.trace_faces().unwrap();
        assert_eq!(faces.face_count(), 2);
        assert!(faces.walks().iter().all(|w| w.len() == 3));
        let s = emb.stats().unwrap();
        assert_eq!(
            s,
            SurfaceStats {
                p: 3,
                q: 3,
                r: 2,
                euler_characteristic: 2,
                genus: 0
            }
        );
    }

    #[test]
    fn dart_listed_at_two_vertices_fails() {
        let mut emb = triangle();
        // Move dart e0a from v0's rotation into v1's as a duplicate entry.
        let d = Dart::new(EdgeId(0), End::A);
        emb.rotation_mut(VertexId(1)).push(d);
        let report = emb.validate();
        assert!(!report.pass());
        assert!(report.violations.iter().any(|v| matches!(
            v,
            Violation::DartMisplaced { dart, .. } | Violation::DartRepeated { dart, .. }
            if *dart == d
        )));
    }

    #[test]
    fn disconnected_two_triangles_fail() {
        let mut emb = triangle();
        emb.add_edge(EdgeId(3), VertexId(3), VertexId(4));
        emb.add_edge(EdgeId(4), VertexId(4), VertexId(5));
        emb.add_edge(EdgeId(5), VertexId(5), VertexId(3));
        let report = emb.validate();
        assert!(report
            .violations
            .iter()
            .any(|v| matches!(v, Violation::Disconnected { components: 2 })));
    }

    #[test]
    fn planar_k4_has_four_triangular_faces() {
        // Outer triangle 0,1,2 with 3 in the middle; rotations hand-traced
        // from the drawing before coding.
        let mut edges = BTreeMap::new();
        edges.insert(EdgeId(0), (VertexId(0), VertexId(1))); // 0-1
        edges.insert(EdgeId(1), (VertexId(0), VertexId(2))); // 0-2
        edges.insert(EdgeId(2), (VertexId(0), VertexId(3))); // 0-3
        edges.insert(EdgeId(3), (VertexId(1), VertexId(2))); // 1-2
        edges.insert(EdgeId(4), (VertexId(1), VertexId(3))); // 1-3
        edges.insert(EdgeId(5), (VertexId(2), VertexId(3))); // 2-3
        let mut rotations = BTreeMap::new();
        rotations.insert(
            VertexId(0),
            vec![
                Dart::new(EdgeId(0), End::A),
                Dart::new(EdgeId(2), End::A),
                Dart::new(EdgeId(1), End::A),
            ],
        );
        rotations.insert(
            VertexId(1),
            vec![
                Dart::new(EdgeId(3), End::A),
                Dart::new(EdgeId(4), End::A),
                Dart::new(EdgeId(0), End::B),
            ],
        );
        rotations.insert(
            VertexId(2),
            vec![
                Dart::new(EdgeId(1), End::B),
                Dart::new(EdgeId(5), End::A),
                Dart::new(EdgeId(3), End::B),
            ],
        );
        rotations.insert(
            VertexId(3),
            vec![
                Dart::new(EdgeId(2), End::B),
                Dart::new(EdgeId(4), End::B),
                Dart::new(EdgeId(5), End::B),
            ],
        );
        let emb = CombEmbedding::from_rotations(edges, rotations);
        assert!(emb.validate().pass(), "{}", emb.validate());
        let faces = emb.trace_faces().unwrap();
        assert_eq!(faces.face_count(), 4);
        assert!(faces.walks().iter().all(|w| w.len() == 3));
        assert_eq!(emb.stats().unwrap().genus, 0);
    }

    #[test]
    fn loop_on_sphere() {
        let mut emb = CombEmbedding::new();
        emb.add_edge(EdgeId(0), VertexId(0), VertexId(0));
        assert!(emb.validate().pass());
        let s = emb.stats().unwrap();
        assert_eq!((s.p, s.q, s.r, s.genus), (1, 1, 2, 0));
    }

    #[test]
    fn isolated_vertex_bounds_one_region() {
        let mut emb = CombEmbedding::new();
        emb.add_vertex(VertexId(0));
        assert!(emb.validate().pass(), "{}", emb.validate());
        let s = emb.stats().unwrap();
        assert_eq!((s.p, s.q, s.r, s.genus), (1, 0, 1, 0));
    }

    #[test]
    fn face_walks_partition_darts() {
        let emb = triangle();
        let faces = emb.trace_faces().unwrap();
        let total: usize = faces.walks().iter().map(|w| w.len()).sum();
        assert_eq!(total, 2 * emb.edge_count());
        let mut all: Vec<Dart> = faces
            .walks()
            .iter()
            .flat_map(|w| w.darts.iter().copied())
            .collect();
        all.sort();
        all.dedup();
        assert_eq!(all.len(), 2 * emb.edge_count());
    }

    #[test]
    fn theta_graph_rotation_flip_changes_genus() {
        let mut edges = BTreeMap::new();
        for e in 0..3 {
            edges.insert(EdgeId(e), (VertexId(0), VertexId(1)));
        }
        let a = |e: usize| Dart::new(EdgeId(e), End::A);
        let b = |e: usize| Dart::new(EdgeId(e), End::B);
        // Planar theta: reversed cyclic order at the second vertex.
        let mut rotations = BTreeMap::new();
        rotations.insert(VertexId(0), vec![a(0), a(1), a(2)]);
        rotations.insert(VertexId(1), vec![b(0), b(2), b(1)]);
        let planar = CombEmbedding::from_rotations(edges.clone(), rotations);
        assert_eq!(planar.stats().unwrap().genus, 0);
        assert_eq!(planar.stats().unwrap().r, 3);
        // Same cyclic order on both sides: torus.
        let mut rotations = BTreeMap::new();
        rotations.insert(VertexId(0), vec![a(0), a(1), a(2)]);
        rotations.insert(VertexId(1), vec![b(0), b(1), b(2)]);
        let torus = CombEmbedding::from_rotations(edges, rotations);
        assert_eq!(torus.stats().unwrap().genus, 1);
        assert_eq!(torus.stats().unwrap().r, 1);
    }

    #[test]
    fn genus_search_on_triangle() {
        let g = triangle().abstract_graph();
        match find_embedding_with_genus(&g, 0, 1_000).unwrap() {
            GenusSearchOutcome::Found(emb) => {
                assert_eq!(emb.stats().unwrap().genus, 0);
            }
            other => panic!("expected embedding, got {other:?}"),
        }
        // q - p + 1 = 1 < 2: no genus-1 embedding can exist; the space
        // (a single rotation system) is exhausted.
        match find_embedding_with_genus(&g, 1, 1_000).unwrap() {
            GenusSearchOutcome::NoneExists { examined } => assert_eq!(examined, 1),
            other => panic!("expected exhaustion, got {other:?}"),
        }
    }

    #[test]
    fn genus_search_respects_budget() {
        let g = triangle().abstract_graph();
        match find_embedding_with_genus(&g, 1, 0).unwrap() {
            GenusSearchOutcome::Unknown { examined } => assert_eq!(examined, 0),
            other => panic!("expected unknown, got {other:?}"),
        }
    }

    #[test]
    fn canonicalize_rotates_to_least_dart() {
        let mut emb = triangle();
        emb.rotation_mut(VertexId(0)).rotate_left(1);
        let canon = emb.canonicalize();
        let rot = canon.rotation(VertexId(0)).unwrap();
        assert_eq!(rot[0], Dart::new(EdgeId(0), End::A));
        // Cyclic order preserved.
        assert_eq!(emb.face_structure_unchecked().face_count(), 2);
        assert_eq!(canon.face_structure_unchecked().face_count(), 2);
    }
}
