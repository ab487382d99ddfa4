//! Exact decision of Hamiltonian extendability: can the embedding be
//! extended, inside its regions and without subdividing original edges,
//! to an embedding of a Hamiltonian supergraph?
//!
//! Added material reduces to per-face non-crossing chords: on a
//! Hamiltonian cycle of any extension, the added vertices inside a face
//! form vertex-disjoint boundary-to-boundary subpaths, and each subpath
//! can be replaced by one chord; conversely every non-crossing chord set
//! is realizable. The brute-force added-vertex oracle below exists to
//! cross-check exactly this reduction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::edit::{realize_chords, strictly_interleaved, FacePosition};
use crate::embedding::{
    CombEmbedding, EdgeId, FaceId, InvalidEmbedding, VertexId,
};
use crate::graph::MultiGraph;
use crate::unionfind::UnionFind;

/// A candidate extension edge drawn inside one face, addressed by the
/// two boundary occurrences it joins.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Chord {
    pub face: FaceId,
    pub endpoints: (FacePosition, FacePosition),
}

impl Chord {
    pub fn new(face: FaceId, a: usize, b: usize) -> Self {
        Chord {
            face,
            endpoints: (FacePosition::new(face, a), FacePosition::new(face, b)),
        }
    }
}

impl fmt::Display for Chord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}-{}",
            self.face, self.endpoints.0.occurrence, self.endpoints.1.occurrence
        )
    }
}

/// Do two chords cross? True iff they lie in one face and their endpoint
/// occurrences strictly interleave in the walk's cyclic order. Chords
/// sharing an occurrence can always be perturbed apart at the corner.
pub fn crossing(a: &Chord, b: &Chord) -> bool {
    a.face == b.face
        && strictly_interleaved(
            (a.endpoints.0.occurrence, a.endpoints.1.occurrence),
            (b.endpoints.0.occurrence, b.endpoints.1.occurrence),
        )
}

/// One step of a Hamiltonian cycle: an original edge or a listed chord.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Step {
    Edge(EdgeId),
    /// Index into [`ExtensionCertificate::chords`].
    Chord(usize),
}

/// A verifiable YES-certificate: a non-crossing chord set plus a
/// Hamiltonian cycle of the chord-augmented graph. `steps[i]` joins
/// `cycle[i]` to `cycle[(i+1) % p]`.
#[derive(Clone, Debug)]
pub struct ExtensionCertificate {
    pub chords: Vec<Chord>,
    pub cycle: Vec<VertexId>,
    pub steps: Vec<Step>,
}

/// Outcome of the exact decision procedure.
#[derive(Clone, Debug)]
pub enum DeciderOutcome {
    Yes(ExtensionCertificate),
    /// Search space fully exhausted: no Hamiltonian extension exists.
    No { nodes: u64 },
    /// Budget ran out first; no conclusion.
    Unknown { nodes: u64 },
}

impl DeciderOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, DeciderOutcome::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, DeciderOutcome::No { .. })
    }
}

#[derive(Clone, Debug, Error)]
pub enum HamError {
    #[error(transparent)]
    Invalid(#[from] InvalidEmbedding),
}

/// Decides Hamiltonian extendability by backtracking over partial cycles
/// whose moves are unused original edges or non-crossing chords, in a
/// fixed branch order (edges before chords, lexicographic). NO is
/// reported only when the space is exhausted within the budget.
pub fn decide_ham_extendable(
    emb: &CombEmbedding,
    budget: u64,
) -> Result<DeciderOutcome, HamError> {
    decide_with_chord_cap(emb, None, budget)
}

/// [`decide_ham_extendable`] with an optional cap on the number of chords.
pub fn decide_with_chord_cap(
    emb: &CombEmbedding,
    max_chords: Option<usize>,
    budget: u64,
) -> Result<DeciderOutcome, HamError> {
    emb.trace_faces()?;
    let mut searcher = Searcher::new(emb, max_chords, budget);
    Ok(searcher.run())
}

/// Outcome of the minimal-added-edges search.
#[derive(Clone, Debug)]
pub enum MinEdgesOutcome {
    Found {
        k: usize,
        certificate: ExtensionCertificate,
    },
    /// Exhausted every chord count up to p: no extension at all.
    NoneExists,
    Unknown {
        /// All counts below this were exhausted with NO.
        exhausted_below: usize,
    },
}

/// Smallest number of added edges admitting a Hamiltonian extension,
/// by iterative deepening on the chord count.
pub fn min_added_edges(emb: &CombEmbedding, budget: u64) -> Result<MinEdgesOutcome, HamError> {
    let p = emb.vertex_count();
    let mut remaining = budget;
    for k in 0..=p {
        match decide_with_chord_cap(emb, Some(k), remaining)? {
            DeciderOutcome::Yes(certificate) => {
                debug_assert_eq!(certificate.chords.len(), k);
                return Ok(MinEdgesOutcome::Found { k, certificate });
            }
            DeciderOutcome::No { nodes } => {
                remaining = remaining.saturating_sub(nodes);
            }
            DeciderOutcome::Unknown { .. } => {
                return Ok(MinEdgesOutcome::Unknown { exhausted_below: k });
            }
        }
    }
    Ok(MinEdgesOutcome::NoneExists)
}

/// Re-checks a certificate end to end, independently of the search:
/// chord sanity, pairwise non-crossing, realizability through the edit
/// machinery, and the cycle edge by edge.
pub fn verify_certificate(
    emb: &CombEmbedding,
    cert: &ExtensionCertificate,
) -> (bool, Vec<String>) {
    let mut reasons = Vec::new();
    let faces = match emb.trace_faces() {
        Ok(f) => f,
        Err(e) => return (false, vec![format!("embedding invalid: {e}")]),
    };

    for (i, chord) in cert.chords.iter().enumerate() {
        let (a, b) = chord.endpoints;
        if a.face != chord.face || b.face != chord.face {
            reasons.push(format!("chord {i} endpoints disagree with its face"));
            continue;
        }
        if !faces.contains(chord.face) {
            reasons.push(format!("chord {i} names unknown face {}", chord.face));
            continue;
        }
        let walk = faces.walk(chord.face);
        if a.occurrence >= walk.len() || b.occurrence >= walk.len() {
            reasons.push(format!("chord {i} occurrence out of range"));
            continue;
        }
        let va = emb.vertex_of(walk.darts[a.occurrence]).unwrap();
        let vb = emb.vertex_of(walk.darts[b.occurrence]).unwrap();
        if va == vb {
            reasons.push(format!("chord {i} endpoints coincide at {va}"));
        }
    }
    for i in 0..cert.chords.len() {
        for j in i + 1..cert.chords.len() {
            if crossing(&cert.chords[i], &cert.chords[j]) {
                reasons.push(format!("chords {i} and {j} cross"));
            }
        }
    }
    if !reasons.is_empty() {
        return (false, reasons);
    }

    let pairs: Vec<(FacePosition, FacePosition)> =
        cert.chords.iter().map(|c| c.endpoints).collect();
    let realized = match realize_chords(emb, &pairs) {
        Ok(r) => r,
        Err(e) => return (false, vec![format!("chords not realizable: {e}")]),
    };
    if !realized.validate().pass() {
        return (
            false,
            vec![format!("realized embedding invalid: {}", realized.validate())],
        );
    }

    // The cycle must cover every vertex exactly once and each step must
    // join its endpoints via a distinct edge or chord.
    let p = emb.vertex_count();
    if cert.cycle.len() != p {
        reasons.push(format!(
            "cycle covers {} vertices, embedding has {p}",
            cert.cycle.len()
        ));
    }
    if cert.steps.len() != cert.cycle.len() {
        reasons.push("steps and cycle have different lengths".to_string());
    }
    let distinct: BTreeSet<VertexId> = cert.cycle.iter().copied().collect();
    if distinct.len() != cert.cycle.len() {
        reasons.push("cycle repeats a vertex".to_string());
    }
    for &v in &cert.cycle {
        if !emb.contains_vertex(v) {
            reasons.push(format!("cycle names unknown vertex {v}"));
        }
    }
    if !reasons.is_empty() {
        return (false, reasons);
    }
    let mut used_edges = BTreeSet::new();
    let mut used_chords = BTreeSet::new();
    for i in 0..cert.cycle.len() {
        let from = cert.cycle[i];
        let to = cert.cycle[(i + 1) % cert.cycle.len()];
        match cert.steps[i] {
            Step::Edge(e) => {
                let Some((u, w)) = emb.endpoints(e) else {
                    reasons.push(format!("step {i} uses unknown edge {e}"));
                    continue;
                };
                if !((u, w) == (from, to) || (w, u) == (from, to)) {
                    reasons.push(format!("edge {e} does not join {from} and {to}"));
                }
                if !used_edges.insert(e) {
                    reasons.push(format!("edge {e} used twice"));
                }
            }
            Step::Chord(k) => {
                let Some(chord) = cert.chords.get(k) else {
                    reasons.push(format!("step {i} references missing chord {k}"));
                    continue;
                };
                let walk = faces.walk(chord.face);
                let va = emb
                    .vertex_of(walk.darts[chord.endpoints.0.occurrence])
                    .unwrap();
                let vb = emb
                    .vertex_of(walk.darts[chord.endpoints.1.occurrence])
                    .unwrap();
                if !((va, vb) == (from, to) || (vb, va) == (from, to)) {
                    reasons.push(format!("chord {k} does not join {from} and {to}"));
                }
                if !used_chords.insert(k) {
                    reasons.push(format!("chord {k} used twice"));
                }
            }
        }
    }
    (reasons.is_empty(), reasons)
}

/// Plain exhaustive Hamiltonian-cycle search on an abstract multigraph,
/// with no embedding constraint. A single vertex is Hamiltonian iff it
/// carries a loop; two vertices need a pair of parallel edges.
pub fn hamiltonian_cycle(graph: &MultiGraph) -> Option<Vec<(VertexId, EdgeId)>> {
    let vertices: Vec<VertexId> = graph.vertices().collect();
    let p = vertices.len();
    if p == 0 {
        return None;
    }
    let vindex: BTreeMap<VertexId, usize> = vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i))
        .collect();
    if p == 1 {
        return graph
            .edges()
            .find(|&(_, u, w)| u == w)
            .map(|(e, u, _)| vec![(u, e)]);
    }
    // Adjacency in ascending edge order; loops are useless for p >= 2.
    let mut adj: Vec<Vec<(EdgeId, usize)>> = vec![Vec::new(); p];
    for (e, u, w) in graph.edges() {
        if u == w {
            continue;
        }
        adj[vindex[&u]].push((e, vindex[&w]));
        adj[vindex[&w]].push((e, vindex[&u]));
    }
    for list in &mut adj {
        list.sort();
    }

    let mut visited = vec![false; p];
    visited[0] = true;
    let mut path = vec![0usize];
    let mut steps: Vec<EdgeId> = Vec::new();
    let mut used: BTreeSet<EdgeId> = BTreeSet::new();

    fn remaining_viable(
        adj: &[Vec<(EdgeId, usize)>],
        visited: &[bool],
        endpoint: usize,
        p: usize,
    ) -> bool {
        // Every unvisited vertex still needs two usable neighbors among
        // the unvisited set, the current endpoint, and the start.
        let candidate = |x: usize| !visited[x] || x == endpoint || x == 0;
        for w in 0..p {
            if visited[w] {
                continue;
            }
            let mut partners = BTreeSet::new();
            for &(_, x) in &adj[w] {
                if x != w && candidate(x) {
                    partners.insert(x);
                }
            }
            if partners.len() < 2 {
                return false;
            }
        }
        // The unvisited region plus endpoint and start must be connected.
        let nodes: Vec<usize> = (0..p).filter(|&x| candidate(x)).collect();
        if nodes.len() <= 1 {
            return true;
        }
        let pos: BTreeMap<usize, usize> =
            nodes.iter().enumerate().map(|(i, &x)| (x, i)).collect();
        let mut uf = UnionFind::new(nodes.len());
        for &x in &nodes {
            for &(_, y) in &adj[x] {
                if let Some(&py) = pos.get(&y) {
                    uf.union(pos[&x], py);
                }
            }
        }
        uf.class_count() == 1
    }

    fn dfs(
        adj: &[Vec<(EdgeId, usize)>],
        visited: &mut Vec<bool>,
        path: &mut Vec<usize>,
        steps: &mut Vec<EdgeId>,
        used: &mut BTreeSet<EdgeId>,
        p: usize,
    ) -> bool {
        let u = *path.last().unwrap();
        if path.len() == p {
            for &(e, w) in &adj[u] {
                if w == 0 && !used.contains(&e) {
                    steps.push(e);
                    return true;
                }
            }
            return false;
        }
        if !remaining_viable(adj, visited, u, p) {
            return false;
        }
        for &(e, w) in &adj[u] {
            if visited[w] || used.contains(&e) {
                continue;
            }
            visited[w] = true;
            path.push(w);
            steps.push(e);
            used.insert(e);
            if dfs(adj, visited, path, steps, used, p) {
                return true;
            }
            used.remove(&e);
            steps.pop();
            path.pop();
            visited[w] = false;
        }
        false
    }

    if dfs(&mut adj.as_slice(), &mut visited, &mut path, &mut steps, &mut used, p) {
        Some(
            path.iter()
                .zip(&steps)
                .map(|(&i, &e)| (vertices[i], e))
                .collect(),
        )
    } else {
        None
    }
}

// ---------------------------------------------------------------------
// The embedded search.
// ---------------------------------------------------------------------

struct ChosenChord {
    face: usize,
    occ_a: usize,
    occ_b: usize,
}

struct Searcher<'a> {
    _emb: &'a CombEmbedding,
    vertices: Vec<VertexId>,
    /// Γ-adjacency per vertex index, ascending edge id.
    adj: Vec<Vec<(EdgeId, usize)>>,
    /// Face walks as vertex indices per occurrence.
    walks: Vec<Vec<usize>>,
    face_ids: Vec<FaceId>,
    /// Occurrences of each vertex: (face index, occurrence), ascending.
    positions: Vec<Vec<(usize, usize)>>,
    /// Vertex-index pairs joined by an original edge.
    gamma_adjacent: BTreeSet<(usize, usize)>,
    /// Vertex-index pairs sharing at least one face.
    cofacial: BTreeSet<(usize, usize)>,
    max_chords: Option<usize>,
    budget: u64,
    nodes: u64,
    p: usize,
}

enum SearchResult {
    Found(ExtensionCertificate),
    Exhausted,
    BudgetHit,
}

enum MoveRec {
    Edge(EdgeId),
    Chord,
}

impl<'a> Searcher<'a> {
    fn new(emb: &'a CombEmbedding, max_chords: Option<usize>, budget: u64) -> Self {
        let faces = emb.face_structure_unchecked();
        let vertices: Vec<VertexId> = emb.vertices().collect();
        let vindex: BTreeMap<VertexId, usize> = vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let p = vertices.len();

        let mut adj: Vec<Vec<(EdgeId, usize)>> = vec![Vec::new(); p];
        let mut gamma_adjacent = BTreeSet::new();
        for (e, u, w) in emb.edges() {
            let (iu, iw) = (vindex[&u], vindex[&w]);
            adj[iu].push((e, iw));
            if iu != iw {
                adj[iw].push((e, iu));
            }
            gamma_adjacent.insert((iu.min(iw), iu.max(iw)));
        }
        for list in &mut adj {
            list.sort();
        }

        let mut walks = Vec::new();
        let mut face_ids = Vec::new();
        let mut positions: Vec<Vec<(usize, usize)>> = vec![Vec::new(); p];
        let mut cofacial = BTreeSet::new();
        for walk in faces.walks() {
            let f = walks.len();
            let occ: Vec<usize> = walk
                .darts
                .iter()
                .map(|&d| vindex[&emb.vertex_of(d).unwrap()])
                .collect();
            for (i, &v) in occ.iter().enumerate() {
                positions[v].push((f, i));
            }
            for &a in &occ {
                for &b in &occ {
                    if a != b {
                        cofacial.insert((a.min(b), a.max(b)));
                    }
                }
            }
            face_ids.push(walk.id);
            walks.push(occ);
        }

        Searcher {
            _emb: emb,
            vertices,
            adj,
            walks,
            face_ids,
            positions,
            gamma_adjacent,
            cofacial,
            max_chords,
            budget,
            nodes: 0,
            p,
        }
    }

    fn run(&mut self) -> DeciderOutcome {
        let mut visited = vec![false; self.p];
        visited[0] = true;
        let mut path = vec![0usize];
        let mut steps: Vec<MoveRec> = Vec::new();
        let mut chords: Vec<ChosenChord> = Vec::new();
        let mut used_edges: BTreeSet<EdgeId> = BTreeSet::new();
        match self.search(&mut visited, &mut path, &mut steps, &mut chords, &mut used_edges) {
            SearchResult::Found(cert) => DeciderOutcome::Yes(cert),
            SearchResult::Exhausted => DeciderOutcome::No { nodes: self.nodes },
            SearchResult::BudgetHit => DeciderOutcome::Unknown { nodes: self.nodes },
        }
    }

    /// Chord from `a` to `b` is a useful candidate unless it duplicates an
    /// original edge: a cycle on more than two vertices can always use
    /// the original edge instead.
    fn chord_candidate(&self, a: usize, b: usize) -> bool {
        if a == b {
            return false;
        }
        if self.p > 2 && self.gamma_adjacent.contains(&(a.min(b), a.max(b))) {
            return false;
        }
        true
    }

    fn legal_chord(&self, chords: &[ChosenChord], face: usize, oa: usize, ob: usize) -> bool {
        chords
            .iter()
            .filter(|c| c.face == face)
            .all(|c| !strictly_interleaved((c.occ_a, c.occ_b), (oa, ob)))
    }

    /// Sound pruning: every unvisited vertex still needs two potential
    /// partners, and the rest of the cycle must be traceable inside the
    /// candidate region. Chord feasibility is over-approximated by
    /// cofaciality, so no completable branch is ever cut.
    fn viable(&self, visited: &[bool], endpoint: usize) -> bool {
        if self.p <= 2 {
            return true;
        }
        let candidate = |x: usize| !visited[x] || x == endpoint || x == 0;
        let linked = |a: usize, b: usize| {
            let key = (a.min(b), a.max(b));
            self.gamma_adjacent.contains(&key) || self.cofacial.contains(&key)
        };
        let nodes: Vec<usize> = (0..self.p).filter(|&x| candidate(x)).collect();
        for &w in &nodes {
            if visited[w] {
                continue;
            }
            let partners = nodes
                .iter()
                .filter(|&&x| x != w && linked(w, x))
                .take(2)
                .count();
            if partners < 2 {
                return false;
            }
        }
        if nodes.len() > 1 {
            let mut uf = UnionFind::new(nodes.len());
            for i in 0..nodes.len() {
                for j in i + 1..nodes.len() {
                    if linked(nodes[i], nodes[j]) {
                        uf.union(i, j);
                    }
                }
            }
            if uf.class_count() != 1 {
                return false;
            }
        }
        true
    }

    fn search(
        &mut self,
        visited: &mut Vec<bool>,
        path: &mut Vec<usize>,
        steps: &mut Vec<MoveRec>,
        chords: &mut Vec<ChosenChord>,
        used_edges: &mut BTreeSet<EdgeId>,
    ) -> SearchResult {
        let u = *path.last().unwrap();
        let closing = path.len() == self.p;

        if !closing && !self.viable(visited, u) {
            return SearchResult::Exhausted;
        }

        // Original edges first, ascending id.
        for i in 0..self.adj[u].len() {
            let (e, w) = self.adj[u][i];
            if used_edges.contains(&e) {
                continue;
            }
            let ok = if closing { w == 0 } else { !visited[w] };
            if !ok {
                continue;
            }
            if self.nodes >= self.budget {
                return SearchResult::BudgetHit;
            }
            self.nodes += 1;
            steps.push(MoveRec::Edge(e));
            used_edges.insert(e);
            if closing {
                let cert = self.assemble(path, steps, chords);
                return SearchResult::Found(cert);
            }
            visited[w] = true;
            path.push(w);
            match self.search(visited, path, steps, chords, used_edges) {
                SearchResult::Exhausted => {}
                found_or_budget => return found_or_budget,
            }
            path.pop();
            visited[w] = false;
            used_edges.remove(&e);
            steps.pop();
        }

        // Then chords, lexicographic in (face, from-occurrence, to-occurrence).
        if self.max_chords.map_or(true, |cap| chords.len() < cap) {
            for pi in 0..self.positions[u].len() {
                let (f, occ_u) = self.positions[u][pi];
                for occ_w in 0..self.walks[f].len() {
                    let w = self.walks[f][occ_w];
                    let ok = if closing { w == 0 } else { !visited[w] };
                    if !ok || !self.chord_candidate(u, w) {
                        continue;
                    }
                    if !self.legal_chord(chords, f, occ_u, occ_w) {
                        continue;
                    }
                    if self.nodes >= self.budget {
                        return SearchResult::BudgetHit;
                    }
                    self.nodes += 1;
                    steps.push(MoveRec::Chord);
                    chords.push(ChosenChord {
                        face: f,
                        occ_a: occ_u,
                        occ_b: occ_w,
                    });
                    if closing {
                        let cert = self.assemble(path, steps, chords);
                        return SearchResult::Found(cert);
                    }
                    visited[w] = true;
                    path.push(w);
                    match self.search(visited, path, steps, chords, used_edges) {
                        SearchResult::Exhausted => {}
                        found_or_budget => return found_or_budget,
                    }
                    path.pop();
                    visited[w] = false;
                    chords.pop();
                    steps.pop();
                }
            }
        }

        SearchResult::Exhausted
    }

    fn assemble(
        &self,
        path: &[usize],
        steps: &[MoveRec],
        chords: &[ChosenChord],
    ) -> ExtensionCertificate {
        let chord_list: Vec<Chord> = chords
            .iter()
            .map(|c| Chord::new(self.face_ids[c.face], c.occ_a, c.occ_b))
            .collect();
        let mut chord_cursor = 0usize;
        let steps: Vec<Step> = steps
            .iter()
            .map(|m| match m {
                MoveRec::Edge(e) => Step::Edge(*e),
                MoveRec::Chord => {
                    let s = Step::Chord(chord_cursor);
                    chord_cursor += 1;
                    s
                }
            })
            .collect();
        ExtensionCertificate {
            chords: chord_list,
            cycle: path.iter().map(|&i| self.vertices[i]).collect(),
            steps,
        }
    }
}

// ---------------------------------------------------------------------
// Brute-force oracle over added-vertex extensions.
// ---------------------------------------------------------------------

/// A witness configuration found by the oracle: per face, the boundary
/// occurrence pairs that received a new through-vertex.
#[derive(Clone, Debug)]
pub struct OracleWitness {
    pub added: Vec<(FaceId, (usize, usize))>,
    pub cycle: Vec<(VertexId, EdgeId)>,
}

/// Outcome of [`oracle_decide_with_added_vertices`].
#[derive(Clone, Debug)]
pub enum OracleOutcome {
    Yes(OracleWitness),
    /// Every configuration in the universe was tested.
    No { configurations: u64 },
    Unknown { configurations: u64 },
}

impl OracleOutcome {
    pub fn is_yes(&self) -> bool {
        matches!(self, OracleOutcome::Yes(_))
    }

    pub fn is_no(&self) -> bool {
        matches!(self, OracleOutcome::No { .. })
    }
}

/// Brute-force oracle: enumerate extensions that add up to
/// `max_new_vertices_per_face` vertices inside each face, each joined to
/// two boundary occurrences, all planar inside the face; run the plain
/// [`hamiltonian_cycle`] search on every resulting abstract graph.
///
/// Two attachments per added vertex lose no generality for the YES/NO
/// answer: a Hamiltonian cycle uses exactly two spokes at an added
/// vertex, extra spokes only add dominated configurations, and a vertex
/// with a single spoke can never lie on a cycle.
pub fn oracle_decide_with_added_vertices(
    emb: &CombEmbedding,
    max_new_vertices_per_face: usize,
    budget: u64,
) -> Result<OracleOutcome, HamError> {
    let faces = emb.trace_faces()?;
    let graph = emb.abstract_graph();

    // Candidate attachment pairs per face: occurrence pairs at distinct
    // vertices, plus same-vertex pairs (distinct occurrences), which only
    // matter for the single-vertex embedding but are cheap to include.
    let mut face_pairs: Vec<(FaceId, Vec<(usize, usize)>)> = Vec::new();
    for walk in faces.walks() {
        let mut pairs = Vec::new();
        for a in 0..walk.len() {
            for b in (a + 1)..walk.len() {
                pairs.push((a, b));
            }
        }
        face_pairs.push((walk.id, pairs));
    }

    // Per-face configurations: multisets of up to `max` pairwise
    // non-crossing pairs, ordered by size then lexicographically.
    let mut face_configs: Vec<Vec<Vec<(usize, usize)>>> = Vec::new();
    for (_, pairs) in &face_pairs {
        let mut configs: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
        let mut frontier: Vec<Vec<usize>> = vec![Vec::new()];
        for _ in 0..max_new_vertices_per_face {
            let mut next_frontier = Vec::new();
            for chosen in &frontier {
                let start = chosen.last().map(|&i| i).unwrap_or(0);
                for i in start..pairs.len() {
                    let ok = chosen
                        .iter()
                        .all(|&j| !strictly_interleaved(pairs[j], pairs[i]));
                    if ok {
                        let mut ext = chosen.clone();
                        ext.push(i);
                        configs.push(ext.iter().map(|&j| pairs[j]).collect());
                        next_frontier.push(ext);
                    }
                }
            }
            frontier = next_frontier;
        }
        face_configs.push(configs);
    }

    // Odometer over the per-face configuration lists.
    let mut choice = vec![0usize; face_configs.len()];
    let mut tested: u64 = 0;
    loop {
        if tested >= budget {
            return Ok(OracleOutcome::Unknown {
                configurations: tested,
            });
        }
        tested += 1;

        let mut extended = graph.clone();
        let mut added = Vec::new();
        let mut next_v = emb.fresh_vertex_id().0;
        let mut next_e = emb.fresh_edge_id().0;
        for (fi, &ci) in choice.iter().enumerate() {
            let (face_id, _) = face_pairs[fi];
            let walk = faces.walk(face_id);
            for &(a, b) in &face_configs[fi][ci] {
                let w = VertexId(next_v);
                next_v += 1;
                extended.add_vertex(w);
                let va = emb.vertex_of(walk.darts[a]).unwrap();
                let vb = emb.vertex_of(walk.darts[b]).unwrap();
                extended.add_edge(EdgeId(next_e), w, va);
                next_e += 1;
                extended.add_edge(EdgeId(next_e), w, vb);
                next_e += 1;
                added.push((face_id, (a, b)));
            }
        }
        if let Some(cycle) = hamiltonian_cycle(&extended) {
            return Ok(OracleOutcome::Yes(OracleWitness { added, cycle }));
        }

        let mut pos = choice.len();
        loop {
            if pos == 0 {
                return Ok(OracleOutcome::No {
                    configurations: tested,
                });
            }
            pos -= 1;
            choice[pos] += 1;
            if choice[pos] < face_configs[pos].len() {
                break;
            }
            choice[pos] = 0;
        }
    }
}
