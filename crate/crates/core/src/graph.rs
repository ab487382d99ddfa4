//! Abstract multigraphs, used as search input and by the brute-force
//! Hamiltonicity oracles. Loops and parallel edges are allowed.

use std::collections::{BTreeMap, BTreeSet};

use crate::embedding::{EdgeId, VertexId};
use crate::unionfind::UnionFind;

/// An abstract multigraph: no embedding, just vertices and edges.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MultiGraph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
}

impl MultiGraph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, v: VertexId) {
        self.vertices.insert(v);
    }

    /// Adds an edge with a caller-chosen identifier. Endpoints are added
    /// implicitly. Panics if the identifier is already in use.
    pub fn add_edge(&mut self, e: EdgeId, u: VertexId, w: VertexId) {
        self.vertices.insert(u);
        self.vertices.insert(w);
        let prev = self.edges.insert(e, (u, w));
        assert!(prev.is_none(), "duplicate edge id {e}");
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = (EdgeId, VertexId, VertexId)> + '_ {
        self.edges.iter().map(|(&e, &(u, w))| (e, u, w))
    }

    pub fn contains_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn endpoints(&self, e: EdgeId) -> Option<(VertexId, VertexId)> {
        self.edges.get(&e).copied()
    }

    pub fn is_loop(&self, e: EdgeId) -> bool {
        self.endpoints(e).map(|(u, w)| u == w).unwrap_or(false)
    }

    /// Edges incident to `v` in ascending id order; loops appear once.
    pub fn incident_edges(&self, v: VertexId) -> Vec<EdgeId> {
        self.edges
            .iter()
            .filter(|(_, &(u, w))| u == v || w == v)
            .map(|(&e, _)| e)
            .collect()
    }

    /// Degree counts loops twice.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges
            .values()
            .map(|&(u, w)| (u == v) as usize + (w == v) as usize)
            .sum()
    }

    pub fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let index: BTreeMap<VertexId, usize> = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, i))
            .collect();
        let mut uf = UnionFind::new(self.vertices.len());
        for &(u, w) in self.edges.values() {
            uf.union(index[&u], index[&w]);
        }
        uf.class_count() == 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: usize) -> VertexId {
        VertexId(i)
    }

    #[test]
    fn degree_counts_loops_twice() {
        let mut g = MultiGraph::new();
        g.add_edge(EdgeId(0), v(0), v(0));
        g.add_edge(EdgeId(1), v(0), v(1));
        assert_eq!(g.degree(v(0)), 3);
        assert_eq!(g.degree(v(1)), 1);
        assert!(g.is_connected());
    }

    #[test]
    fn disconnected_graph_detected() {
        let mut g = MultiGraph::new();
        g.add_edge(EdgeId(0), v(0), v(1));
        g.add_vertex(v(2));
        assert!(!g.is_connected());
    }
}
