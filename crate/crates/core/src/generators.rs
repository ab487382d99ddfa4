//! Fixture embeddings and graphs: cycles, torus grids, theta graph,
//! hypercubes, the stellated triangle host, and small named graphs used
//! throughout the test corpus.

use std::collections::BTreeMap;

use crate::edit::stellate;
use crate::embedding::{CombEmbedding, Dart, EdgeId, End, FaceId, VertexId};
use crate::graph::MultiGraph;

/// The n-cycle embedded in the sphere: p = n, q = n, r = 2.
/// n = 1 is a single vertex with a loop, n = 2 a pair of parallel edges.
pub fn cycle_on_sphere(n: usize) -> CombEmbedding {
    assert!(n >= 1);
    let mut edges = BTreeMap::new();
    let mut rotations = BTreeMap::new();
    for i in 0..n {
        edges.insert(EdgeId(i), (VertexId(i), VertexId((i + 1) % n)));
    }
    for i in 0..n {
        let prev = EdgeId((i + n - 1) % n);
        let next = EdgeId(i);
        let mut rot = vec![Dart::new(prev, End::B), Dart::new(next, End::A)];
        if n == 1 {
            rot = vec![Dart::new(EdgeId(0), End::A), Dart::new(EdgeId(0), End::B)];
        }
        rotations.insert(VertexId(i), rot);
    }
    let emb = CombEmbedding::from_rotations(edges, rotations);
    debug_assert!(emb.validate().pass(), "{}", emb.validate());
    emb
}

/// The m-by-n grid with wraparound, embedded in the torus with square
/// faces: p = mn, q = 2mn, r = mn, genus 1.
pub fn grid_on_torus(m: usize, n: usize) -> CombEmbedding {
    assert!(m >= 1 && n >= 1);
    let vid = |i: usize, j: usize| VertexId((i % m) * n + (j % n));
    let right = |i: usize, j: usize| EdgeId(2 * ((i % m) * n + (j % n)));
    let down = |i: usize, j: usize| EdgeId(2 * ((i % m) * n + (j % n)) + 1);
    let mut edges = BTreeMap::new();
    let mut rotations = BTreeMap::new();
    for i in 0..m {
        for j in 0..n {
            edges.insert(right(i, j), (vid(i, j), vid(i, j + 1)));
            edges.insert(down(i, j), (vid(i, j), vid(i + 1, j)));
        }
    }
    for i in 0..m {
        for j in 0..n {
            // Counterclockwise: right, down, left, up.
            let rot = vec![
                Dart::new(right(i, j), End::A),
                Dart::new(down(i, j), End::A),
                Dart::new(right(i, j + n - 1), End::B),
                Dart::new(down(i + m - 1, j), End::B),
            ];
            rotations.insert(vid(i, j), rot);
        }
    }
    let emb = CombEmbedding::from_rotations(edges, rotations);
    debug_assert!(emb.validate().pass(), "{}", emb.validate());
    emb
}

/// Two vertices joined by three parallel edges, embedded in the sphere:
/// p = 2, q = 3, r = 3.
pub fn theta_graph() -> CombEmbedding {
    let mut edges = BTreeMap::new();
    for e in 0..3 {
        edges.insert(EdgeId(e), (VertexId(0), VertexId(1)));
    }
    let mut rotations = BTreeMap::new();
    rotations.insert(
        VertexId(0),
        vec![
            Dart::new(EdgeId(0), End::A),
            Dart::new(EdgeId(1), End::A),
            Dart::new(EdgeId(2), End::A),
        ],
    );
    // Reversed cyclic order on the far side keeps the embedding planar.
    rotations.insert(
        VertexId(1),
        vec![
            Dart::new(EdgeId(0), End::B),
            Dart::new(EdgeId(2), End::B),
            Dart::new(EdgeId(1), End::B),
        ],
    );
    let emb = CombEmbedding::from_rotations(edges, rotations);
    debug_assert!(emb.validate().pass());
    emb
}

/// The abstract d-cube graph: 2^d vertices, d*2^(d-1) edges. No embedding
/// is constructed.
pub fn hypercube_graph(d: u32) -> MultiGraph {
    assert!(d >= 1 && d < 20);
    let mut g = MultiGraph::new();
    let n = 1usize << d;
    let mut next_edge = 0;
    for v in 0..n {
        g.add_vertex(VertexId(v));
    }
    for v in 0..n {
        for b in 0..d {
            let u = v | (1 << b);
            if v & (1 << b) == 0 {
                g.add_edge(EdgeId(next_edge), VertexId(v), VertexId(u));
                next_edge += 1;
            }
        }
    }
    g
}

/// The Petersen graph: outer 5-cycle 0..4, spokes, inner pentagram 5..9.
pub fn petersen_graph() -> MultiGraph {
    let mut g = MultiGraph::new();
    let mut next = 0;
    let mut add = |g: &mut MultiGraph, u: usize, w: usize| {
        g.add_edge(EdgeId(next), VertexId(u), VertexId(w));
        next += 1;
    };
    for i in 0..5 {
        add(&mut g, i, (i + 1) % 5);
    }
    for i in 0..5 {
        add(&mut g, i, i + 5);
    }
    for i in 0..5 {
        add(&mut g, i + 5, (i + 2) % 5 + 5);
    }
    g
}

/// The octahedron embedded in the sphere: p = 6, q = 12, r = 8. The
/// smallest handy example with more regions than vertices.
pub fn octahedron() -> CombEmbedding {
    // n=0 and s=5 are the poles, 1..4 the equator a,b,c,d.
    let (n, a, b, c, d, s) = (
        VertexId(0),
        VertexId(1),
        VertexId(2),
        VertexId(3),
        VertexId(4),
        VertexId(5),
    );
    let names: [(VertexId, VertexId); 12] = [
        (n, a), // e0
        (n, b), // e1
        (n, c), // e2
        (n, d), // e3
        (a, b), // e4
        (b, c), // e5
        (c, d), // e6
        (d, a), // e7
        (s, a), // e8
        (s, b), // e9
        (s, c), // e10
        (s, d), // e11
    ];
    let mut edges = BTreeMap::new();
    for (i, &(u, w)) in names.iter().enumerate() {
        edges.insert(EdgeId(i), (u, w));
    }
    let da = |e: usize| Dart::new(EdgeId(e), End::A);
    let db = |e: usize| Dart::new(EdgeId(e), End::B);
    // Neighbor orders read off the solid with a right-handed frame at
    // every vertex, so all rotations share one orientation.
    let mut rotations = BTreeMap::new();
    rotations.insert(n, vec![da(0), da(1), da(2), da(3)]);
    rotations.insert(a, vec![da(4), db(0), db(7), db(8)]);
    rotations.insert(b, vec![db(1), db(4), db(9), da(5)]);
    rotations.insert(c, vec![db(2), db(5), db(10), da(6)]);
    rotations.insert(d, vec![da(7), db(3), db(6), db(11)]);
    rotations.insert(s, vec![da(9), da(8), da(11), da(10)]);
    let emb = CombEmbedding::from_rotations(edges, rotations);
    debug_assert!(emb.validate().pass(), "{}", emb.validate());
    emb
}

/// A triangle with `levels` rounds of stellation iterated inside one of
/// its regions, plus one host vertex stellating the outside, so that the
/// triangle separates vertices on both sides.
///
/// Vertex ids: 0,1,2 the triangle, then stellation centers level by level
/// in face order, the host vertex last. For `levels = 2` the inside holds
/// 9 regions and 7 vertices lie on or inside the triangle.
pub fn triangle_host_with_stellations(levels: u32) -> CombEmbedding {
    let mut emb = cycle_on_sphere(3);
    let mut prev_centers: Vec<VertexId> = Vec::new();
    for level in 0..levels {
        let mut centers = Vec::new();
        loop {
            let faces = emb.face_structure_unchecked();
            // Next target: first face touching a previous-level center
            // (for level 0: the face with id 0) not yet re-stellated.
            let target = faces.walks().iter().find(|w| {
                let vs = w.occurrence_vertices(&emb);
                let touches_prev = if level == 0 {
                    w.id == FaceId(0)
                } else {
                    vs.iter().any(|v| prev_centers.contains(v))
                };
                touches_prev && !vs.iter().any(|v| centers.contains(v))
            });
            let Some(walk) = target else { break };
            let center = emb.fresh_vertex_id();
            emb = stellate(&emb, walk.id).expect("inner faces stay triangular");
            centers.push(center);
        }
        prev_centers = centers;
    }
    // The outer face is the one bounded by original triangle edges only.
    let faces = emb.face_structure_unchecked();
    let outer = faces
        .walks()
        .iter()
        .find(|w| w.darts.iter().all(|d| d.edge.0 < 3) && w.len() == 3)
        .expect("outer triangle face")
        .id;
    emb = stellate(&emb, outer).expect("outer face is a triangle");
    debug_assert!(emb.validate().pass());
    emb
}
