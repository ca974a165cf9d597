//! Embedded graphs used across the test-suite and shipped as fixture files.
//!
//! Every constructor returns a graph together with a specific rotation
//! system; face counts and genera of these embeddings are frozen in tests
//! against an independent tracing implementation.

use crate::graph::{HalfEdge, Multigraph, Side};
use crate::surface::RotationSystem;

/// Half-edge rotation from per-vertex neighbour orders (simple graphs only).
fn simple_rotation(g: &Multigraph, orders: &[Vec<usize>]) -> RotationSystem {
    let order = orders
        .iter()
        .enumerate()
        .map(|(v, nbrs)| {
            nbrs.iter()
                .map(|&w| {
                    let e = (0..g.edge_count())
                        .find(|&e| {
                            let (a, b) = g.endpoints(e);
                            (a, b) == (v, w) || (a, b) == (w, v)
                        })
                        .expect("fixture names an existing edge");
                    let side = if g.endpoints(e).0 == v { Side::A } else { Side::B };
                    HalfEdge::new(e, side)
                })
                .collect()
        })
        .collect();
    RotationSystem::new(g, order).expect("fixture rotation is valid")
}

fn rotation_from_pairs(g: &Multigraph, lists: &[&[(usize, u8)]]) -> RotationSystem {
    let order = lists
        .iter()
        .map(|l| {
            l.iter()
                .map(|&(e, s)| HalfEdge::new(e, if s == 0 { Side::A } else { Side::B }))
                .collect()
        })
        .collect();
    RotationSystem::new(g, order).expect("fixture rotation is valid")
}

/// One vertex, one loop, embedded in the sphere (two faces).
pub fn single_loop() -> (Multigraph, RotationSystem) {
    let g = Multigraph::new(1, vec![(0, 0)]).unwrap();
    let rot = RotationSystem::canonical(&g);
    (g, rot)
}

/// Two vertices joined by a single edge (one face, sphere).
pub fn single_edge() -> (Multigraph, RotationSystem) {
    let g = Multigraph::new(2, vec![(0, 1)]).unwrap();
    let rot = RotationSystem::canonical(&g);
    (g, rot)
}

/// Triangle; cycles embed in the sphere under any rotation.
pub fn triangle() -> (Multigraph, RotationSystem) {
    let g = Multigraph::new(3, vec![(0, 1), (1, 2), (0, 2)]).unwrap();
    let rot = RotationSystem::canonical(&g);
    (g, rot)
}

fn theta_graph() -> Multigraph {
    Multigraph::new(2, vec![(0, 1), (0, 1), (0, 1)]).unwrap()
}

/// Three parallel edges, planar: the second vertex reverses the order
/// (three faces).
pub fn theta_planar() -> (Multigraph, RotationSystem) {
    let g = theta_graph();
    let rot = rotation_from_pairs(&g, &[&[(0, 0), (1, 0), (2, 0)], &[(2, 1), (1, 1), (0, 1)]]);
    (g, rot)
}

/// Three parallel edges with the same order at both ends: a single face on
/// the torus.
pub fn theta_torus() -> (Multigraph, RotationSystem) {
    let g = theta_graph();
    let rot = rotation_from_pairs(&g, &[&[(0, 0), (1, 0), (2, 0)], &[(0, 1), (1, 1), (2, 1)]]);
    (g, rot)
}

/// Complete graph on four vertices in its planar embedding (four faces).
pub fn k4_planar() -> (Multigraph, RotationSystem) {
    let g = Multigraph::new(4, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
    let rot = simple_rotation(
        &g,
        &[vec![1, 2, 3], vec![0, 3, 2], vec![0, 1, 3], vec![0, 2, 1]],
    );
    (g, rot)
}

/// Complete graph on five vertices on the torus: neighbour order
/// `i+1, i+2, i+4, i+3 (mod 5)` at vertex `i` (five faces, genus one).
pub fn k5_torus() -> (Multigraph, RotationSystem) {
    let mut edges = Vec::new();
    for u in 0..5 {
        for v in u + 1..5 {
            edges.push((u, v));
        }
    }
    let g = Multigraph::new(5, edges).unwrap();
    let orders: Vec<Vec<usize>> = (0..5)
        .map(|i| [1, 2, 4, 3].iter().map(|d| (i + d) % 5).collect())
        .collect();
    let rot = simple_rotation(&g, &orders);
    (g, rot)
}

/// Complete bipartite graph on 3+3 vertices on the torus: the identity
/// neighbour order on both sides (three faces, genus one).
pub fn k33_torus() -> (Multigraph, RotationSystem) {
    let edges = (0..3).flat_map(|u| (3..6).map(move |v| (u, v))).collect();
    let g = Multigraph::new(6, edges).unwrap();
    let orders = vec![
        vec![3, 4, 5],
        vec![3, 4, 5],
        vec![3, 4, 5],
        vec![0, 1, 2],
        vec![0, 1, 2],
        vec![0, 1, 2],
    ];
    let rot = simple_rotation(&g, &orders);
    (g, rot)
}

/// Petersen graph on the torus (five faces, genus one); the rotation was
/// found by exhaustive search over all rotation systems.
pub fn petersen_torus() -> (Multigraph, RotationSystem) {
    let edges = vec![
        (0, 1),
        (1, 2),
        (2, 3),
        (3, 4),
        (0, 4),
        (0, 5),
        (1, 6),
        (2, 7),
        (3, 8),
        (4, 9),
        (5, 7),
        (6, 8),
        (7, 9),
        (5, 8),
        (6, 9),
    ];
    let g = Multigraph::new(10, edges).unwrap();
    let rot = rotation_from_pairs(
        &g,
        &[
            &[(0, 0), (4, 0), (5, 0)],
            &[(0, 1), (1, 0), (6, 0)],
            &[(1, 1), (2, 0), (7, 0)],
            &[(2, 1), (3, 0), (8, 0)],
            &[(3, 1), (9, 0), (4, 1)],
            &[(5, 1), (10, 0), (13, 0)],
            &[(6, 1), (14, 0), (11, 0)],
            &[(7, 1), (10, 1), (12, 0)],
            &[(8, 1), (11, 1), (13, 1)],
            &[(9, 1), (14, 1), (12, 1)],
        ],
    );
    (g, rot)
}

/// `r x c` grid with wraparound in both directions on the torus.
///
/// Vertex `(y, x)` is `y*c + x`; horizontal edge `y*c + x` runs east from
/// `(y, x)`, vertical edge `r*c + y*c + x` runs south. The rotation at every
/// vertex is east, north, west, south.
pub fn torus_grid(r: usize, c: usize) -> (Multigraph, RotationSystem) {
    assert!(r >= 1 && c >= 1);
    let idx = |y: usize, x: usize| y * c + x;
    let mut edges = Vec::new();
    for y in 0..r {
        for x in 0..c {
            edges.push((idx(y, x), idx(y, (x + 1) % c)));
        }
    }
    for y in 0..r {
        for x in 0..c {
            edges.push((idx(y, x), idx((y + 1) % r, x)));
        }
    }
    let g = Multigraph::new(r * c, edges).unwrap();
    let mut order = Vec::with_capacity(r * c);
    for y in 0..r {
        for x in 0..c {
            let east = HalfEdge::new(idx(y, x), Side::A);
            let north = HalfEdge::new(r * c + idx((y + r - 1) % r, x), Side::B);
            let west = HalfEdge::new(idx(y, (x + c - 1) % c), Side::B);
            let south = HalfEdge::new(r * c + idx(y, x), Side::A);
            order.push(vec![east, north, west, south]);
        }
    }
    let rot = RotationSystem::new(&g, order).expect("torus rotation is valid");
    (g, rot)
}

/// `r x c` grid without wraparound, in the plane.
///
/// Horizontal edge `y*(c-1) + x` runs east from `(y, x)`; vertical edge
/// `r*(c-1) + y*c + x` runs south. Rotation east, north, west, south with
/// missing directions skipped.
pub fn planar_grid(r: usize, c: usize) -> (Multigraph, RotationSystem) {
    assert!(r >= 1 && c >= 1);
    let idx = |y: usize, x: usize| y * c + x;
    let mut edges = Vec::new();
    for y in 0..r {
        for x in 0..c - 1 {
            edges.push((idx(y, x), idx(y, x + 1)));
        }
    }
    let voff = r * (c - 1);
    for y in 0..r - 1 {
        for x in 0..c {
            edges.push((idx(y, x), idx(y + 1, x)));
        }
    }
    let g = Multigraph::new(r * c, edges).unwrap();
    let mut order = Vec::with_capacity(r * c);
    for y in 0..r {
        for x in 0..c {
            let mut cycle = Vec::new();
            if x + 1 < c {
                cycle.push(HalfEdge::new(y * (c - 1) + x, Side::A)); // east
            }
            if y > 0 {
                cycle.push(HalfEdge::new(voff + idx(y - 1, x), Side::B)); // north
            }
            if x > 0 {
                cycle.push(HalfEdge::new(y * (c - 1) + x - 1, Side::B)); // west
            }
            if y + 1 < r {
                cycle.push(HalfEdge::new(voff + idx(y, x), Side::A)); // south
            }
            order.push(cycle);
        }
    }
    let rot = RotationSystem::new(&g, order).expect("grid rotation is valid");
    (g, rot)
}

/// One vertex carrying four loops whose ends interleave pairwise,
/// giving a genus-two surface. Every edge subset is even.
pub fn bouquet_two_handles() -> (Multigraph, RotationSystem) {
    let g = Multigraph::new(1, vec![(0, 0); 4]).unwrap();
    let h = |e, s| HalfEdge::new(e, s);
    let rot = RotationSystem::new(
        &g,
        vec![vec![
            h(0, Side::A),
            h(1, Side::A),
            h(0, Side::B),
            h(1, Side::B),
            h(2, Side::A),
            h(3, Side::A),
            h(2, Side::B),
            h(3, Side::B),
        ]],
    )
    .unwrap();
    (g, rot)
}

/// A planar triangle and a toroidal theta in one graph: two components,
/// total genus one.
pub fn disconnected_pair() -> (Multigraph, RotationSystem) {
    let g = Multigraph::new(
        5,
        vec![(0, 1), (1, 2), (0, 2), (3, 4), (3, 4), (3, 4)],
    )
    .unwrap();
    let rot = rotation_from_pairs(
        &g,
        &[
            &[(0, 0), (2, 0)],
            &[(0, 1), (1, 0)],
            &[(1, 1), (2, 1)],
            &[(3, 0), (4, 0), (5, 0)],
            &[(3, 1), (4, 1), (5, 1)],
        ],
    );
    (g, rot)
}

/// Every named fixture, for fixture-file round trips and bulk tests.
pub fn all_named() -> Vec<(&'static str, Multigraph, RotationSystem)> {
    let mut out = Vec::new();
    let mut push = |name, (g, rot): (Multigraph, RotationSystem)| out.push((name, g, rot));
    push("single_loop", single_loop());
    push("single_edge", single_edge());
    push("triangle", triangle());
    push("theta_planar", theta_planar());
    push("theta_torus", theta_torus());
    push("k4_planar", k4_planar());
    push("k5_torus", k5_torus());
    push("k33_torus", k33_torus());
    push("petersen_torus", petersen_torus());
    push("grid_3x3_torus", torus_grid(3, 3));
    push("grid_4x4_torus", torus_grid(4, 4));
    push("grid_3x4_planar", planar_grid(3, 4));
    push("bouquet_two_handles", bouquet_two_handles());
    push("disconnected_pair", disconnected_pair());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::surface::trace_faces;

    #[test]
    fn frozen_face_counts_and_genera() {
        // (fixture, faces, genus) frozen against an independent tracer
        let expect: &[(&str, usize, usize)] = &[
            ("single_loop", 2, 0),
            ("single_edge", 1, 0),
            ("triangle", 2, 0),
            ("theta_planar", 3, 0),
            ("theta_torus", 1, 1),
            ("k4_planar", 4, 0),
            ("k5_torus", 5, 1),
            ("k33_torus", 3, 1),
            ("petersen_torus", 5, 1),
            ("grid_3x3_torus", 9, 1),
            ("grid_4x4_torus", 16, 1),
            ("grid_3x4_planar", 7, 0),
            ("bouquet_two_handles", 1, 2),
            ("disconnected_pair", 3, 1),
        ];
        for (name, g, rot) in all_named() {
            let f = trace_faces(&g, &rot).unwrap();
            let &(_, faces, genus) = expect
                .iter()
                .find(|(n, _, _)| *n == name)
                .unwrap_or_else(|| panic!("no expectation for {name}"));
            assert_eq!(
                (f.faces.len(), f.genus),
                (faces, genus),
                "face data changed for {name}"
            );
        }
    }

    #[test]
    fn disconnected_pair_has_two_components() {
        let (g, rot) = disconnected_pair();
        assert_eq!(g.components().0, 2);
        let f = trace_faces(&g, &rot).unwrap();
        assert_eq!(f.component_genus, vec![0, 1]);
    }

    #[test]
    fn torus_grid_counts() {
        let (g, _) = torus_grid(8, 8);
        assert_eq!(g.vertex_count(), 64);
        assert_eq!(g.edge_count(), 128);
        assert!((0..64).all(|v| g.degree(v) == 4));
    }
}
