//! Vertex expansion turning even edge subsets into perfect matchings.
//!
//! Every degree-`d` vertex becomes a path of `6d` vertices carrying `2d`
//! short chords; the `i`-th half-edge in the vertex's rotation attaches at
//! path position `6i+1`. The gadget graph has a unique perfect matching for
//! every even subset of attached half-edges and none for odd subsets, so
//! perfect matchings of the expanded graph correspond exactly to even edge
//! subsets of the host. The expansion inherits a rotation system that embeds
//! it in the same surface, and each gadget ships a planar Kasteleyn
//! orientation (every bounded face odd) used to seed sign fitting.

use crate::error::Error;
use crate::gf2::Bits;
use crate::graph::{perfect_matchings, EdgeSubset, HalfEdge, Multigraph, Side};
use crate::pfaffian::Orientation;
use crate::surface::{trace_faces, Dart, RotationSystem};
use crate::Result;
use std::collections::BTreeMap;

/// Expansion gadget for one vertex of degree `d`, in local indices.
///
/// Local vertices `0..6d` are the path, `6d..7d` are stub placeholders for
/// the attached half-edges. Local edges: path `0..6d-1`, chords
/// `6d-1..8d-1` (chord `t` joins `3t` and `3t+2`), stubs `8d-1..9d-1`
/// (stub `i` hangs off path vertex `6i+1`).
pub struct GadgetPlan {
    pub degree: usize,
    pub graph: Multigraph,
    pub rotation: RotationSystem,
    /// Direction bits of a Kasteleyn orientation of the planar gadget:
    /// every bounded face has an odd number of darts running against it.
    /// Stub and bridge edges keep bit zero.
    pub kasteleyn: Bits,
    /// Attachment path vertices, `6i+1` for stub `i`.
    pub attach_local: Vec<usize>,
}

impl GadgetPlan {
    pub fn path_edges(&self) -> std::ops::Range<usize> {
        0..6 * self.degree - 1
    }

    pub fn chord_edges(&self) -> std::ops::Range<usize> {
        6 * self.degree - 1..8 * self.degree - 1
    }

    pub fn stub_edges(&self) -> std::ops::Range<usize> {
        8 * self.degree - 1..9 * self.degree - 1
    }

    /// Internal (path + chord) edge count, `8d - 1`.
    pub fn internal_edges(&self) -> usize {
        8 * self.degree - 1
    }
}

/// Build the degree-`d` expansion gadget with its planar embedding and
/// Kasteleyn orientation.
pub fn gadget_plan(d: usize) -> Result<GadgetPlan> {
    assert!(d >= 1, "gadgets exist for positive degree only");
    let path_vertices = 6 * d;
    let mut edges = Vec::with_capacity(9 * d - 1);
    for i in 0..path_vertices - 1 {
        edges.push((i, i + 1)); // path edge i
    }
    for t in 0..2 * d {
        edges.push((3 * t, 3 * t + 2)); // chord t
    }
    for i in 0..d {
        edges.push((6 * i + 1, path_vertices + i)); // stub i
    }
    let graph = Multigraph::new(7 * d, edges)?;

    // planar rotation: path east, stub up, path west, chord down — the path
    // runs horizontally, stubs leave into the outer face, chords arc below
    let chord_edge = |t: usize| 6 * d - 1 + t;
    let stub_edge = |i: usize| 8 * d - 1 + i;
    let mut order: Vec<Vec<HalfEdge>> = Vec::with_capacity(7 * d);
    for k in 0..path_vertices {
        let mut cycle = Vec::with_capacity(4);
        if k + 1 < path_vertices {
            cycle.push(HalfEdge::new(k, Side::A)); // east along the path
        }
        if k % 6 == 1 {
            cycle.push(HalfEdge::new(stub_edge(k / 6), Side::A)); // stub up
        }
        if k > 0 {
            cycle.push(HalfEdge::new(k - 1, Side::B)); // west along the path
        }
        match k % 3 {
            0 => cycle.push(HalfEdge::new(chord_edge(k / 3), Side::A)),
            2 => cycle.push(HalfEdge::new(chord_edge((k - 2) / 3), Side::B)),
            _ => {}
        }
        order.push(cycle);
    }
    for i in 0..d {
        order.push(vec![HalfEdge::new(stub_edge(i), Side::B)]);
    }
    let rotation = RotationSystem::new(&graph, order)?;

    let faces = trace_faces(&graph, &rotation)?;
    if faces.genus != 0 || faces.faces.len() != 2 * d + 1 {
        return Err(Error::Internal(format!(
            "degree-{d} gadget embedding came out wrong: genus {}, {} faces",
            faces.genus,
            faces.faces.len()
        )));
    }

    // the stub edges are bridges: both their darts lie on the outer face
    let mut face_of_dart = vec![usize::MAX; 2 * graph.edge_count()];
    for (fi, face) in faces.faces.iter().enumerate() {
        for dart in face {
            face_of_dart[dart.half().index()] = fi;
        }
    }
    let outer = face_of_dart[HalfEdge::new(stub_edge(0), Side::A).index()];

    // fix direction bits so every bounded face is odd: walk the dual
    // spanning tree outward from the outer face, then repair parities
    // leaf-to-root by flipping the edge shared with the parent face
    let mut kasteleyn = Bits::new(graph.edge_count());
    let mut parent_edge = vec![usize::MAX; faces.faces.len()];
    let mut discovery = vec![outer];
    let mut seen = vec![false; faces.faces.len()];
    seen[outer] = true;
    let mut head = 0;
    while head < discovery.len() {
        let f = discovery[head];
        head += 1;
        for dart in &faces.faces[f] {
            let g = face_of_dart[dart.half().mate().index()];
            if !seen[g] {
                seen[g] = true;
                parent_edge[g] = dart.edge;
                discovery.push(g);
            }
        }
    }
    let against = |bits: &Bits, dart: &Dart| (dart.from == Side::B) != bits.get(dart.edge);
    for &f in discovery.iter().skip(1).rev() {
        let parity = faces.faces[f]
            .iter()
            .filter(|dart| against(&kasteleyn, dart))
            .count();
        if parity % 2 == 0 {
            kasteleyn.flip(parent_edge[f]);
        }
    }
    for (fi, face) in faces.faces.iter().enumerate() {
        if fi == outer {
            continue;
        }
        let parity = face.iter().filter(|dart| against(&kasteleyn, dart)).count();
        if parity % 2 != 1 {
            return Err(Error::Internal(
                "gadget orientation failed to make every bounded face odd".into(),
            ));
        }
    }

    Ok(GadgetPlan {
        degree: d,
        graph,
        rotation,
        kasteleyn,
        attach_local: (0..d).map(|i| 6 * i + 1).collect(),
    })
}

/// Linear attachment order per vertex: the rotation cycle cut at its
/// smallest half-edge. Cutting elsewhere relabels stubs cyclically and
/// yields the same surface.
pub fn derive_sigma(g: &Multigraph, rot: &RotationSystem) -> Vec<Vec<HalfEdge>> {
    (0..g.vertex_count())
        .map(|v| {
            let cycle = rot.at(v);
            if cycle.is_empty() {
                return Vec::new();
            }
            let cut = cycle
                .iter()
                .enumerate()
                .min_by_key(|(_, h)| **h)
                .map(|(i, _)| i)
                .unwrap();
            let mut linear = Vec::with_capacity(cycle.len());
            linear.extend_from_slice(&cycle[cut..]);
            linear.extend_from_slice(&cycle[..cut]);
            linear
        })
        .collect()
}

/// The expanded graph with everything needed to pull host questions through:
/// host edges keep their ids `0..m`, gadget edges follow grouped by vertex.
pub struct FisherBlowup {
    pub host: Multigraph,
    /// Attachment order at each host vertex (rotation cut at the smallest
    /// half-edge).
    pub sigma: Vec<Vec<HalfEdge>>,
    pub graph: Multigraph,
    pub rotation: RotationSystem,
    /// Seed orientation: per-gadget Kasteleyn bits, host edges all zero.
    pub delta: Orientation,
    /// Gadget path edges; forced into spanning forests so that gadget edges
    /// never carry homology.
    pub required: EdgeSubset,
    /// First expanded vertex id of each host vertex's gadget.
    pub vertex_base: Vec<usize>,
    /// First gadget edge id of each host vertex (after the `m` host edges).
    pub edge_base: Vec<usize>,
}

impl FisherBlowup {
    pub fn host_edge_count(&self) -> usize {
        self.host.edge_count()
    }

    /// Expanded vertex where a host half-edge attaches.
    pub fn attach_vertex(&self, h: HalfEdge) -> usize {
        let v = self.host.vertex_of(h);
        let i = self.sigma[v]
            .iter()
            .position(|&s| s == h)
            .expect("half-edge occurs in its vertex's attachment order");
        self.vertex_base[v] + 6 * i + 1
    }

    /// Weights on the expanded graph: host weights for host edges, one for
    /// gadget edges.
    pub fn weights_on_blowup(&self, host_w: &[crate::Rational]) -> Vec<crate::Rational> {
        use num_traits::One;
        assert_eq!(host_w.len(), self.host.edge_count());
        let mut w = Vec::with_capacity(self.graph.edge_count());
        w.extend_from_slice(host_w);
        w.resize(self.graph.edge_count(), crate::Rational::one());
        w
    }

    /// The unique perfect matching of the expansion whose host edges are
    /// exactly `even`. Fails with `OddVertex` when `even` is not even.
    pub fn extend_even_to_matching(&self, even: &EdgeSubset) -> Result<EdgeSubset> {
        let host = &self.host;
        let mut parity = vec![false; host.vertex_count()];
        for e in even.ones() {
            let (u, v) = host.endpoints(e);
            parity[u] ^= true;
            parity[v] ^= true;
        }
        if let Some(v) = parity.iter().position(|&p| p) {
            return Err(Error::OddVertex { vertex: v });
        }

        let mut chosen = Bits::new(self.graph.edge_count());
        for e in even.ones() {
            chosen.set(e, true);
        }
        for v in 0..host.vertex_count() {
            let d = self.sigma[v].len();
            if d == 0 {
                continue;
            }
            // gadget vertices not matched through a host edge
            let mut free = vec![true; 6 * d];
            for (i, h) in self.sigma[v].iter().enumerate() {
                if even.get(h.edge) {
                    free[6 * i + 1] = false;
                }
            }
            let mut local_of = vec![usize::MAX; 6 * d];
            let mut verts = 0usize;
            for (k, &f) in free.iter().enumerate() {
                if f {
                    local_of[k] = verts;
                    verts += 1;
                }
            }
            // internal edges among free vertices, remembering global ids
            let mut sub_edges = Vec::new();
            let mut global_ids = Vec::new();
            let mut push = |a: usize, b: usize, local_id: usize, this: &Self| {
                if free[a] && free[b] {
                    sub_edges.push((local_of[a], local_of[b]));
                    global_ids.push(this.edge_base[v] + local_id);
                }
            };
            for i in 0..6 * d - 1 {
                push(i, i + 1, i, self);
            }
            for t in 0..2 * d {
                push(3 * t, 3 * t + 2, 6 * d - 1 + t, self);
            }
            let sub = Multigraph::new(verts, sub_edges)?;
            let pms = perfect_matchings(&sub, 1 << 20)?;
            if pms.len() != 1 {
                return Err(Error::Internal(format!(
                    "gadget completion at host vertex {v} is not unique ({} matchings)",
                    pms.len()
                )));
            }
            for (local_id, &gid) in global_ids.iter().enumerate() {
                if pms[0].get(local_id) {
                    chosen.set(gid, true);
                }
            }
        }
        Ok(chosen)
    }
}

/// Expand every vertex of `(g, rot)` into its matching gadget.
pub fn blow_up(host: &Multigraph, rot: &RotationSystem) -> Result<FisherBlowup> {
    let n = host.vertex_count();
    let m = host.edge_count();
    let sigma = derive_sigma(host, rot);

    let mut plans: BTreeMap<usize, GadgetPlan> = BTreeMap::new();
    for v in 0..n {
        let d = sigma[v].len();
        if d >= 1 && !plans.contains_key(&d) {
            plans.insert(d, gadget_plan(d)?);
        }
    }

    let mut vertex_base = vec![0usize; n];
    let mut total_vertices = 0usize;
    for v in 0..n {
        vertex_base[v] = total_vertices;
        total_vertices += 6 * sigma[v].len();
    }

    // host edges keep their ids, endpoints moved to the attachment vertices
    let attach = |h: HalfEdge| {
        let v = host.vertex_of(h);
        let i = sigma[v].iter().position(|&s| s == h).unwrap();
        vertex_base[v] + 6 * i + 1
    };
    let mut edges: Vec<(usize, usize)> = (0..m)
        .map(|e| {
            (
                attach(HalfEdge::new(e, Side::A)),
                attach(HalfEdge::new(e, Side::B)),
            )
        })
        .collect();

    let mut edge_base = vec![usize::MAX; n];
    let mut required_ids = Vec::new();
    let mut delta_ids = Vec::new();
    for v in 0..n {
        let d = sigma[v].len();
        if d == 0 {
            continue;
        }
        edge_base[v] = edges.len();
        let base_v = vertex_base[v];
        let plan = &plans[&d];
        for i in 0..6 * d - 1 {
            required_ids.push(edges.len());
            if plan.kasteleyn.get(i) {
                delta_ids.push(edges.len());
            }
            edges.push((base_v + i, base_v + i + 1));
        }
        for t in 0..2 * d {
            if plan.kasteleyn.get(6 * d - 1 + t) {
                delta_ids.push(edges.len());
            }
            edges.push((base_v + 3 * t, base_v + 3 * t + 2));
        }
    }
    let edge_count = edges.len();
    let graph = Multigraph::new(total_vertices, edges)?;

    // splice rotations: local cycles with stub half-edges replaced by the
    // attached host half-edges (which keep host ids and sides)
    let mut order: Vec<Vec<HalfEdge>> = Vec::with_capacity(total_vertices);
    for v in 0..n {
        let d = sigma[v].len();
        if d == 0 {
            continue;
        }
        let plan = &plans[&d];
        for k in 0..6 * d {
            let cycle = plan
                .rotation
                .at(k)
                .iter()
                .map(|&h| {
                    if h.edge < plan.internal_edges() {
                        HalfEdge::new(edge_base[v] + h.edge, h.side)
                    } else {
                        sigma[v][h.edge - plan.internal_edges()]
                    }
                })
                .collect();
            order.push(cycle);
        }
    }
    let rotation = RotationSystem::new(&graph, order)?;

    Ok(FisherBlowup {
        host: host.clone(),
        sigma,
        graph,
        rotation,
        delta: Orientation(Bits::from_indices(edge_count, &delta_ids)),
        required: Bits::from_indices(edge_count, &required_ids),
        vertex_base,
        edge_base,
    })
}
