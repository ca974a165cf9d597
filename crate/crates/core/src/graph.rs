//! Multigraphs with explicit half-edges, cycle bases, and the brute-force
//! oracles the Pfaffian pipeline is verified against.
//!
//! Vertices and edges are dense indices. Every edge has two half-edges,
//! side `A` at the first endpoint and side `B` at the second; loops and
//! parallel edges are allowed everywhere. Loops count twice towards degree.

use crate::error::Error;
use crate::gf2::Bits;
use crate::{Rational, Result};
use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Enumeration budget shared by every subset/matching stream.
pub const DEFAULT_CAP: u64 = 1 << 20;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum Side {
    A,
    B,
}

impl Side {
    pub fn other(self) -> Side {
        match self {
            Side::A => Side::B,
            Side::B => Side::A,
        }
    }
}

/// One end of an edge. `(edge, Side::A)` sits at the edge's first endpoint.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub edge: usize,
    pub side: Side,
}

impl HalfEdge {
    pub fn new(edge: usize, side: Side) -> Self {
        HalfEdge { edge, side }
    }

    /// The other end of the same edge.
    pub fn mate(self) -> HalfEdge {
        HalfEdge::new(self.edge, self.side.other())
    }

    /// Dense index in `0..2m`, used for positional tables.
    pub fn index(self) -> usize {
         2 * self.edge
            + match self.side {
                Side::A => 0,
                Side::B => 1,
            }
    }
}

impl std::fmt::Debug for HalfEdge {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "{}{}",
            self.edge,
            match self.side {
                Side::A => 'a',
                Side::B => 'b',
            }
        )
    }
}

/// Subset of edges as a bitmask over edge ids.
pub type EdgeSubset = Bits;

/// Undirected multigraph, immutable once built.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Multigraph {
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    incidence: Vec<Vec<HalfEdge>>, // per vertex, sorted by (edge, side)
}

impl Multigraph {
    pub fn new(vertex_count: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut incidence = vec![Vec::new(); vertex_count];
        for (e, &(u, v)) in edges.iter().enumerate() {
            for (vertex, side) in [(u, Side::A), (v, Side::B)] {
                if vertex >= vertex_count {
                    return Err(Error::BadEndpoint {
                        edge: e,
                        vertex,
                        vertex_count,
                    });
                }
                incidence[vertex].push(HalfEdge::new(e, side));
            }
        }
        for inc in &mut incidence {
            inc.sort();
        }
        Ok(Multigraph {
            vertex_count,
            edges,
            incidence,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn endpoints(&self, e: usize) -> (usize, usize) {
        self.edges[e]
    }

    pub fn is_loop(&self, e: usize) -> bool {
        self.edges[e].0 == self.edges[e].1
    }

    /// Vertex a half-edge is attached to.
    pub fn vertex_of(&self, h: HalfEdge) -> usize {
        match h.side {
            Side::A => self.edges[h.edge].0,
            Side::B => self.edges[h.edge].1,
        }
    }

    /// Incident half-edges in (edge, side) order. Loops appear twice.
    pub fn half_edges(&self, v: usize) -> &[HalfEdge] {
        &self.incidence[v]
    }

    /// Degree with loops counted twice.
    pub fn degree(&self, v: usize) -> usize {
        self.incidence[v].len()
    }

    /// Component label per vertex plus the number of components.
    pub fn components(&self) -> (usize, Vec<usize>) {
        let mut label = vec![usize::MAX; self.vertex_count];
        let mut count = 0;
        for start in 0..self.vertex_count {
            if label[start] != usize::MAX {
                continue;
            }
            let mut stack = vec![start];
            label[start] = count;
            while let Some(v) = stack.pop() {
                for h in &self.incidence[v] {
                    let w = self.vertex_of(h.mate());
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (count, label)
    }

    /// True when the subset has even degree at every vertex (loops add two,
    /// hence never change the parity).
    pub fn is_even_subset(&self, subset: &EdgeSubset) -> bool {
        let mut parity = vec![false; self.vertex_count];
        for e in subset.ones() {
            let (u, v) = self.edges[e];
            parity[u] ^= true;
            parity[v] ^= true;
        }
        parity.iter().all(|&p| !p)
    }
}

/// A non-forest edge together with its fundamental cycle through the forest.
#[derive(Debug)]
pub struct FundamentalCycle {
    pub edge: usize,
    pub subset: EdgeSubset,
}

/// Spanning forest plus the fundamental cycles of the remaining edges.
/// The cycles form a basis of the GF(2) cycle space; its rank is
/// `m - n + components`.
#[derive(Debug)]
pub struct CycleBasis {
    pub forest: EdgeSubset,
    pub cycles: Vec<FundamentalCycle>,
    pub components: usize,
}

impl CycleBasis {
    pub fn rank(&self) -> usize {
        self.cycles.len()
    }
}

/// Build a spanning forest containing every edge of `required`, then report
/// the fundamental cycle of each leftover edge (in increasing edge order).
///
/// Fails when `required` itself contains a cycle; the offending edges (those
/// that closed a cycle during insertion) are reported.
pub fn cycle_basis(g: &Multigraph, required: &EdgeSubset) -> Result<CycleBasis> {
    let n = g.vertex_count();
    let mut dsu = Dsu::new(n);
    let mut forest = Bits::new(g.edge_count());
    let mut bad = Vec::new();
    for e in required.ones() {
        let (u, v) = g.endpoints(e);
        if !dsu.union(u, v) {
            bad.push(e);
        } else {
            forest.set(e, true);
        }
    }
    if !bad.is_empty() {
        return Err(Error::RequiredCycle { edges: bad });
    }
    for e in 0..g.edge_count() {
        if forest.get(e) {
            continue;
        }
        let (u, v) = g.endpoints(e);
        if dsu.union(u, v) {
            forest.set(e, true);
        }
    }

    // root the forest and collect parent edges for path lookups
    let mut parent_edge = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0usize; n];
    let mut seen = vec![false; n];
    let mut adj = vec![Vec::new(); n];
    for e in forest.ones() {
        let (u, v) = g.endpoints(e);
        adj[u].push((v, e));
        adj[v].push((u, e));
    }
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = std::collections::VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            for &(w, e) in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = v;
                    parent_edge[w] = e;
                    depth[w] = depth[v] + 1;
                    queue.push_back(w);
                }
            }
        }
    }

    let mut cycles = Vec::new();
    for e in 0..g.edge_count() {
        if forest.get(e) {
            continue;
        }
        let (mut u, mut v) = g.endpoints(e);
        let mut subset = Bits::new(g.edge_count());
        subset.set(e, true);
        while depth[u] > depth[v] {
            subset.flip(parent_edge[u]);
            u = parent[u];
        }
        while depth[v] > depth[u] {
            subset.flip(parent_edge[v]);
            v = parent[v];
        }
        while u != v {
            subset.flip(parent_edge[u]);
            subset.flip(parent_edge[v]);
            u = parent[u];
            v = parent[v];
        }
        cycles.push(FundamentalCycle { edge: e, subset });
    }
    let components = dsu.count();
    Ok(CycleBasis {
        forest,
        cycles,
        components,
    })
}

struct Dsu {
    parent: Vec<usize>,
    count: usize,
}

impl Dsu {
    fn new(n: usize) -> Self {
        Dsu {
            parent: (0..n).collect(),
            count: n,
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) -> bool {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        self.parent[ra] = rb;
        self.count -= 1;
        true
    }

    fn count(&self) -> usize {
        self.count
    }
}

/// Stream of all `2^rank` even edge subsets, Gray-code ordered so consecutive
/// subsets differ by one basis cycle. The first subset is empty.
#[derive(Debug)]
pub struct EvenSubsets<'a> {
    basis: &'a CycleBasis,
    current: EdgeSubset,
    index: u64,
    total: u64,
    started: bool,
}

impl<'a> Iterator for EvenSubsets<'a> {
    type Item = EdgeSubset;

    fn next(&mut self) -> Option<EdgeSubset> {
        if !self.started {
            self.started = true;
            return Some(self.current.clone());
        }
        self.index += 1;
        if self.index >= self.total {
            return None;
        }
        let flip = self.index.trailing_zeros() as usize;
        self.current.xor_assign(&self.basis.cycles[flip].subset);
        Some(self.current.clone())
    }
}

/// Iterate every even subset of `g`, failing upfront when `2^rank` exceeds `cap`.
pub fn even_subsets<'a>(
    g: &Multigraph,
    basis: &'a CycleBasis,
    cap: u64,
) -> Result<EvenSubsets<'a>> {
    let rank = basis.rank();
    if rank >= 64 || 1u64 << rank > cap {
        return Err(Error::Capacity {
            what: "even subset enumeration",
            needed: format!("2^{rank}"),
            cap,
        });
    }
    Ok(EvenSubsets {
        basis,
        current: Bits::new(g.edge_count()),
        index: 0,
        total: 1u64 << rank,
        started: false,
    })
}

/// Brute-force value of the even-subgraph generating polynomial at `w`:
/// the sum over all even edge subsets of the product of member weights.
///
/// Works over a common denominator so the inner loop is integer-only; this is
/// the independent reference the Pfaffian pipeline is checked against.
pub fn even_poly_oracle(g: &Multigraph, w: &[Rational], cap: u64) -> Result<Rational> {
    assert_eq!(w.len(), g.edge_count(), "one weight per edge");
    let basis = cycle_basis(g, &Bits::new(g.edge_count()))?;
    let numer: Vec<BigInt> = w.iter().map(|x| x.numer().clone()).collect();
    let denom: Vec<BigInt> = w.iter().map(|x| x.denom().clone()).collect();
    let mut total = BigInt::zero();
    for subset in even_subsets(g, &basis, cap)? {
        let mut term = BigInt::one();
        for e in 0..g.edge_count() {
            term *= if subset.get(e) { &numer[e] } else { &denom[e] };
        }
        total += term;
    }
    let all_denom: BigInt = denom.iter().product();
    Ok(Rational::new(total, all_denom))
}

/// Enumerate all perfect matchings as edge subsets, in lexicographic order of
/// the choices at the lowest uncovered vertex. Loops never participate.
pub fn perfect_matchings(g: &Multigraph, cap: u64) -> Result<Vec<EdgeSubset>> {
    fn rec(
        g: &Multigraph,
        covered: &mut [bool],
        chosen: &mut Vec<usize>,
        out: &mut Vec<EdgeSubset>,
        cap: u64,
    ) -> Result<()> {
        let v = match covered.iter().position(|&c| !c) {
            None => {
                if out.len() as u64 >= cap {
                    return Err(Error::Capacity {
                        what: "perfect matching enumeration",
                        needed: format!("more than {cap}"),
                        cap,
                    });
                }
                out.push(Bits::from_indices(g.edge_count(), chosen));
                return Ok(());
            }
            Some(v) => v,
        };
        for h in g.half_edges(v) {
            if g.is_loop(h.edge) {
                continue;
            }
            let w = g.vertex_of(h.mate());
            if covered[w] {
                continue;
            }
            covered[v] = true;
            covered[w] = true;
            chosen.push(h.edge);
            rec(g, covered, chosen, out, cap)?;
            chosen.pop();
            covered[v] = false;
            covered[w] = false;
        }
        Ok(())
    }
    let mut out = Vec::new();
    let mut covered = vec![false; g.vertex_count()];
    rec(g, &mut covered, &mut Vec::new(), &mut out, cap)?;
    Ok(out)
}

/// Brute-force perfect-matching generating polynomial: the sum over perfect
/// matchings of the product of member weights.
pub fn matching_oracle(g: &Multigraph, w: &[Rational], cap: u64) -> Result<Rational> {
    assert_eq!(w.len(), g.edge_count(), "one weight per edge");
    let mut total = Rational::zero();
    for m in perfect_matchings(g, cap)? {
        let mut term = Rational::one();
        for e in m.ones() {
            term *= &w[e];
        }
        total += term;
    }
    Ok(total)
}

/// Largest absolute value bound for Pfaffian/matching sums at weights `w`:
/// `prod_e (1 + |w_e|)` dominates any signed sum of squarefree monomials.
pub fn monomial_sum_bound(w: &[Rational]) -> Rational {
    let mut bound = Rational::one();
    for x in w {
        bound *= Rational::one() + x.abs();
    }
    bound
}
