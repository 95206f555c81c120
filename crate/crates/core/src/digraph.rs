//! Finite loopless digraphs with dense adjacency.
//!
//! An undirected edge is modelled as a pair of opposite arcs; "edge" below
//! always means such a 2-circuit, "one-way arc" an arc whose reverse is
//! absent. Distances are directed path lengths; the two-way distance of an
//! ordered pair `(x, y)` is `(∂(x,y), ∂(y,x))`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::{self, BitMatrix};

pub const UNREACHABLE: u32 = u32::MAX;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GraphError {
    /// A digraph must have at least one vertex.
    EmptyGraph,
    /// Loops `(v, v)` are not representable.
    LoopArc { v: usize },
    /// Arc endpoint or requested vertex outside `0..n`.
    VertexOutOfRange { v: usize, n: usize },
    /// An induced subdigraph needs a nonempty vertex set.
    EmptyVertexSet,
    /// No directed path from `from` to `to`.
    NotStronglyConnected { from: usize, to: usize },
    /// Girth is undefined: the digraph has no circuit.
    NoCircuit,
}

impl fmt::Display for GraphError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphError::EmptyGraph => write!(f, "digraph needs at least one vertex"),
            GraphError::LoopArc { v } => write!(f, "loop arc ({v}, {v}) is not allowed"),
            GraphError::VertexOutOfRange { v, n } => {
                write!(f, "vertex {v} out of range for {n} vertices")
            }
            GraphError::EmptyVertexSet => write!(f, "vertex set must be nonempty"),
            GraphError::NotStronglyConnected { from, to } => {
                write!(f, "no directed path from {from} to {to}")
            }
            GraphError::NoCircuit => write!(f, "digraph has no circuit"),
        }
    }
}

impl core::error::Error for GraphError {}

/// Loopless digraph on vertices `0..n` with dense out- and in-adjacency.
#[derive(Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    out: BitMatrix,
    inn: BitMatrix,
}

impl fmt::Debug for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Digraph")
            .field("n", &self.n)
            .field("arcs", &self.arcs())
            .finish()
    }
}

impl Digraph {
    /// Builds a digraph from an arc list. Duplicate arcs collapse; loops and
    /// out-of-range endpoints are rejected.
    pub fn new(n: usize, arcs: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::EmptyGraph);
        }
        let mut out = BitMatrix::new(n);
        let mut inn = BitMatrix::new(n);
        for &(u, v) in arcs {
            if u >= n {
                return Err(GraphError::VertexOutOfRange { v: u, n });
            }
            if v >= n {
                return Err(GraphError::VertexOutOfRange { v, n });
            }
            if u == v {
                return Err(GraphError::LoopArc { v: u });
            }
            out.set(u, v);
            inn.set(v, u);
        }
        Ok(Digraph { n, out, inn })
    }

    pub(crate) fn from_matrices(out: BitMatrix, inn: BitMatrix) -> Self {
        Digraph {
            n: out.n(),
            out,
            inn,
        }
    }

    pub(crate) fn out_matrix(&self) -> &BitMatrix {
        &self.out
    }

    #[inline]
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out.get(u, v)
    }

    pub fn arc_count(&self) -> usize {
        self.out.count()
    }

    /// All arcs in lexicographic order.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        let mut arcs = Vec::with_capacity(self.arc_count());
        for u in 0..self.n {
            bitset::for_each_bit(self.out.row(u), |v| arcs.push((u, v)));
        }
        arcs
    }

    pub fn out_neighbors(&self, u: usize) -> Vec<usize> {
        let mut nb = Vec::new();
        bitset::for_each_bit(self.out.row(u), |v| nb.push(v));
        nb
    }

    pub fn in_neighbors(&self, u: usize) -> Vec<usize> {
        let mut nb = Vec::new();
        bitset::for_each_bit(self.inn.row(u), |v| nb.push(v));
        nb
    }

    /// `(out-degree, in-degree)` of `x`.
    pub fn degrees(&self, x: usize) -> Result<(usize, usize), GraphError> {
        if x >= self.n {
            return Err(GraphError::VertexOutOfRange { v: x, n: self.n });
        }
        Ok((self.out.row_count(x), self.inn.row_count(x)))
    }

    /// True when every arc is paired with its reverse.
    pub fn is_undirected(&self) -> bool {
        self.out == self.inn
    }

    /// True when every unordered pair carries at least one arc.
    pub fn is_semicomplete(&self) -> bool {
        for u in 0..self.n {
            for v in (u + 1)..self.n {
                if !self.out.get(u, v) && !self.out.get(v, u) {
                    return false;
                }
            }
        }
        true
    }

    /// The underlying graph: each arc completed to an edge.
    pub fn underlying_graph(&self) -> Digraph {
        let mut g = self.clone();
        for u in 0..self.n {
            bitset::for_each_bit(self.out.row(u), |v| {
                g.out.set(v, u);
                g.inn.set(u, v);
            });
        }
        g
    }

    /// The digraph with every arc reversed.
    pub fn reverse(&self) -> Digraph {
        Digraph {
            n: self.n,
            out: self.inn.clone(),
            inn: self.out.clone(),
        }
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.connectivity_witness().is_none()
    }

    /// Lexicographically first ordered pair with no directed path, if any.
    pub(crate) fn connectivity_witness(&self) -> Option<(usize, usize)> {
        let words = self.out.words();
        let mut dist = vec![0u32; self.n];
        let mut cur = vec![0u64; words];
        let mut nxt = vec![0u64; words];
        let mut seen = vec![0u64; words];
        for x in 0..self.n {
            bfs(&self.out, x, &mut dist, &mut cur, &mut nxt, &mut seen);
            if let Some(y) = dist.iter().position(|&d| d == UNREACHABLE) {
                return Some((x, y));
            }
        }
        None
    }

    /// All-pairs two-way distances. Requires strong connectivity; the error
    /// carries the first ordered pair with no path.
    pub fn two_way_distance(&self) -> Result<TwoWayDistanceTable, GraphError> {
        let mut dist = vec![0u32; self.n * self.n];
        let words = self.out.words();
        let mut cur = vec![0u64; words];
        let mut nxt = vec![0u64; words];
        let mut seen = vec![0u64; words];
        for x in 0..self.n {
            let row = &mut dist[x * self.n..(x + 1) * self.n];
            bfs(&self.out, x, row, &mut cur, &mut nxt, &mut seen);
            if let Some(y) = row.iter().position(|&d| d == UNREACHABLE) {
                return Err(GraphError::NotStronglyConnected { from: x, to: y });
            }
        }
        Ok(TwoWayDistanceTable { n: self.n, dist })
    }

    /// Length of a shortest circuit. An edge counts as a circuit of length 2.
    pub fn girth(&self) -> Result<usize, GraphError> {
        let words = self.out.words();
        let mut dist = vec![0u32; self.n];
        let mut cur = vec![0u64; words];
        let mut nxt = vec![0u64; words];
        let mut seen = vec![0u64; words];
        let mut best: Option<u32> = None;
        // girth = min over arcs (u,v) of 1 + ∂(v,u); BFS once per source v.
        for v in 0..self.n {
            if self.inn.row_count(v) == 0 {
                continue;
            }
            bfs(&self.out, v, &mut dist, &mut cur, &mut nxt, &mut seen);
            bitset::for_each_bit(self.inn.row(v), |u| {
                if dist[u] != UNREACHABLE {
                    let len = dist[u] + 1;
                    if best.map_or(true, |b| len < b) {
                        best = Some(len);
                    }
                }
            });
            if best == Some(2) {
                break;
            }
        }
        best.map(|b| b as usize).ok_or(GraphError::NoCircuit)
    }

    /// Subdigraph induced on `verts` (deduplicated, sorted), together with
    /// the relabeling map: entry `i` of the map is the original name of the
    /// new vertex `i`.
    pub fn induced_subdigraph(&self, verts: &[usize]) -> Result<(Digraph, Vec<usize>), GraphError> {
        let mut keep: Vec<usize> = verts.to_vec();
        keep.sort_unstable();
        keep.dedup();
        if keep.is_empty() {
            return Err(GraphError::EmptyVertexSet);
        }
        if let Some(&v) = keep.last() {
            if v >= self.n {
                return Err(GraphError::VertexOutOfRange { v, n: self.n });
            }
        }
        let m = keep.len();
        let mut out = BitMatrix::new(m);
        let mut inn = BitMatrix::new(m);
        for (i, &u) in keep.iter().enumerate() {
            for (j, &v) in keep.iter().enumerate() {
                if i != j && self.out.get(u, v) {
                    out.set(i, j);
                    inn.set(j, i);
                }
            }
        }
        Ok((Digraph { n: m, out, inn }, keep))
    }
}

/// Dense table of two-way distances of a strongly connected digraph.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct TwoWayDistanceTable {
    n: usize,
    dist: Vec<u32>,
}

impl TwoWayDistanceTable {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Forward distance `∂(x, y)`.
    #[inline]
    pub fn forward(&self, x: usize, y: usize) -> u32 {
        self.dist[x * self.n + y]
    }

    /// Two-way distance `(∂(x,y), ∂(y,x))`.
    #[inline]
    pub fn get(&self, x: usize, y: usize) -> (u32, u32) {
        (self.dist[x * self.n + y], self.dist[y * self.n + x])
    }

    /// Maximum forward distance.
    pub fn diameter(&self) -> u32 {
        self.dist.iter().copied().max().unwrap_or(0)
    }

    /// Sorted set of two-way distances attained by some pair.
    pub fn labels(&self) -> Vec<(u32, u32)> {
        let mut ls: Vec<(u32, u32)> = Vec::new();
        for x in 0..self.n {
            for y in 0..self.n {
                ls.push(self.get(x, y));
            }
        }
        ls.sort_unstable();
        ls.dedup();
        ls
    }
}

/// Level-synchronous BFS over bitset rows. `dist` is filled with levels,
/// `UNREACHABLE` where no path exists.
pub(crate) fn bfs(
    adj: &BitMatrix,
    src: usize,
    dist: &mut [u32],
    cur: &mut [u64],
    nxt: &mut [u64],
    seen: &mut [u64],
) {
    dist.fill(UNREACHABLE);
    dist[src] = 0;
    cur.fill(0);
    seen.fill(0);
    bitset::set_bit(cur, src);
    bitset::set_bit(seen, src);
    let mut level = 0u32;
    loop {
        level += 1;
        adj.union_rows(cur, nxt);
        let mut any = false;
        for (nw, sw) in nxt.iter_mut().zip(seen.iter_mut()) {
            *nw &= !*sw;
            *sw |= *nw;
            any |= *nw != 0;
        }
        if !any {
            break;
        }
        bitset::for_each_bit(nxt, |v| dist[v] = level);
        cur.copy_from_slice(nxt);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(n: usize) -> Digraph {
        let arcs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Digraph::new(n, &arcs).unwrap()
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(Digraph::new(0, &[]), Err(GraphError::EmptyGraph));
        assert_eq!(
            Digraph::new(3, &[(1, 1)]),
            Err(GraphError::LoopArc { v: 1 })
        );
        assert_eq!(
            Digraph::new(3, &[(0, 3)]),
            Err(GraphError::VertexOutOfRange { v: 3, n: 3 })
        );
    }

    #[test]
    fn duplicate_arcs_collapse() {
        let g = Digraph::new(2, &[(0, 1), (0, 1)]).unwrap();
        assert_eq!(g.arc_count(), 1);
    }

    #[test]
    fn two_way_distance_on_directed_cycle() {
        let g = cycle(4);
        let t = g.two_way_distance().unwrap();
        assert_eq!(t.get(0, 1), (1, 3));
        assert_eq!(t.get(1, 0), (3, 1));
        assert_eq!(t.get(0, 2), (2, 2));
        assert_eq!(t.get(2, 2), (0, 0));
        assert_eq!(t.diameter(), 3);
        assert_eq!(t.labels(), vec![(0, 0), (1, 3), (2, 2), (3, 1)]);
    }

    #[test]
    fn two_way_distance_requires_strong_connectivity() {
        // From 0 all of {0,1,2} are reachable; from 1 vertex 0 is not, so
        // the lexicographically first unreachable pair is (1, 0).
        let g = Digraph::new(3, &[(0, 1), (1, 2)]).unwrap();
        assert_eq!(
            g.two_way_distance(),
            Err(GraphError::NotStronglyConnected { from: 1, to: 0 })
        );
        assert_eq!(g.connectivity_witness(), Some((1, 0)));
        assert!(!g.is_strongly_connected());
        assert!(cycle(4).is_strongly_connected());
    }

    #[test]
    fn girth_edge_is_two() {
        let g = Digraph::new(2, &[(0, 1), (1, 0)]).unwrap();
        assert_eq!(g.girth(), Ok(2));
        assert_eq!(cycle(5).girth(), Ok(5));
        let dag = Digraph::new(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(dag.girth(), Err(GraphError::NoCircuit));
        let single = Digraph::new(1, &[]).unwrap();
        assert_eq!(single.girth(), Err(GraphError::NoCircuit));
    }

    #[test]
    fn underlying_and_reverse() {
        let g = cycle(3);
        assert!(!g.is_undirected());
        let u = g.underlying_graph();
        assert!(u.is_undirected());
        assert_eq!(u.arc_count(), 6);
        assert_eq!(g.reverse().reverse(), g);
        assert_eq!(u.underlying_graph(), u);
    }

    #[test]
    fn semicomplete_and_degrees() {
        let g = cycle(3);
        assert!(g.is_semicomplete());
        assert_eq!(g.degrees(0).unwrap(), (1, 1));
        assert!(!cycle(4).is_semicomplete());
        assert!(g.degrees(7).is_err());
    }

    #[test]
    fn induced_subdigraph_relabels() {
        let g = cycle(4);
        let (h, map) = g.induced_subdigraph(&[2, 0, 3, 3]).unwrap();
        assert_eq!(map, vec![0, 2, 3]);
        assert_eq!(h.vertex_count(), 3);
        // surviving arcs: 2→3 and 3→0, relabeled through the map
        assert!(h.has_arc(1, 2));
        assert!(h.has_arc(2, 0));
        assert_eq!(h.arc_count(), 2);
        assert_eq!(
            g.induced_subdigraph(&[]).unwrap_err(),
            GraphError::EmptyVertexSet
        );
    }
}
