//! Digraph isomorphism by invariant-guided backtracking.
//!
//! Adequate for the instance sizes in this crate (n ≤ 64ish). Vertices are
//! keyed by degrees, the sorted multiset of two-way distances (when both
//! digraphs are strongly connected), and an edge-local invariant counting
//! arcs among common out-neighborhoods; candidates must share keys. The
//! edge-local key separates graphs that agree in all distance parameters,
//! e.g. the Shrikhande graph from the 4-ary Hamming square, without any
//! deep search.

use alloc::vec;
use alloc::vec::Vec;

use crate::bitset;
use crate::digraph::Digraph;

#[derive(Clone, PartialEq, Eq)]
struct VertexKey {
    out_deg: usize,
    in_deg: usize,
    /// Sorted two-way distances to all vertices; `None` when not strongly
    /// connected.
    labels: Option<Vec<(u32, u32)>>,
    /// For each out-neighbor `y` of `x`: the number of arcs among the common
    /// out-neighbors of `x` and `y`, sorted.
    local: Vec<usize>,
}

fn vertex_keys(g: &Digraph) -> Vec<VertexKey> {
    let n = g.vertex_count();
    let table = g.two_way_distance().ok();
    let words = g.out_matrix().words();
    let mut common = vec![0u64; words];
    (0..n)
        .map(|x| {
            let (out_deg, in_deg) = g.degrees(x).unwrap();
            let labels = table.as_ref().map(|t| {
                let mut ls: Vec<(u32, u32)> = (0..n).map(|y| t.get(x, y)).collect();
                ls.sort_unstable();
                ls
            });
            let mut local = Vec::with_capacity(out_deg);
            bitset::for_each_bit(g.out_matrix().row(x), |y| {
                for (c, (&a, &b)) in common
                    .iter_mut()
                    .zip(g.out_matrix().row(x).iter().zip(g.out_matrix().row(y)))
                {
                    *c = a & b;
                }
                let mut arcs_inside = 0;
                bitset::for_each_bit(&common, |z| {
                    arcs_inside += g
                        .out_matrix()
                        .row(z)
                        .iter()
                        .zip(&common)
                        .map(|(&r, &c)| (r & c).count_ones() as usize)
                        .sum::<usize>();
                });
                local.push(arcs_inside);
            });
            local.sort_unstable();
            VertexKey {
                out_deg,
                in_deg,
                labels,
                local,
            }
        })
        .collect()
}

/// Assignment order: breadth-first over the underlying graph from vertex 0,
/// then any vertices missed by the sweep. Keeps each newly assigned vertex
/// adjacent to an already mapped one whenever possible.
fn assignment_order(g: &Digraph) -> Vec<usize> {
    let n = g.vertex_count();
    let und = g.underlying_graph();
    let mut order = Vec::with_capacity(n);
    let mut seen = vec![false; n];
    let mut head = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        seen[start] = true;
        order.push(start);
        while head < order.len() {
            let u = order[head];
            head += 1;
            bitset::for_each_bit(und.out_matrix().row(u), |v| {
                if !seen[v] {
                    seen[v] = true;
                    order.push(v);
                }
            });
        }
    }
    order
}

/// Searches for a vertex bijection φ with `g` has arc `(u,v)` iff `h` has
/// arc `(φu, φv)`. Returns the bijection as a vector indexed by `g`-vertex,
/// or `None` when the digraphs are not isomorphic. Any returned map has
/// passed a full arc-preservation check over all ordered pairs.
pub fn are_isomorphic(g: &Digraph, h: &Digraph) -> Option<Vec<usize>> {
    let n = g.vertex_count();
    if n != h.vertex_count() || g.arc_count() != h.arc_count() {
        return None;
    }
    let kg = vertex_keys(g);
    let kh = vertex_keys(h);
    {
        let mut sg: Vec<&VertexKey> = kg.iter().collect();
        let mut sh: Vec<&VertexKey> = kh.iter().collect();
        let rank = |k: &VertexKey| (k.out_deg, k.in_deg, k.labels.clone(), k.local.clone());
        sg.sort_by_key(|k| rank(k));
        sh.sort_by_key(|k| rank(k));
        if sg != sh {
            return None;
        }
    }
    let tg = g.two_way_distance().ok();
    let th = h.two_way_distance().ok();

    let order = assignment_order(g);
    let mut map = vec![usize::MAX; n];
    let mut used = vec![false; n];

    fn extend(
        depth: usize,
        order: &[usize],
        g: &Digraph,
        h: &Digraph,
        kg: &[VertexKey],
        kh: &[VertexKey],
        tg: &Option<crate::digraph::TwoWayDistanceTable>,
        th: &Option<crate::digraph::TwoWayDistanceTable>,
        map: &mut [usize],
        used: &mut [bool],
    ) -> bool {
        if depth == order.len() {
            return true;
        }
        let u = order[depth];
        'cand: for w in 0..h.vertex_count() {
            if used[w] || kg[u] != kh[w] {
                continue;
            }
            for &x in &order[..depth] {
                let fx = map[x];
                if g.has_arc(u, x) != h.has_arc(w, fx) || g.has_arc(x, u) != h.has_arc(fx, w) {
                    continue 'cand;
                }
                if let (Some(tg), Some(th)) = (tg, th) {
                    if tg.get(u, x) != th.get(w, fx) {
                        continue 'cand;
                    }
                }
            }
            map[u] = w;
            used[w] = true;
            if extend(depth + 1, order, g, h, kg, kh, tg, th, map, used) {
                return true;
            }
            map[u] = usize::MAX;
            used[w] = false;
        }
        false
    }

    if !extend(0, &order, g, h, &kg, &kh, &tg, &th, &mut map, &mut used) {
        return None;
    }
    // independent arc-preservation pass over every ordered pair
    for u in 0..n {
        for v in 0..n {
            if g.has_arc(u, v) != h.has_arc(map[u], map[v]) {
                return None;
            }
        }
    }
    Some(map)
}
