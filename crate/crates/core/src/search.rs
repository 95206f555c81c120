//! Exhaustive search over the orientations of an undirected base graph.
//!
//! Every edge `{u, v}` of the base independently takes one of three states —
//! a one-way arc in either direction, or the pair of opposite arcs — so a
//! base with `m` edges spans a tree of `3^m` complete assignments.  The
//! search walks that tree in a fixed order, optionally cuts subtrees that
//! provably contain no sought completion, classifies every surviving leaf
//! (strong connectivity, then weak distance-regularity), and groups the
//! solutions into isomorphism classes.
//!
//! Accounting law: on a run that completes without the symmetry break,
//! `total_visited + pruned.total() == 3^m`.  With the symmetry break the
//! right-hand side becomes `2 * 3^(m-1)` since one of the three branches of
//! the first edge is never generated (and never counted).
//!
//! Every cut is conservative for its stated target class:
//!
//! * `regular_degrees` — any weakly distance-regular completion is regular
//!   with equal in- and out-valency at every vertex, so the per-vertex
//!   intervals of attainable final degrees must share a common value.
//! * `forbid_improper_none` — removes exactly the all-bidirected leaf (the
//!   base graph itself), which is otherwise counted as the one undirected
//!   solution.
//! * `arc_type_q2` — sound only for *commutative* targets on triangle-free
//!   bases in which non-adjacent vertices have 0 or 2 common neighbours and
//!   whose automorphism group is transitive on ordered pairs at each
//!   distance.  On such bases a commutative completion has every one-way arc
//!   lying on a consistently oriented 4-circuit, at most one bidirected edge
//!   per vertex once any one-way arc exists, and (on hypercubes) at most one
//!   one-way arc out of and into each vertex.
//! * `line_local` — sound for commutative targets on Hamming bases with at
//!   least three symbols: every maximal clique of a coordinate direction
//!   must end up with constant in- and out-degree inside the clique.
//!
//! Enabling a cut on a base that violates its structural preconditions is a
//! configuration error, not a silent misclassification.

use alloc::boxed::Box;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::sync::atomic::{AtomicU64, Ordering};

use crate::bitset::{count_ones, BitMatrix};
use crate::digraph::Digraph;
use crate::iso::are_isomorphic;
use crate::schemes::{
    relation_partition, scheme_axioms_check, wdrd_check, IntersectionTensor, WdrdScratch,
};

/// Orientation state of one base edge `{u, v}` with `u < v`.
///
/// The declared order (`Forward < Backward < Both`) is the order in which
/// the search tries states at each depth, so leaves are visited in
/// lexicographic order of their state vectors and the representative of an
/// isomorphism class is the least vector in that class that was found.
#[derive(Clone, Copy, Debug, Hash, PartialEq, Eq, PartialOrd, Ord)]
pub enum EdgeState {
    /// One arc from the smaller endpoint to the larger.
    Forward,
    /// One arc from the larger endpoint to the smaller.
    Backward,
    /// Two opposite arcs; the edge stays a 2-circuit.
    Both,
}

impl EdgeState {
    fn one_way(self) -> bool {
        self != EdgeState::Both
    }
}

/// Which subtree cuts the search is allowed to apply.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PruneFlags {
    pub regular_degrees: bool,
    pub forbid_improper_none: bool,
    pub arc_type_q2: bool,
    pub line_local: bool,
}

/// Leaves removed by each cut, measured in full assignments: a subtree cut
/// after deciding `k` of `m` edges accounts for `3^(m-k)` leaves.  Saturates
/// at `u64::MAX` on bases too large to ever finish anyway.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct PruneCounts {
    pub regular_degrees: u64,
    pub forbid_improper_none: u64,
    pub arc_type_q2: u64,
    pub line_local: u64,
}

impl PruneCounts {
    pub fn total(&self) -> u64 {
        self.regular_degrees
            .saturating_add(self.forbid_improper_none)
            .saturating_add(self.arc_type_q2)
            .saturating_add(self.line_local)
    }

    pub fn add(&mut self, other: &PruneCounts) {
        self.regular_degrees = self.regular_degrees.saturating_add(other.regular_degrees);
        self.forbid_improper_none = self
            .forbid_improper_none
            .saturating_add(other.forbid_improper_none);
        self.arc_type_q2 = self.arc_type_q2.saturating_add(other.arc_type_q2);
        self.line_local = self.line_local.saturating_add(other.line_local);
    }
}

/// Which family of triangle-free bases the `arc_type_q2` cut is running on;
/// hypercubes admit the stronger per-vertex cap on one-way arcs, folded
/// cubes do not.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Q2BaseKind {
    Cube,
    FoldedCube,
}

/// Work budget.  One unit is charged per classified leaf and per subtree
/// cut, so the budget bounds total search effort, not just solutions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_leaves: u64,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_leaves: 1 << 31,
        }
    }
}

/// Full description of one orientation-search run.
#[derive(Clone)]
pub struct OrientationSearchConfig {
    /// Undirected, connected base graph whose edges are to be oriented.
    pub base: Digraph,
    pub prune: PruneFlags,
    /// Group solutions into isomorphism classes; with `false` every proper
    /// solution becomes its own singleton class.
    pub dedup: bool,
    /// Restrict the first edge to `{Forward, Both}`.  Reversing all arcs
    /// maps the skipped half of the tree onto the kept half, but note that a
    /// solution and its reverse need not be isomorphic in general; callers
    /// who need reversal-distinct classes must leave this off.
    pub symmetry_break: bool,
    pub limits: SearchLimits,
    /// Edge-disjoint clique cover used by the `line_local` cut; required
    /// when that cut is enabled.
    pub lines: Option<Vec<Vec<usize>>>,
    /// Base family for the `arc_type_q2` cut; required when it is enabled.
    pub q2_base: Option<Q2BaseKind>,
}

impl OrientationSearchConfig {
    /// Plain exhaustive configuration: no cuts, dedup on, no symmetry break,
    /// default budget.
    pub fn new(base: Digraph) -> Self {
        OrientationSearchConfig {
            base,
            prune: PruneFlags::default(),
            dedup: true,
            symmetry_break: false,
            limits: SearchLimits::default(),
            lines: None,
            q2_base: None,
        }
    }
}

/// Rejected configurations: structural preconditions of the requested cuts
/// that the base graph (or the supplied metadata) fails to meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SearchConfigError {
    BaseNotUndirected { arc: (usize, usize) },
    BaseNotConnected { from: usize, to: usize },
    ArcTypePruneNeedsKind,
    ArcTypePruneOnTriangle { triangle: (usize, usize, usize) },
    ArcTypePruneNeedsTwoCommon { pair: (usize, usize), common: usize },
    LinePruneNeedsLines,
    LineTooSmall { line: usize, len: usize },
    LineVertexOutOfRange { line: usize, vertex: usize },
    LineNotClique { line: usize, pair: (usize, usize) },
    LinesDontPartitionEdges { edge: (usize, usize), cover: usize },
    PrefixTooLong { len: usize, edges: usize },
}

impl fmt::Display for SearchConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SearchConfigError::BaseNotUndirected { arc: (u, v) } => {
                write!(f, "base graph has an unpaired arc ({u}, {v})")
            }
            SearchConfigError::BaseNotConnected { from, to } => {
                write!(f, "base graph is disconnected: no path from {from} to {to}")
            }
            SearchConfigError::ArcTypePruneNeedsKind => {
                write!(f, "arc-type-q2 pruning needs the base kind (cube or folded cube)")
            }
            SearchConfigError::ArcTypePruneOnTriangle { triangle: (u, v, w) } => {
                write!(
                    f,
                    "arc-type-q2 pruning needs a triangle-free base, found triangle {{{u}, {v}, {w}}}"
                )
            }
            SearchConfigError::ArcTypePruneNeedsTwoCommon { pair: (u, v), common } => {
                write!(
                    f,
                    "arc-type-q2 pruning needs 0 or 2 common neighbours per non-adjacent pair, \
                     vertices {u} and {v} have {common}"
                )
            }
            SearchConfigError::LinePruneNeedsLines => {
                write!(f, "line-local pruning needs line metadata for the base")
            }
            SearchConfigError::LineTooSmall { line, len } => {
                write!(f, "line {line} has {len} vertices, need at least 3")
            }
            SearchConfigError::LineVertexOutOfRange { line, vertex } => {
                write!(f, "line {line} names vertex {vertex} outside the base graph")
            }
            SearchConfigError::LineNotClique { line, pair: (u, v) } => {
                write!(f, "line {line} is not a clique: {u} and {v} are not adjacent")
            }
            SearchConfigError::LinesDontPartitionEdges { edge: (u, v), cover } => {
                write!(f, "edge {{{u}, {v}}} lies in {cover} lines, need exactly 1")
            }
            SearchConfigError::PrefixTooLong { len, edges } => {
                write!(f, "prefix of length {len} exceeds the {edges} base edges")
            }
        }
    }
}

impl core::error::Error for SearchConfigError {}

/// Number of complete assignments of a base with `edge_count` edges, if it
/// fits in a `u128`.
pub fn total_leaves(edge_count: usize) -> Option<u128> {
    u32::try_from(edge_count)
        .ok()
        .and_then(|e| 3u128.checked_pow(e))
}

/// One consistently oriented 4-circuit return for a one-way arc: three edge
/// legs, each tagged with the direction (low-to-high or not) it must carry.
#[derive(Clone, Copy)]
struct C4Path {
    legs: [(u32, bool); 3],
}

/// Validated, precomputed view of a configuration.
struct Ctx<'a> {
    cfg: &'a OrientationSearchConfig,
    n: usize,
    m: usize,
    edges: Vec<(u32, u32)>,
    /// `pow3[k]` = leaves of a subtree with `k` undecided edges, saturating.
    pow3: Vec<u64>,
    line_of: Vec<u32>,
    line_edges: Vec<Vec<u32>>,
    line_verts: Vec<Vec<u32>>,
    /// Per edge, per direction (0 = `Forward`, 1 = `Backward`), the return
    /// circuits available to that one-way arc.
    c4: Vec<[Vec<C4Path>; 2]>,
    /// For each edge, the `(edge, direction)` bundles it appears in as a
    /// leg, so deciding it re-checks exactly the affected one-way arcs.
    c4_touch: Vec<Vec<(u32, u8)>>,
}

impl<'a> Ctx<'a> {
    fn prepare(cfg: &'a OrientationSearchConfig) -> Result<Ctx<'a>, SearchConfigError> {
        let base = &cfg.base;
        let n = base.vertex_count();
        for (u, v) in base.arcs() {
            if !base.has_arc(v, u) {
                return Err(SearchConfigError::BaseNotUndirected { arc: (u, v) });
            }
        }
        if let Some((from, to)) = base.connectivity_witness() {
            return Err(SearchConfigError::BaseNotConnected { from, to });
        }

        let edges: Vec<(u32, u32)> = base
            .arcs()
            .into_iter()
            .filter(|&(u, v)| u < v)
            .map(|(u, v)| (u as u32, v as u32))
            .collect();
        let m = edges.len();
        let pow3 = (0..=m)
            .map(|k| 3u64.checked_pow(k as u32).unwrap_or(u64::MAX))
            .collect();

        let mut ctx = Ctx {
            cfg,
            n,
            m,
            edges,
            pow3,
            line_of: Vec::new(),
            line_edges: Vec::new(),
            line_verts: Vec::new(),
            c4: Vec::new(),
            c4_touch: Vec::new(),
        };
        if cfg.prune.arc_type_q2 {
            ctx.prepare_q2()?;
        }
        if cfg.prune.line_local {
            ctx.prepare_lines()?;
        }
        Ok(ctx)
    }

    fn edge_id(&self, u: usize, v: usize) -> u32 {
        let key = (u.min(v) as u32, u.max(v) as u32);
        self.edges.binary_search(&key).expect("edge of the base graph") as u32
    }

    fn prepare_q2(&mut self) -> Result<(), SearchConfigError> {
        if self.cfg.q2_base.is_none() {
            return Err(SearchConfigError::ArcTypePruneNeedsKind);
        }
        let base = &self.cfg.base;
        let n = self.n;
        let common_of = |u: usize, v: usize| -> Vec<usize> {
            base.out_neighbors(u)
                .into_iter()
                .filter(|&w| base.has_arc(v, w))
                .collect()
        };
        for &(u, v) in &self.edges {
            let (u, v) = (u as usize, v as usize);
            if let Some(&w) = common_of(u, v).first() {
                return Err(SearchConfigError::ArcTypePruneOnTriangle { triangle: (u, v, w) });
            }
        }
        for u in 0..n {
            for v in u + 1..n {
                if base.has_arc(u, v) {
                    continue;
                }
                let common = common_of(u, v).len();
                if common != 0 && common != 2 {
                    return Err(SearchConfigError::ArcTypePruneNeedsTwoCommon {
                        pair: (u, v),
                        common,
                    });
                }
            }
        }

        // Return circuits: a one-way arc u -> v needs some directed path
        // v -> a -> b -> u; in a triangle-free base every such path closes a
        // 4-circuit with the edge {u, v}.
        self.c4 = vec![[Vec::new(), Vec::new()]; self.m];
        self.c4_touch = vec![Vec::new(); self.m];
        for e in 0..self.m {
            let (u, v) = (self.edges[e].0 as usize, self.edges[e].1 as usize);
            for (dir, (tail, head)) in [(0usize, (u, v)), (1, (v, u))] {
                // return path: head -> a -> b -> tail
                for a in self.cfg.base.out_neighbors(head) {
                    if a == tail {
                        continue;
                    }
                    for b in self.cfg.base.out_neighbors(a) {
                        if b == head || !self.cfg.base.has_arc(b, tail) || b == tail {
                            continue;
                        }
                        let legs = [
                            (self.edge_id(head, a), head < a),
                            (self.edge_id(a, b), a < b),
                            (self.edge_id(b, tail), b < tail),
                        ];
                        self.c4[e][dir].push(C4Path { legs });
                        for (f, _) in legs {
                            self.c4_touch[f as usize].push((e as u32, dir as u8));
                        }
                    }
                }
            }
        }
        for touch in &mut self.c4_touch {
            touch.sort_unstable();
            touch.dedup();
        }
        Ok(())
    }

    fn prepare_lines(&mut self) -> Result<(), SearchConfigError> {
        let lines = self
            .cfg
            .lines
            .as_ref()
            .ok_or(SearchConfigError::LinePruneNeedsLines)?;
        let mut cover = vec![0usize; self.m];
        self.line_of = vec![u32::MAX; self.m];
        for (l, verts) in lines.iter().enumerate() {
            if verts.len() < 3 {
                return Err(SearchConfigError::LineTooSmall {
                    line: l,
                    len: verts.len(),
                });
            }
            if let Some(&v) = verts.iter().find(|&&v| v >= self.n) {
                return Err(SearchConfigError::LineVertexOutOfRange { line: l, vertex: v });
            }
            let mut edge_ids = Vec::new();
            for (i, &x) in verts.iter().enumerate() {
                for &y in &verts[i + 1..] {
                    if x == y || !self.cfg.base.has_arc(x, y) {
                        return Err(SearchConfigError::LineNotClique { line: l, pair: (x, y) });
                    }
                    let e = self.edge_id(x, y);
                    cover[e as usize] += 1;
                    self.line_of[e as usize] = l as u32;
                    edge_ids.push(e);
                }
            }
            self.line_edges.push(edge_ids);
            self.line_verts.push(verts.iter().map(|&v| v as u32).collect());
        }
        if let Some(e) = (0..self.m).find(|&e| cover[e] != 1) {
            let (u, v) = self.edges[e];
            return Err(SearchConfigError::LinesDontPartitionEdges {
                edge: (u as usize, v as usize),
                cover: cover[e],
            });
        }
        Ok(())
    }
}

/// Outcome of a pure enumeration run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct EnumerationStats {
    pub leaves_visited: u64,
    pub pruned: PruneCounts,
    pub complete: bool,
}

/// One orientation that survived classification: strongly connected and
/// weakly distance-regular, with at least one one-way arc.
#[derive(Clone, Debug)]
pub struct FoundSolution {
    /// Edge states in the order of the sorted edge list of the base.
    pub states: Vec<EdgeState>,
    pub digraph: Digraph,
    pub tensor: IntersectionTensor,
    pub commutative: bool,
}

/// An isomorphism class of solutions with its first-found (lexicographically
/// least) representative.
#[derive(Clone, Debug)]
pub struct SolutionClass {
    pub representative: FoundSolution,
    pub members: u64,
}

/// Raw counts and solutions from one subtree of the assignment tree.
#[derive(Debug, Default)]
pub struct SubtreeOutcome {
    pub visited: u64,
    pub pruned: PruneCounts,
    pub undirected_solutions: u64,
    pub proper_found: u64,
    pub solutions: Vec<FoundSolution>,
    pub complete: bool,
}

/// Merged, deduplicated, re-verified result of a classification run.
#[derive(Clone, Debug)]
pub struct ClassificationReport {
    /// The oriented edges, sorted; state vectors index into this list.
    pub edges: Vec<(usize, usize)>,
    /// Leaves that reached classification (including failures).
    pub total_visited: u64,
    pub pruned: PruneCounts,
    /// 1 when the all-bidirected assignment was classified and accepted,
    /// else 0; it is never a member of `classes`.
    pub undirected_solutions: u64,
    /// Proper solutions before isomorphism grouping.
    pub proper_found: u64,
    pub classes: Vec<SolutionClass>,
    /// False when the leaf budget ran out or the stop callback fired.
    pub complete: bool,
}

/// Surviving assignment prefixes of a fixed length, for splitting one search
/// across workers.  Cuts that fired at or above the split depth are already
/// accounted in `pruned` and must be merged exactly once.
#[derive(Debug)]
pub struct PrefixSplit {
    pub depth: usize,
    pub prefixes: Vec<Vec<EdgeState>>,
    pub pruned: PruneCounts,
}

enum CutFlag {
    Regular,
    ArcQ2,
    Line,
}

struct ClassifyState {
    scratch: WdrdScratch,
    reach: Vec<u64>,
    frontier: Vec<u64>,
    grow: Vec<u64>,
    undirected: u64,
    proper_found: u64,
    solutions: Vec<FoundSolution>,
}

enum Sink<'s> {
    Prefixes(&'s mut Vec<Vec<EdgeState>>),
    Visit(&'s mut dyn FnMut(&[EdgeState])),
    Classify(Box<ClassifyState>),
}

struct Dfs<'a, 's> {
    ctx: &'a Ctx<'a>,
    limit_depth: usize,
    charge_leaves: bool,
    states: Vec<EdgeState>,
    out: BitMatrix,
    inn: BitMatrix,
    out_dec: Vec<u32>,
    in_dec: Vec<u32>,
    und: Vec<u32>,
    both_cnt: Vec<u32>,
    ow_out: Vec<u32>,
    ow_in: Vec<u32>,
    oneway_total: u32,
    verts_two_both: u32,
    both_edges: usize,
    line_und: Vec<u32>,
    pruned: PruneCounts,
    visited: u64,
    budget: &'s AtomicU64,
    max_units: u64,
    stop: Option<&'s (dyn Fn() -> bool + Sync)>,
    since_poll: u32,
    truncated: bool,
    sink: Sink<'s>,
}

impl<'a, 's> Dfs<'a, 's> {
    fn new(
        ctx: &'a Ctx<'a>,
        budget: &'s AtomicU64,
        stop: Option<&'s (dyn Fn() -> bool + Sync)>,
        sink: Sink<'s>,
    ) -> Self {
        let n = ctx.n;
        let degrees: Vec<u32> = (0..n).map(|v| ctx.cfg.base.out_neighbors(v).len() as u32).collect();
        Dfs {
            ctx,
            limit_depth: ctx.m,
            charge_leaves: true,
            states: vec![EdgeState::Both; ctx.m],
            out: BitMatrix::new(n),
            inn: BitMatrix::new(n),
            out_dec: vec![0; n],
            in_dec: vec![0; n],
            und: degrees,
            both_cnt: vec![0; n],
            ow_out: vec![0; n],
            ow_in: vec![0; n],
            oneway_total: 0,
            verts_two_both: 0,
            both_edges: 0,
            line_und: ctx.line_edges.iter().map(|e| e.len() as u32).collect(),
            pruned: PruneCounts::default(),
            visited: 0,
            budget,
            max_units: ctx.cfg.limits.max_leaves,
            stop,
            // Poll the stop callback on the first unit, then every 1024.
            since_poll: 1023,
            truncated: false,
            sink,
        }
    }

    /// Charge `units` of work against the shared budget; true means the
    /// budget or the stop callback ended the run.
    fn charge(&mut self, units: u64) -> bool {
        if self.truncated {
            return true;
        }
        let before = self.budget.fetch_add(units, Ordering::Relaxed);
        if before.saturating_add(units) > self.max_units {
            self.truncated = true;
            return true;
        }
        self.since_poll += units as u32;
        if self.since_poll >= 1024 {
            self.since_poll = 0;
            if let Some(stop) = self.stop {
                if stop() {
                    self.truncated = true;
                    return true;
                }
            }
        }
        false
    }

    fn assign(&mut self, depth: usize, s: EdgeState) -> Option<CutFlag> {
        let (u, v) = self.ctx.edges[depth];
        let (u, v) = (u as usize, v as usize);
        self.states[depth] = s;
        self.und[u] -= 1;
        self.und[v] -= 1;
        match s {
            EdgeState::Forward => {
                self.out.set(u, v);
                self.inn.set(v, u);
                self.out_dec[u] += 1;
                self.in_dec[v] += 1;
                self.ow_out[u] += 1;
                self.ow_in[v] += 1;
                self.oneway_total += 1;
            }
            EdgeState::Backward => {
                self.out.set(v, u);
                self.inn.set(u, v);
                self.out_dec[v] += 1;
                self.in_dec[u] += 1;
                self.ow_out[v] += 1;
                self.ow_in[u] += 1;
                self.oneway_total += 1;
            }
            EdgeState::Both => {
                self.out.set(u, v);
                self.out.set(v, u);
                self.inn.set(u, v);
                self.inn.set(v, u);
                self.out_dec[u] += 1;
                self.out_dec[v] += 1;
                self.in_dec[u] += 1;
                self.in_dec[v] += 1;
                for x in [u, v] {
                    self.both_cnt[x] += 1;
                    if self.both_cnt[x] == 2 {
                        self.verts_two_both += 1;
                    }
                }
                self.both_edges += 1;
            }
        }
        if self.ctx.cfg.prune.line_local {
            self.line_und[self.ctx.line_of[depth] as usize] -= 1;
        }

        let flags = self.ctx.cfg.prune;
        if flags.regular_degrees && !self.degrees_feasible() {
            return Some(CutFlag::Regular);
        }
        if flags.arc_type_q2 && self.q2_cut(depth, s, u, v) {
            return Some(CutFlag::ArcQ2);
        }
        if flags.line_local {
            let l = self.ctx.line_of[depth] as usize;
            if self.line_und[l] == 0 && !self.line_balanced(l) {
                return Some(CutFlag::Line);
            }
        }
        None
    }

    fn undo(&mut self, depth: usize, s: EdgeState) {
        let (u, v) = self.ctx.edges[depth];
        let (u, v) = (u as usize, v as usize);
        self.und[u] += 1;
        self.und[v] += 1;
        match s {
            EdgeState::Forward => {
                self.out.unset(u, v);
                self.inn.unset(v, u);
                self.out_dec[u] -= 1;
                self.in_dec[v] -= 1;
                self.ow_out[u] -= 1;
                self.ow_in[v] -= 1;
                self.oneway_total -= 1;
            }
            EdgeState::Backward => {
                self.out.unset(v, u);
                self.inn.unset(u, v);
                self.out_dec[v] -= 1;
                self.in_dec[u] -= 1;
                self.ow_out[v] -= 1;
                self.ow_in[u] -= 1;
                self.oneway_total -= 1;
            }
            EdgeState::Both => {
                self.out.unset(u, v);
                self.out.unset(v, u);
                self.inn.unset(u, v);
                self.inn.unset(v, u);
                self.out_dec[u] -= 1;
                self.out_dec[v] -= 1;
                self.in_dec[u] -= 1;
                self.in_dec[v] -= 1;
                for x in [u, v] {
                    if self.both_cnt[x] == 2 {
                        self.verts_two_both -= 1;
                    }
                    self.both_cnt[x] -= 1;
                }
                self.both_edges -= 1;
            }
        }
        if self.ctx.cfg.prune.line_local {
            self.line_und[self.ctx.line_of[depth] as usize] += 1;
        }
    }

    /// Every vertex must still be able to reach out-degree == in-degree
    /// == r for a single global r.
    fn degrees_feasible(&self) -> bool {
        let mut lo = 0u32;
        let mut hi = u32::MAX;
        for v in 0..self.ctx.n {
            lo = lo.max(self.out_dec[v].max(self.in_dec[v]));
            hi = hi.min(self.out_dec[v].min(self.in_dec[v]) + self.und[v]);
            if lo > hi {
                return false;
            }
        }
        true
    }

    fn q2_cut(&self, depth: usize, s: EdgeState, u: usize, v: usize) -> bool {
        // A vertex on two 2-circuits is fine only while the whole
        // orientation can still collapse to the undirected base.
        if self.oneway_total > 0 && self.verts_two_both > 0 {
            return true;
        }
        if s.one_way() {
            if self.ctx.cfg.q2_base == Some(Q2BaseKind::Cube)
                && [u, v]
                    .iter()
                    .any(|&x| self.ow_out[x] >= 2 || self.ow_in[x] >= 2)
            {
                return true;
            }
            let dir = (s == EdgeState::Backward) as usize;
            if !self.has_viable_return(depth, dir, depth) {
                return true;
            }
        }
        // Deciding this edge may have blocked the last return circuit of an
        // earlier one-way arc.
        for &(e, dir) in &self.ctx.c4_touch[depth] {
            let e = e as usize;
            if e >= depth {
                continue;
            }
            let want = if dir == 0 {
                EdgeState::Forward
            } else {
                EdgeState::Backward
            };
            if self.states[e] == want && !self.has_viable_return(e, dir as usize, depth) {
                return true;
            }
        }
        false
    }

    fn has_viable_return(&self, e: usize, dir: usize, depth: usize) -> bool {
        self.ctx.c4[e][dir].iter().any(|path| {
            path.legs.iter().all(|&(f, low_to_high)| {
                let f = f as usize;
                f > depth || {
                    let s = self.states[f];
                    s == EdgeState::Both || (s == EdgeState::Forward) == low_to_high
                }
            })
        })
    }

    /// In- and out-degree inside a fully decided line must be constant over
    /// its vertices.
    fn line_balanced(&self, l: usize) -> bool {
        let mut first = None;
        for &x in &self.ctx.line_verts[l] {
            let mut deg = (0u32, 0u32);
            for &f in &self.ctx.line_edges[l] {
                let (a, b) = self.ctx.edges[f as usize];
                let s = self.states[f as usize];
                let x_is_low = a == x;
                if !x_is_low && b != x {
                    continue;
                }
                let outward = s == EdgeState::Both || (s == EdgeState::Forward) == x_is_low;
                let inward = s == EdgeState::Both || (s == EdgeState::Forward) != x_is_low;
                deg.0 += outward as u32;
                deg.1 += inward as u32;
            }
            match first {
                None => first = Some(deg),
                Some(d) if d != deg => return false,
                Some(_) => {}
            }
        }
        true
    }

    fn descend(&mut self, depth: usize) -> bool {
        if depth == self.limit_depth {
            self.emit(depth);
            return !self.truncated;
        }
        let skip_backward = self.ctx.cfg.symmetry_break && depth == 0;
        for s in [EdgeState::Forward, EdgeState::Backward, EdgeState::Both] {
            if s == EdgeState::Backward && skip_backward {
                continue;
            }
            match self.assign(depth, s) {
                Some(flag) => {
                    let cut = self.ctx.pow3[self.ctx.m - depth - 1];
                    self.credit(flag, cut);
                    self.undo(depth, s);
                    if self.charge(1) {
                        return false;
                    }
                }
                None => {
                    let deeper = self.descend(depth + 1);
                    self.undo(depth, s);
                    if !deeper {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn credit(&mut self, flag: CutFlag, leaves: u64) {
        match flag {
            CutFlag::Regular => {
                self.pruned.regular_degrees = self.pruned.regular_degrees.saturating_add(leaves)
            }
            CutFlag::ArcQ2 => {
                self.pruned.arc_type_q2 = self.pruned.arc_type_q2.saturating_add(leaves)
            }
            CutFlag::Line => self.pruned.line_local = self.pruned.line_local.saturating_add(leaves),
        }
    }

    fn emit(&mut self, depth: usize) {
        if let Sink::Prefixes(out) = &mut self.sink {
            out.push(self.states[..depth].to_vec());
            return;
        }
        if self.charge_leaves && self.charge(1) {
            return;
        }
        let improper = self.both_edges == self.ctx.m;
        if improper && self.ctx.cfg.prune.forbid_improper_none {
            self.pruned.forbid_improper_none += 1;
            return;
        }
        self.visited += 1;
        match &mut self.sink {
            Sink::Prefixes(_) => unreachable!(),
            Sink::Visit(f) => f(&self.states),
            Sink::Classify(cls) => {
                if !strongly_connected(&self.out, &self.inn, self.ctx.n, cls) {
                    return;
                }
                let g = Digraph::from_matrices(self.out.clone(), self.inn.clone());
                let Some(tensor) = cls.scratch.check_fast(&g) else {
                    return;
                };
                if improper {
                    cls.undirected += 1;
                    return;
                }
                cls.proper_found += 1;
                cls.solutions.push(FoundSolution {
                    states: self.states.clone(),
                    digraph: g,
                    commutative: tensor.commutative(),
                    tensor,
                });
            }
        }
    }
}

/// Forward closure from vertex 0 and backward closure into vertex 0 must
/// both cover the whole vertex set.
fn strongly_connected(out: &BitMatrix, inn: &BitMatrix, n: usize, cls: &mut ClassifyState) -> bool {
    for adj in [out, inn] {
        let words = adj.words();
        cls.reach.clear();
        cls.reach.resize(words, 0);
        cls.frontier.clear();
        cls.frontier.resize(words, 0);
        cls.grow.clear();
        cls.grow.resize(words, 0);
        cls.reach[0] = 1;
        cls.frontier[0] = 1;
        loop {
            adj.union_rows(&cls.frontier, &mut cls.grow);
            let mut new_any = false;
            for w in 0..words {
                let fresh = cls.grow[w] & !cls.reach[w];
                cls.frontier[w] = fresh;
                cls.reach[w] |= fresh;
                new_any |= fresh != 0;
            }
            if !new_any {
                break;
            }
        }
        if count_ones(&cls.reach) != n {
            return false;
        }
    }
    true
}

/// Walk every surviving complete assignment, in lexicographic order of the
/// state vectors, and hand each one to `visit`.
///
/// With all cuts disabled and no symmetry break, `visit` runs exactly
/// `3^m` times on a base with `m` edges.
pub fn enumerate_orientations(
    cfg: &OrientationSearchConfig,
    mut visit: impl FnMut(&[EdgeState]),
) -> Result<EnumerationStats, SearchConfigError> {
    let ctx = Ctx::prepare(cfg)?;
    let budget = AtomicU64::new(0);
    let mut dfs = Dfs::new(&ctx, &budget, None, Sink::Visit(&mut visit));
    dfs.descend(0);
    Ok(EnumerationStats {
        leaves_visited: dfs.visited,
        pruned: dfs.pruned,
        complete: !dfs.truncated,
    })
}

/// Enumerate the surviving assignment prefixes of the first
/// `min(depth, m)` edges, applying the configured cuts above the split
/// depth.  Splitting charges no leaf budget; its cut counts merge into the
/// final report exactly once via [`assemble_report`].
pub fn split_prefixes(
    cfg: &OrientationSearchConfig,
    depth: usize,
) -> Result<PrefixSplit, SearchConfigError> {
    let ctx = Ctx::prepare(cfg)?;
    let depth = depth.min(ctx.m);
    let budget = AtomicU64::new(0);
    let mut prefixes = Vec::new();
    let mut dfs = Dfs::new(&ctx, &budget, None, Sink::Prefixes(&mut prefixes));
    dfs.limit_depth = depth;
    dfs.max_units = u64::MAX;
    dfs.descend(0);
    let pruned = dfs.pruned;
    Ok(PrefixSplit {
        depth,
        prefixes,
        pruned,
    })
}

/// Classify every completion of `prefix`, charging leaves and cuts against
/// the shared `budget` (in units of `cfg.limits.max_leaves` total across all
/// subtrees of one run).  The optional `stop` callback is polled
/// periodically; returning true abandons the subtree with `complete =
/// false`.
pub fn classify_subtree(
    cfg: &OrientationSearchConfig,
    prefix: &[EdgeState],
    budget: &AtomicU64,
    stop: Option<&(dyn Fn() -> bool + Sync)>,
) -> Result<SubtreeOutcome, SearchConfigError> {
    let ctx = Ctx::prepare(cfg)?;
    if prefix.len() > ctx.m {
        return Err(SearchConfigError::PrefixTooLong {
            len: prefix.len(),
            edges: ctx.m,
        });
    }
    let cls = ClassifyState {
        scratch: WdrdScratch::new(),
        reach: Vec::new(),
        frontier: Vec::new(),
        grow: Vec::new(),
        undirected: 0,
        proper_found: 0,
        solutions: Vec::new(),
    };
    let mut dfs = Dfs::new(&ctx, budget, stop, Sink::Classify(Box::new(cls)));
    let mut cut_at_prefix = false;
    let mut applied = 0;
    for (i, &s) in prefix.iter().enumerate() {
        if let Some(flag) = dfs.assign(i, s) {
            // The whole subtree under this prefix dies with the cut.
            let leaves = ctx.pow3[ctx.m - prefix.len()];
            dfs.credit(flag, leaves);
            applied = i + 1;
            cut_at_prefix = true;
            break;
        }
        applied = i + 1;
    }
    if !cut_at_prefix {
        dfs.descend(prefix.len());
    }
    for i in (0..applied).rev() {
        dfs.undo(i, prefix[i]);
    }
    let Sink::Classify(cls) = dfs.sink else {
        unreachable!()
    };
    Ok(SubtreeOutcome {
        visited: dfs.visited,
        pruned: dfs.pruned,
        undirected_solutions: cls.undirected,
        proper_found: cls.proper_found,
        solutions: cls.solutions,
        complete: !dfs.truncated,
    })
}

/// Merge subtree outcomes (plus the cut counts from the prefix split that
/// produced them), order the solutions deterministically, group them into
/// isomorphism classes, and re-verify every class representative from
/// scratch.
///
/// Re-verification failures are internal inconsistencies between the search
/// and the checkers and abort loudly rather than degrade the report.
pub fn assemble_report(
    cfg: &OrientationSearchConfig,
    split_pruned: PruneCounts,
    parts: Vec<SubtreeOutcome>,
) -> Result<ClassificationReport, SearchConfigError> {
    let ctx = Ctx::prepare(cfg)?;
    let mut pruned = split_pruned;
    let mut total_visited = 0u64;
    let mut undirected = 0u64;
    let mut proper_found = 0u64;
    let mut complete = true;
    let mut solutions = Vec::new();
    for part in parts {
        total_visited += part.visited;
        pruned.add(&part.pruned);
        undirected += part.undirected_solutions;
        proper_found += part.proper_found;
        complete &= part.complete;
        solutions.extend(part.solutions);
    }
    // Deterministic merge independent of how the work was split.
    solutions.sort_by(|a, b| a.states.cmp(&b.states));

    let mut classes: Vec<SolutionClass> = Vec::new();
    for sol in solutions {
        if cfg.dedup {
            if let Some(class) = classes
                .iter_mut()
                .find(|c| are_isomorphic(&c.representative.digraph, &sol.digraph).is_some())
            {
                class.members += 1;
                continue;
            }
        }
        verify_solution(&cfg.base, &sol);
        classes.push(SolutionClass {
            representative: sol,
            members: 1,
        });
    }

    Ok(ClassificationReport {
        edges: ctx
            .edges
            .iter()
            .map(|&(u, v)| (u as usize, v as usize))
            .collect(),
        total_visited,
        pruned,
        undirected_solutions: undirected,
        proper_found,
        classes,
        complete,
    })
}

fn verify_solution(base: &Digraph, sol: &FoundSolution) {
    assert_eq!(
        sol.digraph.underlying_graph(),
        *base,
        "solution leaves the base graph"
    );
    let tensor = wdrd_check(&sol.digraph).expect("solution lost regularity on re-check");
    assert_eq!(tensor, sol.tensor, "re-checked tensor disagrees");
    assert_eq!(
        tensor.commutative(),
        sol.commutative,
        "re-checked commutativity disagrees"
    );
    let table = sol
        .digraph
        .two_way_distance()
        .expect("solution lost strong connectivity on re-check");
    let part = relation_partition(&table);
    assert!(
        scheme_axioms_check(&part).all_pass(),
        "solution relations fail the scheme axioms"
    );
}

/// Run one full classification: exhaust the assignment tree under the
/// configured cuts and budget, then dedup and re-verify.
pub fn classify_orientations(
    cfg: &OrientationSearchConfig,
) -> Result<ClassificationReport, SearchConfigError> {
    classify_orientations_with(cfg, None)
}

/// [`classify_orientations`] with an external stop callback (polled about
/// every 1024 work units); a true return truncates the run.
pub fn classify_orientations_with(
    cfg: &OrientationSearchConfig,
    stop: Option<&(dyn Fn() -> bool + Sync)>,
) -> Result<ClassificationReport, SearchConfigError> {
    let budget = AtomicU64::new(0);
    let part = classify_subtree(cfg, &[], &budget, stop)?;
    assemble_report(cfg, PruneCounts::default(), vec![part])
}
