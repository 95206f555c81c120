//! The regularity engine: relation partitions from two-way distances, the
//! weak distance-regularity decision procedure with its full intersection
//! tensor, commutativity, association-scheme axioms, and distance-regular
//! graph recognition.
//!
//! A strongly connected digraph is *weakly distance-regular* when, for every
//! triple of two-way distance labels `(h̃, ĩ, j̃)` and every ordered pair
//! `(x, y)` at two-way distance `h̃`, the number of vertices `z` with
//! `∂̃(x,z) = ĩ` and `∂̃(z,y) = j̃` does not depend on the pair. The counts
//! are the intersection numbers `p^h̃_{ĩ,j̃}`; together with the valencies
//! they form the [`IntersectionTensor`].
//!
//! [`scheme_axioms_check`] re-verifies the association-scheme axioms on a
//! relation partition through a separate counting path (bitset-intersection
//! popcounts instead of per-`z` label scans) so the two procedures can
//! cross-validate each other.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::bitset::{self, BitMatrix};
use crate::digraph::{bfs, Digraph, TwoWayDistanceTable, UNREACHABLE};

/// A two-way distance `(∂(x,y), ∂(y,x))`.
pub type Label = (u32, u32);

/// Ordered pairs of a finite set grouped by label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelationPartition {
    n: usize,
    labels: Vec<Label>,
    rel: Vec<u16>,
    classes: Vec<Vec<(usize, usize)>>,
}

impl RelationPartition {
    /// Groups all ordered pairs by their two-way distance.
    pub fn from_table(t: &TwoWayDistanceTable) -> Self {
        Self::from_fn(t.n(), |x, y| t.get(x, y))
    }

    /// Builds a partition from an arbitrary labeling; useful for testing the
    /// axiom checker on labelings that are not two-way distances.
    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Label) -> Self {
        assert!(n > 0, "partition needs at least one vertex");
        let mut raw = Vec::with_capacity(n * n);
        for x in 0..n {
            for y in 0..n {
                raw.push(f(x, y));
            }
        }
        let mut labels = raw.clone();
        labels.sort_unstable();
        labels.dedup();
        assert!(labels.len() <= u16::MAX as usize, "too many relation labels");
        let rel: Vec<u16> = raw
            .iter()
            .map(|l| labels.binary_search(l).unwrap() as u16)
            .collect();
        let mut classes = vec![Vec::new(); labels.len()];
        for x in 0..n {
            for y in 0..n {
                classes[rel[x * n + y] as usize].push((x, y));
            }
        }
        RelationPartition {
            n,
            labels,
            rel,
            classes,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted list of labels that occur.
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    #[inline]
    pub fn label_id(&self, x: usize, y: usize) -> usize {
        self.rel[x * self.n + y] as usize
    }

    #[inline]
    pub fn label_of(&self, x: usize, y: usize) -> Label {
        self.labels[self.label_id(x, y)]
    }

    /// Pairs of class `id`, sorted by `(x, y)`.
    pub fn class_pairs(&self, id: usize) -> &[(usize, usize)] {
        &self.classes[id]
    }
}

/// Groups the ordered vertex pairs of a strongly connected digraph by
/// two-way distance.
pub fn relation_partition(t: &TwoWayDistanceTable) -> RelationPartition {
    RelationPartition::from_table(t)
}

/// Which of the three neighbor counts of distance-regularity failed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NeighborCountKind {
    /// Neighbors one step closer to the source (`c_i`).
    Closer,
    /// Neighbors at the same distance (`a_i`).
    Same,
    /// Neighbors one step farther (`b_i`).
    Farther,
}

/// A concrete, re-countable violation of a regularity property.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RegularityWitness {
    /// No directed path from `from` to `to`.
    NotStronglyConnected { from: usize, to: usize },
    /// Two pairs with the same label `h` disagree on the number of `z` with
    /// `∂̃(x,z) = i` and `∂̃(z,y) = j`.
    NonConstantIntersection {
        h: Label,
        i: Label,
        j: Label,
        pair_a: (usize, usize),
        count_a: u64,
        pair_b: (usize, usize),
        count_b: u64,
    },
    /// `p^h_{i,j} ≠ p^h_{j,i}`.
    NonCommutative {
        h: Label,
        i: Label,
        j: Label,
        p_ij: u64,
        p_ji: u64,
    },
    /// An arc without its reverse, in a context that requires an undirected
    /// graph.
    NotSymmetric { arc: (usize, usize) },
    /// Two pairs at the same graph distance disagree on a `b_i`/`c_i`/`a_i`
    /// neighbor count.
    NonConstantNeighborCount {
        distance: u32,
        kind: NeighborCountKind,
        pair_a: (usize, usize),
        count_a: u64,
        pair_b: (usize, usize),
        count_b: u64,
    },
}

impl fmt::Display for RegularityWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegularityWitness::NotStronglyConnected { from, to } => {
                write!(f, "no directed path from {from} to {to}")
            }
            RegularityWitness::NonConstantIntersection {
                h,
                i,
                j,
                pair_a,
                count_a,
                pair_b,
                count_b,
            } => write!(
                f,
                "intersection number p^{h:?}_{{{i:?},{j:?}}} is not constant: \
                 pair {pair_a:?} gives {count_a}, pair {pair_b:?} gives {count_b}"
            ),
            RegularityWitness::NonCommutative { h, i, j, p_ij, p_ji } => write!(
                f,
                "p^{h:?}_{{{i:?},{j:?}}} = {p_ij} but p^{h:?}_{{{j:?},{i:?}}} = {p_ji}"
            ),
            RegularityWitness::NotSymmetric { arc: (u, v) } => {
                write!(f, "arc ({u}, {v}) has no reverse")
            }
            RegularityWitness::NonConstantNeighborCount {
                distance,
                kind,
                pair_a,
                count_a,
                pair_b,
                count_b,
            } => {
                let name = match kind {
                    NeighborCountKind::Closer => "c",
                    NeighborCountKind::Same => "a",
                    NeighborCountKind::Farther => "b",
                };
                write!(
                    f,
                    "{name}_{distance} is not constant: pair {pair_a:?} gives {count_a}, \
                     pair {pair_b:?} gives {count_b}"
                )
            }
        }
    }
}

impl core::error::Error for RegularityWitness {}

/// The intersection numbers of a weakly distance-regular digraph: labels,
/// the transpose involution on labels, valencies, and the full cube of
/// `p^h_{i,j}` values (indexed by positions in `labels`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionTensor {
    n: usize,
    labels: Vec<Label>,
    star: Vec<usize>,
    k: Vec<u64>,
    p: Vec<u64>,
}

impl IntersectionTensor {
    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    /// Sorted labels; position in this slice is the id used by [`p`](Self::p).
    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    #[inline]
    pub fn num_labels(&self) -> usize {
        self.labels.len()
    }

    pub fn label_index(&self, l: Label) -> Option<usize> {
        self.labels.binary_search(&l).ok()
    }

    /// Id of the transpose label: `(a,b)* = (b,a)`.
    #[inline]
    pub fn star(&self, i: usize) -> usize {
        self.star[i]
    }

    /// Valency `k_i`: the constant size of `{y : ∂̃(x,y) = labels[i]}`.
    #[inline]
    pub fn valency(&self, i: usize) -> u64 {
        self.k[i]
    }

    /// `p^h_{i,j}` by label ids.
    #[inline]
    pub fn p(&self, h: usize, i: usize, j: usize) -> u64 {
        let l = self.labels.len();
        self.p[(h * l + i) * l + j]
    }

    /// `p^h_{i,j}` by labels; `None` when a label does not occur.
    pub fn p_by_label(&self, h: Label, i: Label, j: Label) -> Option<u64> {
        Some(self.p(
            self.label_index(h)?,
            self.label_index(i)?,
            self.label_index(j)?,
        ))
    }

    /// True when `p^h_{i,j} = p^h_{j,i}` for all triples.
    pub fn commutative(&self) -> bool {
        is_commutative(self).is_ok()
    }

    #[cfg(test)]
    pub(crate) fn p_mut(&mut self, h: usize, i: usize, j: usize) -> &mut u64 {
        let l = self.labels.len();
        &mut self.p[(h * l + i) * l + j]
    }
}

/// Reusable buffers for repeated regularity checks over digraphs of one
/// size; the orientation search calls this at every surviving leaf.
pub(crate) struct WdrdScratch {
    n: usize,
    dist: Vec<u32>,
    cur: Vec<u64>,
    nxt: Vec<u64>,
    seen: Vec<u64>,
    packed: Vec<u64>,
    rel: Vec<u16>,
    ms: Vec<u32>,
    ref_ms: Vec<Vec<u32>>,
    ref_pair: Vec<(usize, usize)>,
    violation: Vec<Option<RegularityWitness>>,
}

impl WdrdScratch {
    pub(crate) fn new() -> Self {
        WdrdScratch {
            n: 0,
            dist: Vec::new(),
            cur: Vec::new(),
            nxt: Vec::new(),
            seen: Vec::new(),
            packed: Vec::new(),
            rel: Vec::new(),
            ms: Vec::new(),
            ref_ms: Vec::new(),
            ref_pair: Vec::new(),
            violation: Vec::new(),
        }
    }

    fn reserve(&mut self, n: usize, words: usize) {
        self.n = n;
        self.dist.clear();
        self.dist.resize(n * n, 0);
        self.cur.clear();
        self.cur.resize(words, 0);
        self.nxt.clear();
        self.nxt.resize(words, 0);
        self.seen.clear();
        self.seen.resize(words, 0);
        self.packed.clear();
        self.rel.clear();
        self.ms.clear();
    }

    /// Fast path: decides weak distance-regularity, returning the tensor on
    /// success and bailing out at the first violation (which violation is
    /// hit first is unspecified here; use [`wdrd_check`] for the
    /// deterministic witness).
    pub(crate) fn check_fast(&mut self, g: &Digraph) -> Option<IntersectionTensor> {
        match self.run(g, true) {
            Ok(t) => Some(t),
            Err(_) => None,
        }
    }

    /// Full scan with the deterministic witness: smallest violating label
    /// `h̃` first, then earliest pair in `(x, y)` order, then the smallest
    /// differing `(ĩ, j̃)`.
    pub(crate) fn check_witness(
        &mut self,
        g: &Digraph,
    ) -> Result<IntersectionTensor, RegularityWitness> {
        self.run(g, false)
    }

    fn run(&mut self, g: &Digraph, fail_fast: bool) -> Result<IntersectionTensor, RegularityWitness> {
        let n = g.vertex_count();
        let words = g.out_matrix().words();
        self.reserve(n, words);

        for x in 0..n {
            let row = &mut self.dist[x * n..(x + 1) * n];
            bfs(
                g.out_matrix(),
                x,
                row,
                &mut self.cur,
                &mut self.nxt,
                &mut self.seen,
            );
            if let Some(y) = row.iter().position(|&d| d == UNREACHABLE) {
                return Err(RegularityWitness::NotStronglyConnected { from: x, to: y });
            }
        }

        // distinct two-way labels, packed as (forward << 32) | backward
        let dist = &self.dist;
        let pack = |x: usize, y: usize| ((dist[x * n + y] as u64) << 32) | dist[y * n + x] as u64;
        self.packed.extend((0..n * n).map(|i| pack(i / n, i % n)));
        self.packed.sort_unstable();
        self.packed.dedup();
        let nl = self.packed.len();
        debug_assert!(nl <= u16::MAX as usize);
        self.rel.reserve(n * n);
        for x in 0..n {
            for y in 0..n {
                let id = self.packed.binary_search(&pack(x, y)).unwrap() as u16;
                self.rel.push(id);
            }
        }

        self.ref_ms.iter_mut().for_each(Vec::clear);
        self.ref_ms.resize(nl, Vec::new());
        self.ref_pair.clear();
        self.ref_pair.resize(nl, (usize::MAX, usize::MAX));
        self.violation.clear();
        self.violation.resize(nl, None);

        for x in 0..n {
            for y in 0..n {
                let h = self.rel[x * n + y] as usize;
                if !fail_fast && self.violation[h].is_some() {
                    continue;
                }
                // multiset over z of the label pair (∂̃(x,z), ∂̃(z,y))
                self.ms.clear();
                for z in 0..n {
                    let i = self.rel[x * n + z] as u32;
                    let j = self.rel[z * n + y] as u32;
                    self.ms.push((i << 16) | j);
                }
                self.ms.sort_unstable();
                if self.ref_pair[h].0 == usize::MAX {
                    self.ref_pair[h] = (x, y);
                    core::mem::swap(&mut self.ref_ms[h], &mut self.ms);
                    continue;
                }
                if self.ms == self.ref_ms[h] {
                    continue;
                }
                let witness = first_multiset_difference(
                    &self.ref_ms[h],
                    &self.ms,
                    h as u16,
                    &self.packed,
                    self.ref_pair[h],
                    (x, y),
                );
                if fail_fast {
                    return Err(witness);
                }
                self.violation[h] = Some(witness);
            }
        }
        if let Some(w) = self.violation.iter().flatten().next() {
            return Err(w.clone());
        }

        // assemble the tensor from the per-label reference multisets
        let unpack = |id: usize| {
            let l = self.packed[id];
            ((l >> 32) as u32, l as u32)
        };
        let labels: Vec<Label> = (0..nl).map(unpack).collect();
        let star: Vec<usize> = labels
            .iter()
            .map(|&(a, b)| labels.binary_search(&(b, a)).expect("transpose label occurs"))
            .collect();
        let mut class_size = vec![0u64; nl];
        for &id in &self.rel {
            class_size[id as usize] += 1;
        }
        let k: Vec<u64> = class_size
            .iter()
            .map(|&s| {
                debug_assert_eq!(s % n as u64, 0);
                s / n as u64
            })
            .collect();
        let mut p = vec![0u64; nl * nl * nl];
        for h in 0..nl {
            for &entry in &self.ref_ms[h] {
                let i = (entry >> 16) as usize;
                let j = (entry & 0xffff) as usize;
                p[(h * nl + i) * nl + j] += 1;
            }
        }
        Ok(IntersectionTensor {
            n,
            labels,
            star,
            k,
            p,
        })
    }
}

/// Locates the smallest `(i, j)` on which two sorted multisets disagree and
/// builds the corresponding witness.
fn first_multiset_difference(
    a: &[u32],
    b: &[u32],
    h_id: u16,
    packed: &[u64],
    pair_a: (usize, usize),
    pair_b: (usize, usize),
) -> RegularityWitness {
    debug_assert_eq!(a.len(), b.len());
    let (mut ia, mut ib) = (0, 0);
    let entry = loop {
        match (a.get(ia), b.get(ib)) {
            (Some(&ea), Some(&eb)) if ea == eb => {
                ia += 1;
                ib += 1;
            }
            (Some(&ea), Some(&eb)) => break ea.min(eb),
            (Some(&ea), None) => break ea,
            (None, Some(&eb)) => break eb,
            (None, None) => unreachable!("multisets differ"),
        }
    };
    let count = |ms: &[u32]| {
        let lo = ms.partition_point(|&e| e < entry);
        let hi = ms.partition_point(|&e| e <= entry);
        (hi - lo) as u64
    };
    let label = |id: usize| {
        let l = packed[id];
        ((l >> 32) as u32, l as u32)
    };
    RegularityWitness::NonConstantIntersection {
        h: label(h_id as usize),
        i: label((entry >> 16) as usize),
        j: label((entry & 0xffff) as usize),
        pair_a,
        count_a: count(a),
        pair_b,
        count_b: count(b),
    }
}

/// Decides weak distance-regularity. On success returns the full
/// intersection tensor; on failure returns a deterministic witness (the
/// smallest violating label, then the earliest pair, then the smallest
/// differing label pair).
pub fn wdrd_check(g: &Digraph) -> Result<IntersectionTensor, RegularityWitness> {
    WdrdScratch::new().check_witness(g)
}

/// Checks `p^h_{i,j} = p^h_{j,i}` for all triples; the witness is the
/// lexicographically first violation.
pub fn is_commutative(t: &IntersectionTensor) -> Result<(), RegularityWitness> {
    let l = t.num_labels();
    for h in 0..l {
        for i in 0..l {
            for j in 0..l {
                let (p_ij, p_ji) = (t.p(h, i, j), t.p(h, j, i));
                if p_ij != p_ji {
                    return Err(RegularityWitness::NonCommutative {
                        h: t.labels[h],
                        i: t.labels[i],
                        j: t.labels[j],
                        p_ij,
                        p_ji,
                    });
                }
            }
        }
    }
    Ok(())
}

/// A failed association-scheme axiom, with enough context to re-check it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum AxiomFailure {
    /// A diagonal pair is labeled differently from `(0, 0)`'s class.
    DiagonalSplit { pair: (usize, usize) },
    /// An off-diagonal pair shares the diagonal's label.
    DiagonalPolluted { pair: (usize, usize) },
    /// A label with no pairs.
    EmptyClass { label: Label },
    /// Transposing pairs of class `label` reaches two different classes.
    TransposeConflict {
        label: Label,
        first: Label,
        second: Label,
        pair: (usize, usize),
    },
    /// `|R_i(x) ∩ R_{j*}(y)|` differs between two pairs of the same class.
    NonConstantCount {
        l: Label,
        i: Label,
        j: Label,
        pair_a: (usize, usize),
        count_a: u64,
        pair_b: (usize, usize),
        count_b: u64,
    },
}

/// Per-axiom outcome of [`scheme_axioms_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SchemeAxiomsReport {
    /// Axiom (i): some class is exactly the diagonal.
    pub diagonal: Result<(), AxiomFailure>,
    /// Axiom (ii): every listed label names a nonempty class (coverage and
    /// disjointness are structural for a total labeling).
    pub partition: Result<(), AxiomFailure>,
    /// Axiom (iii): transposing all pairs of a class lands in one class;
    /// `Ok` carries the involution as a map of label ids.
    pub transpose: Result<Vec<usize>, AxiomFailure>,
    /// Axiom (iv): `|R_i(x) ∩ R_{j*}(y)|` constant over `(x,y) ∈ R_l`.
    pub constancy: Result<(), AxiomFailure>,
    /// The axiom-(iv) constants, indexed `(l·L + i)·L + j`, when all axioms
    /// pass and the label count is modest.
    pub constants: Option<Vec<u64>>,
}

impl SchemeAxiomsReport {
    pub fn all_pass(&self) -> bool {
        self.diagonal.is_ok()
            && self.partition.is_ok()
            && self.transpose.is_ok()
            && self.constancy.is_ok()
    }
}

/// Independently verifies the association-scheme axioms on a relation
/// partition. Counting goes through bitset rows and popcounts — a separate
/// code path from [`wdrd_check`] — so the two can cross-validate.
pub fn scheme_axioms_check(part: &RelationPartition) -> SchemeAxiomsReport {
    let n = part.n();
    let nl = part.labels.len();

    let diag_id = part.label_id(0, 0);
    let mut diagonal = Ok(());
    'diag: {
        for x in 0..n {
            if part.label_id(x, x) != diag_id {
                diagonal = Err(AxiomFailure::DiagonalSplit { pair: (x, x) });
                break 'diag;
            }
        }
        for &(x, y) in part.class_pairs(diag_id) {
            if x != y {
                diagonal = Err(AxiomFailure::DiagonalPolluted { pair: (x, y) });
                break 'diag;
            }
        }
    }

    let partition = match (0..nl).find(|&id| part.classes[id].is_empty()) {
        Some(id) => Err(AxiomFailure::EmptyClass {
            label: part.labels[id],
        }),
        None => Ok(()),
    };

    let mut sigma = vec![usize::MAX; nl];
    let mut transpose = Ok(());
    'transpose: for id in 0..nl {
        for &(x, y) in part.class_pairs(id) {
            let t = part.label_id(y, x);
            if sigma[id] == usize::MAX {
                sigma[id] = t;
            } else if sigma[id] != t {
                transpose = Err(AxiomFailure::TransposeConflict {
                    label: part.labels[id],
                    first: part.labels[sigma[id]],
                    second: part.labels[t],
                    pair: (x, y),
                });
                break 'transpose;
            }
        }
    }
    let transpose = transpose.map(|()| sigma);

    // Axiom (iv) via bitset popcounts: R_i(x) as row bitsets, and column
    // bitsets C_j(y) = {z : (z, y) ∈ R_j}, so no transpose map is needed.
    let mut rows = vec![BitMatrix::new(n); nl];
    let mut cols = vec![BitMatrix::new(n); nl];
    for x in 0..n {
        for y in 0..n {
            let id = part.label_id(x, y);
            rows[id].set(x, y);
            cols[id].set(y, x);
        }
    }
    let mut inter = vec![0u64; rows[0].words()];
    let mut constancy = Ok(());
    let small = nl <= 128;
    let mut constants = if small { vec![0u64; nl * nl * nl] } else { Vec::new() };
    'constancy: for l in 0..nl {
        for i in 0..nl {
            for j in 0..nl {
                let mut reference: Option<((usize, usize), u64)> = None;
                for &(x, y) in part.class_pairs(l) {
                    for ((w, &r), &c) in inter
                        .iter_mut()
                        .zip(rows[i].row(x))
                        .zip(cols[j].row(y))
                    {
                        *w = r & c;
                    }
                    let count = bitset::count_ones(&inter) as u64;
                    match reference {
                        None => {
                            reference = Some(((x, y), count));
                            if small {
                                constants[(l * nl + i) * nl + j] = count;
                            }
                        }
                        Some((pair_a, count_a)) if count_a != count => {
                            constancy = Err(AxiomFailure::NonConstantCount {
                                l: part.labels[l],
                                i: part.labels[i],
                                j: part.labels[j],
                                pair_a,
                                count_a,
                                pair_b: (x, y),
                                count_b: count,
                            });
                            break 'constancy;
                        }
                        Some(_) => {}
                    }
                }
            }
        }
    }

    let all_ok =
        diagonal.is_ok() && partition.is_ok() && transpose.is_ok() && constancy.is_ok();
    SchemeAxiomsReport {
        diagonal,
        partition,
        transpose,
        constancy,
        constants: (small && all_ok).then_some(constants),
    }
}

/// The parameters of a distance-regular graph: `b_0..b_{d-1}`, `c_1..c_d`,
/// and the derived `a_0..a_d` with `a_i = b_0 - c_i - b_i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntersectionArray {
    pub b: Vec<u64>,
    pub c: Vec<u64>,
    pub a: Vec<u64>,
}

impl IntersectionArray {
    pub fn diameter(&self) -> usize {
        self.b.len()
    }

    pub fn valency(&self) -> u64 {
        self.b[0]
    }

    pub fn c2(&self) -> Option<u64> {
        self.c.get(1).copied()
    }

    pub fn a1(&self) -> Option<u64> {
        self.a.get(1).copied()
    }
}

impl fmt::Display for IntersectionArray {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{b: {:?}; c: {:?}; a: {:?}}}", self.b, self.c, self.a)
    }
}

/// Decides distance-regularity of an undirected graph by direct counting:
/// for every distance `i` and every pair at distance `i`, the neighbors of
/// the far end split into `c_i` closer, `a_i` equidistant, and `b_i`
/// farther, and each count must be pair-independent. Directed inputs are
/// refused with a `NotSymmetric` witness.
pub fn drg_check(g: &Digraph) -> Result<IntersectionArray, RegularityWitness> {
    let n = g.vertex_count();
    for (u, v) in g.arcs() {
        if !g.has_arc(v, u) {
            return Err(RegularityWitness::NotSymmetric { arc: (u, v) });
        }
    }
    let table = match g.two_way_distance() {
        Ok(t) => t,
        Err(_) => {
            let (from, to) = g.connectivity_witness().expect("disconnected");
            return Err(RegularityWitness::NotStronglyConnected { from, to });
        }
    };
    let d = table.diameter() as usize;

    // reference counts and pairs per distance
    let mut refs: Vec<Option<((usize, usize), [u64; 3])>> = vec![None; d + 1];
    for x in 0..n {
        for y in 0..n {
            let i = table.forward(x, y);
            let mut counts = [0u64; 3]; // closer, same, farther
            bitset::for_each_bit(g.out_matrix().row(y), |z| {
                let dz = table.forward(x, z);
                if dz + 1 == i {
                    counts[0] += 1;
                } else if dz == i {
                    counts[1] += 1;
                } else {
                    debug_assert_eq!(dz, i + 1);
                    counts[2] += 1;
                }
            });
            match &refs[i as usize] {
                None => refs[i as usize] = Some(((x, y), counts)),
                Some((pair_a, ref_counts)) => {
                    for (idx, kind) in [
                        (0, NeighborCountKind::Closer),
                        (1, NeighborCountKind::Same),
                        (2, NeighborCountKind::Farther),
                    ] {
                        if ref_counts[idx] != counts[idx] {
                            return Err(RegularityWitness::NonConstantNeighborCount {
                                distance: i,
                                kind,
                                pair_a: *pair_a,
                                count_a: ref_counts[idx],
                                pair_b: (x, y),
                                count_b: counts[idx],
                            });
                        }
                    }
                }
            }
        }
    }

    let at = |i: usize| refs[i].as_ref().expect("every distance up to d occurs").1;
    let b: Vec<u64> = (0..d).map(|i| at(i)[2]).collect();
    let c: Vec<u64> = (1..=d).map(|i| at(i)[0]).collect();
    let a: Vec<u64> = (0..=d).map(|i| at(i)[1]).collect();
    let b0 = b[0];
    for i in 0..=d {
        let bi = if i < d { b[i] } else { 0 };
        let ci = if i > 0 { c[i - 1] } else { 0 };
        assert_eq!(b0, bi + ci + a[i], "degree must split at distance {i}");
    }
    assert_eq!(a[0], 0);
    if d >= 1 {
        assert_eq!(c[0], 1);
    }
    Ok(IntersectionArray { b, c, a })
}
