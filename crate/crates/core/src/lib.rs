//! Weakly distance-regular digraphs: constructions, regularity checks, and
//! exhaustive orientation search.
//!
//! A digraph here is finite, loopless, and stored densely. The central notion
//! is the *two-way distance* `(∂(x,y), ∂(y,x))` of an ordered vertex pair; a
//! strongly connected digraph is weakly distance-regular when the number of
//! `z` with prescribed two-way distances to both ends of a pair depends only
//! on the pair's own two-way distance. The crate provides:
//!
//! - [`digraph`]: the base type, BFS distances, girth, and small predicates;
//! - [`iso`]: digraph isomorphism by invariant-guided backtracking;
//! - [`families`]: Cayley digraphs and the named graph families (complete,
//!   Hamming, folded cube, Shrikhande, Doob, Paley);
//! - [`schemes`]: relation partitions, intersection tensors, association
//!   scheme axioms, and distance-regularity of undirected graphs;
//! - [`lemmas`]: validators for structural facts about semicomplete and
//!   small-`c2` cases;
//! - [`search`]: exhaustive enumeration of the `3^|E|` orientations of an
//!   undirected base graph with sound pruning and isomorphism deduplication;
//! - [`verify`]: drivers that compare search results against expected
//!   solution sets and check the product construction.
//!
//! The crate is `no_std` (with `alloc`); anything touching files, clocks, or
//! threads lives in the companion CLI crate. Long-running searches accept an
//! abstract stop callback so callers can impose wall-clock budgets.

#![cfg_attr(not(test), no_std)]

extern crate alloc;

mod bitset;
pub mod digraph;
pub mod families;
pub mod iso;
pub mod lemmas;
pub mod schemes;
pub mod search;
pub mod verify;

pub use digraph::{Digraph, GraphError, TwoWayDistanceTable};
pub use iso::are_isomorphic;
pub use lemmas::{
    semicomplete_wdrd_profile, verify_structural_lemmas, LemmaStatus, ProfileError,
    SemicompleteProfile, StructuralLemmaReport,
};
pub use schemes::{
    drg_check, is_commutative, relation_partition, scheme_axioms_check, wdrd_check,
    IntersectionArray, IntersectionTensor, Label, RegularityWitness, RelationPartition,
};
pub use search::{
    assemble_report, classify_orientations, classify_orientations_with, classify_subtree,
    enumerate_orientations, split_prefixes, total_leaves, ClassificationReport, EdgeState,
    EnumerationStats, FoundSolution, OrientationSearchConfig, PrefixSplit, PruneCounts,
    PruneFlags, Q2BaseKind, SearchConfigError, SearchLimits, SolutionClass, SubtreeOutcome,
};
pub use verify::{
    verify_product_proposition, verify_theorem, verify_theorem_with, BaseFamily,
    NecessityComparison, ProductPropositionError, ProductVerdict, SufficiencyCheck,
    TheoremVerdict, VerdictMode, VerifyError,
};
