//! Classification verdicts: exhaustive orientation searches over named base
//! families compared against expected solution lists, plus the closure
//! property of Cartesian products of semicomplete girth-2 factors.
//!
//! [`verify_theorem`] answers, for one base family instance, the question
//! "are the proper commutative weakly distance-regular orientations of this
//! graph exactly the expected ones?" in two stages:
//!
//! - **sufficiency** — every expected digraph really is a commutative weakly
//!   distance-regular digraph whose underlying graph is the base;
//! - **necessity** — when the full `3^|E|` orientation space fits the leaf
//!   budget, [`classify_orientations`] enumerates it and the proper
//!   commutative solution classes are matched one-to-one against the expected
//!   classes (deduplicated by isomorphism).
//!
//! When the space exceeds the budget the verdict is explicitly downgraded to
//! [`VerdictMode::SufficiencyOnly`] rather than truncating silently; when a
//! feasible search is stopped early by the caller's budget the verdict
//! reports truncation instead of comparing partial results.
//!
//! [`verify_product_proposition`] checks the product construction: two
//! semicomplete weakly distance-regular factors of girth 2 with equal
//! intersection tensors yield a weakly distance-regular Cartesian product,
//! and two-way distances in the product are the componentwise sums of the
//! factor distances.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::digraph::Digraph;
use crate::families::{
    cartesian_product, cayley, doob, folded_cube, hamming, hamming_lines, paley_tournament,
    CayleySpec, ConstructError,
};
use crate::iso::are_isomorphic;
use crate::schemes::{wdrd_check, IntersectionTensor};
use crate::search::{
    classify_orientations_with, total_leaves, ClassificationReport, OrientationSearchConfig,
    Q2BaseKind, SearchConfigError, SearchLimits,
};

/// Base-graph families the classification statements quantify over.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BaseFamily {
    /// Hamming graph `H(d, q)`.
    Hamming { d: usize, q: usize },
    /// Folded `n`-cube (`2^(n-1)` vertices, `n >= 3`).
    FoldedCube { n: usize },
    /// Doob graph with `d1` Shrikhande factors and `d2` factors `K_4`.
    Doob { d1: usize, d2: usize },
}

impl BaseFamily {
    /// Builds the base graph, validating parameters.
    pub fn build(&self) -> Result<Digraph, ConstructError> {
        match *self {
            BaseFamily::Hamming { d, q } => {
                if d < 1 || q < 2 {
                    return Err(ConstructError::HammingParams { d, q });
                }
                Ok(hamming(d, q))
            }
            BaseFamily::FoldedCube { n } => folded_cube(n),
            BaseFamily::Doob { d1, d2 } => doob(d1, d2),
        }
    }

    /// Search configuration with the pruning rules whose hypotheses the
    /// family satisfies: degree feasibility everywhere; the arc-type rules on
    /// triangle-free bases with `c_2 = 2` (cubes, folded cubes with
    /// `n >= 5`); the line-degree rule on Hamming graphs with `q > 2`, which
    /// carry axis-clique metadata.
    pub fn search_config(&self, limits: SearchLimits) -> Result<OrientationSearchConfig, ConstructError> {
        let mut cfg = OrientationSearchConfig::new(self.build()?);
        cfg.limits = limits;
        cfg.prune.regular_degrees = true;
        match *self {
            BaseFamily::Hamming { q: 2, .. } => {
                cfg.prune.arc_type_q2 = true;
                cfg.q2_base = Some(Q2BaseKind::Cube);
            }
            BaseFamily::Hamming { d, q } => {
                cfg.prune.line_local = true;
                cfg.lines = Some(hamming_lines(d, q));
            }
            BaseFamily::FoldedCube { n } if n >= 5 => {
                cfg.prune.arc_type_q2 = true;
                cfg.q2_base = Some(Q2BaseKind::FoldedCube);
            }
            BaseFamily::FoldedCube { .. } | BaseFamily::Doob { .. } => {}
        }
        Ok(cfg)
    }

    /// The expected proper commutative solution list for this base, where the
    /// classification statements name one. Families and parameters without a
    /// named solution yield an empty list (meaning "expected none"); for the
    /// folded 3-cube, which is the complete graph `K_4 = H(1, 4)`, the
    /// `H(1, 4)` reading applies and the list carries its solution.
    pub fn expected_witnesses(&self) -> Result<Vec<Digraph>, ConstructError> {
        let mut out = Vec::new();
        match *self {
            BaseFamily::Hamming { d: 2, q: 2 } => out.push(cay(&[4], &[&[1]])),
            BaseFamily::Hamming { d: 3, q: 2 } => out.push(cay(&[4, 2], &[&[1, 0], &[0, 1]])),
            BaseFamily::Hamming { d: 1, q: 3 } => out.push(cay(&[3], &[&[1]])),
            BaseFamily::Hamming { d: 1, q: 4 } => out.push(cay(&[4], &[&[1], &[2]])),
            BaseFamily::Hamming { d: 2, q: 4 } => {
                let f = cay(&[4], &[&[1], &[2]]);
                out.push(cartesian_product(&f, &f));
            }
            BaseFamily::Hamming { d: 2, q: 3 } => {
                let t = cay(&[3], &[&[1]]);
                let r = t.reverse();
                out.push(cartesian_product(&t, &t));
                out.push(cartesian_product(&t, &r));
                out.push(cartesian_product(&r, &t));
                out.push(cartesian_product(&r, &r));
            }
            BaseFamily::Hamming { d: 1, q: 7 } => out.push(paley_tournament(7)?),
            BaseFamily::FoldedCube { n: 3 } => out.push(cay(&[4], &[&[1], &[2]])),
            BaseFamily::Doob { d1: 1, d2: 0 } => {
                out.push(cay(&[4, 4], &[&[1, 0], &[0, 1], &[-1, -1]]));
            }
            _ => {}
        }
        Ok(out)
    }
}

fn cay(moduli: &[u32], connection: &[&[i64]]) -> Digraph {
    cayley(&CayleySpec::new(moduli, connection).expect("fixed witness spec is valid"))
}

/// Which question a [`TheoremVerdict`] answers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VerdictMode {
    /// Only the expected digraphs were checked; the orientation space was not
    /// searched (it exceeds the leaf budget).
    SufficiencyOnly,
    /// The orientation space was searched exhaustively and compared against
    /// the expected classes.
    Necessity,
}

/// Per-expected-digraph sufficiency outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SufficiencyCheck {
    /// Index into the caller's expected list.
    pub expected_index: usize,
    /// Passed the regularity check.
    pub wdrd: bool,
    /// Its intersection tensor is commutative.
    pub commutative: bool,
    /// Its underlying graph is isomorphic to the base.
    pub underlying_matches_base: bool,
}

impl SufficiencyCheck {
    pub fn pass(&self) -> bool {
        self.wdrd && self.commutative && self.underlying_matches_base
    }
}

/// Outcome of matching found solution classes against expected classes.
///
/// Expected digraphs are deduplicated by isomorphism first; indices refer to
/// the first member of each isomorphism group in the caller's list. Only
/// proper **commutative** solution classes take part; non-commutative classes
/// are counted in the verdict notes.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NecessityComparison {
    /// `(expected index, class index)` pairs matched by isomorphism.
    pub matched: Vec<(usize, usize)>,
    /// Expected class representatives no found class is isomorphic to.
    pub missing: Vec<usize>,
    /// Found class indices no expected digraph is isomorphic to.
    pub unexpected: Vec<usize>,
}

impl NecessityComparison {
    pub fn pass(&self) -> bool {
        self.missing.is_empty() && self.unexpected.is_empty()
    }
}

/// Verdict of [`verify_theorem`]: mode, matches, and discrepancies.
#[derive(Clone, Debug)]
pub struct TheoremVerdict {
    pub mode: VerdictMode,
    /// Everything checked holds: all sufficiency checks pass and, in
    /// necessity mode, the comparison has no missing or unexpected classes.
    pub pass: bool,
    /// A feasible search was stopped by the leaf budget; no comparison was
    /// performed (a truncated run must not produce a partial verdict).
    pub truncated: bool,
    pub sufficiency: Vec<SufficiencyCheck>,
    /// Present exactly in completed necessity mode.
    pub comparison: Option<NecessityComparison>,
    /// The search report, when a search ran.
    pub report: Option<ClassificationReport>,
    /// Human-readable remarks: infeasibility, deduplication, excluded
    /// non-commutative classes.
    pub notes: Vec<String>,
}

/// Errors of [`verify_theorem`]: bad family parameters or a search
/// configuration rejected by validation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VerifyError {
    Construct(ConstructError),
    Search(SearchConfigError),
}

impl core::fmt::Display for VerifyError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            VerifyError::Construct(e) => write!(f, "cannot build base: {e}"),
            VerifyError::Search(e) => write!(f, "search configuration rejected: {e}"),
        }
    }
}

impl core::error::Error for VerifyError {}

/// Checks one base family instance against an expected solution list.
///
/// Sufficiency always runs. Necessity runs when `3^|E|` fits within
/// `limits.max_leaves`; otherwise the verdict is
/// [`VerdictMode::SufficiencyOnly`] with a note giving the leaf count. The
/// undirected (all-edges-kept) solution and non-commutative proper classes
/// are excluded from the comparison; the latter are counted in the notes.
pub fn verify_theorem(
    family: &BaseFamily,
    expected: &[Digraph],
    limits: SearchLimits,
) -> Result<TheoremVerdict, VerifyError> {
    verify_theorem_with(family, expected, limits, None)
}

/// [`verify_theorem`] with an external stop callback threaded through to the
/// search, so callers can impose wall-clock budgets. A stopped search yields
/// a truncated verdict, never a partial comparison.
pub fn verify_theorem_with(
    family: &BaseFamily,
    expected: &[Digraph],
    limits: SearchLimits,
    stop: Option<&(dyn Fn() -> bool + Sync)>,
) -> Result<TheoremVerdict, VerifyError> {
    let base = family.build().map_err(VerifyError::Construct)?;
    let mut notes = Vec::new();

    let mut sufficiency = Vec::with_capacity(expected.len());
    for (expected_index, e) in expected.iter().enumerate() {
        let tensor = wdrd_check(e).ok();
        sufficiency.push(SufficiencyCheck {
            expected_index,
            wdrd: tensor.is_some(),
            commutative: tensor.as_ref().is_some_and(IntersectionTensor::commutative),
            underlying_matches_base: are_isomorphic(&e.underlying_graph(), &base).is_some(),
        });
    }
    let sufficiency_pass = sufficiency.iter().all(SufficiencyCheck::pass);

    // Deduplicate the expected list into isomorphism-class representatives.
    let mut reps: Vec<usize> = Vec::new();
    for (i, e) in expected.iter().enumerate() {
        if !reps.iter().any(|&r| are_isomorphic(&expected[r], e).is_some()) {
            reps.push(i);
        }
    }
    if reps.len() < expected.len() {
        notes.push(format!(
            "expected list of {} digraphs dedups to {} isomorphism class(es)",
            expected.len(),
            reps.len()
        ));
    }

    let edge_count = base.arc_count() / 2;
    let feasible = match total_leaves(edge_count) {
        Some(leaves) if leaves <= u128::from(limits.max_leaves) => true,
        Some(leaves) => {
            notes.push(format!(
                "necessity search infeasible: 3^{edge_count} = {leaves} leaves exceeds the budget of {}",
                limits.max_leaves
            ));
            false
        }
        None => {
            notes.push(format!(
                "necessity search infeasible: 3^{edge_count} leaves overflows the leaf counter"
            ));
            false
        }
    };
    if !feasible {
        return Ok(TheoremVerdict {
            mode: VerdictMode::SufficiencyOnly,
            pass: sufficiency_pass,
            truncated: false,
            sufficiency,
            comparison: None,
            report: None,
            notes,
        });
    }

    let cfg = family.search_config(limits).map_err(VerifyError::Construct)?;
    let report = classify_orientations_with(&cfg, stop).map_err(VerifyError::Search)?;
    if !report.complete {
        notes.push(String::from(
            "search stopped by budget before completion; no necessity verdict",
        ));
        return Ok(TheoremVerdict {
            mode: VerdictMode::Necessity,
            pass: false,
            truncated: true,
            sufficiency,
            comparison: None,
            report: Some(report),
            notes,
        });
    }

    let mut comparison = NecessityComparison::default();
    let mut used = alloc::vec![false; reps.len()];
    let mut non_commutative = 0u64;
    for (class_index, class) in report.classes.iter().enumerate() {
        if !class.representative.commutative {
            non_commutative += 1;
            continue;
        }
        let hit = reps.iter().enumerate().find(|&(slot, &e)| {
            !used[slot] && are_isomorphic(&expected[e], &class.representative.digraph).is_some()
        });
        match hit {
            Some((slot, &e)) => {
                used[slot] = true;
                comparison.matched.push((e, class_index));
            }
            None => comparison.unexpected.push(class_index),
        }
    }
    comparison.missing = reps
        .iter()
        .zip(&used)
        .filter(|&(_, &u)| !u)
        .map(|(&e, _)| e)
        .collect();
    if non_commutative > 0 {
        notes.push(format!(
            "{non_commutative} non-commutative proper class(es) excluded from the comparison"
        ));
    }

    let pass = sufficiency_pass && comparison.pass();
    Ok(TheoremVerdict {
        mode: VerdictMode::Necessity,
        pass,
        truncated: false,
        sufficiency,
        comparison: Some(comparison),
        report: Some(report),
        notes,
    })
}

/// Successful outcome of [`verify_product_proposition`].
#[derive(Clone, Debug)]
pub struct ProductVerdict {
    /// Intersection tensor of the product digraph.
    pub tensor: IntersectionTensor,
    /// Number of ordered product vertex pairs whose two-way distance was
    /// checked against the componentwise sum of the factor distances.
    pub pairs_checked: u64,
}

/// Failure of [`verify_product_proposition`]; the hypothesis variants name
/// the factor (0 or 1) that broke them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProductPropositionError {
    /// A factor has a vertex pair with no arc either way.
    NotSemicomplete { factor: usize, pair: (usize, usize) },
    /// A factor fails the regularity check.
    NotWeaklyDistanceRegular { factor: usize },
    /// A factor's girth differs from 2 (0 marks a factor with no circuit).
    GirthNotTwo { factor: usize, girth: usize },
    /// The factors' intersection tensors differ.
    TensorMismatch,
    /// The product failed the regularity check. Unreachable when the
    /// hypotheses hold; reported rather than asserted.
    ProductNotWeaklyDistanceRegular,
    /// A product pair whose two-way distance is not the componentwise sum of
    /// the factor distances. Unreachable for Cartesian products of strongly
    /// connected factors; reported rather than asserted.
    AdditivityMismatch {
        pair: (usize, usize),
        product: (u32, u32),
        factor_sum: (u32, u32),
    },
}

impl core::fmt::Display for ProductPropositionError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match *self {
            ProductPropositionError::NotSemicomplete { factor, pair } => write!(
                f,
                "factor {factor} is not semicomplete: vertices {} and {} are nonadjacent",
                pair.0, pair.1
            ),
            ProductPropositionError::NotWeaklyDistanceRegular { factor } => {
                write!(f, "factor {factor} is not weakly distance-regular")
            }
            ProductPropositionError::GirthNotTwo { factor, girth } => {
                write!(f, "factor {factor} has girth {girth}, need 2")
            }
            ProductPropositionError::TensorMismatch => {
                write!(f, "factors have different intersection tensors")
            }
            ProductPropositionError::ProductNotWeaklyDistanceRegular => {
                write!(f, "product is not weakly distance-regular")
            }
            ProductPropositionError::AdditivityMismatch { pair, product, factor_sum } => write!(
                f,
                "two-way distance of product pair ({}, {}) is ({}, {}), factors sum to ({}, {})",
                pair.0, pair.1, product.0, product.1, factor_sum.0, factor_sum.1
            ),
        }
    }
}

impl core::error::Error for ProductPropositionError {}

/// Checks the product construction on a concrete pair of factors.
///
/// Hypotheses (checked in order, per factor): semicomplete, weakly
/// distance-regular, girth 2; then tensor equality across the factors.
/// Conclusion: the Cartesian product passes the regularity check and the
/// two-way distance of every ordered product pair is the componentwise sum
/// of the factor distances.
pub fn verify_product_proposition(
    delta: &Digraph,
    delta2: &Digraph,
) -> Result<ProductVerdict, ProductPropositionError> {
    let factors = [delta, delta2];
    let mut tensors = Vec::with_capacity(2);
    for (factor, g) in factors.iter().enumerate() {
        let n = g.vertex_count();
        for u in 0..n {
            for v in u + 1..n {
                if !g.has_arc(u, v) && !g.has_arc(v, u) {
                    return Err(ProductPropositionError::NotSemicomplete { factor, pair: (u, v) });
                }
            }
        }
        let tensor = wdrd_check(g)
            .map_err(|_| ProductPropositionError::NotWeaklyDistanceRegular { factor })?;
        let girth = g.girth().unwrap_or(0);
        if girth != 2 {
            return Err(ProductPropositionError::GirthNotTwo { factor, girth });
        }
        tensors.push(tensor);
    }
    if tensors[0] != tensors[1] {
        return Err(ProductPropositionError::TensorMismatch);
    }

    let product = cartesian_product(delta, delta2);
    let tensor = wdrd_check(&product)
        .map_err(|_| ProductPropositionError::ProductNotWeaklyDistanceRegular)?;

    let ta = delta.two_way_distance().expect("factor is strongly connected");
    let tb = delta2.two_way_distance().expect("factor is strongly connected");
    let tp = product
        .two_way_distance()
        .expect("product of strongly connected factors is strongly connected");
    let nb = delta2.vertex_count();
    let n = product.vertex_count();
    let mut pairs_checked = 0u64;
    for u in 0..n {
        for v in 0..n {
            let a = ta.get(u / nb, v / nb);
            let b = tb.get(u % nb, v % nb);
            let factor_sum = (a.0 + b.0, a.1 + b.1);
            let got = tp.get(u, v);
            if got != factor_sum {
                return Err(ProductPropositionError::AdditivityMismatch {
                    pair: (u, v),
                    product: got,
                    factor_sum,
                });
            }
            pairs_checked += 1;
        }
    }
    Ok(ProductVerdict { tensor, pairs_checked })
}
