//! Validators for structural facts that constrain weakly distance-regular
//! digraphs with small parameters.
//!
//! [`semicomplete_wdrd_profile`] checks the shape every semicomplete,
//! non-complete instance must have (diameter 2, girth at most 3, and one of
//! two fixed label sets). [`verify_structural_lemmas`] checks three facts
//! about commutative tensors whose underlying graph has `c_2 = 2` or
//! `a_1 = 2`; a violation would contradict the theory and is surfaced
//! loudly rather than silently tolerated.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::digraph::Digraph;
use crate::schemes::{wdrd_check, IntersectionArray, IntersectionTensor, Label, RegularityWitness};

/// The verified shape of a semicomplete, non-complete instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SemicompleteProfile {
    pub girth: usize,
    pub labels: Vec<Label>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ProfileError {
    /// A vertex pair with no arc in either direction.
    NotSemicomplete { pair: (usize, usize) },
    /// Complete graphs are excluded from the profile statement.
    CompleteGraph,
    /// The digraph is not weakly distance-regular.
    NotWdrd(RegularityWitness),
    /// The computed shape contradicts the expected profile. This should
    /// never happen for a genuine semicomplete instance; treat it as a
    /// serious finding.
    Contradiction {
        diameter: u32,
        girth: usize,
        labels: Vec<Label>,
    },
}

impl core::fmt::Display for ProfileError {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        match self {
            ProfileError::NotSemicomplete { pair } => write!(
                f,
                "not semicomplete: vertices {} and {} are nonadjacent",
                pair.0, pair.1
            ),
            ProfileError::CompleteGraph => {
                write!(f, "complete digraphs are outside the profile statement")
            }
            ProfileError::NotWdrd(w) => write!(f, "not weakly distance-regular: {w}"),
            ProfileError::Contradiction {
                diameter,
                girth,
                labels,
            } => write!(
                f,
                "profile contradiction: diameter {diameter}, girth {girth}, labels {labels:?}"
            ),
        }
    }
}

impl core::error::Error for ProfileError {}

/// Girth-keyed expected label sets: a girth-3 instance has only one-way
/// arcs of type `(1,2)`; a girth-2 instance additionally keeps edges.
const GIRTH3_LABELS: [Label; 3] = [(0, 0), (1, 2), (2, 1)];
const GIRTH2_LABELS: [Label; 4] = [(0, 0), (1, 1), (1, 2), (2, 1)];

/// Checks that a semicomplete, non-complete, weakly distance-regular
/// digraph has diameter 2, girth at most 3, and one of the two expected
/// label sets; reports the girth and labels found.
pub fn semicomplete_wdrd_profile(g: &Digraph) -> Result<SemicompleteProfile, ProfileError> {
    let n = g.vertex_count();
    for u in 0..n {
        for v in (u + 1)..n {
            if !g.has_arc(u, v) && !g.has_arc(v, u) {
                return Err(ProfileError::NotSemicomplete { pair: (u, v) });
            }
        }
    }
    if g.arc_count() == n * (n - 1) {
        return Err(ProfileError::CompleteGraph);
    }
    let tensor = wdrd_check(g).map_err(ProfileError::NotWdrd)?;
    let labels = tensor.labels().to_vec();
    let diameter = labels.iter().map(|&(a, _)| a).max().unwrap_or(0);
    let girth = g.girth().expect("strongly connected with at least two vertices");
    let expected: &[Label] = match girth {
        2 => &GIRTH2_LABELS,
        3 => &GIRTH3_LABELS,
        _ => &[],
    };
    if diameter != 2 || labels != expected {
        return Err(ProfileError::Contradiction {
            diameter,
            girth,
            labels,
        });
    }
    Ok(SemicompleteProfile { girth, labels })
}

/// Outcome of one structural-fact check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LemmaStatus {
    /// The fact's hypotheses do not hold for this input.
    NotApplicable { reason: String },
    Holds { detail: String },
    Violated { detail: String },
}

impl LemmaStatus {
    pub fn is_violated(&self) -> bool {
        matches!(self, LemmaStatus::Violated { .. })
    }
}

/// Results of the three structural-fact validators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructuralLemmaReport {
    /// With `c_2 = 2`: a nonzero `p^{(2,2)}_{(1,p-1),(1,s-1)}` forces
    /// `p = s`, with value 2 when `p = 2` and value 1 when `p ∈ {3,4}`.
    pub common_neighbor_return_types: LemmaStatus,
    /// With `c_2 = 2` and some nonzero `p^{(1,p-1)}_{(2,2),(p-1,1)}`: the
    /// analogous entry vanishes for every other arc type `t ≠ p`.
    pub short_return_uniqueness: LemmaStatus,
    /// With `a_1 = 2`: `p^{(1,s-1)}_{(1,p-1),(p-1,1)} = 0` whenever `s > 2`.
    pub no_long_returns_when_a1_two: LemmaStatus,
}

impl StructuralLemmaReport {
    pub fn any_violation(&self) -> bool {
        self.common_neighbor_return_types.is_violated()
            || self.short_return_uniqueness.is_violated()
            || self.no_long_returns_when_a1_two.is_violated()
    }
}

/// Labels of arc type `(1, p-1)`, with the value of `p`.
fn arc_types(t: &IntersectionTensor) -> Vec<(usize, u32)> {
    t.labels()
        .iter()
        .enumerate()
        .filter(|&(_, &(a, _))| a == 1)
        .map(|(id, &(_, b))| (id, b + 1))
        .collect()
}

/// Checks the three structural facts on a commutative tensor, gated by the
/// `c_2` and `a_1` parameters of the underlying graph's array.
pub fn verify_structural_lemmas(
    t: &IntersectionTensor,
    arr: &IntersectionArray,
) -> StructuralLemmaReport {
    if !t.commutative() {
        let na = |reason: &str| LemmaStatus::NotApplicable {
            reason: String::from(reason),
        };
        return StructuralLemmaReport {
            common_neighbor_return_types: na("tensor is not commutative"),
            short_return_uniqueness: na("tensor is not commutative"),
            no_long_returns_when_a1_two: na("tensor is not commutative"),
        };
    }
    StructuralLemmaReport {
        common_neighbor_return_types: check_common_neighbor_return_types(t, arr),
        short_return_uniqueness: check_short_return_uniqueness(t, arr),
        no_long_returns_when_a1_two: check_no_long_returns(t, arr),
    }
}

fn gate_c2(arr: &IntersectionArray) -> Result<(), LemmaStatus> {
    match arr.c2() {
        Some(2) => Ok(()),
        c2 => Err(LemmaStatus::NotApplicable {
            reason: format!("needs c_2 = 2, underlying graph has c_2 = {c2:?}"),
        }),
    }
}

fn check_common_neighbor_return_types(
    t: &IntersectionTensor,
    arr: &IntersectionArray,
) -> LemmaStatus {
    if let Err(status) = gate_c2(arr) {
        return status;
    }
    let Some(h22) = t.label_index((2, 2)) else {
        return LemmaStatus::Holds {
            detail: String::from("vacuous: no pair at two-way distance (2,2)"),
        };
    };
    let arcs = arc_types(t);
    let mut seen = Vec::new();
    for &(i, p) in &arcs {
        for &(j, s) in &arcs {
            let v = t.p(h22, i, j);
            if v == 0 {
                continue;
            }
            let entry = format!(
                "p^{{(2,2)}}_{{(1,{}),(1,{})}} = {v}",
                p - 1,
                s - 1
            );
            if p != s {
                return LemmaStatus::Violated {
                    detail: format!("{entry} with unequal return types {p} and {s}"),
                };
            }
            let expected = if p == 2 { 2 } else { 1 };
            if !(2..=4).contains(&p) || v != expected {
                return LemmaStatus::Violated {
                    detail: format!("{entry}, expected value {expected} at p = {p}"),
                };
            }
            seen.push(entry);
        }
    }
    LemmaStatus::Holds {
        detail: if seen.is_empty() {
            String::from("vacuous: no nonzero entry over arc-type pairs")
        } else {
            seen.join("; ")
        },
    }
}

fn check_short_return_uniqueness(
    t: &IntersectionTensor,
    arr: &IntersectionArray,
) -> LemmaStatus {
    if let Err(status) = gate_c2(arr) {
        return status;
    }
    let Some(h22) = t.label_index((2, 2)) else {
        return LemmaStatus::NotApplicable {
            reason: String::from("no pair at two-way distance (2,2)"),
        };
    };
    let arcs = arc_types(t);
    let witnesses: Vec<u32> = arcs
        .iter()
        .filter(|&&(i, _)| t.p(i, h22, t.star(i)) != 0)
        .map(|&(_, p)| p)
        .collect();
    let [p] = witnesses[..] else {
        return match witnesses.len() {
            0 => LemmaStatus::NotApplicable {
                reason: String::from("every p^{(1,p-1)}_{(2,2),(p-1,1)} vanishes"),
            },
            _ => LemmaStatus::Violated {
                detail: format!(
                    "nonzero p^{{(1,p-1)}}_{{(2,2),(p-1,1)}} for several return types {witnesses:?}"
                ),
            },
        };
    };
    for &(i, s) in &arcs {
        if s == p {
            continue;
        }
        // check against every transposed-arc-type label (r-1, 1)
        for (r_id, &(a, b)) in t.labels().iter().enumerate() {
            if b != 1 || a == 0 {
                continue;
            }
            let v = t.p(i, h22, r_id);
            if v != 0 {
                return LemmaStatus::Violated {
                    detail: format!(
                        "p^{{(1,{})}}_{{(2,2),({a},1)}} = {v} although the unique return type is {p}",
                        s - 1
                    ),
                };
            }
        }
    }
    LemmaStatus::Holds {
        detail: format!("unique return type p = {p}"),
    }
}

fn check_no_long_returns(t: &IntersectionTensor, arr: &IntersectionArray) -> LemmaStatus {
    match arr.a1() {
        Some(2) => {}
        a1 => {
            return LemmaStatus::NotApplicable {
                reason: format!("needs a_1 = 2, underlying graph has a_1 = {a1:?}"),
            }
        }
    }
    let arcs = arc_types(t);
    let mut checked = 0usize;
    for &(h, s) in &arcs {
        if s <= 2 {
            continue;
        }
        for &(i, p) in &arcs {
            checked += 1;
            let v = t.p(h, i, t.star(i));
            if v != 0 {
                return LemmaStatus::Violated {
                    detail: format!(
                        "p^{{(1,{})}}_{{(1,{}),({},1)}} = {v} with s = {s} > 2",
                        s - 1,
                        p - 1,
                        p - 1
                    ),
                };
            }
        }
    }
    LemmaStatus::Holds {
        detail: if checked == 0 {
            String::from("vacuous: no arc type with s > 2")
        } else {
            format!("all {checked} long-return entries vanish")
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::{
        cartesian_product, cayley, complete_graph, folded_cube, hamming, paley_tournament,
        shrikhande, CayleySpec,
    };
    use crate::schemes::drg_check;

    fn triangle() -> Digraph {
        cayley(&CayleySpec::new(&[3], [[1]]).unwrap())
    }

    fn three_generator() -> Digraph {
        cayley(&CayleySpec::new(&[4, 4], [[1, 0], [0, 1], [-1, -1]]).unwrap())
    }

    #[test]
    fn profiles_of_semicomplete_instances() {
        let p = semicomplete_wdrd_profile(&triangle()).unwrap();
        assert_eq!(p.girth, 3);
        assert_eq!(p.labels, GIRTH3_LABELS);

        let chord = cayley(&CayleySpec::new(&[4], [[1], [2]]).unwrap());
        let p = semicomplete_wdrd_profile(&chord).unwrap();
        assert_eq!(p.girth, 2);
        assert_eq!(p.labels, GIRTH2_LABELS);

        let p = semicomplete_wdrd_profile(&paley_tournament(7).unwrap()).unwrap();
        assert_eq!(p.girth, 3);
    }

    #[test]
    fn profile_preconditions() {
        assert_eq!(
            semicomplete_wdrd_profile(&complete_graph(4)).unwrap_err(),
            ProfileError::CompleteGraph
        );
        assert_eq!(
            semicomplete_wdrd_profile(&hamming(2, 2)).unwrap_err(),
            ProfileError::NotSemicomplete { pair: (0, 3) }
        );
        // transitive tournament: semicomplete but not strongly connected
        let tt = Digraph::new(3, &[(0, 1), (0, 2), (1, 2)]).unwrap();
        assert!(matches!(
            semicomplete_wdrd_profile(&tt).unwrap_err(),
            ProfileError::NotWdrd(RegularityWitness::NotStronglyConnected { .. })
        ));
    }

    #[test]
    fn return_types_on_square_and_three_generator() {
        // undirected square: p = 2 branch with value 2
        let g = hamming(2, 2);
        let t = wdrd_check(&g).unwrap();
        let arr = drg_check(&g).unwrap();
        let report = verify_structural_lemmas(&t, &arr);
        assert!(matches!(
            report.common_neighbor_return_types,
            LemmaStatus::Holds { .. }
        ));

        // one-way instance: p = 3 branch with value 1
        let g = three_generator();
        let t = wdrd_check(&g).unwrap();
        let arr = drg_check(&shrikhande()).unwrap();
        assert_eq!(t.p_by_label((2, 2), (1, 2), (1, 2)), Some(1));
        let report = verify_structural_lemmas(&t, &arr);
        assert!(matches!(
            report.common_neighbor_return_types,
            LemmaStatus::Holds { .. }
        ));
        assert_eq!(
            report.short_return_uniqueness,
            LemmaStatus::Holds {
                detail: String::from("unique return type p = 3")
            }
        );
        assert!(matches!(
            report.no_long_returns_when_a1_two,
            LemmaStatus::Holds { .. }
        ));
        assert!(!report.any_violation());
    }

    #[test]
    fn hypothesis_gates() {
        // folded 4-cube = K_{4,4} has c_2 = 4: first two validators idle
        let g = folded_cube(4).unwrap();
        let t = wdrd_check(&g).unwrap();
        let arr = drg_check(&g).unwrap();
        assert_eq!(arr.c2(), Some(4));
        let report = verify_structural_lemmas(&t, &arr);
        assert!(matches!(
            report.common_neighbor_return_types,
            LemmaStatus::NotApplicable { .. }
        ));
        assert!(matches!(
            report.short_return_uniqueness,
            LemmaStatus::NotApplicable { .. }
        ));

        // product of directed triangles over the 3x3 rook's graph: a_1 = 1
        let tri = triangle();
        let g = cartesian_product(&tri, &tri);
        let t = wdrd_check(&g).unwrap();
        let arr = drg_check(&hamming(2, 3)).unwrap();
        assert_eq!(arr.a1(), Some(1));
        let report = verify_structural_lemmas(&t, &arr);
        assert!(matches!(
            report.no_long_returns_when_a1_two,
            LemmaStatus::NotApplicable { .. }
        ));
    }

    #[test]
    fn doctored_tensors_are_caught() {
        let g = three_generator();
        let arr = drg_check(&shrikhande()).unwrap();

        let mut t = wdrd_check(&g).unwrap();
        let h22 = t.label_index((2, 2)).unwrap();
        let a12 = t.label_index((1, 2)).unwrap();
        *t.p_mut(h22, a12, a12) = 2; // impossible at p = 3
        let report = verify_structural_lemmas(&t, &arr);
        assert!(report.common_neighbor_return_types.is_violated());

        let mut t = wdrd_check(&g).unwrap();
        let a21 = t.label_index((2, 1)).unwrap();
        *t.p_mut(a12, a12, a21) = 1; // a long return with s = 3
        *t.p_mut(a12, a21, a12) = 1; // keep commutativity
        let report = verify_structural_lemmas(&t, &arr);
        assert!(report.no_long_returns_when_a1_two.is_violated());
        assert!(report.any_violation());
    }
}
