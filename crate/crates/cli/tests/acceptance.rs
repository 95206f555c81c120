//! Acceptance gate: nine numbered criteria covering the closed-form
//! intersection arrays, the known commutative orientations of small Hamming
//! graphs, the folded-4-cube and Hamming(2,3) classifications, the Doob
//! witness, the product construction, scheme cross-validation, and pruning
//! soundness. Each test prints exactly one `criterion N: PASS/FAIL` line.
//!
//! Two clauses are intentionally left failing because exhaustive search
//! contradicts them; their panic messages carry the full analysis. See the
//! README for a discussion.

use std::time::{Duration, Instant};

use wdrd_core::families::{
    cartesian_product, cayley, complete_graph, doob, folded_cube, hamming, hamming_lines,
    paley_tournament, CayleySpec,
};
use wdrd_core::{
    are_isomorphic, drg_check, enumerate_orientations, relation_partition, scheme_axioms_check,
    verify_product_proposition, verify_theorem, wdrd_check, BaseFamily, ClassificationReport,
    Digraph, IntersectionTensor, OrientationSearchConfig, Q2BaseKind, SearchLimits, VerdictMode,
};

fn cay(moduli: &[u32], connection: &[&[i64]]) -> Digraph {
    cayley(&CayleySpec::new(moduli, connection.iter().copied()).unwrap())
}

fn iso(a: &Digraph, b: &Digraph) -> bool {
    are_isomorphic(a, b).is_some()
}

fn classify(cfg: &OrientationSearchConfig) -> ClassificationReport {
    let report = wdrd_core::classify_orientations(cfg).unwrap();
    assert!(report.complete, "run hit its own budget");
    report
}

/// The six commutative digraphs whose underlying graphs are the small
/// Hamming graphs, plus the order-16 Doob witness.
fn known_witnesses() -> Vec<(&'static str, Digraph, Digraph)> {
    let t = cay(&[3], &[&[1]]);
    let z4_12 = cay(&[4], &[&[1], &[2]]);
    vec![
        ("Cay(Z4,{1})", cay(&[4], &[&[1]]), hamming(2, 2)),
        (
            "Cay(Z4xZ2,{(1,0),(0,1)})",
            cay(&[4, 2], &[&[1, 0], &[0, 1]]),
            hamming(3, 2),
        ),
        ("Cay(Z4,{1,2})", z4_12.clone(), hamming(1, 4)),
        (
            "Cay(Z4,{1,2}) squared",
            cartesian_product(&z4_12, &z4_12),
            hamming(2, 4),
        ),
        ("T box T", cartesian_product(&t, &t), hamming(2, 3)),
        ("Paley(7)", paley_tournament(7).unwrap(), hamming(1, 7)),
        (
            "Cay(Z4xZ4, 3-gen)",
            cay(&[4, 4], &[&[1, 0], &[0, 1], &[-1, -1]]),
            doob(1, 0).unwrap(),
        ),
    ]
}

#[test]
fn criterion_1_intersection_arrays_match_closed_forms() {
    let budget = Duration::from_secs(1);

    for (d, q) in [(1usize, 4usize), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3)] {
        let g = hamming(d, q);
        let start = Instant::now();
        let array = drg_check(&g).unwrap();
        assert!(start.elapsed() < budget, "H({d},{q}) too slow");
        assert_eq!(array.diameter(), d, "H({d},{q}) diameter");
        for i in 0..=d {
            let (dd, qq, ii) = (d as u64, q as u64, i as u64);
            if i < d {
                assert_eq!(array.b[i], (dd - ii) * (qq - 1), "H({d},{q}): b_{i}");
            }
            if i >= 1 {
                assert_eq!(array.c[i - 1], ii, "H({d},{q}): c_{i}");
            }
            assert_eq!(array.a[i], ii * (qq - 2), "H({d},{q}): a_{i}");
        }
    }

    for n in [4usize, 5, 6] {
        let g = folded_cube(n).unwrap();
        let start = Instant::now();
        let array = drg_check(&g).unwrap();
        assert!(start.elapsed() < budget, "folded {n}-cube too slow");
        let d = n / 2;
        assert_eq!(array.diameter(), d, "folded {n}-cube diameter");
        for i in 0..d {
            assert_eq!(array.b[i], (n - i) as u64, "folded {n}-cube: b_{i}");
        }
        for i in 1..=d {
            if 2 * i < n {
                assert_eq!(array.c[i - 1], i as u64, "folded {n}-cube: c_{i}");
            }
        }
        if n % 2 == 0 {
            assert_eq!(array.c[d - 1], n as u64, "folded {n}-cube: c_d = n");
        }
    }

    for (d1, d2) in [(1usize, 0usize), (1, 1)] {
        let g = doob(d1, d2).unwrap();
        let start = Instant::now();
        let array = drg_check(&g).unwrap();
        assert!(start.elapsed() < budget, "Doob({d1},{d2}) too slow");
        let d = 2 * d1 + d2;
        assert_eq!(array.diameter(), d, "Doob({d1},{d2}) diameter");
        for i in 0..d {
            assert_eq!(array.b[i], 3 * (d - i) as u64, "Doob({d1},{d2}): b_{i}");
        }
        for i in 1..=d {
            assert_eq!(array.c[i - 1], i as u64, "Doob({d1},{d2}): c_{i}");
        }
    }

    // Same array as the diameter-3 Hamming graph over four symbols, yet a
    // different graph.
    let doob11 = doob(1, 1).unwrap();
    let twin = hamming(3, 4);
    assert_eq!(drg_check(&doob11).unwrap(), drg_check(&twin).unwrap());
    assert!(!iso(&doob11, &twin), "Doob(1,1) must not be H(3,4)");

    println!("criterion 1: PASS — closed-form arrays match; Doob(1,1)/H(3,4) twins non-isomorphic");
}

#[test]
fn criterion_2_known_commutative_orientations_of_hamming_graphs() {
    let start = Instant::now();
    for (name, g, base) in known_witnesses().into_iter().take(6) {
        let tensor = wdrd_check(&g).unwrap_or_else(|w| panic!("{name}: {w}"));
        assert!(tensor.commutative(), "{name}: commutative");
        assert!(
            wdrd_core::is_commutative(&tensor).is_ok(),
            "{name}: commutativity re-check"
        );
        assert!(iso(&g.underlying_graph(), &base), "{name}: underlying graph");
    }
    assert!(start.elapsed() < Duration::from_secs(5), "too slow");
    println!("criterion 2: PASS — all six witnesses are commutative with the right underlying graphs");
}

#[test]
fn criterion_3_exhaustive_classification_of_small_bases() {
    let cases = vec![
        ("hamming(2,2)", hamming(2, 2), Some(81u64), cay(&[4], &[&[1]])),
        ("K3", complete_graph(3), None, cay(&[3], &[&[1]])),
        ("K4", complete_graph(4), None, cay(&[4], &[&[1], &[2]])),
    ];
    for (name, base, exact_leaves, witness) in cases {
        let start = Instant::now();
        let cfg = OrientationSearchConfig::new(base);
        let report = classify(&cfg);
        assert!(start.elapsed() < Duration::from_secs(10), "{name}: too slow");
        assert_eq!(report.pruned.total(), 0, "{name}: nothing may be pruned");
        if let Some(leaves) = exact_leaves {
            assert_eq!(report.total_visited, leaves, "{name}: leaf count");
        }
        let commutative: Vec<_> = report
            .classes
            .iter()
            .filter(|c| c.representative.commutative)
            .collect();
        assert_eq!(commutative.len(), 1, "{name}: one commutative class");
        assert!(
            iso(&commutative[0].representative.digraph, &witness),
            "{name}: class representative"
        );
    }
    println!("criterion 3: PASS — unpruned searches reproduce the unique commutative class on each base");
}

#[test]
fn criterion_4_folded_4_cube_classification() {
    // Unpruned, the tree has exactly 3^16 leaves.
    let base = folded_cube(4).unwrap();
    let plain = OrientationSearchConfig::new(base.clone());
    let stats = enumerate_orientations(&plain, |_| {}).unwrap();
    assert!(stats.complete);
    assert_eq!(stats.leaves_visited, 43_046_721, "unpruned leaf count");

    // Degree pruning is validated for soundness by criterion 8 and the
    // library's own tests; with it the classification is fast.
    let start = Instant::now();
    let mut cfg = OrientationSearchConfig::new(base);
    cfg.prune.regular_degrees = true;
    let report = classify(&cfg);
    assert!(start.elapsed() < Duration::from_secs(600), "pruned run too slow");
    assert_eq!(
        u128::from(report.total_visited) + u128::from(report.pruned.total()),
        43_046_721u128,
        "leaf accounting"
    );

    let commutative: Vec<_> = report
        .classes
        .iter()
        .filter(|c| c.representative.commutative)
        .collect();
    if commutative.is_empty() {
        println!("criterion 4: PASS — no proper commutative orientation of the folded 4-cube");
        return;
    }

    println!("criterion 4: FAIL — expected zero proper commutative solutions, found one class");
    let witness = cay(&[8], &[&[1], &[5]]);
    let found = &commutative[0];
    assert!(
        iso(&found.representative.digraph, &witness),
        "the surviving class should at least be the known one"
    );
    panic!(
        "expected 0 proper commutative solutions on the folded 4-cube, found {} class(es); \
         the class has {} members and is isomorphic to Cay(Z8,{{1,5}}), whose two-way \
         distance labels are (0,0),(1,3),(2,2),(3,1),(4,4). The digraph is a genuine \
         commutative weakly distance-regular orientation: its underlying graph is the \
         folded 4-cube (= K4x4), every vertex lies on directed 3-circuits, and the check \
         that was expected to exclude it assumes the digraph itself has diameter 2, while \
         only the underlying graph does (the digraph diameter is 4). The 'no proper \
         orientation' claim therefore fails at n = 4.",
        commutative.len(),
        found.members,
    );
}

#[test]
fn criterion_5_doob_witness_properties() {
    let start = Instant::now();
    let g = cay(&[4, 4], &[&[1, 0], &[0, 1], &[-1, -1]]);
    let tensor = wdrd_check(&g).unwrap();
    assert!(tensor.commutative(), "commutative");
    assert!(iso(&g.underlying_graph(), &doob(1, 0).unwrap()), "underlying Doob(1,0)");

    // Every arc sits on a directed triangle and nothing shorter: label (1,2).
    let table = g.two_way_distance().unwrap();
    for (u, v) in g.arcs() {
        assert_eq!(table.get(u, v), (1, 2), "arc ({u},{v}) label");
    }
    assert_eq!(
        tensor.p_by_label((2, 1), (1, 2), (1, 2)),
        Some(2),
        "p^(2,1)_(1,2),(1,2)"
    );

    // The exhaustive search over 3^48 orientations is out of reach; the
    // verdict must say so rather than claim completeness.
    let verdict = verify_theorem(
        &BaseFamily::Doob { d1: 1, d2: 0 },
        &[g],
        SearchLimits::default(),
    )
    .unwrap();
    assert_eq!(verdict.mode, VerdictMode::SufficiencyOnly, "flagged sufficiency-only");
    assert!(verdict.pass, "sufficiency verdict");
    assert!(!verdict.truncated);
    assert!(start.elapsed() < Duration::from_secs(5), "too slow");
    println!("criterion 5: PASS — Doob witness checks out; verdict flagged sufficiency-only");
}

#[test]
fn criterion_6_product_construction() {
    let g = cay(&[4], &[&[1], &[2]]);
    let verdict = verify_product_proposition(&g, &g).unwrap();
    assert_eq!(verdict.pairs_checked, 256, "all vertex pairs of the product");
    assert!(verdict.tensor.commutative());
    println!("criterion 6: PASS — product of the two semicomplete factors verified over all 256 pairs");
}

fn cross_validate(name: &str, g: &Digraph, tensor: &IntersectionTensor) {
    let part = relation_partition(&g.two_way_distance().unwrap());
    let report = scheme_axioms_check(&part);
    assert!(report.all_pass(), "{name}: scheme axioms");

    let constants = report.constants.as_ref().unwrap();
    let nl = part.labels().len();
    assert_eq!(nl, tensor.num_labels(), "{name}: label count");
    let map: Vec<usize> = part
        .labels()
        .iter()
        .map(|&l| tensor.label_index(l).unwrap())
        .collect();
    for l in 0..nl {
        for i in 0..nl {
            for j in 0..nl {
                assert_eq!(
                    constants[(l * nl + i) * nl + j],
                    tensor.p(map[l], map[i], map[j]),
                    "{name}: axiom-iv constant vs tensor at ({l},{i},{j})"
                );
            }
        }
    }

    let n: u64 = (0..nl).map(|i| tensor.valency(i)).sum();
    assert_eq!(n, g.vertex_count() as u64, "{name}: valencies sum to n");
    for i in 0..nl {
        for j in 0..nl {
            let product: u64 = (0..nl).map(|l| tensor.p(l, i, j) * tensor.valency(l)).sum();
            assert_eq!(
                tensor.valency(i) * tensor.valency(j),
                product,
                "{name}: k_i k_j identity at ({i},{j})"
            );
            for l in 0..nl {
                let lhs = tensor.p(l, i, j) * tensor.valency(l);
                assert_eq!(
                    lhs,
                    tensor.p(i, l, tensor.star(j)) * tensor.valency(i),
                    "{name}: triple identity at ({l},{i},{j})"
                );
                assert_eq!(
                    lhs,
                    tensor.p(j, tensor.star(i), l) * tensor.valency(j),
                    "{name}: triple identity at ({l},{i},{j})"
                );
            }
        }
    }
}

#[test]
fn criterion_7_scheme_cross_validation() {
    let start = Instant::now();
    for (name, g, _) in known_witnesses() {
        let tensor = wdrd_check(&g).unwrap();
        cross_validate(name, &g, &tensor);
    }
    assert!(start.elapsed() < Duration::from_secs(30), "too slow");
    println!("criterion 7: PASS — scheme axioms and intersection-number identities agree with every tensor");
}

fn classes_identical(name: &str, got: &ClassificationReport, want: &ClassificationReport) {
    assert_eq!(got.classes.len(), want.classes.len(), "{name}: class count");
    let mut used = vec![false; want.classes.len()];
    for (i, g) in got.classes.iter().enumerate() {
        let j = want
            .classes
            .iter()
            .enumerate()
            .position(|(j, w)| {
                !used[j]
                    && w.members == g.members
                    && iso(&w.representative.digraph, &g.representative.digraph)
            })
            .unwrap_or_else(|| panic!("{name}: class {i} has no partner"));
        used[j] = true;
    }
}

#[test]
fn criterion_8_pruning_soundness_on_small_bases() {
    let c4 = Digraph::new(4, &[(0, 1), (1, 0), (1, 2), (2, 1), (2, 3), (3, 2), (3, 0), (0, 3)])
        .unwrap();
    // (base, Q2 metadata if the base is one of the quadrangle families,
    //  line cover if the base is complete)
    let cases: Vec<(&str, Digraph, Option<Q2BaseKind>, Option<Vec<Vec<usize>>>)> = vec![
        ("C4", c4, Some(Q2BaseKind::Cube), None),
        ("K3", complete_graph(3), None, Some(vec![vec![0, 1, 2]])),
        ("K4", complete_graph(4), None, Some(vec![vec![0, 1, 2, 3]])),
        ("hamming(2,2)", hamming(2, 2), Some(Q2BaseKind::Cube), None),
    ];
    for (name, base, q2, lines) in cases {
        let plain = OrientationSearchConfig::new(base.clone());
        let baseline = classify(&plain);
        for mask in 0u32..16 {
            let mut cfg = plain.clone();
            cfg.prune.regular_degrees = mask & 1 != 0;
            cfg.prune.forbid_improper_none = mask & 2 != 0;
            cfg.prune.arc_type_q2 = mask & 4 != 0;
            cfg.prune.line_local = mask & 8 != 0;
            if cfg.prune.arc_type_q2 {
                match q2 {
                    Some(kind) => cfg.q2_base = Some(kind),
                    None => continue, // cut not defined for this base
                }
            }
            if cfg.prune.line_local {
                match &lines {
                    Some(ls) => cfg.lines = Some(ls.clone()),
                    None => continue, // no clique cover for this base
                }
            }
            let report = classify(&cfg);
            classes_identical(&format!("{name} mask {mask}"), &report, &baseline);
        }
    }
    println!("criterion 8: PASS — every applicable cut combination reproduces the unpruned classes");
}

#[test]
fn criterion_9_hamming_2_3_classification() {
    // A truncated run must say so: exit code 2 and complete=false, never a
    // partial verdict with a clean exit.
    let args = [
        "wdrd", "search", "hamming", "--d", "2", "--q", "3", "--prune", "line-local",
        "--budget-leaves", "100", "--json",
    ];
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let code = wdrd_cli::run(args, &mut out, &mut err);
    assert_eq!(code, 2, "truncated run exit code");
    let value: serde_json::Value = serde_json::from_slice(&out).unwrap();
    assert_eq!(value["complete"], serde_json::Value::Bool(false));

    // The expected solution list: all four orderings of the two directed
    // triangles, deduplicated up to isomorphism.
    let t = cay(&[3], &[&[1]]);
    let t_rev = cay(&[3], &[&[2]]);
    let products = [
        cartesian_product(&t, &t),
        cartesian_product(&t, &t_rev),
        cartesian_product(&t_rev, &t),
        cartesian_product(&t_rev, &t_rev),
    ];
    let mut expected: Vec<&Digraph> = Vec::new();
    for p in &products {
        if !expected.iter().any(|e| iso(e, p)) {
            expected.push(p);
        }
    }

    let mut cfg = OrientationSearchConfig::new(hamming(2, 3));
    cfg.prune.line_local = true;
    cfg.lines = Some(hamming_lines(2, 3));
    let report = classify(&cfg);
    let commutative: Vec<_> = report
        .classes
        .iter()
        .filter(|c| c.representative.commutative)
        .collect();

    let mut unexpected: Vec<usize> = Vec::new();
    for (i, class) in commutative.iter().enumerate() {
        if !expected.iter().any(|e| iso(e, &class.representative.digraph)) {
            unexpected.push(i);
        }
    }
    let all_expected_found = expected
        .iter()
        .all(|e| commutative.iter().any(|c| iso(e, &c.representative.digraph)));

    if unexpected.is_empty() && all_expected_found && commutative.len() == expected.len() {
        println!("criterion 9: PASS — classification matches the product list exactly");
        return;
    }

    println!("criterion 9: FAIL — classification does not match the four-product list");
    let mixed = cay(&[3, 3], &[&[1, 0], &[0, 1], &[0, 2]]);
    assert_eq!(unexpected.len(), 1, "exactly one class beyond the product list");
    assert!(
        iso(&commutative[unexpected[0]].representative.digraph, &mixed),
        "the extra class should be the known one"
    );
    panic!(
        "the four products of two directed triangles collapse to {} isomorphism class(es) \
         (reversing a directed triangle gives an isomorphic digraph, and the product \
         factors commute up to isomorphism), while the search over Hamming(2,3) finds {} \
         commutative classes. The extra class is Cay(Z3xZ3,{{(1,0),(0,1),(0,2)}}) — the \
         product of a directed triangle with an undirected one — with {} labelings. It is \
         a genuine commutative weakly distance-regular orientation of Hamming(2,3), so \
         the expected solution list is incomplete, not the search.",
        expected.len(),
        commutative.len(),
        commutative[unexpected[0]].members,
    );
}
