//! Cross-checks against naive reference implementations: Floyd–Warshall
//! two-way distances, circuit-scan girth, and distance-partition counting
//! for the classical intersection arrays. The reference code here shares no
//! logic with the crate's BFS-based implementations.

use wdrd_core::families::{
    cartesian_product, cayley, complete_graph, doob, folded_cube, hamming, paley_tournament,
    shrikhande, tuple_index, CayleySpec,
};
use wdrd_core::schemes::drg_check;
use wdrd_core::{are_isomorphic, Digraph};

fn cay(moduli: &[u32], connection: &[&[i64]]) -> Digraph {
    cayley(&CayleySpec::new(moduli, connection).unwrap())
}

fn directed_cycle(n: usize) -> Digraph {
    let arcs: Vec<(usize, usize)> = (0..n).map(|u| (u, (u + 1) % n)).collect();
    Digraph::new(n, &arcs).unwrap()
}

const INF: u32 = u32::MAX / 4;

/// All-pairs shortest paths by Floyd–Warshall.
fn naive_distances(g: &Digraph) -> Vec<Vec<u32>> {
    let n = g.vertex_count();
    let mut d = vec![vec![INF; n]; n];
    for v in 0..n {
        d[v][v] = 0;
    }
    for (u, v) in g.arcs() {
        d[u][v] = 1;
    }
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                let via = d[i][k].saturating_add(d[k][j]);
                if via < d[i][j] {
                    d[i][j] = via;
                }
            }
        }
    }
    d
}

/// Shortest circuit length: min over arcs (u, v) of 1 + dist(v, u).
fn naive_girth(g: &Digraph) -> Option<usize> {
    let d = naive_distances(g);
    g.arcs()
        .iter()
        .map(|&(u, v)| d[v][u].saturating_add(1))
        .filter(|&len| len < INF)
        .min()
        .map(|len| len as usize)
}

fn strongly_connected_samples() -> Vec<(&'static str, Digraph)> {
    vec![
        ("directed 4-cycle", directed_cycle(4)),
        ("Cay(Z4,{1,2})", cay(&[4], &[&[1], &[2]])),
        ("Cay(Z4xZ2,{(1,0),(0,1)})", cay(&[4, 2], &[&[1, 0], &[0, 1]])),
        (
            "Cay(Z4xZ4,{(1,0),(0,1),(-1,-1)})",
            cay(&[4, 4], &[&[1, 0], &[0, 1], &[-1, -1]]),
        ),
        (
            "directed triangle x K3",
            cay(&[3, 3], &[&[1, 0], &[0, 1], &[0, 2]]),
        ),
        ("Cay(Z8,{1,5})", cay(&[8], &[&[1], &[5]])),
        ("Paley tournament on 7", paley_tournament(7).unwrap()),
        ("K3", complete_graph(3)),
        ("Hamming H(2,3)", hamming(2, 3)),
    ]
}

#[test]
fn two_way_distance_matches_floyd_warshall() {
    for (name, g) in strongly_connected_samples() {
        let d = naive_distances(&g);
        let table = g.two_way_distance().unwrap();
        let n = g.vertex_count();
        for x in 0..n {
            for y in 0..n {
                assert_eq!(
                    table.get(x, y),
                    (d[x][y], d[y][x]),
                    "{name}: pair ({x}, {y})"
                );
            }
        }
    }
}

#[test]
fn two_way_distance_spot_values() {
    let c4 = directed_cycle(4);
    assert_eq!(c4.two_way_distance().unwrap().get(0, 1), (1, 3));

    let chord = cay(&[4], &[&[1], &[2]]);
    assert_eq!(chord.two_way_distance().unwrap().get(0, 2), (1, 1));

    // Three-generator Cayley digraph over Z4 x Z4: the vertex (1,1) sits at
    // two-way distance (2,1) from the origin, and (1,2) at (3,3).
    let g = cay(&[4, 4], &[&[1, 0], &[0, 1], &[-1, -1]]);
    let t = g.two_way_distance().unwrap();
    let moduli = [4u32, 4];
    assert_eq!(t.get(0, tuple_index(&moduli, &[1, 1])), (2, 1));
    assert_eq!(t.get(0, tuple_index(&moduli, &[1, 2])), (3, 3));
}

#[test]
fn girth_matches_naive_circuit_scan() {
    let mut samples = strongly_connected_samples();
    samples.push(("directed 6-cycle", directed_cycle(6)));
    samples.push(("directed triangle", cay(&[3], &[&[1]])));
    for (name, g) in samples {
        assert_eq!(g.girth().ok(), naive_girth(&g), "{name}");
    }
}

/// Distance-partition counting for an undirected graph, independent of
/// `drg_check`: classify every pair by naive distance, then count each
/// neighbor split and demand constancy.
fn naive_intersection_array(g: &Digraph) -> Option<(Vec<u64>, Vec<u64>, Vec<u64>)> {
    let d = naive_distances(g);
    let n = g.vertex_count();
    let diameter = *d.iter().flatten().max()? as usize;
    if diameter >= INF as usize {
        return None;
    }
    let mut b = vec![None; diameter + 1];
    let mut c = vec![None; diameter + 1];
    let mut a = vec![None; diameter + 1];
    for x in 0..n {
        for y in 0..n {
            let i = d[x][y] as usize;
            let (mut closer, mut same, mut farther) = (0u64, 0u64, 0u64);
            for z in g.out_neighbors(y) {
                match (d[x][z] as usize).cmp(&i) {
                    std::cmp::Ordering::Less => closer += 1,
                    std::cmp::Ordering::Equal => same += 1,
                    std::cmp::Ordering::Greater => farther += 1,
                }
            }
            for (slot, value) in [(&mut c, closer), (&mut a, same), (&mut b, farther)] {
                match slot[i] {
                    None => slot[i] = Some(value),
                    Some(prev) if prev == value => {}
                    Some(_) => return None,
                }
            }
        }
    }
    let unwrap = |v: Vec<Option<u64>>| v.into_iter().map(Option::unwrap).collect::<Vec<_>>();
    Some((unwrap(b), unwrap(c), unwrap(a)))
}

#[test]
fn drg_check_matches_naive_distance_partition() {
    let samples = vec![
        ("H(2,3)", hamming(2, 3)),
        ("H(3,2)", hamming(3, 2)),
        ("folded 4-cube", folded_cube(4).unwrap()),
        ("folded 5-cube", folded_cube(5).unwrap()),
        ("folded 6-cube", folded_cube(6).unwrap()),
        ("Shrikhande", shrikhande()),
        ("Doob(1,1)", doob(1, 1).unwrap()),
    ];
    for (name, g) in samples {
        let (b, c, a) = naive_intersection_array(&g).unwrap_or_else(|| panic!("{name}: naive"));
        let array = drg_check(&g).unwrap_or_else(|_| panic!("{name}: drg_check"));
        // The naive arrays carry the conventional zero entries b_d and c_0.
        assert_eq!(array.b[..], b[..b.len() - 1], "{name}: b");
        assert_eq!(array.c[..], c[1..], "{name}: c");
        assert_eq!(array.a[..], a[..], "{name}: a");
    }
}

#[test]
fn hamming_arrays_match_closed_form() {
    for (d, q) in [(1, 4), (2, 2), (2, 3), (3, 2), (2, 4), (3, 3)] {
        let array = drg_check(&hamming(d, q)).unwrap();
        assert_eq!(array.diameter(), d, "H({d},{q})");
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
}

#[test]
fn folded_cube_arrays_match_closed_form() {
    for n in [4usize, 5, 6] {
        let array = drg_check(&folded_cube(n).unwrap()).unwrap();
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
        for i in 0..d {
            if 2 * i < n {
                assert_eq!(array.a[i], 0, "folded {n}-cube: a_{i}");
            }
        }
    }
}

#[test]
fn doob_arrays_match_closed_form_and_hamming_twin() {
    for (d1, d2) in [(1usize, 0usize), (1, 1)] {
        let g = doob(d1, d2).unwrap();
        let array = drg_check(&g).unwrap();
        let d = 2 * d1 + d2;
        assert_eq!(array.diameter(), d, "Doob({d1},{d2}) diameter");
        for i in 0..d {
            assert_eq!(array.b[i], 3 * (d - i) as u64, "Doob({d1},{d2}): b_{i}");
        }
        for i in 1..=d {
            assert_eq!(array.c[i - 1], i as u64, "Doob({d1},{d2}): c_{i}");
        }
        for i in 0..=d {
            assert_eq!(array.a[i], 2 * i as u64, "Doob({d1},{d2}): a_{i}");
        }
        // Same parameters as the Hamming graph of matching diameter over
        // four symbols, yet non-isomorphic.
        let twin = hamming(d, 4);
        assert_eq!(array, drg_check(&twin).unwrap(), "Doob({d1},{d2}) twin array");
        assert!(are_isomorphic(&g, &twin).is_none(), "Doob({d1},{d2}) vs H({d},4)");
    }
}

#[test]
fn shrikhande_shares_hamming_2_4_array_without_isomorphism() {
    let s = shrikhande();
    let h = hamming(2, 4);
    assert_eq!(drg_check(&s).unwrap(), drg_check(&h).unwrap());
    assert!(are_isomorphic(&s, &h).is_none());
}

#[test]
fn paley_7_is_a_doubly_regular_tournament() {
    let g = paley_tournament(7).unwrap();
    let n = g.vertex_count();
    for u in 0..n {
        for v in 0..n {
            if u == v {
                continue;
            }
            assert!(g.has_arc(u, v) ^ g.has_arc(v, u), "tournament pair ({u}, {v})");
            let common = g
                .out_neighbors(u)
                .into_iter()
                .filter(|&z| g.has_arc(v, z))
                .count();
            assert_eq!(common, 1, "common out-neighbors of ({u}, {v})");
        }
    }
}

#[test]
fn product_of_directed_triangles_underlies_hamming_2_3() {
    let t = cay(&[3], &[&[1]]);
    let product = cartesian_product(&t, &t);
    assert!(are_isomorphic(&product.underlying_graph(), &hamming(2, 3)).is_some());
}
