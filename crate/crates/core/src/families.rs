//! Named digraph families: Cayley digraphs over products of cyclic groups,
//! Cartesian products, complete graphs, Hamming graphs, folded cubes, the
//! Shrikhande graph, Doob graphs, and Paley tournaments.
//!
//! Vertices of tuple-structured graphs are flattened row-major with the
//! **last** coordinate varying fastest; [`tuple_index`] / [`index_tuple`]
//! expose the map so callers can address coordinates.

use alloc::vec::Vec;
use core::fmt;

use crate::digraph::Digraph;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ConstructError {
    /// Group moduli must be positive.
    ZeroModulus { index: usize },
    /// A Cayley group needs at least one cyclic factor.
    EmptyModuli,
    /// Connection tuple arity differs from the number of moduli.
    TupleArity { expected: usize, got: usize },
    /// The identity element would create loops.
    IdentityInConnection,
    /// `hamming(d, q)` needs `d >= 1` and `q >= 2`.
    HammingParams { d: usize, q: usize },
    /// `folded_cube(n)` needs `n >= 3`; `n = 2` would double an edge.
    FoldedCubeTooSmall { n: usize },
    /// `doob(d1, d2)` needs `d1 >= 1`; without a Shrikhande factor it is a
    /// plain Hamming graph.
    DoobNeedsShrikhande,
    /// `paley_tournament(q)` needs a prime `q ≡ 3 (mod 4)`.
    PaleyModulus { q: usize },
}

impl fmt::Display for ConstructError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConstructError::ZeroModulus { index } => {
                write!(f, "modulus at position {index} must be positive")
            }
            ConstructError::EmptyModuli => write!(f, "at least one cyclic factor is required"),
            ConstructError::TupleArity { expected, got } => {
                write!(f, "connection tuple has {got} entries, expected {expected}")
            }
            ConstructError::IdentityInConnection => {
                write!(f, "connection set contains the identity element")
            }
            ConstructError::HammingParams { d, q } => {
                write!(f, "Hamming graph needs d >= 1 and q >= 2, got d = {d}, q = {q}")
            }
            ConstructError::FoldedCubeTooSmall { n } => {
                write!(f, "folded cube needs n >= 3, got {n}")
            }
            ConstructError::DoobNeedsShrikhande => {
                write!(f, "Doob graph needs at least one Shrikhande factor (d1 >= 1)")
            }
            ConstructError::PaleyModulus { q } => {
                write!(f, "Paley tournament needs a prime q = 3 (mod 4), got {q}")
            }
        }
    }
}

impl core::error::Error for ConstructError {}

/// Flattened index of `tuple` in the row-major order of `Z_{m0} × … × Z_{mk}`
/// (last coordinate fastest). Entries must already be reduced.
pub fn tuple_index(moduli: &[u32], tuple: &[u32]) -> usize {
    debug_assert_eq!(moduli.len(), tuple.len());
    let mut idx = 0usize;
    for (&m, &t) in moduli.iter().zip(tuple) {
        debug_assert!(t < m);
        idx = idx * m as usize + t as usize;
    }
    idx
}

/// Inverse of [`tuple_index`].
pub fn index_tuple(moduli: &[u32], mut index: usize) -> Vec<u32> {
    let mut tuple = alloc::vec![0u32; moduli.len()];
    for (slot, &m) in tuple.iter_mut().zip(moduli).rev() {
        *slot = (index % m as usize) as u32;
        index /= m as usize;
    }
    debug_assert_eq!(index, 0);
    tuple
}

/// A Cayley digraph specification over `Z_{m1} × … × Z_{mk}`: validated
/// moduli plus a connection set of non-identity group elements.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CayleySpec {
    moduli: Vec<u32>,
    connection: Vec<Vec<u32>>,
}

impl CayleySpec {
    /// Validates and normalizes a specification. Connection tuples may use
    /// any integers; they are reduced modulo the factor moduli, sorted, and
    /// deduplicated. Rejects zero moduli, arity mismatches, and tuples that
    /// reduce to the identity.
    pub fn new<I, T>(moduli: &[u32], connection: I) -> Result<Self, ConstructError>
    where
        I: IntoIterator<Item = T>,
        T: AsRef<[i64]>,
    {
        if moduli.is_empty() {
            return Err(ConstructError::EmptyModuli);
        }
        if let Some(index) = moduli.iter().position(|&m| m == 0) {
            return Err(ConstructError::ZeroModulus { index });
        }
        let mut conn: Vec<Vec<u32>> = Vec::new();
        for tuple in connection {
            let tuple = tuple.as_ref();
            if tuple.len() != moduli.len() {
                return Err(ConstructError::TupleArity {
                    expected: moduli.len(),
                    got: tuple.len(),
                });
            }
            let reduced: Vec<u32> = tuple
                .iter()
                .zip(moduli)
                .map(|(&t, &m)| t.rem_euclid(m as i64) as u32)
                .collect();
            if reduced.iter().all(|&t| t == 0) {
                return Err(ConstructError::IdentityInConnection);
            }
            conn.push(reduced);
        }
        conn.sort_unstable();
        conn.dedup();
        Ok(CayleySpec {
            moduli: moduli.to_vec(),
            connection: conn,
        })
    }

    pub fn moduli(&self) -> &[u32] {
        &self.moduli
    }

    /// Reduced, sorted, deduplicated connection set.
    pub fn connection(&self) -> &[Vec<u32>] {
        &self.connection
    }

    pub fn group_order(&self) -> usize {
        self.moduli.iter().map(|&m| m as usize).product()
    }

    /// True when the connection set is closed under negation, i.e. the
    /// Cayley digraph is undirected.
    pub fn is_inverse_closed(&self) -> bool {
        self.connection.iter().all(|s| {
            let neg: Vec<u32> = s
                .iter()
                .zip(&self.moduli)
                .map(|(&t, &m)| (m - t) % m)
                .collect();
            self.connection.binary_search(&neg).is_ok()
        })
    }
}

/// The Cayley digraph of `spec`: arcs `x → x + s` for every group element
/// `x` and connection element `s`.
pub fn cayley(spec: &CayleySpec) -> Digraph {
    let n = spec.group_order();
    let mut arcs = Vec::with_capacity(n * spec.connection.len());
    for x in 0..n {
        let tx = index_tuple(&spec.moduli, x);
        for s in &spec.connection {
            let sum: Vec<u32> = tx
                .iter()
                .zip(s)
                .zip(&spec.moduli)
                .map(|((&a, &b), &m)| (a + b) % m)
                .collect();
            arcs.push((x, tuple_index(&spec.moduli, &sum)));
        }
    }
    Digraph::new(n, &arcs).expect("validated Cayley spec yields a loopless digraph")
}

/// Cartesian product: vertex `(u, v)` is flattened to `u * h.n + v`;
/// `((u,v), (u',v'))` is an arc iff one coordinate is equal and the other
/// carries an arc.
pub fn cartesian_product(g: &Digraph, h: &Digraph) -> Digraph {
    let (ng, nh) = (g.vertex_count(), h.vertex_count());
    let mut arcs = Vec::with_capacity(ng * h.arc_count() + nh * g.arc_count());
    for (u, up) in g.arcs() {
        for v in 0..nh {
            arcs.push((u * nh + v, up * nh + v));
        }
    }
    for (v, vp) in h.arcs() {
        for u in 0..ng {
            arcs.push((u * nh + v, u * nh + vp));
        }
    }
    Digraph::new(ng * nh, &arcs).expect("product of loopless digraphs is loopless")
}

/// Complete graph `K_q` as a symmetric digraph.
pub fn complete_graph(q: usize) -> Digraph {
    assert!(q >= 1, "complete graph needs at least one vertex");
    let mut arcs = Vec::with_capacity(q * q.saturating_sub(1));
    for u in 0..q {
        for v in 0..q {
            if u != v {
                arcs.push((u, v));
            }
        }
    }
    Digraph::new(q, &arcs).unwrap()
}

/// Hamming graph `H(d, q)`: tuples in `Z_q^d`, adjacent iff they differ in
/// exactly one coordinate. Built as the `d`-fold Cartesian product of
/// `K_q`, so the labeled digraph equals that product exactly.
pub fn hamming(d: usize, q: usize) -> Digraph {
    assert!(d >= 1, "Hamming graph needs d >= 1");
    assert!(q >= 2, "Hamming graph needs q >= 2");
    let kq = complete_graph(q);
    let mut g = kq.clone();
    for _ in 1..d {
        g = cartesian_product(&g, &kq);
    }
    g
}

/// The lines of `hamming(d, q)`: for each coordinate position and each
/// fixing of the remaining coordinates, the `q` vertices varying that
/// position. Every edge lies in exactly one line.
pub fn hamming_lines(d: usize, q: usize) -> Vec<Vec<usize>> {
    assert!(d >= 1 && q >= 2);
    let n = q.pow(d as u32);
    let mut lines = Vec::with_capacity(d * n / q);
    for i in 0..d {
        let stride = q.pow((d - 1 - i) as u32);
        for base in 0..n {
            // take each line once, at its vertex with coordinate i = 0
            if (base / stride) % q != 0 {
                continue;
            }
            lines.push((0..q).map(|t| base + t * stride).collect());
        }
    }
    lines
}

/// Folded `n`-cube: the hypercube `Q_{n-1}` plus a perfect matching between
/// antipodal vertices (all `n-1` coordinates flipped). Needs `n >= 3`.
pub fn folded_cube(n: usize) -> Result<Digraph, ConstructError> {
    if n < 3 {
        return Err(ConstructError::FoldedCubeTooSmall { n });
    }
    let dim = n - 1;
    let verts = 1usize << dim;
    let cube = hamming(dim, 2);
    let mut arcs = cube.arcs();
    let antipode = verts - 1;
    for x in 0..verts {
        arcs.push((x, x ^ antipode));
    }
    Ok(Digraph::new(verts, &arcs).unwrap())
}

/// The Shrikhande graph: `Cay(Z4 × Z4, {±(1,0), ±(0,1), ±(1,1)})`.
pub fn shrikhande() -> Digraph {
    let conn: [[i64; 2]; 6] = [[1, 0], [-1, 0], [0, 1], [0, -1], [1, 1], [-1, -1]];
    cayley(&CayleySpec::new(&[4, 4], conn).unwrap())
}

/// Doob graph `G(d1, d2)`: the Cartesian product of `hamming(d2, 4)` (first
/// factor, omitted when `d2 = 0`) with `d1` Shrikhande blocks.
pub fn doob(d1: usize, d2: usize) -> Result<Digraph, ConstructError> {
    if d1 == 0 {
        return Err(ConstructError::DoobNeedsShrikhande);
    }
    let s = shrikhande();
    let mut g = if d2 > 0 { hamming(d2, 4) } else { s.clone() };
    let blocks = if d2 > 0 { d1 } else { d1 - 1 };
    for _ in 0..blocks {
        g = cartesian_product(&g, &s);
    }
    Ok(g)
}

fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    if q % 2 == 0 {
        return q == 2;
    }
    let mut f = 3;
    while f * f <= q {
        if q % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

/// Paley tournament on a prime `q ≡ 3 (mod 4)`: `Cay(Z_q, QR)` where `QR`
/// is the set of nonzero quadratic residues. The congruence condition makes
/// the residues closed under *no* negation, so every pair carries exactly
/// one arc.
pub fn paley_tournament(q: usize) -> Result<Digraph, ConstructError> {
    if !is_prime(q) || q % 4 != 3 {
        return Err(ConstructError::PaleyModulus { q });
    }
    let residues: Vec<[i64; 1]> = (1..q).map(|x| [((x * x) % q) as i64]).collect();
    let spec = CayleySpec::new(&[q as u32], residues).unwrap();
    Ok(cayley(&spec))
}
