//! Deterministic constructors for the graph families used as test instances.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const DEFAULT_SIZE_LIMIT: usize = 100_000;

/// Hamming graph `H(p, q)`: `p`-tuples over `0..q`, adjacent at Hamming distance 1.
///
/// Tuple `(a₁, …, a_p)` gets index `Σ aᵢ q^(p−i)`, i.e. lexicographic order.
pub fn gen_hamming(p: usize, q: usize) -> Result<Graph> {
    gen_hamming_with_limit(p, q, DEFAULT_SIZE_LIMIT)
}

pub fn gen_hamming_with_limit(p: usize, q: usize, limit: usize) -> Result<Graph> {
    if p < 1 || q < 2 {
        return Err(Error::InvalidArgument(format!(
            "hamming needs p >= 1 and q >= 2, got p = {p}, q = {q}"
        )));
    }
    let n = u32::try_from(p)
        .ok()
        .and_then(|p| q.checked_pow(p))
        .filter(|&n| n <= limit)
        .ok_or(Error::SizeLimit {
            size: (q as f64).powi(p as i32).min(usize::MAX as f64) as usize,
            limit,
        })?;
    let mut edges = Vec::with_capacity(n * p * (q - 1) / 2);
    let mut stride = 1;
    for _ in 0..p {
        for v in 0..n {
            let digit = (v / stride) % q;
            for higher in digit + 1..q {
                edges.push((v, v + (higher - digit) * stride));
            }
        }
        stride *= q;
    }
    let labels = (0..n)
        .map(|v| {
            let mut digits = Vec::with_capacity(p);
            let mut rest = v;
            for _ in 0..p {
                digits.push(rest % q);
                rest /= q;
            }
            digits.reverse();
            let parts: Vec<String> = digits.iter().map(usize::to_string).collect();
            format!("({})", parts.join(","))
        })
        .collect();
    Ok(Graph::from_edges(n, edges)?.with_labels(labels))
}

/// `k`-dimensional hypercube `Q_k = H(k, 2)`.
pub fn gen_hypercube(k: usize) -> Result<Graph> {
    gen_hamming(k, 2)
}

pub fn gen_hypercube_with_limit(k: usize, limit: usize) -> Result<Graph> {
    gen_hamming_with_limit(k, 2, limit)
}

pub(crate) fn is_prime(q: usize) -> bool {
    if q < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= q {
        if q.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Paley graph on the integers mod a prime `q ≡ 1 (mod 4)`.
pub fn gen_paley(q: usize) -> Result<Graph> {
    if !is_prime(q) {
        return Err(Error::InvalidArgument(format!("paley: {q} is not prime")));
    }
    if q % 4 != 1 {
        return Err(Error::InvalidArgument(format!("paley: {q} is not 1 mod 4")));
    }
    let mut residue = vec![false; q];
    for i in 1..q {
        residue[i * i % q] = true;
    }
    let edges = (0..q).flat_map(|u| {
        let residue = &residue;
        (u + 1..q).filter(move |&v| residue[v - u]).map(move |v| (u, v))
    });
    Graph::from_edges(q, edges)
}

/// Shrikhande graph: Cayley graph on `Z₄ × Z₄` with connection set
/// `{±(1,0), ±(0,1), ±(1,1)}`. Vertex `(a, b)` has index `4a + b`.
pub fn gen_shrikhande() -> Graph {
    let idx = |a: usize, b: usize| 4 * (a % 4) + (b % 4);
    let mut edges = Vec::new();
    for a in 0..4 {
        for b in 0..4 {
            for (da, db) in [(1, 0), (0, 1), (1, 1)] {
                edges.push((idx(a, b), idx(a + da, b + db)));
            }
        }
    }
    let labels = (0..16).map(|v| format!("({},{})", v / 4, v % 4)).collect();
    Graph::from_edges(16, edges)
        .expect("shrikhande edges are in range")
        .with_labels(labels)
}

/// Cocktail-party graph `K_{m×2}`: vertices `2i` and `2i+1` are the only non-adjacent pairs.
pub fn gen_cocktail(m: usize) -> Result<Graph> {
    if m < 2 {
        return Err(Error::InvalidArgument(format!("cocktail needs m >= 2, got {m}")));
    }
    let n = 2 * m;
    let edges = (0..n).flat_map(|u| (u + 1..n).filter(move |&v| v / 2 != u / 2).map(move |v| (u, v)));
    Graph::from_edges(n, edges)
}

pub fn gen_complete(n: usize) -> Result<Graph> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("complete needs n >= 2, got {n}")));
    }
    Graph::from_edges(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
}

pub fn gen_cycle(n: usize) -> Result<Graph> {
    if n < 3 {
        return Err(Error::InvalidArgument(format!("cycle needs n >= 3, got {n}")));
    }
    Graph::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
}
