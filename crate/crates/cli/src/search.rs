//! Exhaustive search for small amply regular graphs.

use amply::{Detection, Error, Graph, Result};

/// Largest vertex count accepted by [`search_amply`].
pub const SEARCH_LIMIT: usize = 10;

struct Search {
    n: usize,
    d: usize,
    alpha: usize,
    beta: usize,
    adj: Vec<u16>,
    deg: Vec<usize>,
}

impl Search {
    fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    fn set(&mut self, u: usize, v: usize, on: bool) {
        let (bu, bv) = (1u16 << v, 1u16 << u);
        if on {
            self.adj[u] |= bu;
            self.adj[v] |= bv;
            self.deg[u] += 1;
            self.deg[v] += 1;
        } else {
            self.adj[u] &= !bu;
            self.adj[v] &= !bv;
            self.deg[u] -= 1;
            self.deg[v] -= 1;
        }
    }

    fn common(&self, u: usize, v: usize, mask: u16) -> usize {
        (self.adj[u] & self.adj[v] & mask).count_ones() as usize
    }

    /// Checks every pair once row `i` is decided: pairs `(k, i)` exactly,
    /// later pairs against the partial count over decided rows.
    fn consistent(&self, i: usize) -> bool {
        let decided: u16 = ((1u32 << (i + 1)) - 1) as u16;
        for k in 0..i {
            let c = self.common(k, i, u16::MAX);
            let ok = if self.has_edge(k, i) {
                c == self.alpha
            } else {
                c == 0 || c == self.beta
            };
            if !ok {
                return false;
            }
        }
        let loose = self.alpha.max(self.beta);
        for k in 0..self.n {
            for l in (k + 1).max(i + 1)..self.n {
                let limit = if k > i {
                    loose
                } else if self.has_edge(k, l) {
                    self.alpha
                } else {
                    self.beta
                };
                if self.common(k, l, decided) > limit {
                    return false;
                }
            }
        }
        true
    }

    fn row(&mut self, i: usize) -> Option<Graph> {
        if i == self.n {
            return self.accept();
        }
        let need = self.d - self.deg[i];
        let candidates: Vec<usize> = (i + 1..self.n).filter(|&j| self.deg[j] < self.d).collect();
        if need > candidates.len() {
            return None;
        }
        let mut pick: Vec<usize> = (0..need).collect();
        loop {
            for &c in &pick {
                self.set(i, candidates[c], true);
            }
            let found = if self.consistent(i) { self.row(i + 1) } else { None };
            for &c in &pick {
                self.set(i, candidates[c], false);
            }
            if found.is_some() {
                return found;
            }
            if !next_combination(&mut pick, candidates.len()) {
                return None;
            }
        }
    }

    fn accept(&self) -> Option<Graph> {
        let edges = (0..self.n).flat_map(|u| (u + 1..self.n).filter(move |&v| self.has_edge(u, v)).map(move |v| (u, v)));
        let g = Graph::from_edges(self.n, edges.collect::<Vec<_>>()).ok()?;
        match g.detect_amply_params() {
            Ok(Detection::Amply(p))
                if (p.n, p.d, p.alpha, p.beta) == (self.n, self.d, self.alpha, Some(self.beta)) =>
            {
                Some(g)
            }
            _ => None,
        }
    }
}

/// Advances `pick` to the next `k`-subset of `0..n` in lexicographic order.
fn next_combination(pick: &mut [usize], n: usize) -> bool {
    let k = pick.len();
    let Some(i) = (0..k).rev().find(|&i| pick[i] < n - k + i) else {
        return false;
    };
    pick[i] += 1;
    for j in i + 1..k {
        pick[j] = pick[j - 1] + 1;
    }
    true
}

/// First connected amply regular graph with parameters `(n, d, α, β)` in a
/// deterministic exhaustive search, or `None` if there is none.
///
/// Vertex 0 is fixed adjacent to `1..=d`; every other row is enumerated.
pub fn search_amply(n: usize, d: usize, alpha: usize, beta: usize) -> Result<Option<Graph>> {
    if n > SEARCH_LIMIT {
        return Err(Error::SizeLimit {
            size: n,
            limit: SEARCH_LIMIT,
        });
    }
    if d == 0 || d >= n || n * d % 2 == 1 {
        return Ok(None);
    }
    let mut s = Search {
        n,
        d,
        alpha,
        beta,
        adj: vec![0; n],
        deg: vec![0; n],
    };
    for v in 1..=d {
        s.set(0, v, true);
    }
    if !s.consistent(0) {
        return Ok(None);
    }
    Ok(s.row(1))
}
