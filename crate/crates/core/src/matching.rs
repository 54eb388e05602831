//! Bipartite matchings: Hopcroft–Karp, Hall certificates and König decomposition.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bipartite graph with sides `0..left_n` and `0..right_n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bipartite {
    left_n: usize,
    right_n: usize,
    adj: Vec<Vec<usize>>,
}

impl Bipartite {
    pub fn new<I>(left_n: usize, right_n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); left_n];
        for (l, r) in edges {
            if l >= left_n {
                return Err(Error::VertexOutOfRange { vertex: l, n: left_n });
            }
            if r >= right_n {
                return Err(Error::VertexOutOfRange { vertex: r, n: right_n });
            }
            adj[l].push(r);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Bipartite { left_n, right_n, adj })
    }

    pub fn left_n(&self) -> usize {
        self.left_n
    }

    pub fn right_n(&self) -> usize {
        self.right_n
    }

    pub fn neighbors(&self, l: usize) -> &[usize] {
        &self.adj[l]
    }

    pub fn has_edge(&self, l: usize, r: usize) -> bool {
        l < self.left_n && self.adj[l].binary_search(&r).is_ok()
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(l, rs)| rs.iter().map(move |&r| (l, r)))
            .collect()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum()
    }

    pub fn left_degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn right_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.right_n];
        for rs in &self.adj {
            for &r in rs {
                deg[r] += 1;
            }
        }
        deg
    }

    pub fn min_degree(&self) -> usize {
        self.left_degrees()
            .into_iter()
            .chain(self.right_degrees())
            .min()
            .unwrap_or(0)
    }

    /// Common degree of every vertex on both sides, if there is one.
    pub fn regular_degree(&self) -> Option<usize> {
        let mut all = self.left_degrees().into_iter().chain(self.right_degrees());
        let k = all.next()?;
        all.all(|d| d == k).then_some(k)
    }

    fn without(&self, m: &Matching) -> Bipartite {
        let adj = self
            .adj
            .iter()
            .enumerate()
            .map(|(l, rs)| rs.iter().copied().filter(|&r| m.left[l] != Some(r)).collect())
            .collect();
        Bipartite {
            left_n: self.left_n,
            right_n: self.right_n,
            adj,
        }
    }
}

/// A partial injection left → right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(into = "Vec<(usize, usize)>", try_from = "MatchingRepr")]
pub struct Matching {
    left: Vec<Option<usize>>,
    right: Vec<Option<usize>>,
}

#[derive(Deserialize)]
struct MatchingRepr(Vec<(usize, usize)>);

impl TryFrom<MatchingRepr> for Matching {
    type Error = Error;
    fn try_from(repr: MatchingRepr) -> Result<Self> {
        let left_n = repr.0.iter().map(|p| p.0 + 1).max().unwrap_or(0);
        let right_n = repr.0.iter().map(|p| p.1 + 1).max().unwrap_or(0);
        Matching::from_pairs(left_n, right_n, repr.0)
    }
}

impl From<Matching> for Vec<(usize, usize)> {
    fn from(m: Matching) -> Self {
        m.pairs().collect()
    }
}

impl Matching {
    pub fn empty(left_n: usize, right_n: usize) -> Self {
        Matching {
            left: vec![None; left_n],
            right: vec![None; right_n],
        }
    }

    /// Builds a matching from pairs, rejecting any vertex covered twice.
    pub fn from_pairs<I>(left_n: usize, right_n: usize, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut m = Matching::empty(left_n, right_n);
        for (l, r) in pairs {
            if l >= left_n || r >= right_n {
                return Err(Error::VertexOutOfRange {
                    vertex: l.max(r),
                    n: left_n.min(right_n),
                });
            }
            if m.left[l].is_some() || m.right[r].is_some() {
                return Err(Error::Precondition(format!(
                    "vertex covered twice by pair ({l}, {r})"
                )));
            }
            m.left[l] = Some(r);
            m.right[r] = Some(l);
        }
        Ok(m)
    }

    pub fn len(&self) -> usize {
        self.left.iter().flatten().count()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Pairs `(left, right)` in increasing left order.
    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.left
            .iter()
            .enumerate()
            .filter_map(|(l, r)| r.map(|r| (l, r)))
    }

    pub fn right_of(&self, l: usize) -> Option<usize> {
        self.left.get(l).copied().flatten()
    }

    pub fn left_of(&self, r: usize) -> Option<usize> {
        self.right.get(r).copied().flatten()
    }

    pub fn contains(&self, l: usize, r: usize) -> bool {
        self.right_of(l) == Some(r)
    }

    pub fn is_perfect(&self) -> bool {
        self.left.len() == self.right.len() && self.left.iter().all(Option::is_some)
    }

    /// Checks that every pair is an edge of `b` and sizes agree.
    pub fn validate(&self, b: &Bipartite) -> Result<()> {
        if self.left.len() != b.left_n || self.right.len() != b.right_n {
            return Err(Error::Precondition("matching sized for another graph".into()));
        }
        if let Some((l, r)) = self.pairs().find(|&(l, r)| !b.has_edge(l, r)) {
            return Err(Error::Precondition(format!("pair ({l}, {r}) is not an edge")));
        }
        Ok(())
    }
}

/// Maximum-cardinality matching by Hopcroft–Karp. Neighbours are scanned
/// in increasing order, so the result depends only on the input.
pub fn max_matching(b: &Bipartite) -> Matching {
    let mut m = Matching::empty(b.left_n, b.right_n);
    let mut layer = vec![usize::MAX; b.left_n];
    loop {
        // BFS from free left vertices
        let mut queue = VecDeque::new();
        for l in 0..b.left_n {
            if m.left[l].is_none() {
                layer[l] = 0;
                queue.push_back(l);
            } else {
                layer[l] = usize::MAX;
            }
        }
        let mut found = false;
        while let Some(l) = queue.pop_front() {
            for &r in &b.adj[l] {
                match m.right[r] {
                    None => found = true,
                    Some(next) if layer[next] == usize::MAX => {
                        layer[next] = layer[l] + 1;
                        queue.push_back(next);
                    }
                    _ => {}
                }
            }
        }
        if !found {
            return m;
        }
        let mut cursor = vec![0usize; b.left_n];
        for l in 0..b.left_n {
            if m.left[l].is_none() {
                augment(b, &mut m, &mut layer, &mut cursor, l);
            }
        }
    }
}

fn augment(
    b: &Bipartite,
    m: &mut Matching,
    layer: &mut [usize],
    cursor: &mut [usize],
    l: usize,
) -> bool {
    while cursor[l] < b.adj[l].len() {
        let r = b.adj[l][cursor[l]];
        cursor[l] += 1;
        let ok = match m.right[r] {
            None => true,
            Some(next) => {
                layer[next] == layer[l].wrapping_add(1) && augment(b, m, layer, cursor, next)
            }
        };
        if ok {
            m.left[l] = Some(r);
            m.right[r] = Some(l);
            return true;
        }
    }
    layer[l] = usize::MAX;
    false
}

/// A left set `S` with `|Γ(S)| < |S|`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallViolator {
    pub set: Vec<usize>,
    pub neighborhood: Vec<usize>,
}

/// `None` when a perfect matching exists, otherwise a Hall violator built
/// from the vertices alternating-reachable from an unmatched left vertex.
pub fn hall_violator(b: &Bipartite) -> Result<Option<HallViolator>> {
    if b.left_n != b.right_n {
        return Err(Error::SideSizesDiffer {
            left: b.left_n,
            right: b.right_n,
        });
    }
    let m = max_matching(b);
    let Some(start) = (0..b.left_n).find(|&l| m.left[l].is_none()) else {
        return Ok(None);
    };
    let mut in_set = vec![false; b.left_n];
    let mut in_nbhd = vec![false; b.right_n];
    let mut queue = VecDeque::from([start]);
    in_set[start] = true;
    while let Some(l) = queue.pop_front() {
        for &r in &b.adj[l] {
            if !in_nbhd[r] {
                in_nbhd[r] = true;
                // maximum matching: every reachable right vertex is matched
                let next = m.right[r].expect("augmenting path in maximum matching");
                if !in_set[next] {
                    in_set[next] = true;
                    queue.push_back(next);
                }
            }
        }
    }
    let set: Vec<usize> = (0..b.left_n).filter(|&l| in_set[l]).collect();
    let neighborhood: Vec<usize> = (0..b.right_n).filter(|&r| in_nbhd[r]).collect();
    debug_assert!(neighborhood.len() < set.len());
    Ok(Some(HallViolator { set, neighborhood }))
}

/// Lexicographically smallest perfect matching (comparing the left→right
/// assignment vector), or `None` if no perfect matching exists.
pub fn lex_min_perfect_matching(b: &Bipartite) -> Option<Matching> {
    let mut m = max_matching(b);
    if !m.is_perfect() {
        return None;
    }
    let n = b.left_n;
    let mut fixed_right = vec![false; n];
    let mut via = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    for i in 0..n {
        let current = m.left[i].unwrap();
        for &r in &b.adj[i] {
            if r >= current {
                break;
            }
            if fixed_right[r] {
                continue;
            }
            // Forcing i–r frees `current` and unmatches u = m.right[r];
            // look for an alternating path u → … → current avoiding fixed
            // vertices and r.
            let u = m.right[r].unwrap();
            seen.fill(false);
            seen[r] = true;
            let mut queue = VecDeque::from([u]);
            let mut reached = false;
            'search: while let Some(a) = queue.pop_front() {
                for &c in &b.adj[a] {
                    if seen[c] || fixed_right[c] || m.left[a] == Some(c) {
                        continue;
                    }
                    seen[c] = true;
                    via[c] = a;
                    if c == current {
                        reached = true;
                        break 'search;
                    }
                    queue.push_back(m.right[c].unwrap());
                }
            }
            if reached {
                let mut c = current;
                loop {
                    let a = via[c];
                    let prev = m.left[a].unwrap();
                    m.left[a] = Some(c);
                    m.right[c] = Some(a);
                    if a == u {
                        break;
                    }
                    c = prev;
                }
                m.left[i] = Some(r);
                m.right[r] = Some(i);
                break;
            }
        }
        fixed_right[m.left[i].unwrap()] = true;
    }
    Some(m)
}

/// Splits a `k`-regular bipartite graph into `k` edge-disjoint perfect
/// matchings, peeling the lexicographically smallest one each round.
pub fn konig_decomposition(b: &Bipartite) -> Result<Vec<Matching>> {
    if b.left_n != b.right_n {
        return Err(Error::SideSizesDiffer {
            left: b.left_n,
            right: b.right_n,
        });
    }
    let k = match b.regular_degree() {
        Some(k) if k >= 1 => k,
        _ => return Err(Error::BipartiteNotRegular),
    };
    let mut rest = b.clone();
    let mut classes = Vec::with_capacity(k);
    for _ in 0..k {
        let m = lex_min_perfect_matching(&rest).ok_or(Error::NotPerfect)?;
        rest = rest.without(&m);
        classes.push(m);
    }
    // self-check: a partition of E into perfect matchings
    let mut cover = vec![vec![0u32; b.right_n]; b.left_n];
    for m in &classes {
        m.validate(b)?;
        if !m.is_perfect() {
            return Err(Error::Certificate("decomposition class not perfect".into()));
        }
        for (l, r) in m.pairs() {
            cover[l][r] += 1;
        }
    }
    let total: usize = classes.iter().map(Matching::len).sum();
    if rest.edge_count() != 0
        || total != b.edge_count()
        || b.edges().iter().any(|&(l, r)| cover[l][r] != 1)
    {
        return Err(Error::Certificate("decomposition does not partition the edges".into()));
    }
    Ok(classes)
}

/// A perfect matching containing the edge `(l, r)`: the decomposition class
/// that owns it.
pub fn matching_through_edge(b: &Bipartite, edge: (usize, usize)) -> Result<Matching> {
    if !b.has_edge(edge.0, edge.1) {
        return Err(Error::NotAnEdge(edge.0, edge.1));
    }
    konig_decomposition(b)?
        .into_iter()
        .find(|m| m.contains(edge.0, edge.1))
        .ok_or_else(|| Error::Certificate("no decomposition class covers the edge".into()))
}

/// Perfect matching of a balanced bipartite graph with minimum degree at
/// least half the side size.
pub fn dense_perfect_matching(b: &Bipartite) -> Result<Matching> {
    if b.left_n != b.right_n {
        return Err(Error::SideSizesDiffer {
            left: b.left_n,
            right: b.right_n,
        });
    }
    let n = b.left_n;
    let min = b.min_degree();
    if n > 0 && 2 * min < n {
        return Err(Error::Precondition(format!(
            "minimum degree {min} is below half of the side size {n}"
        )));
    }
    let m = max_matching(b);
    if !m.is_perfect() {
        return Err(Error::NotPerfect);
    }
    Ok(m)
}
