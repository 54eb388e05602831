//! Simple undirected graphs, BFS metrics and amply-regular parameter detection.

use std::collections::VecDeque;
use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Immutable simple undirected graph on vertices `0..n`.
///
/// Per-source BFS distances are computed on first use and cached; the cache
/// is safe to populate from several threads at once.
#[derive(Debug, Clone)]
pub struct Graph {
    adjacency: Vec<Vec<usize>>,
    labels: Option<Vec<String>>,
    distances: Vec<OnceLock<Vec<Option<usize>>>>,
}

impl PartialEq for Graph {
    fn eq(&self, other: &Self) -> bool {
        self.adjacency == other.adjacency
    }
}

impl Eq for Graph {}

impl Graph {
    /// Builds a graph from an edge list. Duplicate edges collapse.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adjacency = vec![Vec::new(); n];
        for (u, v) in edges {
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(Error::LoopEdge { line: 0, vertex: u });
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
        }
        Ok(Self::from_adjacency_unchecked(adjacency))
    }

    fn from_adjacency_unchecked(mut adjacency: Vec<Vec<usize>>) -> Self {
        for list in &mut adjacency {
            list.sort_unstable();
            list.dedup();
        }
        let distances = (0..adjacency.len()).map(|_| OnceLock::new()).collect();
        Graph {
            adjacency,
            labels: None,
            distances,
        }
    }

    /// Attaches human-readable vertex labels (e.g. Hamming tuples).
    pub fn with_labels(mut self, labels: Vec<String>) -> Self {
        assert_eq!(labels.len(), self.n(), "one label per vertex");
        self.labels = Some(labels);
        self
    }

    pub fn label(&self, v: usize) -> Option<&str> {
        self.labels.as_ref().map(|l| l[v].as_str())
    }

    pub fn n(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adjacency.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && self.adjacency[u].binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.adjacency
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
            .collect()
    }

    /// The common degree, if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        let d = self.adjacency.first()?.len();
        self.adjacency.iter().all(|l| l.len() == d).then_some(d)
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n() {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange {
                vertex: v,
                n: self.n(),
            })
        }
    }

    pub(crate) fn check_edge(&self, u: usize, v: usize) -> Result<()> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if self.has_edge(u, v) {
            Ok(())
        } else {
            Err(Error::NotAnEdge(u, v))
        }
    }

    /// BFS distances from `source`; `None` marks unreachable vertices.
    pub fn distances_from(&self, source: usize) -> &[Option<usize>] {
        self.distances[source].get_or_init(|| {
            let mut dist = vec![None; self.n()];
            let mut queue = VecDeque::new();
            dist[source] = Some(0);
            queue.push_back(source);
            while let Some(u) = queue.pop_front() {
                let du = dist[u].unwrap();
                for &w in &self.adjacency[u] {
                    if dist[w].is_none() {
                        dist[w] = Some(du + 1);
                        queue.push_back(w);
                    }
                }
            }
            dist
        })
    }

    /// Shortest-path length, `None` when `u` and `v` are in different components.
    pub fn distance(&self, u: usize, v: usize) -> Result<Option<usize>> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        Ok(self.dist(u, v))
    }

    pub(crate) fn dist(&self, u: usize, v: usize) -> Option<usize> {
        self.distances_from(u)[v]
    }

    /// Fills the distance cache for every source in parallel.
    pub fn warm_distances(&self) {
        use rayon::prelude::*;
        (0..self.n()).into_par_iter().for_each(|s| {
            self.distances_from(s);
        });
    }

    pub fn is_connected(&self) -> bool {
        self.n() > 0 && self.distances_from(0).iter().all(Option::is_some)
    }

    pub(crate) fn require_connected(&self) -> Result<()> {
        if self.n() == 0 {
            Err(Error::EmptyGraph)
        } else if self.is_connected() {
            Ok(())
        } else {
            Err(Error::Disconnected)
        }
    }

    pub fn diameter(&self) -> Result<usize> {
        self.require_connected()?;
        Ok((0..self.n())
            .map(|s| self.distances_from(s).iter().flatten().copied().max().unwrap_or(0))
            .max()
            .unwrap_or(0))
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let n = self.n();
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        let mut queue = VecDeque::new();
        for root in 0..n {
            dist.fill(usize::MAX);
            parent.fill(usize::MAX);
            dist[root] = 0;
            queue.clear();
            queue.push_back(root);
            'bfs: while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break 'bfs;
                    }
                }
                for &w in &self.adjacency[u] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Sorted intersection of the neighbourhoods of `u` and `v`.
    pub fn common_neighbors(&self, u: usize, v: usize) -> Vec<usize> {
        let (a, b) = (&self.adjacency[u], &self.adjacency[v]);
        let (mut i, mut j) = (0, 0);
        let mut out = Vec::new();
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out
    }

    fn common_count(&self, u: usize, v: usize) -> usize {
        let (a, b) = (&self.adjacency[u], &self.adjacency[v]);
        let (mut i, mut j, mut c) = (0, 0, 0);
        while i < a.len() && j < b.len() {
            match a[i].cmp(&b[j]) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    c += 1;
                    i += 1;
                    j += 1;
                }
            }
        }
        c
    }

    /// Checks regularity and constancy of common-neighbour counts on
    /// adjacent pairs and on distance-2 pairs.
    pub fn detect_amply_params(&self) -> Result<Detection> {
        self.require_connected()?;
        let n = self.n();
        let d = self.degree(0);
        if let Some(v) = (0..n).find(|&v| self.degree(v) != d) {
            return Ok(Detection::Violation(Violation::NotRegular {
                first: (0, d),
                other: (v, self.degree(v)),
            }));
        }
        let mut alpha: Option<((usize, usize), usize)> = None;
        let mut beta: Option<((usize, usize), usize)> = None;
        for u in 0..n {
            let dist = self.distances_from(u);
            for v in u + 1..n {
                match dist[v] {
                    Some(1) => {
                        let c = self.common_count(u, v);
                        match alpha {
                            None => alpha = Some(((u, v), c)),
                            Some((pair, a)) if a != c => {
                                return Ok(Detection::Violation(Violation::Alpha {
                                    first: (pair, a),
                                    other: ((u, v), c),
                                }))
                            }
                            _ => {}
                        }
                    }
                    Some(2) => {
                        let c = self.common_count(u, v);
                        match beta {
                            None => beta = Some(((u, v), c)),
                            Some((pair, b)) if b != c => {
                                return Ok(Detection::Violation(Violation::Beta {
                                    first: (pair, b),
                                    other: ((u, v), c),
                                }))
                            }
                            _ => {}
                        }
                    }
                    _ => {}
                }
            }
        }
        Ok(Detection::Amply(AmplyParams {
            n,
            d,
            alpha: alpha.map_or(0, |(_, a)| a),
            beta: beta.map(|(_, b)| b),
            girth: self.girth(),
            connected: true,
        }))
    }

    /// Like [`Graph::detect_amply_params`] but turns a violation into an error.
    pub fn amply_params(&self) -> Result<AmplyParams> {
        match self.detect_amply_params()? {
            Detection::Amply(p) => Ok(p),
            Detection::Violation(v) => Err(Error::Hypothesis(format!("not amply regular: {v}"))),
        }
    }

    /// The neighbourhood split `Δ_xy`, `N_x`, `N_y` around the edge `xy`.
    pub fn edge_partition(&self, x: usize, y: usize) -> Result<EdgeNeighborhoodPartition> {
        self.check_edge(x, y)?;
        let delta = self.common_neighbors(x, y);
        let exclusive = |a: usize, b: usize| -> Vec<usize> {
            self.adjacency[a]
                .iter()
                .copied()
                .filter(|&w| w != b && !self.has_edge(b, w))
                .collect()
        };
        Ok(EdgeNeighborhoodPartition {
            x,
            y,
            nx: exclusive(x, y),
            ny: exclusive(y, x),
            delta,
        })
    }

    /// Serializes as the `n m` / `u v` edge-list format.
    pub fn to_edge_list(&self) -> String {
        let edges = self.edges();
        let mut out = format!("{} {}\n", self.n(), edges.len());
        for (u, v) in edges {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    /// Returns the graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Graph> {
        let n = self.n();
        let mut seen = vec![false; n];
        if perm.len() != n || perm.iter().any(|&p| p >= n || std::mem::replace(&mut seen[p], true)) {
            return Err(Error::InvalidArgument("not a permutation".into()));
        }
        Graph::from_edges(n, self.edges().into_iter().map(|(u, v)| (perm[u], perm[v])))
    }
}

/// Parses the edge-list text format.
///
/// The first non-comment line is `n m`, followed by `m` lines `u v`.
/// Lines beginning with `#` and blank lines are skipped.
pub fn load_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let parse_pair = |line: usize, l: &str| -> Result<(usize, usize)> {
        let mut it = l.split_whitespace();
        let mut next = || -> Result<usize> {
            let tok = it.next().ok_or_else(|| Error::Parse {
                line,
                message: "expected two integers".into(),
            })?;
            tok.parse().map_err(|_| Error::Parse {
                line,
                message: format!("not a non-negative integer: {tok:?}"),
            })
        };
        let pair = (next()?, next()?);
        if it.next().is_some() {
            return Err(Error::Parse {
                line,
                message: "trailing tokens".into(),
            });
        }
        Ok(pair)
    };

    let (header_line, header) = lines.next().ok_or(Error::Parse {
        line: 0,
        message: "missing `n m` header".into(),
    })?;
    let (n, m) = parse_pair(header_line, header)?;
    let mut adjacency = vec![Vec::new(); n];
    let mut last_line = header_line;
    for _ in 0..m {
        let (line, l) = lines.next().ok_or(Error::Parse {
            line: last_line,
            message: format!("expected {m} edges"),
        })?;
        last_line = line;
        let (u, v) = parse_pair(line, l)?;
        for index in [u, v] {
            if index >= n {
                return Err(Error::IndexOutOfRange { line, index, n });
            }
        }
        if u == v {
            return Err(Error::LoopEdge { line, vertex: u });
        }
        adjacency[u].push(v);
        adjacency[v].push(u);
    }
    if let Some((line, _)) = lines.next() {
        return Err(Error::Parse {
            line,
            message: format!("more than {m} edges"),
        });
    }
    Ok(Graph::from_adjacency_unchecked(adjacency))
}

/// Detected `(n, d, α, β)` of a connected amply regular graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AmplyParams {
    pub n: usize,
    pub d: usize,
    pub alpha: usize,
    /// Absent when the graph has no pair at distance 2.
    pub beta: Option<usize>,
    pub girth: Option<usize>,
    pub connected: bool,
}

impl AmplyParams {
    /// Intersection number `b₁ = d − α − 1`, which is also `|N_x|`.
    pub fn b1(&self) -> usize {
        self.d - self.alpha - 1
    }

    /// Intersection number `c₂ = β`.
    pub fn c2(&self) -> Option<usize> {
        self.beta
    }

    /// `β > α ≥ 1`: the hypothesis of the transport-bipartite construction.
    pub fn beta_exceeds_alpha_ge_one(&self) -> bool {
        matches!(self.beta, Some(b) if b > self.alpha && self.alpha >= 1)
    }
}

impl fmt::Display for AmplyParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.beta {
            Some(b) => write!(f, "({},{},{},{})", self.n, self.d, self.alpha, b),
            None => write!(f, "({},{},{},-)", self.n, self.d, self.alpha),
        }
    }
}

/// Result of [`Graph::detect_amply_params`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Detection {
    Amply(AmplyParams),
    Violation(Violation),
}

/// The first pair found breaking amply regularity, with both counts.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    NotRegular {
        first: (usize, usize),
        other: (usize, usize),
    },
    Alpha {
        first: ((usize, usize), usize),
        other: ((usize, usize), usize),
    },
    Beta {
        first: ((usize, usize), usize),
        other: ((usize, usize), usize),
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NotRegular { first, other } => write!(
                f,
                "not regular: deg({}) = {} but deg({}) = {}",
                first.0, first.1, other.0, other.1
            ),
            Violation::Alpha { first, other } => write!(
                f,
                "adjacent pairs {}-{} and {}-{} have {} and {} common neighbors",
                first.0 .0, first.0 .1, other.0 .0, other.0 .1, first.1, other.1
            ),
            Violation::Beta { first, other } => write!(
                f,
                "distance-2 pairs {}-{} and {}-{} have {} and {} common neighbors",
                first.0 .0, first.0 .1, other.0 .0, other.0 .1, first.1, other.1
            ),
        }
    }
}

/// `Δ_xy = Γ(x) ∩ Γ(y)`, `N_x = Γ(x) \ ({y} ∪ Γ(y))`, `N_y` symmetric.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeNeighborhoodPartition {
    pub x: usize,
    pub y: usize,
    pub delta: Vec<usize>,
    pub nx: Vec<usize>,
    pub ny: Vec<usize>,
}
