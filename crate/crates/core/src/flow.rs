//! Integer min-cost flow by successive shortest paths with vertex potentials.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::error::{Error, Result};

#[derive(Debug, Clone)]
struct Arc {
    to: usize,
    cap: i64,
    cost: i64,
    rev: usize,
}

/// Residual network with non-negative arc costs.
#[derive(Debug, Clone)]
pub struct MinCostFlow {
    arcs: Vec<Vec<Arc>>,
}

/// Handle to a forward arc for reading its flow after solving.
#[derive(Debug, Clone, Copy)]
pub struct ArcId {
    from: usize,
    index: usize,
}

impl MinCostFlow {
    pub fn new(nodes: usize) -> Self {
        MinCostFlow {
            arcs: vec![Vec::new(); nodes],
        }
    }

    pub fn add_arc(&mut self, from: usize, to: usize, cap: i64, cost: i64) -> ArcId {
        assert!(cost >= 0, "arc costs must be non-negative");
        let index = self.arcs[from].len();
        let rev = self.arcs[to].len() + usize::from(from == to);
        self.arcs[from].push(Arc { to, cap, cost, rev });
        self.arcs[to].push(Arc {
            to: from,
            cap: 0,
            cost: -cost,
            rev: index,
        });
        ArcId { from, index }
    }

    /// Flow currently on a forward arc.
    pub fn flow(&self, id: ArcId) -> i64 {
        let a = &self.arcs[id.from][id.index];
        self.arcs[a.to][a.rev].cap
    }

    /// Pushes up to `limit` units from `s` to `t` at minimum cost.
    /// Returns `(flow, cost)`.
    pub fn solve(&mut self, s: usize, t: usize, limit: i64) -> Result<(i64, i64)> {
        let n = self.arcs.len();
        let mut potential = vec![0i64; n];
        let mut dist = vec![i64::MAX; n];
        let mut prev: Vec<Option<(usize, usize)>> = vec![None; n];
        let (mut flow, mut cost) = (0i64, 0i64);
        while flow < limit {
            dist.fill(i64::MAX);
            prev.fill(None);
            dist[s] = 0;
            // ties pop the lowest vertex index first
            let mut heap = BinaryHeap::from([Reverse((0i64, s))]);
            while let Some(Reverse((d, u))) = heap.pop() {
                if d > dist[u] {
                    continue;
                }
                for (i, a) in self.arcs[u].iter().enumerate() {
                    if a.cap <= 0 {
                        continue;
                    }
                    let reduced = a.cost + potential[u] - potential[a.to];
                    let nd = d + reduced;
                    if nd < dist[a.to] {
                        dist[a.to] = nd;
                        prev[a.to] = Some((u, i));
                        heap.push(Reverse((nd, a.to)));
                    }
                }
            }
            if dist[t] == i64::MAX {
                break;
            }
            for v in 0..n {
                if dist[v] != i64::MAX {
                    potential[v] += dist[v];
                }
            }
            let mut push = limit - flow;
            let mut v = t;
            while let Some((u, i)) = prev[v] {
                push = push.min(self.arcs[u][i].cap);
                v = u;
            }
            let mut v = t;
            while let Some((u, i)) = prev[v] {
                let rev = self.arcs[u][i].rev;
                self.arcs[u][i].cap -= push;
                self.arcs[v][rev].cap += push;
                v = u;
            }
            flow += push;
            let path_cost = potential[t] - potential[s];
            cost = push
                .checked_mul(path_cost)
                .and_then(|c| c.checked_add(cost))
                .ok_or(Error::Overflow)?;
        }
        Ok((flow, cost))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefers_cheap_paths() {
        // s=0, t=3; two routes of cost 1+1 and 3+0
        let mut f = MinCostFlow::new(4);
        let a = f.add_arc(0, 1, 2, 1);
        f.add_arc(1, 3, 2, 1);
        let b = f.add_arc(0, 2, 5, 3);
        f.add_arc(2, 3, 5, 0);
        assert_eq!(f.solve(0, 3, 4).unwrap(), (4, 2 * 2 + 2 * 3));
        assert_eq!(f.flow(a), 2);
        assert_eq!(f.flow(b), 2);
    }

    #[test]
    fn uses_residual_arcs() {
        // classic case where the greedy first path must be partially undone
        let mut f = MinCostFlow::new(4);
        f.add_arc(0, 1, 1, 0);
        f.add_arc(0, 2, 1, 0);
        f.add_arc(1, 2, 1, 0);
        f.add_arc(1, 3, 1, 5);
        f.add_arc(2, 3, 1, 1);
        assert_eq!(f.solve(0, 3, 2).unwrap(), (2, 6));
    }

    #[test]
    fn stops_at_max_flow() {
        let mut f = MinCostFlow::new(3);
        f.add_arc(0, 1, 3, 2);
        f.add_arc(1, 2, 1, 2);
        assert_eq!(f.solve(0, 2, 10).unwrap(), (1, 4));
    }
}
