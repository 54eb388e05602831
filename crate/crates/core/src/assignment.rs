//! Exact integer assignment (Hungarian method with row/column potentials).

use crate::error::{Error, Result};

/// Minimum-cost perfect assignment on a square integer cost matrix.
///
/// Returns `(total cost, column assigned to each row)`.
pub fn solve_assignment(costs: &[Vec<i64>]) -> Result<(i64, Vec<usize>)> {
    let n = costs.len();
    if costs.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidArgument("cost matrix is not square".into()));
    }
    if n == 0 {
        return Ok((0, Vec::new()));
    }
    const INF: i64 = i64::MAX / 4;
    // 1-based potentials; column 0 is a virtual start
    let mut u = vec![0i64; n + 1];
    let mut v = vec![0i64; n + 1];
    let mut owner = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for row in 1..=n {
        owner[0] = row;
        let mut col0 = 0;
        let mut minv = vec![INF; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[col0] = true;
            let r = owner[col0];
            let mut delta = INF;
            let mut col1 = 0;
            for j in 1..=n {
                if used[j] {
                    continue;
                }
                let cur = costs[r - 1][j - 1] - u[r] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = col0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    col1 = j;
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[owner[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            col0 = col1;
            if owner[col0] == 0 {
                break;
            }
        }
        loop {
            let col1 = way[col0];
            owner[col0] = owner[col1];
            col0 = col1;
            if col0 == 0 {
                break;
            }
        }
    }
    let mut assignment = vec![0; n];
    for j in 1..=n {
        assignment[owner[j] - 1] = j - 1;
    }
    let total = assignment
        .iter()
        .enumerate()
        .try_fold(0i64, |acc, (i, &j)| acc.checked_add(costs[i][j]))
        .ok_or(Error::Overflow)?;
    Ok((total, assignment))
}
