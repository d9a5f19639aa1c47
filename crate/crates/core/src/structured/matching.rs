//! Maximum-weight perfect matching on a complete bipartite graph
//! (the assignment problem), Hungarian method with potentials, `O(r³)`.

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub value: i64,
    /// `columns[row]` is the column matched to `row`.
    pub columns: Vec<usize>,
}

/// Maximizes `Σ weights[i][columns[i]]` over permutations.
pub fn max_weight_perfect_matching(weights: &[Vec<i64>]) -> Result<Assignment> {
    let r = weights.len();
    if let Some(row) = weights.iter().find(|row| row.len() != r) {
        return Err(Error::InvalidParameter(format!(
            "weight matrix must be square: {r} rows but a row of length {}",
            row.len()
        )));
    }
    if r == 0 {
        return Ok(Assignment { value: 0, columns: Vec::new() });
    }
    // min-cost on negated weights; rows/cols are 1-based, index 0 is the sentinel
    let cost = |i: usize, j: usize| -weights[i - 1][j - 1];
    let mut u = vec![0i64; r + 1];
    let mut v = vec![0i64; r + 1];
    let mut row_of = vec![0usize; r + 1];
    let mut way = vec![0usize; r + 1];
    for i in 1..=r {
        row_of[0] = i;
        let mut j0 = 0;
        let mut minv = vec![i64::MAX; r + 1];
        let mut used = vec![false; r + 1];
        loop {
            used[j0] = true;
            let i0 = row_of[j0];
            let mut delta = i64::MAX;
            let mut j1 = 0;
            for j in 1..=r {
                if used[j] {
                    continue;
                }
                let cur = cost(i0, j) - u[i0] - v[j];
                if cur < minv[j] {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if minv[j] < delta {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for j in 0..=r {
                if used[j] {
                    u[row_of[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if row_of[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            row_of[j0] = row_of[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut columns = vec![0; r];
    for j in 1..=r {
        columns[row_of[j] - 1] = j - 1;
    }
    let value = columns.iter().enumerate().map(|(i, &j)| weights[i][j]).sum();
    Ok(Assignment { value, columns })
}
