//! Dense linear sum assignment (Hungarian method with row/column potentials).

use super::hopcroft_karp::Matching;
use crate::error::{Error, Result};

/// Square agent-by-channel utility matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightMatrix {
    n: usize,
    data: Vec<f64>,
}

impl WeightMatrix {
    pub fn new(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::Dimension(format!("{} weights for a {n}x{n} matrix", data.len())));
        }
        if data.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidArgument("weights must be finite".into()));
        }
        Ok(Self { n, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Dimension("weight matrix must be square".into()));
        }
        Self::new(n, rows.concat())
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.n + col]
    }

    pub fn row(&self, row: usize) -> &[f64] {
        &self.data[row * self.n..(row + 1) * self.n]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Assignment {
    pub matching: Matching,
    pub total: f64,
}

impl Assignment {
    pub fn column_of(&self, row: usize) -> usize {
        self.matching.channel_of(row).expect("assignment is perfect")
    }
}

/// Optimal perfect assignment of rows to columns.
pub fn optimal_assignment(w: &WeightMatrix, maximize: bool) -> Assignment {
    let n = w.size();
    if n == 0 {
        return Assignment { matching: Matching::from_pairs(Vec::new(), 0), total: 0.0 };
    }
    let sign = if maximize { -1.0 } else { 1.0 };
    let cost = |i: usize, j: usize| sign * w.data[i * n + j];

    // 1-based potentials; column 0 is a virtual source
    let inf = f64::INFINITY;
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    let mut minv = vec![inf; n + 1];
    let mut used = vec![false; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        minv.iter_mut().for_each(|m| *m = inf);
        used.iter_mut().for_each(|x| *x = false);
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let ui0 = u[i0];
            let mut delta = inf;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - ui0 - v[j];
                    if cur < minv[j] {
                        minv[j] = cur;
                        way[j] = j0;
                    }
                    if minv[j] < delta {
                        delta = minv[j];
                        j1 = j;
                    }
                }
            }
            for j in 0..=n {
                if used[j] {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
            if p[j0] == 0 {
                break;
            }
        }
        loop {
            let j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
            if j0 == 0 {
                break;
            }
        }
    }
    let mut pairs = vec![None; n];
    for j in 1..=n {
        pairs[p[j] - 1] = Some(j - 1);
    }
    let total = pairs.iter().enumerate().map(|(i, c)| w.get(i, c.unwrap())).sum();
    Assignment { matching: Matching::from_pairs(pairs, n), total }
}
