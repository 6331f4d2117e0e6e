//! Optimal one-to-one assignment between tracks (rows) and detections
//! (columns).
//!
//! [`hungarian`] solves the rectangular linear assignment problem exactly in
//! `O(n^3)` using the shortest augmenting path formulation with row/column
//! potentials. Among several optimal assignments it returns the one whose
//! row-by-row column choice is lexicographically smallest.

use crate::error::{Error, Result};

/// Cost of the padding cells used to square a rectangular matrix. Any
/// constant gives the same optimum; this one is above every cost derived
/// from a similarity in `[-1, 1]`.
pub const PAD_COST: f64 = 4.0;

const SIMILARITY_SLACK: f64 = 1e-9;

/// Track-by-detection cosine similarities, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityMatrix {
    rows: usize,
    cols: usize,
    values: Vec<f64>,
}

impl SimilarityMatrix {
    /// Values are clamped into `[-1, 1]` after allowing for rounding slack
    /// of dot products between unit vectors; anything further out is
    /// rejected.
    pub fn new(rows: usize, cols: usize, mut values: Vec<f64>) -> Result<Self> {
        if values.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: values.len() });
        }
        for (k, v) in values.iter_mut().enumerate() {
            if !v.is_finite() || v.abs() > 1.0 + SIMILARITY_SLACK {
                return Err(Error::InvalidCost { row: k / cols.max(1), col: k % cols.max(1) });
            }
            *v = v.clamp(-1.0, 1.0);
        }
        Ok(Self { rows, cols, values })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.values[row * self.cols + col]
    }
}

/// Dense row-major cost matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CostMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl CostMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch { expected: rows * cols, found: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::DimensionMismatch { expected: cols, found: bad.len() });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Self { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.data[row * self.cols + col]
    }

    /// Swaps rows `a` and `b` in place.
    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }
}

/// `C = 1 - S`, element-wise.
pub fn cost_from_similarity(s: &SimilarityMatrix) -> CostMatrix {
    CostMatrix { rows: s.rows, cols: s.cols, data: s.values.iter().map(|v| 1.0 - v).collect() }
}

/// A partial one-to-one assignment. `pairs` are `(track, detection)` index
/// pairs sorted by track index; the unmatched lists are sorted ascending.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Assignment {
    pub pairs: Vec<(usize, usize)>,
    pub unmatched_tracks: Vec<usize>,
    pub unmatched_detections: Vec<usize>,
}

impl Assignment {
    pub fn total_cost(&self, c: &CostMatrix) -> f64 {
        self.pairs.iter().map(|&(r, col)| c.get(r, col)).sum()
    }

    /// Detection assigned to `track`, if any.
    pub fn detection_for(&self, track: usize) -> Option<usize> {
        self.pairs.iter().find(|p| p.0 == track).map(|p| p.1)
    }

    /// True when pairs and unmatched lists partition `0..rows` and `0..cols`.
    pub fn is_partition(&self, rows: usize, cols: usize) -> bool {
        let mut seen_r = vec![false; rows];
        let mut seen_c = vec![false; cols];
        let mark = |seen: &mut [bool], i: usize| -> bool {
            match seen.get_mut(i) {
                Some(s) if !*s => {
                    *s = true;
                    true
                }
                _ => false,
            }
        };
        for &(r, c) in &self.pairs {
            if !mark(&mut seen_r, r) || !mark(&mut seen_c, c) {
                return false;
            }
        }
        for &r in &self.unmatched_tracks {
            if !mark(&mut seen_r, r) {
                return false;
            }
        }
        for &c in &self.unmatched_detections {
            if !mark(&mut seen_c, c) {
                return false;
            }
        }
        seen_r.iter().all(|&s| s) && seen_c.iter().all(|&s| s)
    }
}

/// Minimum-total-cost assignment of `min(rows, cols)` pairs.
///
/// Rectangular inputs are padded to square with [`PAD_COST`]; rows or
/// columns left on padding are reported unmatched. Ties between optimal
/// assignments resolve to the lexicographically smallest column sequence
/// taken row by row (padding columns rank after every real column).
pub fn hungarian(c: &CostMatrix) -> Result<Assignment> {
    for r in 0..c.rows {
        for col in 0..c.cols {
            if !c.get(r, col).is_finite() {
                return Err(Error::InvalidCost { row: r, col });
            }
        }
    }
    let n = c.rows.max(c.cols);
    if n == 0 {
        return Ok(Assignment::default());
    }
    let cost = |r: usize, col: usize| -> f64 {
        if r < c.rows && col < c.cols {
            c.get(r, col)
        } else {
            PAD_COST
        }
    };

    let (row_pot, col_pot, mut col_of) = solve_square(n, &cost);

    let scale = c.data.iter().fold(PAD_COST, |m, x| m.max(x.abs()));
    let tol = 1e-9 * scale;
    let tight = |r: usize, col: usize| (cost(r, col) - row_pot[r] - col_pot[col]).abs() <= tol;
    lexicographic_refine(n, c.rows, &tight, &mut col_of);

    let mut out = Assignment::default();
    let mut col_used = vec![false; c.cols];
    for (r, &col) in col_of.iter().enumerate().take(c.rows) {
        if col < c.cols {
            out.pairs.push((r, col));
            col_used[col] = true;
        } else {
            out.unmatched_tracks.push(r);
        }
    }
    out.unmatched_detections = (0..c.cols).filter(|&col| !col_used[col]).collect();
    Ok(out)
}

/// Shortest-augmenting-path Hungarian on an `n x n` matrix. Returns the row
/// and column potentials (dual feasible, tight on the matching) and the
/// column assigned to each row.
fn solve_square(n: usize, cost: &impl Fn(usize, usize) -> f64) -> (Vec<f64>, Vec<f64>, Vec<usize>) {
    // 1-based internally; index 0 is the virtual source column.
    let mut u = vec![0.0; n + 1];
    let mut v = vec![0.0; n + 1];
    let mut p = vec![0usize; n + 1];
    let mut way = vec![0usize; n + 1];
    for i in 1..=n {
        p[0] = i;
        let mut j0 = 0;
        let mut minv = vec![f64::INFINITY; n + 1];
        let mut used = vec![false; n + 1];
        loop {
            used[j0] = true;
            let i0 = p[j0];
            let mut delta = f64::INFINITY;
            let mut j1 = 0;
            for j in 1..=n {
                if !used[j] {
                    let cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
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
    let mut col_of = vec![0usize; n];
    for j in 1..=n {
        col_of[p[j] - 1] = j - 1;
    }
    (u[1..].to_vec(), v[1..].to_vec(), col_of)
}

/// Every perfect matching on tight edges is optimal. Walk rows in order and
/// move each to its smallest tight column for which the remaining unlocked
/// rows can still be perfectly matched.
fn lexicographic_refine(n: usize, real_rows: usize, tight: &impl Fn(usize, usize) -> bool, col_of: &mut [usize]) {
    let mut row_of = vec![0usize; n];
    for (r, &c) in col_of.iter().enumerate() {
        row_of[c] = r;
    }
    // Rows past the real ones are padding; their order is irrelevant.
    for i in 0..real_rows.min(n) {
        let current = col_of[i];
        for j in 0..current {
            if !tight(i, j) {
                continue;
            }
            let r = row_of[j];
            if r < i {
                continue;
            }
            // Tentatively give j to i; row r must reach the column i frees.
            let freed = current;
            let mut trial_col_of = col_of.to_vec();
            let mut trial_row_of = row_of.clone();
            trial_col_of[i] = j;
            trial_row_of[j] = i;
            let mut visited = vec![false; n];
            for k in 0..=i {
                visited[trial_col_of[k]] = true;
            }
            if augment(r, freed, i, tight, &mut trial_col_of, &mut trial_row_of, &mut visited) {
                col_of.copy_from_slice(&trial_col_of);
                row_of = trial_row_of;
                break;
            }
        }
    }
}

/// Kuhn-style DFS: find a new tight column for `row` among rows strictly
/// after `locked`, ending at the free column `free`.
fn augment(
    row: usize,
    free: usize,
    locked: usize,
    tight: &impl Fn(usize, usize) -> bool,
    col_of: &mut [usize],
    row_of: &mut [usize],
    visited: &mut [bool],
) -> bool {
    let n = col_of.len();
    for col in 0..n {
        if visited[col] || !tight(row, col) {
            continue;
        }
        visited[col] = true;
        if col == free {
            col_of[row] = col;
            row_of[col] = row;
            return true;
        }
        let other = row_of[col];
        if other > locked && other != row && augment(other, free, locked, tight, col_of, row_of, visited) {
            col_of[row] = col;
            row_of[col] = row;
            return true;
        }
    }
    false
}

/// Drops every pair whose similarity is strictly below `tau_s`; both sides
/// of a dropped pair become unmatched.
pub fn gate_assignment(a: &Assignment, s: &SimilarityMatrix, tau_s: f64) -> Assignment {
    let mut out = Assignment {
        pairs: Vec::with_capacity(a.pairs.len()),
        unmatched_tracks: a.unmatched_tracks.clone(),
        unmatched_detections: a.unmatched_detections.clone(),
    };
    for &(r, c) in &a.pairs {
        if s.get(r, c) < tau_s {
            out.unmatched_tracks.push(r);
            out.unmatched_detections.push(c);
        } else {
            out.pairs.push((r, c));
        }
    }
    out.unmatched_tracks.sort_unstable();
    out.unmatched_detections.sort_unstable();
    out
}
