//! Smith normal form of integer matrices.

use crate::error::{Error, Result};

pub type Matrix = Vec<Vec<i128>>;

/// Invariant factors of an integer matrix, optionally with unimodular
/// witnesses `left * input * right == diagonal`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    /// Nonzero diagonal entries, each dividing the next.
    pub factors: Vec<i128>,
    pub witnesses: Option<Witnesses>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witnesses {
    pub left: Matrix,
    pub right: Matrix,
    pub diagonal: Matrix,
}

pub fn identity(n: usize) -> Matrix {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

pub fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| (0..inner).map(|k| row[k] * b[k][j]).sum())
                .collect()
        })
        .collect()
}

/// Checks that every row has the same length. Returns `(rows, cols)`.
pub fn shape(m: &Matrix) -> Result<(usize, usize)> {
    let cols = m.first().map_or(0, Vec::len);
    if m.iter().any(|r| r.len() != cols) {
        return Err(Error::InvalidMatrix("rows have different lengths".into()));
    }
    Ok((m.len(), cols))
}

struct Reducer {
    a: Matrix,
    left: Option<Matrix>,
    right: Option<Matrix>,
    rows: usize,
    cols: usize,
}

impl Reducer {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        if let Some(l) = &mut self.left {
            l.swap(i, j);
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for row in &mut self.a {
            row.swap(i, j);
        }
        if let Some(r) = &mut self.right {
            for row in r.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    /// row[target] -= k * row[source]
    fn add_row(&mut self, target: usize, source: usize, k: i128) {
        for j in 0..self.cols {
            let v = self.a[source][j];
            self.a[target][j] -= k * v;
        }
        if let Some(l) = &mut self.left {
            let src = l[source].clone();
            for (t, v) in l[target].iter_mut().zip(src) {
                *t -= k * v;
            }
        }
    }

    /// col[target] -= k * col[source]
    fn add_col(&mut self, target: usize, source: usize, k: i128) {
        for i in 0..self.rows {
            let v = self.a[i][source];
            self.a[i][target] -= k * v;
        }
        if let Some(r) = &mut self.right {
            for row in r.iter_mut() {
                let v = row[source];
                row[target] -= k * v;
            }
        }
    }

    fn negate_row(&mut self, i: usize) {
        for v in &mut self.a[i] {
            *v = -*v;
        }
        if let Some(l) = &mut self.left {
            for v in &mut l[i] {
                *v = -*v;
            }
        }
    }

    fn smallest_nonzero(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let v = self.a[i][j];
                if v != 0 && best.is_none_or(|(bi, bj)| v.abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }

    fn run(&mut self) {
        for t in 0..self.rows.min(self.cols) {
            let Some((pi, pj)) = self.smallest_nonzero(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            loop {
                // Clear column t and row t; whenever a remainder survives it is
                // smaller than the pivot, so move it into the pivot position.
                let mut moved = false;
                for i in t + 1..self.rows {
                    let q = self.a[i][t].div_euclid(self.a[t][t]);
                    self.add_row(i, t, q);
                    if self.a[i][t] != 0 {
                        self.swap_rows(t, i);
                        moved = true;
                    }
                }
                for j in t + 1..self.cols {
                    let q = self.a[t][j].div_euclid(self.a[t][t]);
                    self.add_col(j, t, q);
                    if self.a[t][j] != 0 {
                        self.swap_cols(t, j);
                        moved = true;
                    }
                }
                if moved {
                    continue;
                }
                let pivot = self.a[t][t];
                let offender = (t + 1..self.rows)
                    .find(|&i| (t + 1..self.cols).any(|j| self.a[i][j] % pivot != 0));
                match offender {
                    Some(i) => self.add_row(t, i, -1),
                    None => break,
                }
            }
            if self.a[t][t] < 0 {
                self.negate_row(t);
            }
        }
    }
}

/// Computes the Smith normal form of `m`. Zero rows and columns are allowed;
/// an empty matrix has no invariant factors.
pub fn smith_normal_form(m: &Matrix, with_witnesses: bool) -> Result<SmithForm> {
    let (rows, cols) = shape(m)?;
    let mut r = Reducer {
        a: m.clone(),
        left: with_witnesses.then(|| identity(rows)),
        right: with_witnesses.then(|| identity(cols)),
        rows,
        cols,
    };
    r.run();
    let factors = (0..rows.min(cols))
        .map(|i| r.a[i][i])
        .take_while(|&v| v != 0)
        .collect();
    let witnesses = match (r.left, r.right) {
        (Some(left), Some(right)) => Some(Witnesses {
            left,
            right,
            diagonal: r.a,
        }),
        _ => None,
    };
    Ok(SmithForm { factors, witnesses })
}

/// Convenience for `i64` input.
pub fn smith_normal_form_i64(m: &[Vec<i64>], with_witnesses: bool) -> Result<SmithForm> {
    let m: Matrix = m
        .iter()
        .map(|row| row.iter().map(|&v| i128::from(v)).collect())
        .collect();
    smith_normal_form(&m, with_witnesses)
}
