//! Dense matrices of exact rationals, sized for desk-scale games.

use alloc::vec;
use alloc::vec::Vec;

use num_traits::Zero;

use crate::error::Error;
use crate::rat::{int, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mat {
    rows: usize,
    cols: usize,
    data: Vec<Rat>,
}

impl Mat {
    pub fn zero(rows: usize, cols: usize) -> Self {
        Mat {
            rows,
            cols,
            data: vec![Rat::zero(); rows * cols],
        }
    }

    pub fn from_rows(rows: Vec<Vec<Rat>>) -> Result<Self, Error> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    /// Convenience constructor for integer payoff tables.
    pub fn from_ints(rows: &[&[i64]]) -> Self {
        let built = rows
            .iter()
            .map(|row| row.iter().map(|&v| int(v)).collect())
            .collect();
        Mat::from_rows(built).expect("literal rows are rectangular")
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Rat {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Rat) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[Rat] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col_vec(&self, j: usize) -> Vec<Rat> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Mat {
        let mut out = Mat::zero(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn paste(&mut self, r0: usize, c0: usize, block: &Mat) {
        debug_assert!(r0 + block.rows <= self.rows && c0 + block.cols <= self.cols);
        for i in 0..block.rows {
            for j in 0..block.cols {
                self.set(r0 + i, c0 + j, block.get(i, j).clone());
            }
        }
    }

    /// Writes `col` into column `j` starting at row `r0`.
    pub fn paste_col(&mut self, r0: usize, j: usize, col: &[Rat]) {
        for (i, v) in col.iter().enumerate() {
            self.set(r0 + i, j, v.clone());
        }
    }

    /// `self[row_perm[i]][col_perm[j]]` becomes entry `(i, j)` of the result;
    /// both permutations map new indices to old ones.
    pub fn permuted(&self, row_perm: &[usize], col_perm: &[usize]) -> Mat {
        debug_assert_eq!(row_perm.len(), self.rows);
        debug_assert_eq!(col_perm.len(), self.cols);
        let mut out = Mat::zero(self.rows, self.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(i, j, self.get(row_perm[i], col_perm[j]).clone());
            }
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = &Rat> {
        self.data.iter()
    }

    /// A·y for a column vector y.
    pub fn mul_vec(&self, y: &[Rat]) -> Result<Vec<Rat>, Error> {
        if y.len() != self.cols {
            return Err(Error::Dimension(alloc::format!(
                "matrix has {} columns, vector has {} entries",
                self.cols,
                y.len()
            )));
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(y)
                    .filter(|(a, _)| !a.is_zero())
                    .map(|(a, b)| a * b)
                    .fold(Rat::zero(), |acc, t| acc + t)
            })
            .collect())
    }

    /// xᵀ·A for a row vector x.
    pub fn vec_mul(&self, x: &[Rat]) -> Result<Vec<Rat>, Error> {
        if x.len() != self.rows {
            return Err(Error::Dimension(alloc::format!(
                "matrix has {} rows, vector has {} entries",
                self.rows,
                x.len()
            )));
        }
        let mut out = vec![Rat::zero(); self.cols];
        for i in 0..self.rows {
            if x[i].is_zero() {
                continue;
            }
            for (j, a) in self.row(i).iter().enumerate() {
                if !a.is_zero() {
                    out[j] += a * &x[i];
                }
            }
        }
        Ok(out)
    }
}

/// Inverts a permutation given as a new-index -> old-index map.
pub fn invert_perm(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0usize; perm.len()];
    for (new, &old) in perm.iter().enumerate() {
        inv[old] = new;
    }
    inv
}
