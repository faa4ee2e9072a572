//! Dense matrices over a `Ring` and the exact linear algebra built on them.

pub mod euclid;
pub mod fmat;
pub mod howell;
pub mod smith;
pub mod solve;

use std::fmt;

use serde_json::Value;

use crate::error::{invalid, Error, Result};
use crate::rings::{Elt, Reduction, Ring};

pub use fmat::{Echelon, FMat};
pub use howell::Submodule;
pub use solve::{gf_row_reduce, inverse, kernel, rank_mod_m, residue_grid, solve, solve_many};

/// Row-major matrix with entries in `ring`.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat {
    pub ring: Ring,
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elt>,
}

impl fmt::Debug for Mat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Mat{}x{}[", self.rows, self.cols)?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            let row: Vec<String> = (0..self.cols).map(|j| self.ring.fmt_elt(self.at(i, j))).collect();
            write!(f, "{}", row.join(" "))?;
        }
        write!(f, "]")
    }
}

impl Mat {
    pub fn zeros(ring: &Ring, rows: usize, cols: usize) -> Mat {
        let z = ring.zero();
        Mat { ring: ring.clone(), rows, cols, data: vec![z; rows * cols] }
    }

    pub fn identity(ring: &Ring, n: usize) -> Mat {
        let mut m = Mat::zeros(ring, n, n);
        let one = ring.one();
        for i in 0..n {
            m.data[i * n + i] = one.clone();
        }
        m
    }

    pub fn scalar(ring: &Ring, n: usize, a: &Elt) -> Mat {
        let mut m = Mat::zeros(ring, n, n);
        for i in 0..n {
            m.data[i * n + i] = a.clone();
        }
        m
    }

    pub fn diag(ring: &Ring, entries: &[Elt]) -> Mat {
        let n = entries.len();
        let mut m = Mat::zeros(ring, n, n);
        for (i, e) in entries.iter().enumerate() {
            m.data[i * n + i] = e.clone();
        }
        m
    }

    pub fn from_ints(ring: &Ring, rows: &[Vec<i64>]) -> Mat {
        let r = rows.len();
        let c = rows.first().map_or(0, |x| x.len());
        let mut m = Mat::zeros(ring, r, c);
        for (i, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), c, "ragged matrix");
            for (j, &x) in row.iter().enumerate() {
                m.data[i * c + j] = ring.from_int(x);
            }
        }
        m
    }

    pub fn from_fn(ring: &Ring, rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Elt) -> Mat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { ring: ring.clone(), rows, cols, data }
    }

    pub fn from_cols(ring: &Ring, rows: usize, cols: &[Vec<Elt>]) -> Mat {
        Mat::from_fn(ring, rows, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn at(&self, i: usize, j: usize) -> &Elt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn col(&self, j: usize) -> Vec<Elt> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Elt> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn col_vec(ring: &Ring, v: &[Elt]) -> Mat {
        Mat { ring: ring.clone(), rows: v.len(), cols: 1, data: v.to_vec() }
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| self.ring.is_zero(e))
    }

    pub fn is_identity(&self) -> bool {
        self.is_square() && *self == Mat::identity(&self.ring, self.rows)
    }

    /// Every entry lies in the maximal ideal (for F_p[S]: every entry divisible by S).
    pub fn is_zero_mod_m(&self) -> bool {
        self.data.iter().all(|e| self.ring.in_max_ideal(e))
    }

    fn check_shape(&self, other: &Mat) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "shape mismatch");
    }

    pub fn add(&self, other: &Mat) -> Mat {
        self.check_shape(other);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.add(a, b)).collect();
        Mat { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Mat) -> Mat {
        self.check_shape(other);
        let data = self.data.iter().zip(&other.data).map(|(a, b)| self.ring.sub(a, b)).collect();
        Mat { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Mat {
        let data = self.data.iter().map(|a| self.ring.neg(a)).collect();
        Mat { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, k: &Elt) -> Mat {
        let data = self.data.iter().map(|a| self.ring.mul(k, a)).collect();
        Mat { ring: self.ring.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.rows, "inner dimension mismatch {}x{} * {}x{}", self.rows, self.cols, other.rows, other.cols);
        let r = &self.ring;
        let mut out = Mat::zeros(r, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.at(i, k);
                if r.is_zero(a) {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.at(k, j);
                    if r.is_zero(b) {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = r.add(&out.data[idx], &r.mul(a, b));
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elt]) -> Vec<Elt> {
        self.mul(&Mat::col_vec(&self.ring, v)).data
    }

    pub fn pow(&self, mut e: u64) -> Mat {
        let mut result = Mat::identity(&self.ring, self.rows);
        let mut b = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&b);
            }
            e >>= 1;
            if e > 0 {
                b = b.mul(&b);
            }
        }
        result
    }

    pub fn transpose(&self) -> Mat {
        Mat::from_fn(&self.ring, self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn submatrix(&self, rows: std::ops::Range<usize>, cols: std::ops::Range<usize>) -> Mat {
        let (r0, c0) = (rows.start, cols.start);
        Mat::from_fn(&self.ring, rows.len(), cols.len(), |i, j| self.at(r0 + i, c0 + j).clone())
    }

    pub fn select_cols(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(&self.ring, self.rows, idx.len(), |i, j| self.at(i, idx[j]).clone())
    }

    pub fn select_rows(&self, idx: &[usize]) -> Mat {
        Mat::from_fn(&self.ring, idx.len(), self.cols, |i, j| self.at(idx[i], j).clone())
    }

    pub fn hstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.rows, other.rows);
        Mat::from_fn(&self.ring, self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols {
                self.at(i, j).clone()
            } else {
                other.at(i, j - self.cols).clone()
            }
        })
    }

    pub fn vstack(&self, other: &Mat) -> Mat {
        assert_eq!(self.cols, other.cols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        Mat { ring: self.ring.clone(), rows: self.rows + other.rows, cols: self.cols, data }
    }

    /// Block-diagonal sum.
    pub fn direct_sum(&self, other: &Mat) -> Mat {
        Mat::from_fn(&self.ring, self.rows + other.rows, self.cols + other.cols, |i, j| {
            if i < self.rows && j < self.cols {
                self.at(i, j).clone()
            } else if i >= self.rows && j >= self.cols {
                other.at(i - self.rows, j - self.cols).clone()
            } else {
                self.ring.zero()
            }
        })
    }

    /// Build from a grid of blocks (all blocks in a block-row share row count, etc.).
    pub fn blocks(ring: &Ring, grid: &[Vec<Mat>]) -> Mat {
        let mut out: Option<Mat> = None;
        for brow in grid {
            let mut acc: Option<Mat> = None;
            for b in brow {
                acc = Some(match acc {
                    None => b.clone(),
                    Some(a) => a.hstack(b),
                });
            }
            let acc = acc.unwrap_or_else(|| Mat::zeros(ring, 0, 0));
            out = Some(match out {
                None => acc,
                Some(o) => o.vstack(&acc),
            });
        }
        out.unwrap_or_else(|| Mat::zeros(ring, 0, 0))
    }

    pub fn map(&self, red: &Reduction) -> Mat {
        let data = self.data.iter().map(|a| red.apply(a)).collect();
        Mat { ring: red.to.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Expand an R-matrix into a Z/p^c-matrix by regular-representation blocks.
    pub fn expand(&self, base: &Ring) -> Mat {
        let r = self.ring.base_rank();
        let mut out = Mat::zeros(base, self.rows * r, self.cols * r);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let m = self.ring.mul_matrix(self.at(i, j));
                for (a, row) in m.iter().enumerate() {
                    for (b, &x) in row.iter().enumerate() {
                        out.set(i * r + a, j * r + b, smallvec::smallvec![x]);
                    }
                }
            }
        }
        out
    }

    /// Expand a vector of R-elements into base coordinates.
    pub fn expand_vec(_ring: &Ring, v: &[Elt]) -> Vec<Elt> {
        v.iter().flat_map(|e| e.iter().map(|&x| smallvec::smallvec![x])).collect()
    }

    /// Inverse of `expand_vec`.
    pub fn collapse_vec(ring: &Ring, v: &[Elt]) -> Vec<Elt> {
        let r = ring.base_rank();
        v.chunks(r).map(|ch| ch.iter().map(|e| e[0]).collect()).collect()
    }

    pub fn to_json(&self) -> Value {
        Value::Array(
            (0..self.rows)
                .map(|i| Value::Array((0..self.cols).map(|j| self.ring.elt_to_json(self.at(i, j))).collect()))
                .collect(),
        )
    }

    /// Parse a row-major JSON matrix with the given shape. `[]` denotes any
    /// matrix with a zero dimension.
    pub fn from_json(ring: &Ring, v: &Value, rows: usize, cols: usize) -> Result<Mat> {
        let arr = v.as_array().ok_or_else(|| Error::InvalidInput(format!("matrix must be a list, got {v}")))?;
        if rows == 0 || cols == 0 {
            if arr.iter().all(|r| r.as_array().is_some_and(|x| x.is_empty())) && (arr.is_empty() || arr.len() == rows) {
                return Ok(Mat::zeros(ring, rows, cols));
            }
        }
        if arr.len() != rows {
            return invalid(format!("expected {rows} rows, got {}", arr.len()));
        }
        let mut m = Mat::zeros(ring, rows, cols);
        for (i, row) in arr.iter().enumerate() {
            let row = row.as_array().ok_or_else(|| Error::InvalidInput("matrix row must be a list".into()))?;
            if row.len() != cols {
                return invalid(format!("row {i}: expected {cols} entries, got {}", row.len()));
            }
            for (j, x) in row.iter().enumerate() {
                m.set(i, j, ring.elt_from_json(x)?);
            }
        }
        Ok(m)
    }

    /// Parse a JSON matrix and infer its shape.
    pub fn from_json_any(ring: &Ring, v: &Value) -> Result<Mat> {
        let arr = v.as_array().ok_or_else(|| Error::InvalidInput(format!("matrix must be a list, got {v}")))?;
        let rows = arr.len();
        let cols = arr.first().and_then(|r| r.as_array()).map_or(0, |r| r.len());
        Mat::from_json(ring, v, rows, cols)
    }
}
