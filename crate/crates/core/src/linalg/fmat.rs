//! Dense matrices over a finite field `Gf`, entries as field indices.

use serde_json::{json, Value};

use super::gf_row_reduce;
use crate::error::{invalid, Error, Result};
use crate::rings::gfpoly::{self, GfPoly};
use crate::rings::{field_elt_from_json, field_elt_to_json, Gf};

/// Dense matrix over a finite field, field elements as `Gf` indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FMat {
    pub rows: usize,
    pub cols: usize,
    pub a: Vec<Vec<u32>>,
}

impl FMat {
    pub fn zeros(rows: usize, cols: usize) -> FMat {
        FMat { rows, cols, a: vec![vec![0; cols]; rows] }
    }

    pub fn identity(n: usize) -> FMat {
        FMat::scalar(n, 1)
    }

    pub fn scalar(n: usize, c: u32) -> FMat {
        let mut m = FMat::zeros(n, n);
        for i in 0..n {
            m.a[i][i] = c;
        }
        m
    }

    pub fn from_cols(rows: usize, cols: &[Vec<u32>]) -> FMat {
        let mut m = FMat::zeros(rows, cols.len());
        for (j, c) in cols.iter().enumerate() {
            for i in 0..rows {
                m.a[i][j] = c[i];
            }
        }
        m
    }

    pub fn col(&self, j: usize) -> Vec<u32> {
        (0..self.rows).map(|i| self.a[i][j]).collect()
    }

    pub fn mul(&self, k: &Gf, o: &FMat) -> FMat {
        assert_eq!(self.cols, o.rows, "matrix shapes");
        let mut m = FMat::zeros(self.rows, o.cols);
        for i in 0..self.rows {
            for t in 0..self.cols {
                let x = self.a[i][t];
                if x == 0 {
                    continue;
                }
                for j in 0..o.cols {
                    m.a[i][j] = k.add(m.a[i][j], k.mul(x, o.a[t][j]));
                }
            }
        }
        m
    }

    pub fn add(&self, k: &Gf, o: &FMat) -> FMat {
        let mut m = self.clone();
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.a[i][j] = k.add(m.a[i][j], o.a[i][j]);
            }
        }
        m
    }

    pub fn scale(&self, k: &Gf, c: u32) -> FMat {
        let mut m = self.clone();
        for row in m.a.iter_mut() {
            for x in row.iter_mut() {
                *x = k.mul(*x, c);
            }
        }
        m
    }

    pub fn sub(&self, k: &Gf, o: &FMat) -> FMat {
        self.add(k, &o.scale(k, k.neg(1)))
    }

    pub fn pow(&self, k: &Gf, e: usize) -> FMat {
        let mut out = FMat::identity(self.rows);
        for _ in 0..e {
            out = out.mul(k, self);
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.a.iter().all(|r| r.iter().all(|&x| x == 0))
    }

    pub fn rank(&self, k: &Gf) -> usize {
        let mut g = self.a.clone();
        gf_row_reduce(k, &mut g).len()
    }

    /// Basis of the null space, as columns.
    pub fn kernel(&self, k: &Gf) -> FMat {
        let mut g = self.a.clone();
        let pivots = gf_row_reduce(k, &mut g);
        let mut cols = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![0u32; self.cols];
            v[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = k.neg(g[r][free]);
            }
            cols.push(v);
        }
        FMat::from_cols(self.cols, &cols)
    }

    /// Basis of the column space.
    pub fn image(&self, k: &Gf) -> FMat {
        let mut g = self.a.clone();
        let pivots = gf_row_reduce(k, &mut g);
        FMat::from_cols(self.rows, &pivots.iter().map(|&c| self.col(c)).collect::<Vec<_>>())
    }

    pub fn inverse(&self, k: &Gf) -> Option<FMat> {
        let n = self.rows;
        if n != self.cols {
            return None;
        }
        if n == 0 {
            return Some(FMat::zeros(0, 0));
        }
        let mut g: Vec<Vec<u32>> = self.a.iter().enumerate().map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| u32::from(i == j)));
            row
        }).collect();
        let pivots = gf_row_reduce(k, &mut g);
        if pivots.len() < n || pivots[n - 1] >= n {
            return None;
        }
        Some(FMat { rows: n, cols: n, a: g.into_iter().map(|r| r[n..].to_vec()).collect() })
    }

    /// Stack vertically.
    pub fn vstack(mats: &[FMat], cols: usize) -> FMat {
        let a: Vec<Vec<u32>> = mats.iter().flat_map(|m| m.a.iter().cloned()).collect();
        FMat { rows: a.len(), cols, a }
    }

    pub fn transpose(&self) -> FMat {
        let mut m = FMat::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m.a[j][i] = self.a[i][j];
            }
        }
        m
    }

    pub fn trace(&self, k: &Gf) -> u32 {
        (0..self.rows.min(self.cols)).fold(0, |s, i| k.add(s, self.a[i][i]))
    }

    pub fn apply(&self, k: &Gf, v: &[u32]) -> Vec<u32> {
        self.a
            .iter()
            .map(|row| row.iter().zip(v).fold(0, |s, (&x, &y)| k.add(s, k.mul(x, y))))
            .collect()
    }

    pub fn det(&self, k: &Gf) -> u32 {
        assert_eq!(self.rows, self.cols, "determinant of a non-square matrix");
        let n = self.rows;
        let mut g = self.a.clone();
        let mut d = 1u32;
        for c in 0..n {
            let Some(r) = (c..n).find(|&r| g[r][c] != 0) else { return 0 };
            if r != c {
                g.swap(r, c);
                d = k.neg(d);
            }
            let piv = g[c][c];
            d = k.mul(d, piv);
            let inv = k.inv(piv).expect("nonzero pivot");
            for r in c + 1..n {
                let u = k.mul(g[r][c], inv);
                if u == 0 {
                    continue;
                }
                for j in c..n {
                    g[r][j] = k.sub(g[r][j], k.mul(u, g[c][j]));
                }
            }
        }
        d
    }

    /// Characteristic polynomial det(x - A), monic, constant term first.
    /// Reduces to upper Hessenberg form by similarity, then expands along the
    /// last row recursively.
    pub fn charpoly(&self, k: &Gf) -> GfPoly {
        assert_eq!(self.rows, self.cols, "characteristic polynomial of a non-square matrix");
        let n = self.rows;
        let mut h = self.a.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(i) = (j + 1..n).find(|&i| h[i][j] != 0) else { continue };
            if i != j + 1 {
                h.swap(i, j + 1);
                for row in h.iter_mut() {
                    row.swap(i, j + 1);
                }
            }
            let inv = k.inv(h[j + 1][j]).expect("nonzero pivot");
            for r in j + 2..n {
                let u = k.mul(h[r][j], inv);
                if u == 0 {
                    continue;
                }
                for c in 0..n {
                    h[r][c] = k.sub(h[r][c], k.mul(u, h[j + 1][c]));
                }
                for row in h.iter_mut() {
                    row[j + 1] = k.add(row[j + 1], k.mul(u, row[r]));
                }
            }
        }
        let mut p: Vec<GfPoly> = vec![vec![1]];
        for m in 1..=n {
            let mm = m - 1;
            let mut next = gfpoly::mul(k, &[k.neg(h[mm][mm]), 1], &p[m - 1]);
            let mut t = 1u32;
            for i in 1..m {
                t = k.mul(t, h[mm - i + 1][mm - i]);
                let c = k.mul(t, h[mm - i][mm]);
                if c != 0 {
                    next = gfpoly::sub(k, &next, &gfpoly::scale(k, &p[m - i - 1], c));
                }
            }
            p.push(next);
        }
        p.pop().unwrap()
    }

    /// f(A) by Horner's rule.
    pub fn eval_poly(&self, k: &Gf, f: &[u32]) -> FMat {
        let mut out = FMat::zeros(self.rows, self.cols);
        for &c in f.iter().rev() {
            out = out.mul(k, self).add(k, &FMat::scalar(self.rows, c));
        }
        out
    }

    /// Parse a rows×cols matrix of field elements.
    pub fn from_json(k: &Gf, v: &Value, rows: usize, cols: usize) -> Result<FMat> {
        let rs = v.as_array().ok_or_else(|| Error::InvalidInput("matrix must be a list".into()))?;
        if rs.len() != rows {
            return invalid(format!("expected {rows} rows"));
        }
        let mut m = FMat::zeros(rows, cols);
        for (i, r) in rs.iter().enumerate() {
            let r = r.as_array().ok_or_else(|| Error::InvalidInput("matrix row must be a list".into()))?;
            if r.len() != cols {
                return invalid(format!("expected {cols} columns"));
            }
            for (j, x) in r.iter().enumerate() {
                m.a[i][j] = field_elt_from_json(k, x)?;
            }
        }
        Ok(m)
    }

    /// Entries as integers (prime field) or coefficient lists.
    pub fn to_field_json(&self, k: &Gf) -> Value {
        Value::from(
            self.a.iter().map(|r| Value::from(r.iter().map(|&x| field_elt_to_json(k, x)).collect::<Vec<_>>())).collect::<Vec<_>>(),
        )
    }

    pub fn to_json(&self) -> Value {
        json!(self.a)
    }

    /// Parse an n×n matrix of field elements (integers or coefficient lists).
    pub fn from_json_square(k: &Gf, v: &Value, n: usize) -> Result<FMat> {
        FMat::from_json(k, v, n, n)
    }
}

/// Incrementally built semi-echelon basis of a subspace of k^cols: each row
/// has a leading 1 at its pivot and zeros at the pivots of earlier rows.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub cols: usize,
    rows: Vec<Vec<u32>>,
    pivots: Vec<usize>,
}

impl Echelon {
    pub fn new(cols: usize) -> Echelon {
        Echelon { cols, rows: Vec::new(), pivots: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<u32>] {
        &self.rows
    }

    pub fn reduce(&self, k: &Gf, mut v: Vec<u32>) -> Vec<u32> {
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            let c = v[p];
            if c != 0 {
                for (x, &y) in v.iter_mut().zip(row) {
                    *x = k.sub(*x, k.mul(c, y));
                }
            }
        }
        v
    }

    pub fn contains(&self, k: &Gf, v: &[u32]) -> bool {
        self.reduce(k, v.to_vec()).iter().all(|&x| x == 0)
    }

    /// Adds v to the span; returns the new (reduced, normalized) row if v was
    /// not already in it.
    pub fn insert(&mut self, k: &Gf, v: Vec<u32>) -> Option<Vec<u32>> {
        let mut v = self.reduce(k, v);
        let p = v.iter().position(|&x| x != 0)?;
        let inv = k.inv(v[p]).expect("nonzero");
        for x in v.iter_mut() {
            *x = k.mul(*x, inv);
        }
        self.rows.push(v.clone());
        self.pivots.push(p);
        Some(v)
    }

    /// Reduced row echelon basis: canonical for the subspace.
    pub fn canonical(&self, k: &Gf) -> Vec<Vec<u32>> {
        let mut g = self.rows.clone();
        gf_row_reduce(k, &mut g);
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(k: &Gf, n: usize, rng: &mut ChaCha8Rng) -> FMat {
        let mut m = FMat::zeros(n, n);
        for row in m.a.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.gen_range(0..k.size());
            }
        }
        m
    }

    #[test]
    fn charpoly_matches_determinants() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for k in [Gf::prime(5).unwrap(), Gf::new(3, vec![1, 0, 1]).unwrap()] {
            for n in 0..6 {
                for _ in 0..10 {
                    let a = random(&k, n, &mut rng);
                    let f = a.charpoly(&k);
                    assert_eq!(f.len(), n + 1);
                    for x in k.elements() {
                        let d = FMat::scalar(n, x).sub(&k, &a).det(&k);
                        assert_eq!(gfpoly::eval(&k, &f, x), d);
                    }
                    assert!(a.eval_poly(&k, &f).is_zero());
                }
            }
        }
    }

    #[test]
    fn sparse_hessenberg_cases() {
        let k = Gf::prime(7).unwrap();
        let mut a = FMat::zeros(4, 4);
        a.a[0][3] = 2;
        a.a[3][1] = 5;
        a.a[2][2] = 1;
        let f = a.charpoly(&k);
        for x in k.elements() {
            assert_eq!(gfpoly::eval(&k, &f, x), FMat::scalar(4, x).sub(&k, &a).det(&k));
        }
    }
}
