//! Kernels, linear systems, inverses and residue ranks.

use super::euclid::{from_grid, to_grid, Engine, Euclid};
use super::smith::{smith, Smith};
use super::Mat;
use crate::rings::gf::Gf;
use crate::rings::{Elt, Ring};
use crate::with_engine;

fn base_of(ring: &Ring) -> Ring {
    Ring::zpc(ring.p(), ring.c()).expect("base ring")
}

pub fn smith_of<R: Euclid>(r: &R, a: &Mat, track: bool) -> Smith<R::E> {
    smith(r, to_grid(r, a), a.cols, track)
}

/// Columns generating ker(A) as an R-module.
pub fn kernel(a: &Mat) -> Mat {
    let ring = &a.ring;
    match Engine::for_ring(ring) {
        Some(engine) => with_engine!(&engine, ops => kernel_engine(ops, ring, a)),
        None => {
            let base = base_of(ring);
            let k = kernel(&a.expand(&base));
            let cols: Vec<Vec<Elt>> = (0..k.cols).map(|j| Mat::collapse_vec(ring, &k.col(j))).collect();
            Mat::from_cols(ring, a.cols, &cols)
        }
    }
}

fn kernel_engine<R: Euclid>(r: &R, ring: &Ring, a: &Mat) -> Mat {
    let s = smith_of(r, a, true);
    let n = a.cols;
    let k = s.diag.len();
    let mut cols: Vec<Vec<R::E>> = Vec::new();
    for j in 0..n {
        let scale = if j < k { r.ann(&s.diag[j]) } else { Some(r.one()) };
        if let Some(t) = scale {
            cols.push((0..n).map(|i| r.mul(&s.v[i][j], &t)).collect());
        }
    }
    let grid: Vec<Vec<R::E>> = (0..n).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
    from_grid(r, ring, &grid, cols.len())
}

/// Some x with A x = b, if one exists.
pub fn solve(a: &Mat, b: &[Elt]) -> Option<Vec<Elt>> {
    solve_many(a, &Mat::col_vec(&a.ring, b)).map(|x| x.data)
}

/// Some X with A X = B, if one exists.
pub fn solve_many(a: &Mat, b: &Mat) -> Option<Mat> {
    assert_eq!(a.rows, b.rows, "solve: row mismatch");
    let ring = &a.ring;
    match Engine::for_ring(ring) {
        Some(engine) => with_engine!(&engine, ops => solve_engine(ops, ring, a, b)),
        None => {
            let base = base_of(ring);
            let r = ring.base_rank();
            let ea = a.expand(&base);
            let mut cols = Vec::with_capacity(b.cols);
            for j in 0..b.cols {
                let eb = Mat::expand_vec(ring, &b.col(j));
                let x = solve_many(&ea, &Mat::col_vec(&base, &eb))?;
                cols.push(Mat::collapse_vec(ring, &x.data));
            }
            debug_assert!(cols.iter().all(|c| c.len() * r == a.cols * r));
            Some(Mat::from_cols(ring, a.cols, &cols))
        }
    }
}

fn solve_engine<R: Euclid>(r: &R, ring: &Ring, a: &Mat, b: &Mat) -> Option<Mat> {
    let s = smith_of(r, a, true);
    let bg = to_grid(r, b);
    let k = s.diag.len();
    let mut x = vec![vec![r.zero(); b.cols]; a.cols];
    for col in 0..b.cols {
        let c: Vec<R::E> = (0..a.rows)
            .map(|i| (0..a.rows).fold(r.zero(), |acc, t| r.add(&acc, &r.mul(&s.u[i][t], &bg[t][col]))))
            .collect();
        let mut y = vec![r.zero(); a.cols];
        for i in 0..a.rows {
            if i < k {
                y[i] = r.div_exact(&c[i], &s.diag[i])?;
            } else if !r.is_zero(&c[i]) {
                return None;
            }
        }
        for i in 0..a.cols {
            x[i][col] = (0..a.cols).fold(r.zero(), |acc, t| r.add(&acc, &r.mul(&s.v[i][t], &y[t])));
        }
    }
    Some(from_grid(r, ring, &x, b.cols))
}

/// Inverse of a square matrix, if it is invertible.
pub fn inverse(a: &Mat) -> Option<Mat> {
    if !a.is_square() {
        return None;
    }
    let ring = &a.ring;
    match Engine::for_ring(ring) {
        Some(engine) => with_engine!(&engine, ops => {
            let s = smith_of(ops, a, true);
            if s.diag.iter().any(|d| !ops.is_unit(d)) {
                return None;
            }
            // A = U^-1 D V^-1, so A^-1 = V D^-1 U
            let n = a.rows;
            let dinv: Vec<_> = s.diag.iter().map(|d| ops.unit_inv(d)).collect();
            let grid: Vec<Vec<_>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| (0..n).fold(ops.zero(), |acc, t| ops.add(&acc, &ops.mul(&ops.mul(&s.v[i][t], &dinv[t]), &s.u[t][j]))))
                        .collect()
                })
                .collect();
            Some(from_grid(ops, ring, &grid, n))
        }),
        None => gauss_jordan_local(a),
    }
}

fn gauss_jordan_local(a: &Mat) -> Option<Mat> {
    let ring = &a.ring;
    let n = a.rows;
    let mut m = a.clone();
    let mut inv = Mat::identity(ring, n);
    for col in 0..n {
        let piv = (col..n).find(|&i| ring.is_unit(m.at(i, col)))?;
        for j in 0..n {
            m.data.swap(col * n + j, piv * n + j);
            inv.data.swap(col * n + j, piv * n + j);
        }
        let u = ring.inv(m.at(col, col)).unwrap();
        for j in 0..n {
            let x = ring.mul(&u, m.at(col, j));
            m.set(col, j, x);
            let y = ring.mul(&u, inv.at(col, j));
            inv.set(col, j, y);
        }
        for i in 0..n {
            if i == col || ring.is_zero(m.at(i, col)) {
                continue;
            }
            let f = m.at(i, col).clone();
            for j in 0..n {
                let x = ring.sub(m.at(i, j), &ring.mul(&f, m.at(col, j)));
                m.set(i, j, x);
                let y = ring.sub(inv.at(i, j), &ring.mul(&f, inv.at(col, j)));
                inv.set(i, j, y);
            }
        }
    }
    Some(inv)
}

/// Row-reduce a matrix over a finite field; returns the rank and pivot columns.
pub fn gf_row_reduce(f: &Gf, m: &mut [Vec<u32>]) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, |r| r.len());
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, p);
        let inv = f.inv(m[r][c]).unwrap();
        for x in m[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && row[c] != 0 {
                let k = row[c];
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x = f.sub(*x, f.mul(k, *y));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn residue_grid(a: &Mat) -> Vec<Vec<u32>> {
    (0..a.rows).map(|i| (0..a.cols).map(|j| a.ring.residue(a.at(i, j))).collect()).collect()
}

/// Rank of A modulo the maximal ideal.
pub fn rank_mod_m(a: &Mat) -> usize {
    let mut g = residue_grid(a);
    gf_row_reduce(a.ring.residue_field(), &mut g).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::RingSpec;

    #[test]
    fn kernel_of_three_over_z9() {
        let r = Ring::zpc(3, 2).unwrap();
        let a = Mat::from_ints(&r, &[vec![3]]);
        let k = kernel(&a);
        assert!(a.mul(&k).is_zero());
        assert_eq!(k.cols, 1);
        assert_eq!(r.valuation(k.at(0, 0)), 1);
    }

    #[test]
    fn solve_and_inverse_over_group_algebra() {
        let r = Ring::new(&RingSpec::GroupAlg { p: 3, c: 2, delta: vec![3] }).unwrap();
        let g = r.canon(&[0, 1, 0]).unwrap();
        let a = Mat { ring: r.clone(), rows: 2, cols: 2, data: vec![g.clone(), r.one(), r.zero(), r.add(&g, &g)] };
        let ai = inverse(&a).unwrap();
        assert!(a.mul(&ai).is_identity());
        let b = vec![r.one(), g.clone()];
        let x = solve(&a, &b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
    }

    #[test]
    fn polynomial_inverse_without_unit_entries() {
        let r = Ring::new(&RingSpec::PolyPID { p: 3 }).unwrap();
        let e = |v: &[i64]| r.canon(v).unwrap();
        let a = Mat { ring: r.clone(), rows: 2, cols: 2, data: vec![e(&[1, 1]), e(&[0, 1]), e(&[0, -1]), e(&[1, -1])] };
        let ai = inverse(&a).unwrap();
        assert!(a.mul(&ai).is_identity());
    }
}
