//! Smith normal form with transforms: U A V = D, D diagonal with canonical
//! entries d_0 | d_1 | ..., zeros last.

use super::euclid::Euclid;

#[derive(Clone, Debug)]
pub struct Smith<E> {
    pub rows: usize,
    pub cols: usize,
    /// min(rows, cols) diagonal entries.
    pub diag: Vec<E>,
    pub u: Vec<Vec<E>>,
    pub uinv: Vec<Vec<E>>,
    pub v: Vec<Vec<E>>,
    pub vinv: Vec<Vec<E>>,
}

fn ident<R: Euclid>(r: &R, n: usize) -> Vec<Vec<R::E>> {
    (0..n).map(|i| (0..n).map(|j| if i == j { r.one() } else { r.zero() }).collect()).collect()
}

struct Work<'a, R: Euclid> {
    r: &'a R,
    a: Vec<Vec<R::E>>,
    u: Vec<Vec<R::E>>,
    uinv: Vec<Vec<R::E>>,
    v: Vec<Vec<R::E>>,
    vinv: Vec<Vec<R::E>>,
    track: bool,
}

impl<'a, R: Euclid> Work<'a, R> {
    /// row_i += k row_j
    fn row_add(&mut self, i: usize, j: usize, k: &R::E) {
        let r = self.r;
        let src = self.a[j].clone();
        for (x, y) in self.a[i].iter_mut().zip(&src) {
            *x = r.add(x, &r.mul(k, y));
        }
        if self.track {
            let src = self.u[j].clone();
            for (x, y) in self.u[i].iter_mut().zip(&src) {
                *x = r.add(x, &r.mul(k, y));
            }
            for row in self.uinv.iter_mut() {
                let t = r.mul(k, &row[i]);
                row[j] = r.sub(&row[j], &t);
            }
        }
    }

    /// col_j += k col_i
    fn col_add(&mut self, j: usize, i: usize, k: &R::E) {
        let r = self.r;
        for row in self.a.iter_mut() {
            let t = r.mul(k, &row[i]);
            row[j] = r.add(&row[j], &t);
        }
        if self.track {
            for row in self.v.iter_mut() {
                let t = r.mul(k, &row[i]);
                row[j] = r.add(&row[j], &t);
            }
            let src = self.vinv[j].clone();
            for (x, y) in self.vinv[i].iter_mut().zip(&src) {
                *x = r.sub(x, &r.mul(k, y));
            }
        }
    }

    fn swap_rows(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        self.a.swap(i, j);
        if self.track {
            self.u.swap(i, j);
            for row in self.uinv.iter_mut() {
                row.swap(i, j);
            }
        }
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        if i == j {
            return;
        }
        for row in self.a.iter_mut() {
            row.swap(i, j);
        }
        if self.track {
            for row in self.v.iter_mut() {
                row.swap(i, j);
            }
            self.vinv.swap(i, j);
        }
    }

    fn scale_row(&mut self, i: usize, unit: &R::E) {
        let r = self.r;
        for x in self.a[i].iter_mut() {
            *x = r.mul(unit, x);
        }
        if self.track {
            for x in self.u[i].iter_mut() {
                *x = r.mul(unit, x);
            }
            let inv = r.unit_inv(unit);
            for row in self.uinv.iter_mut() {
                row[i] = r.mul(&row[i], &inv);
            }
        }
    }
}

pub fn smith<R: Euclid>(r: &R, a: Vec<Vec<R::E>>, cols: usize, track: bool) -> Smith<R::E> {
    let rows = a.len();
    let mut w = Work {
        r,
        a,
        u: if track { ident(r, rows) } else { Vec::new() },
        uinv: if track { ident(r, rows) } else { Vec::new() },
        v: if track { ident(r, cols) } else { Vec::new() },
        vinv: if track { ident(r, cols) } else { Vec::new() },
        track,
    };
    let k = rows.min(cols);
    let mut diag = Vec::with_capacity(k);
    for t in 0..k {
        // global minimum of the remaining block
        let mut best: Option<(u64, usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !r.is_zero(&w.a[i][j]) {
                    let n = r.norm(&w.a[i][j]);
                    if best.is_none_or(|b| n < b.0) {
                        best = Some((n, i, j));
                    }
                }
            }
        }
        let Some((_, bi, bj)) = best else {
            for _ in t..k {
                diag.push(r.zero());
            }
            break;
        };
        w.swap_rows(t, bi);
        w.swap_cols(t, bj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if !r.is_zero(&w.a[i][t]) {
                    let (q, _) = r.divrem(&w.a[i][t], &w.a[t][t]);
                    w.row_add(i, t, &r.neg(&q));
                    dirty |= !r.is_zero(&w.a[i][t]);
                }
            }
            for j in t + 1..cols {
                if !r.is_zero(&w.a[t][j]) {
                    let (q, _) = r.divrem(&w.a[t][j], &w.a[t][t]);
                    w.col_add(j, t, &r.neg(&q));
                    dirty |= !r.is_zero(&w.a[t][j]);
                }
            }
            if dirty {
                let mut best: Option<(u64, usize, bool)> = None;
                for i in t + 1..rows {
                    if !r.is_zero(&w.a[i][t]) {
                        let n = r.norm(&w.a[i][t]);
                        if best.is_none_or(|b| n < b.0) {
                            best = Some((n, i, true));
                        }
                    }
                }
                for j in t + 1..cols {
                    if !r.is_zero(&w.a[t][j]) {
                        let n = r.norm(&w.a[t][j]);
                        if best.is_none_or(|b| n < b.0) {
                            best = Some((n, j, false));
                        }
                    }
                }
                let (_, idx, is_row) = best.unwrap();
                if is_row {
                    w.swap_rows(t, idx);
                } else {
                    w.swap_cols(t, idx);
                }
                continue;
            }
            // divisibility of the rest (needed over F_p[S])
            let mut fix = None;
            'outer: for i in t + 1..rows {
                for j in t + 1..cols {
                    if !r.is_zero(&w.a[i][j]) && r.div_exact(&w.a[i][j], &w.a[t][t]).is_none() {
                        fix = Some(i);
                        break 'outer;
                    }
                }
            }
            match fix {
                Some(i) => w.row_add(t, i, &r.one()),
                None => break,
            }
        }
        let unit = r.normal_unit(&w.a[t][t]);
        w.scale_row(t, &unit);
        diag.push(w.a[t][t].clone());
    }
    Smith { rows, cols, diag, u: w.u, uinv: w.uinv, v: w.v, vinv: w.vinv }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::euclid::{PolyOps, ZpcOps};

    fn mul<R: Euclid>(r: &R, a: &[Vec<R::E>], b: &[Vec<R::E>]) -> Vec<Vec<R::E>> {
        let n = b.first().map_or(0, |x| x.len());
        a.iter()
            .map(|row| {
                (0..n)
                    .map(|j| row.iter().zip(b).fold(r.zero(), |acc, (x, brow)| r.add(&acc, &r.mul(x, &brow[j]))))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn smith_over_z27_checks_out() {
        let r = ZpcOps::new(3, 3);
        let a = vec![vec![6u64, 9, 3], vec![12, 0, 18], vec![1, 3, 0]];
        let s = smith(&r, a.clone(), 3, true);
        let d = mul(&r, &mul(&r, &s.u, &a), &s.v);
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { s.diag[i] } else { 0 };
                assert_eq!(d[i][j], want);
            }
        }
        assert_eq!(mul(&r, &s.u, &s.uinv), ident(&r, 3));
        assert_eq!(mul(&r, &s.v, &s.vinv), ident(&r, 3));
        assert_eq!(s.diag[0], 1);
    }

    #[test]
    fn smith_over_polynomials_has_divisibility() {
        let r = PolyOps { p: 3 };
        // diag(S, S+1) has invariant factors 1, S(S+1)
        let a = vec![vec![vec![0, 1], vec![]], vec![vec![], vec![1, 1]]];
        let s = smith(&r, a, 2, true);
        assert_eq!(s.diag, vec![vec![1], vec![0, 1, 1]]);
    }
}
