//! Howell normal form (Hermite form over F_p[S], reduced echelon form over
//! fields) and canonical submodules of R^n.

use super::euclid::{Engine, Euclid};
use super::Mat;
use crate::rings::{Elt, Ring};
use crate::with_engine;

/// Canonical echelon basis of the row span of `rows` (each of length `n`).
pub fn howell<R: Euclid>(r: &R, rows: Vec<Vec<R::E>>, n: usize) -> Vec<Vec<R::E>> {
    let mut work: Vec<Vec<R::E>> = rows.into_iter().filter(|row| row.iter().any(|x| !r.is_zero(x))).collect();
    let mut out: Vec<(usize, Vec<R::E>)> = Vec::new();
    for col in 0..n {
        loop {
            let mut best: Option<(u64, usize)> = None;
            let mut count = 0;
            for (i, row) in work.iter().enumerate() {
                if !r.is_zero(&row[col]) {
                    count += 1;
                    let nm = r.norm(&row[col]);
                    if best.is_none_or(|b| nm < b.0) {
                        best = Some((nm, i));
                    }
                }
            }
            let Some((_, bi)) = best else { break };
            let mut pivot = work.swap_remove(bi);
            let unit = r.normal_unit(&pivot[col]);
            for x in pivot.iter_mut() {
                *x = r.mul(&unit, x);
            }
            let mut remainders = false;
            for row in work.iter_mut() {
                if r.is_zero(&row[col]) {
                    continue;
                }
                let (q, _) = r.divrem(&row[col], &pivot[col]);
                for (x, y) in row.iter_mut().zip(&pivot) {
                    *x = r.sub(x, &r.mul(&q, y));
                }
                remainders |= !r.is_zero(&row[col]);
            }
            if remainders || count > 1 && work.iter().any(|row| !r.is_zero(&row[col])) {
                work.push(pivot);
                work.retain(|row| row.iter().any(|x| !r.is_zero(x)));
                continue;
            }
            if let Some(a) = r.ann(&pivot[col]) {
                let extra: Vec<R::E> = pivot.iter().map(|x| r.mul(&a, x)).collect();
                if extra.iter().any(|x| !r.is_zero(x)) {
                    work.push(extra);
                }
            }
            work.retain(|row| row.iter().any(|x| !r.is_zero(x)));
            out.push((col, pivot));
            break;
        }
    }
    for k in 0..out.len() {
        let (ck, pk) = (out[k].0, out[k].1.clone());
        for (_, row) in out.iter_mut().take(k) {
            if r.is_zero(&row[ck]) {
                continue;
            }
            let (q, _) = r.divrem(&row[ck], &pk[ck]);
            for (x, y) in row.iter_mut().zip(&pk) {
                *x = r.sub(x, &r.mul(&q, y));
            }
        }
    }
    out.into_iter().map(|(_, row)| row).collect()
}

/// Reduce `v` against a Howell basis; zero iff v lies in the span.
pub fn reduce<R: Euclid>(r: &R, basis: &[Vec<R::E>], v: &mut [R::E]) {
    for row in basis {
        let Some(c) = row.iter().position(|x| !r.is_zero(x)) else { continue };
        if r.is_zero(&v[c]) {
            continue;
        }
        let (q, _) = r.divrem(&v[c], &row[c]);
        for (x, y) in v.iter_mut().zip(row) {
            *x = r.sub(x, &r.mul(&q, y));
        }
    }
}

/// An R-submodule of R^n in canonical form. Over group algebras and truncated
/// rings the canonical form lives in the base expansion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Submodule {
    pub ring: Ring,
    pub n: usize,
    /// canonical rows over the engine ring (base ring for expanded rings)
    pub rows: Vec<Vec<Elt>>,
}

fn engine_ring(ring: &Ring) -> Ring {
    match Engine::for_ring(ring) {
        Some(_) => ring.clone(),
        None => Ring::zpc(ring.p(), ring.c()).expect("base ring"),
    }
}

impl Submodule {
    /// Submodule generated by the given vectors.
    pub fn span(ring: &Ring, n: usize, gens: &[Vec<Elt>]) -> Submodule {
        let base = engine_ring(ring);
        let expanded: Vec<Vec<Elt>> = if base == *ring {
            gens.to_vec()
        } else {
            let r = ring.base_rank();
            let mut out = Vec::with_capacity(gens.len() * r);
            for g in gens {
                for k in 0..r {
                    let mut b = ring.zero();
                    b[k] = 1;
                    let bg: Vec<Elt> = g.iter().map(|x| ring.mul(&b, x)).collect();
                    out.push(Mat::expand_vec(ring, &bg));
                }
            }
            out
        };
        let width = if base == *ring { n } else { n * ring.base_rank() };
        let engine = Engine::for_ring(&base).unwrap();
        let rows = with_engine!(&engine, ops => {
            let grid: Vec<Vec<_>> = expanded.iter().map(|v| v.iter().map(|x| ops.from_elt(x)).collect()).collect();
            howell(ops, grid, width).into_iter().map(|row| row.iter().map(|x| ops.to_elt(x)).collect()).collect()
        });
        Submodule { ring: ring.clone(), n, rows }
    }

    pub fn zero(ring: &Ring, n: usize) -> Submodule {
        Submodule { ring: ring.clone(), n, rows: Vec::new() }
    }

    /// Span of the columns of a matrix.
    pub fn column_span(m: &Mat) -> Submodule {
        let cols: Vec<Vec<Elt>> = (0..m.cols).map(|j| m.col(j)).collect();
        Submodule::span(&m.ring, m.rows, &cols)
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    /// Canonical representative of v modulo the submodule.
    pub fn reduce(&self, v: &[Elt]) -> Vec<Elt> {
        let base = engine_ring(&self.ring);
        let expanded = base != self.ring;
        let v: Vec<Elt> = if expanded { Mat::expand_vec(&self.ring, v) } else { v.to_vec() };
        let engine = Engine::for_ring(&base).unwrap();
        let out: Vec<Elt> = with_engine!(&engine, ops => {
            let basis: Vec<Vec<_>> = self.rows.iter().map(|row| row.iter().map(|x| ops.from_elt(x)).collect()).collect();
            let mut w: Vec<_> = v.iter().map(|x| ops.from_elt(x)).collect();
            reduce(ops, &basis, &mut w);
            w.iter().map(|x| ops.to_elt(x)).collect()
        });
        if expanded {
            Mat::collapse_vec(&self.ring, &out)
        } else {
            out
        }
    }

    pub fn contains(&self, v: &[Elt]) -> bool {
        self.reduce(v).iter().all(|x| self.ring.is_zero(x))
    }

    pub fn contains_module(&self, other: &Submodule) -> bool {
        other.generators().iter().all(|g| self.contains(g))
    }

    /// R-module generators (for expanded rings, collapsed base rows).
    pub fn generators(&self) -> Vec<Vec<Elt>> {
        if engine_ring(&self.ring) != self.ring {
            self.rows.iter().map(|row| Mat::collapse_vec(&self.ring, row)).collect()
        } else {
            self.rows.clone()
        }
    }

    pub fn sum(&self, other: &Submodule) -> Submodule {
        let mut gens = self.generators();
        gens.extend(other.generators());
        Submodule::span(&self.ring, self.n, &gens)
    }

    /// Number of elements when the ring is finite.
    pub fn size(&self) -> Option<u128> {
        if !self.ring.is_finite() {
            return None;
        }
        let base = engine_ring(&self.ring);
        let mut total: u128 = 1;
        for row in &self.rows {
            let c = row.iter().position(|x| !base.is_zero(x)).unwrap();
            let order: u128 = match base.field() {
                Some(f) if f.degree() > 1 => f.size() as u128,
                _ => {
                    let v = base.valuation(&row[c]);
                    (base.p() as u128).pow(base.c() - v)
                }
            };
            total = total.saturating_mul(order);
        }
        Some(total)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::euclid::ZpcOps;
    use crate::rings::RingSpec;

    #[test]
    fn howell_adds_annihilator_rows() {
        // span of (3, 1) over Z/9 contains 3*(3,1) = (0,3)
        let r = ZpcOps::new(3, 2);
        let h = howell(&r, vec![vec![3, 1]], 2);
        assert_eq!(h, vec![vec![3, 1], vec![0, 3]]);
    }

    #[test]
    fn canonical_form_independent_of_generators() {
        let ring = Ring::zpc(3, 2).unwrap();
        let e = |v: &[i64]| -> Vec<Elt> { v.iter().map(|&x| ring.from_int(x)).collect() };
        let a = Submodule::span(&ring, 2, &[e(&[3, 1]), e(&[0, 3])]);
        let b = Submodule::span(&ring, 2, &[e(&[6, 2])]);
        let c = Submodule::span(&ring, 2, &[e(&[3, 4])]);
        assert_eq!(a, b);
        assert_eq!(a, c);
        assert_eq!(a.size(), Some(9));
    }

    #[test]
    fn group_algebra_submodule_is_r_stable() {
        let ring = Ring::new(&RingSpec::GroupAlg { p: 3, c: 1, delta: vec![3] }).unwrap();
        let g = ring.canon(&[0, 1, 0]).unwrap();
        let x = ring.sub(&g, &ring.one());
        let s = Submodule::span(&ring, 1, &[vec![x.clone()]]);
        // the augmentation ideal has 9 elements
        assert_eq!(s.size(), Some(9));
        assert!(s.contains(&[ring.mul(&x, &g)]));
        assert!(!s.contains(&[ring.one()]));
    }
}
