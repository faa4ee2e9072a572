//! Minimal models: cancel unit entries of the differentials one at a time,
//! tracking the comparison maps and a contracting homotopy.

use std::collections::BTreeMap;

use super::{ChainMap, FreeComplex, Homotopy};
use crate::linalg::Mat;

#[derive(Clone, Debug)]
pub struct Minimalization {
    pub complex: FreeComplex,
    /// F -> C
    pub f: ChainMap,
    /// C -> F, with g f = 1
    pub g: ChainMap,
    /// on C: 1 - f g = d h + h d
    pub h: Homotopy,
    /// cancelled pivots (degree, row, column) in the working bases
    pub pivots: Vec<(i64, usize, usize)>,
}

fn find_unit(m: &Mat) -> Option<(usize, usize)> {
    for r in 0..m.rows {
        for c in 0..m.cols {
            if m.ring.is_unit(m.at(r, c)) {
                return Some((r, c));
            }
        }
    }
    None
}

fn others(n: usize, skip: usize) -> Vec<usize> {
    (0..n).filter(|&k| k != skip).collect()
}

/// Minimal complex F with comparison maps. Over F_p[S] only constant pivots
/// are available, so the output may fail to be minimal for non-graded input.
pub fn minimalize(c: &FreeComplex) -> Minimalization {
    let ring = c.ring.clone();
    let (lo, hi) = (c.lo, c.hi);
    let mut ranks: Vec<usize> = c.ranks().to_vec();
    let mut d: Vec<Mat> = (lo..hi).map(|i| c.diff(i)).collect();
    let mut f: BTreeMap<i64, Mat> = c.degrees().map(|i| (i, Mat::identity(&ring, c.rank(i)))).collect();
    let mut g = f.clone();
    let mut h: BTreeMap<i64, Mat> = BTreeMap::new();
    let mut pivots = Vec::new();
    for k in 0..d.len() {
        let i = lo + k as i64;
        while let Some((r, col)) = find_unit(&d[k]) {
            pivots.push((i, r, col));
            let di = &d[k];
            let u = di.at(r, col).clone();
            let uinv = ring.inv(&u).unwrap();
            let a_idx = others(ranks[k], col);
            let b_idx = others(ranks[k + 1], r);
            let b_row = di.select_rows(&[r]).select_cols(&a_idx);
            let gamma = di.select_rows(&b_idx).select_cols(&[col]);
            let dd = di.select_rows(&b_idx).select_cols(&a_idx);
            let new_d = dd.sub(&gamma.scale(&uinv).mul(&b_row));
            // step maps
            let (na, nb) = (ranks[k], ranks[k + 1]);
            let mut fs_i = Mat::zeros(&ring, na, na - 1);
            let neg_ub = b_row.scale(&ring.neg(&uinv));
            for (t, &a) in a_idx.iter().enumerate() {
                fs_i.set(a, t, ring.one());
                fs_i.set(col, t, neg_ub.at(0, t).clone());
            }
            let mut fs_i1 = Mat::zeros(&ring, nb, nb - 1);
            let mut gs_i1 = Mat::zeros(&ring, nb - 1, nb);
            for (t, &b) in b_idx.iter().enumerate() {
                fs_i1.set(b, t, ring.one());
                gs_i1.set(t, b, ring.one());
                gs_i1.set(t, r, ring.neg(&ring.mul(gamma.at(t, 0), &uinv)));
            }
            let mut gs_i = Mat::zeros(&ring, na - 1, na);
            for (t, &a) in a_idx.iter().enumerate() {
                gs_i.set(t, a, ring.one());
            }
            let mut hs = Mat::zeros(&ring, na, nb);
            hs.set(col, r, uinv.clone());
            // accumulate h += f_tot h_s g_tot in degree i+1
            let term = f[&i].mul(&hs).mul(&g[&(i + 1)]);
            let entry = h.entry(i + 1).or_insert_with(|| Mat::zeros(&ring, c.rank(i), c.rank(i + 1)));
            *entry = entry.add(&term);
            let fi = f[&i].mul(&fs_i);
            let fi1 = f[&(i + 1)].mul(&fs_i1);
            let gi = gs_i.mul(&g[&i]);
            let gi1 = gs_i1.mul(&g[&(i + 1)]);
            f.insert(i, fi);
            f.insert(i + 1, fi1);
            g.insert(i, gi);
            g.insert(i + 1, gi1);
            // neighbouring differentials
            if k > 0 {
                d[k - 1] = d[k - 1].select_rows(&a_idx);
            }
            if k + 1 < d.len() {
                d[k + 1] = d[k + 1].select_cols(&b_idx);
            }
            d[k] = new_d;
            ranks[k] -= 1;
            ranks[k + 1] -= 1;
        }
    }
    let fc = FreeComplex::new_unchecked(&ring, lo, ranks, d);
    let fmap = ChainMap::graded(&fc, c, f).expect("shapes");
    let gmap = ChainMap::graded(c, &fc, g).expect("shapes");
    let hom = Homotopy::from_comps(c, c, h);
    Minimalization { complex: fc, f: fmap, g: gmap, h: hom, pivots }
}

impl Minimalization {
    /// Check g f = 1, that f and g are chain maps, and 1 - f g = d h + h d.
    pub fn certify(&self) -> bool {
        let c = &self.f.target;
        let gf = self.g.compose(&self.f);
        let id_f = ChainMap::identity(&self.complex);
        let one_minus_fg = ChainMap::identity(c).sub(&self.f.compose(&self.g));
        self.f.commutator_defect().is_none()
            && self.g.commutator_defect().is_none()
            && gf.sub(&id_f).is_zero()
            && one_minus_fg.sub(&self.h.boundary()).is_zero()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::homology::{homology, residue_dims};
    use crate::rings::Ring;

    #[test]
    fn identity_cancels_completely() {
        let r = Ring::zpc(3, 2).unwrap();
        let c = FreeComplex::two_term(0, Mat::from_ints(&r, &[vec![1]]));
        let m = minimalize(&c);
        assert!(m.complex.is_zero());
        assert!(m.certify());
    }

    #[test]
    fn diag_one_three_keeps_the_three() {
        let r = Ring::zpc(3, 2).unwrap();
        let c = FreeComplex::two_term(0, Mat::from_ints(&r, &[vec![1, 0], vec![0, 3]]));
        let m = minimalize(&c);
        assert_eq!(m.complex, FreeComplex::two_term(0, Mat::from_ints(&r, &[vec![3]])));
        assert!(m.certify());
        assert_eq!(homology(&m.complex).signature(), homology(&c).signature());
        assert_eq!(residue_dims(&c).values().copied().collect::<Vec<_>>(), vec![1, 1]);
    }

    #[test]
    fn already_minimal_is_unchanged() {
        let r = Ring::zpc(3, 2).unwrap();
        let c = FreeComplex::two_term(0, Mat::from_ints(&r, &[vec![3]]));
        let m = minimalize(&c);
        assert_eq!(m.complex, c);
        assert!(m.pivots.is_empty());
    }
}
