//! Idempotents: splitting free modules and complexes along them, and lifting
//! idempotents of R[X]/(P) from the residue field.

use std::collections::BTreeMap;

use crate::complexes::{ChainMap, FreeComplex};
use crate::linalg::{gf_row_reduce, residue_grid, solve_many, Mat};
use crate::rings::gfpoly::{self, GfPoly};
use crate::rings::poly::{divrem_monic, mul as pmul, sub as psub, trim, Poly};
use crate::rings::{Elt, Ring};

/// For an idempotent e on R^n over a local ring: inclusion i of a basis of eR^n
/// (columns of e with independent residues) and p with p i = 1, i p = e.
pub fn image_basis(e: &Mat) -> (Mat, Mat) {
    let mut g = residue_grid(e);
    let pivots = gf_row_reduce(e.ring.residue_field(), &mut g);
    let i = e.select_cols(&pivots);
    let p = solve_many(&i, e).expect("columns of e lie in its image");
    (i, p)
}

/// Split a complex along a degreewise idempotent chain map.
pub fn split_complex(c: &FreeComplex, e: &ChainMap) -> (FreeComplex, ChainMap, ChainMap) {
    let ring = &c.ring;
    let parts: BTreeMap<i64, (Mat, Mat)> = c.degrees().map(|i| (i, image_basis(&e.comp(i)))).collect();
    let ranks: Vec<usize> = c.degrees().map(|i| parts[&i].0.cols).collect();
    let d: Vec<Mat> = (c.lo..c.hi).map(|i| parts[&(i + 1)].1.mul(&c.diff(i)).mul(&parts[&i].0)).collect();
    let sub = FreeComplex::new_unchecked(ring, c.lo, ranks, d);
    let incl = ChainMap::graded(&sub, c, parts.iter().map(|(&i, (a, _))| (i, a.clone())).collect()).unwrap();
    let proj = ChainMap::graded(c, &sub, parts.iter().map(|(&i, (_, b))| (i, b.clone())).collect()).unwrap();
    (sub, incl, proj)
}

/// Residue polynomial of a polynomial over a local ring.
pub fn residue_poly(r: &Ring, p: &[Elt]) -> GfPoly {
    gfpoly::trim(p.iter().map(|c| r.residue(c)).collect())
}

pub fn lift_poly(r: &Ring, p: &[u32]) -> Poly {
    trim(r, p.iter().map(|&c| r.lift_residue(c)).collect())
}

/// Distinct monic irreducible factors of P mod m, with multiplicities.
pub fn residue_factors(r: &Ring, p: &[Elt]) -> Vec<(GfPoly, usize)> {
    gfpoly::factor(r.residue_field(), &residue_poly(r, p))
}

/// The idempotent of R[X]/(P) which is 1 on the selected residue factors and
/// 0 on the others, as a polynomial of degree below deg P.
pub fn factor_idempotent(r: &Ring, p: &[Elt], factors: &[(GfPoly, usize)], select: &[bool]) -> Poly {
    let f = r.residue_field();
    let mut a: GfPoly = vec![1];
    let mut b: GfPoly = vec![1];
    for ((g, m), &s) in factors.iter().zip(select) {
        let mut pw: GfPoly = vec![1];
        for _ in 0..*m {
            pw = gfpoly::mul(f, &pw, g);
        }
        if s {
            a = gfpoly::mul(f, &a, &pw);
        } else {
            b = gfpoly::mul(f, &b, &pw);
        }
    }
    // t b ≡ 1 mod a, s a ≡ 1 mod b; the idempotent is t b
    let (_, _, t) = gfpoly::xgcd(f, &a, &b);
    let pbar = residue_poly(r, p);
    let e0 = gfpoly::rem(f, &gfpoly::mul(f, &t, &b), &pbar);
    let mut x = lift_poly(r, &e0);
    let reduce = |q: &Poly| if p.len() > 1 { divrem_monic(r, q, p).1 } else { Vec::new() };
    for _ in 0..128 {
        let x2 = reduce(&pmul(r, &x, &x));
        if psub(r, &x2, &x).is_empty() {
            return x;
        }
        let x3 = reduce(&pmul(r, &x2, &x));
        let three: Poly = x2.iter().map(|c| r.mul(&r.from_int(3), c)).collect();
        let two: Poly = x3.iter().map(|c| r.mul(&r.from_int(2), c)).collect();
        x = psub(r, &three, &two);
    }
    unreachable!("idempotent lifting converges on a nilpotent defect")
}

/// p(f) for a chain self-map f.
pub fn eval_chain(p: &[Elt], f: &ChainMap) -> ChainMap {
    let c = &f.source;
    let mut acc = ChainMap::zero(c, c);
    for coef in p.iter().rev() {
        acc = acc.compose(f).add(&ChainMap::identity(c).scale(coef));
    }
    acc
}

/// Block-diagonal matrix of a self-map on the total module ⊕ C^i.
pub fn total_matrix(f: &ChainMap) -> Mat {
    let c = &f.source;
    c.degrees().fold(Mat::zeros(&c.ring, 0, 0), |acc, i| acc.direct_sum(&f.comp(i)))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn idempotents_of_split_quadratic() {
        // X^2 - 3X + 2 = (X-1)(X-2) over Z/25
        let r = Ring::zpc(5, 2).unwrap();
        let p: Poly = [2, -3, 1].iter().map(|&x| r.from_int(x)).collect();
        let fs = residue_factors(&r, &p);
        assert_eq!(fs.len(), 2);
        let e = factor_idempotent(&r, &p, &fs, &[true, false]);
        let e2 = divrem_monic(&r, &pmul(&r, &e, &e), &p).1;
        assert_eq!(e2, e);
        // e(1) = 1 on the factor X - 1 (or 0 if factors sorted the other way)
        let at1 = e.iter().fold(r.zero(), |acc, c| r.add(&acc, c));
        assert!(r.is_zero(&at1) || at1 == r.one());
    }

    #[test]
    fn image_basis_of_projector() {
        let r = Ring::zpc(3, 2).unwrap();
        let e = Mat::from_ints(&r, &[vec![5, 5], vec![5, 5]]);
        let (i, p) = image_basis(&e);
        assert_eq!(i.cols, 1);
        assert!(p.mul(&i).is_identity());
        assert_eq!(i.mul(&p), e);
    }
}
