//! Ordinary parts: the summand on which an endomorphism acts invertibly, cut
//! out by e = lim T^{k!}.

pub mod complex;
pub mod derived;
pub mod idempotent;
pub mod localize;
pub mod random;

use serde_json::{json, Value};

use crate::complexes::DegreeHomology;
use crate::error::{Error, Result};
use crate::linalg::{Mat, Submodule};
use crate::rings::poly::{bezout, charpoly, divrem_monic, eval_mat, hensel_split, mul as pmul};
use crate::rings::Ring;

pub use complex::{complex_ordinary, ComplexOrdinary};
pub use derived::{derived_idempotent, DerivedIdempotent};
pub use localize::{localize_complex, LocalFactor, Localization};

/// M = R^n / (column span of the relation matrix).
#[derive(Clone, Debug)]
pub struct PresentedModule {
    pub ring: Ring,
    pub n: usize,
    pub relations: Mat,
    rel: Submodule,
}

impl PresentedModule {
    pub fn new(ring: &Ring, n: usize, relations: Mat) -> Result<PresentedModule> {
        if !ring.is_finite() {
            return Err(Error::InvalidInput("presented modules need a finite ring".into()));
        }
        if relations.rows != n {
            return Err(Error::InvalidInput(format!("relation matrix has {} rows, expected {n}", relations.rows)));
        }
        let rel = Submodule::column_span(&relations);
        Ok(PresentedModule { ring: ring.clone(), n, relations, rel })
    }

    pub fn free(ring: &Ring, n: usize) -> Result<PresentedModule> {
        PresentedModule::new(ring, n, Mat::zeros(ring, n, 0))
    }

    /// H as R^g / diag(factors), in the homology's own coordinates.
    pub fn from_homology(h: &DegreeHomology) -> PresentedModule {
        let g = h.num_generators();
        PresentedModule::new(&h.ring, g, Mat::diag(&h.ring, &h.factors)).expect("finite homology ring")
    }

    pub fn relation_module(&self) -> &Submodule {
        &self.rel
    }

    /// Columns reduced to canonical representatives.
    pub fn canonical(&self, x: &Mat) -> Mat {
        let cols: Vec<_> = (0..x.cols).map(|j| self.rel.reduce(&x.col(j))).collect();
        Mat::from_cols(&self.ring, x.rows, &cols)
    }

    pub fn is_zero_map(&self, x: &Mat) -> bool {
        (0..x.cols).all(|j| self.rel.contains(&x.col(j)))
    }

    pub fn same_map(&self, a: &Mat, b: &Mat) -> bool {
        self.is_zero_map(&a.sub(b))
    }

    pub fn check_endo(&self, t: &Mat) -> Result<()> {
        if t.rows != self.n || t.cols != self.n {
            return Err(Error::InvalidEndomorphism(format!("expected a {0}x{0} matrix", self.n)));
        }
        let image = t.mul(&self.relations);
        if !self.is_zero_map(&image) {
            return Err(Error::InvalidEndomorphism("does not preserve the relations".into()));
        }
        Ok(())
    }

    /// Submodule of R^n spanned by the columns of x together with the relations.
    pub fn image(&self, x: &Mat) -> Submodule {
        Submodule::column_span(x).sum(&self.rel)
    }

    /// |image(x)| / |relations|.
    pub fn image_size(&self, x: &Mat) -> u128 {
        self.image(x).size().unwrap() / self.rel.size().unwrap()
    }

    pub fn size(&self) -> u128 {
        self.image_size(&Mat::identity(&self.ring, self.n))
    }

    /// Length of R as a module over itself, bounding nilpotency indices.
    fn ring_length(&self) -> usize {
        if self.ring.is_field() {
            1
        } else {
            self.ring.c() as usize * self.ring.base_rank()
        }
    }

    pub fn base_change(&self, red: &crate::rings::Reduction) -> Result<PresentedModule> {
        PresentedModule::new(&red.to, self.n, self.relations.map(red))
    }

    pub fn to_json(&self) -> Value {
        json!({"ring": self.ring.spec(), "n": self.n, "relations": self.relations.to_json()})
    }
}

#[derive(Clone, Debug)]
pub struct OrdinaryDecomposition {
    /// e on generators, columns in canonical form
    pub e: Mat,
    /// the same idempotent from the Hensel route, (vB)(T) with uA + vB = 1
    pub hensel: Mat,
    /// k with e = T^{k!}
    pub stabilized_at: usize,
    pub ord_size: u128,
    pub nonord_size: u128,
}

impl OrdinaryDecomposition {
    pub fn one_minus_e(&self) -> Mat {
        Mat::identity(&self.e.ring, self.e.rows).sub(&self.e)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "e": self.e.to_json(),
            "stabilized_at": self.stabilized_at,
            "ord_size": self.ord_size.to_string(),
            "nonord_size": self.nonord_size.to_string(),
            "hensel_agrees": self.e == self.hensel,
        })
    }
}

/// T^{k!} for k = 1, 2, ... until the power is idempotent on M.
pub(crate) fn limit_idempotent(t: &Mat, is_idem: impl Fn(&Mat) -> bool) -> Result<(Mat, usize)> {
    let mut x = t.clone();
    let mut k = 1usize;
    while !is_idem(&x) {
        k += 1;
        if k > 100_000 {
            return Err(Error::InvalidEndomorphism("power sequence did not stabilise".into()));
        }
        x = x.pow(k as u64);
    }
    Ok((x, k))
}

/// (vB)(T) reduced modulo the characteristic polynomial, where P = A B is the
/// Hensel split of the characteristic polynomial and u A + v B = 1.
pub fn hensel_idempotent_poly(t: &Mat) -> Result<Vec<crate::rings::Elt>> {
    let r = &t.ring;
    let p = charpoly(t);
    let (a, b) = hensel_split(r, &p)?;
    let (_, v) = bezout(r, &a, &b)?;
    let vb = pmul(r, &v, &b);
    Ok(divrem_monic(r, &vb, &p).1)
}

pub fn module_ordinary(m: &PresentedModule, t: &Mat) -> Result<OrdinaryDecomposition> {
    m.check_endo(t)?;
    let ring = &m.ring;
    if m.n == 0 {
        let z = Mat::zeros(ring, 0, 0);
        return Ok(OrdinaryDecomposition { e: z.clone(), hensel: z, stabilized_at: 1, ord_size: 1, nonord_size: 1 });
    }
    let (x, k) = limit_idempotent(t, |x| m.same_map(&x.mul(x), x))?;
    let e = m.canonical(&x);
    let hensel = m.canonical(&eval_mat(&hensel_idempotent_poly(t)?, t));
    let one = Mat::identity(ring, m.n);
    Ok(OrdinaryDecomposition {
        ord_size: m.image_size(&e),
        nonord_size: m.image_size(&one.sub(&e)),
        e,
        hensel,
        stabilized_at: k,
    })
}

/// Check the defining properties of a decomposition: e idempotent and
/// commuting with T, T bijective on eM and nilpotent on (1-e)M, the Hensel
/// route agreeing, and |M| = |eM| |(1-e)M|.
pub fn verify_decomposition(m: &PresentedModule, t: &Mat, d: &OrdinaryDecomposition) -> std::result::Result<(), String> {
    let e = &d.e;
    if m.n == 0 {
        return Ok(());
    }
    if !m.same_map(&e.mul(e), e) {
        return Err("e is not idempotent".into());
    }
    if !m.same_map(&e.mul(t), &t.mul(e)) {
        return Err("e does not commute with T".into());
    }
    if m.image(&t.mul(e)) != m.image(e) {
        return Err("T is not bijective on eM".into());
    }
    let l = (m.n * m.ring_length()) as u64;
    if !m.is_zero_map(&t.pow(l).mul(&d.one_minus_e())) {
        return Err("T is not nilpotent on (1-e)M".into());
    }
    if d.e != d.hensel {
        return Err("Hensel route disagrees with the limit".into());
    }
    if d.ord_size * d.nonord_size != m.size() {
        return Err("eM and (1-e)M do not decompose M".into());
    }
    Ok(())
}

/// A short exact sequence 0 -> M1 --alpha--> M2 --beta--> M3 -> 0 with
/// compatible endomorphisms.
#[derive(Clone, Debug)]
pub struct ShortExact {
    pub m1: PresentedModule,
    pub m2: PresentedModule,
    pub m3: PresentedModule,
    pub alpha: Mat,
    pub beta: Mat,
    pub t1: Mat,
    pub t2: Mat,
    pub t3: Mat,
}

impl ShortExact {
    /// The T2-stable submodule generated by w, with the quotient.
    pub fn cyclic(m2: &PresentedModule, t2: &Mat, w: &[crate::rings::Elt]) -> Result<ShortExact> {
        let ring = &m2.ring;
        let n = m2.n;
        m2.check_endo(t2)?;
        let mut cols = vec![w.to_vec()];
        for _ in 1..n {
            cols.push(t2.mul_vec(cols.last().unwrap()));
        }
        let g = Mat::from_cols(ring, n, &cols);
        // T2 G = G C with C the companion matrix of the characteristic polynomial
        let p = charpoly(t2);
        let mut comp = Mat::zeros(ring, n, n);
        for i in 1..n {
            comp.set(i, i - 1, ring.one());
        }
        for i in 0..n {
            comp.set(i, n - 1, ring.neg(&p[i]));
        }
        // relations of M1: x with G x in the relations of M2
        let stacked = g.hstack(&m2.relations);
        let ker = crate::linalg::kernel(&stacked);
        let rel1 = ker.submatrix(0..n, 0..ker.cols);
        let m1 = PresentedModule::new(ring, n, rel1)?;
        let m3 = PresentedModule::new(ring, n, m2.relations.hstack(&g))?;
        let ses = ShortExact {
            m1,
            m2: m2.clone(),
            m3,
            alpha: g,
            beta: Mat::identity(ring, n),
            t1: comp,
            t2: t2.clone(),
            t3: t2.clone(),
        };
        ses.m1.check_endo(&ses.t1)?;
        ses.m3.check_endo(&ses.t3)?;
        Ok(ses)
    }

    /// The sequences of ordinary and of non-ordinary parts are exact.
    pub fn check_parts(&self) -> Result<(bool, bool)> {
        let d1 = module_ordinary(&self.m1, &self.t1)?;
        let d2 = module_ordinary(&self.m2, &self.t2)?;
        let d3 = module_ordinary(&self.m3, &self.t3)?;
        let ord = self.part_exact(&d1.e, &d2.e, &d3.e);
        let non = self.part_exact(&d1.one_minus_e(), &d2.one_minus_e(), &d3.one_minus_e());
        Ok((ord, non))
    }

    fn part_exact(&self, p1: &Mat, p2: &Mat, p3: &Mat) -> bool {
        let s1 = self.m1.image_size(p1);
        let s2 = self.m2.image_size(p2);
        let s3 = self.m3.image_size(p3);
        let a_img = self.alpha.mul(p1);
        // alpha maps the part into the part, injectively
        let into = self.m2.image(p2).contains_module(&Submodule::column_span(&a_img));
        let injective = self.m2.image_size(&a_img) == s1;
        // beta alpha = 0 and beta maps onto the part of M3
        let composite = self.m3.is_zero_map(&self.beta.mul(&a_img));
        let b_img = self.beta.mul(p2);
        let onto = self.m3.image(&b_img) == self.m3.image(p3);
        into && injective && composite && onto && s2 == s1 * s3
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z9() -> Ring {
        Ring::zpc(3, 2).unwrap()
    }

    #[test]
    fn unit_and_nilpotent_scalars() {
        let r = z9();
        let m = PresentedModule::free(&r, 1).unwrap();
        let d = module_ordinary(&m, &Mat::from_ints(&r, &[vec![2]])).unwrap();
        assert_eq!(d.e, Mat::from_ints(&r, &[vec![1]]));
        let d = module_ordinary(&m, &Mat::from_ints(&r, &[vec![3]])).unwrap();
        assert_eq!(d.e, Mat::from_ints(&r, &[vec![0]]));
        assert_eq!(d.ord_size, 1);
    }

    #[test]
    fn all_ones_matrix_over_z9() {
        let r = z9();
        let m = PresentedModule::free(&r, 2).unwrap();
        let t = Mat::from_ints(&r, &[vec![1, 1], vec![1, 1]]);
        let d = module_ordinary(&m, &t).unwrap();
        assert_eq!(d.e, Mat::from_ints(&r, &[vec![5, 5], vec![5, 5]]));
        assert_eq!(d.hensel, d.e);
        assert_eq!(d.ord_size, 9);
        verify_decomposition(&m, &t, &d).unwrap();
    }

    #[test]
    fn relations_respected() {
        let r = z9();
        // M = Z/9 ⊕ Z/3, T = diag(2, 0)
        let m = PresentedModule::new(&r, 2, Mat::from_ints(&r, &[vec![0], vec![3]])).unwrap();
        let t = Mat::from_ints(&r, &[vec![2, 0], vec![0, 3]]);
        let d = module_ordinary(&m, &t).unwrap();
        assert_eq!(d.ord_size, 9);
        assert_eq!(d.nonord_size, 3);
        verify_decomposition(&m, &t, &d).unwrap();
        let bad = Mat::from_ints(&r, &[vec![1, 1], vec![0, 1]]);
        assert!(matches!(m.check_endo(&bad), Err(Error::InvalidEndomorphism(_))));
    }

    #[test]
    fn cyclic_sequence_parts_exact() {
        let r = z9();
        let m2 = PresentedModule::free(&r, 3).unwrap();
        let t = Mat::from_ints(&r, &[vec![1, 3, 0], vec![0, 3, 1], vec![0, 0, 2]]);
        let w: Vec<_> = [0, 1, 1].iter().map(|&x| r.from_int(x)).collect();
        let ses = ShortExact::cyclic(&m2, &t, &w).unwrap();
        assert_eq!(ses.check_parts().unwrap(), (true, true));
    }
}
