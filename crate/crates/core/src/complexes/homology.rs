//! Homology with certified witnesses. Over group algebras and truncated rings
//! the computation runs on the base expansion, so reports describe H as a
//! Z/p^c-module there.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::linalg::euclid::{from_grid, to_grid, Engine, Euclid};
use crate::linalg::smith::smith;
use crate::linalg::{rank_mod_m, solve, Mat, Submodule};
use crate::rings::{Elt, Ring};
use crate::with_engine;

/// H^i of a complex: H ≅ ⊕_j R/(factors[j]) with generator classes `reps`.
#[derive(Clone, Debug)]
pub struct DegreeHomology {
    pub degree: i64,
    /// ring the computation ran over (the base for expanded rings)
    pub ring: Ring,
    /// ring of the complex
    pub source_ring: Ring,
    /// nonunit invariant factors; zero marks a free summand
    pub factors: Vec<Elt>,
    /// cycle representatives as columns (engine coordinates)
    pub reps: Mat,
    vinv: Mat,
    zscale: Vec<(usize, Elt)>,
    u2: Mat,
    keep: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct HomologyReport {
    pub degrees: BTreeMap<i64, DegreeHomology>,
}

fn engine_ring(ring: &Ring) -> Ring {
    match Engine::for_ring(ring) {
        Some(_) => ring.clone(),
        None => Ring::zpc(ring.p(), ring.c()).expect("base ring"),
    }
}

pub fn expanded(c: &FreeComplex) -> FreeComplex {
    let base = engine_ring(&c.ring);
    if base == c.ring {
        return c.clone();
    }
    let r = c.ring.base_rank();
    let ranks = c.degrees().map(|i| c.rank(i) * r).collect();
    let d = (c.lo..c.hi).map(|i| c.diff(i).expand(&base)).collect();
    FreeComplex::new_unchecked(&base, c.lo, ranks, d)
}

pub fn homology(c: &FreeComplex) -> HomologyReport {
    let e = expanded(c);
    let degrees = c.degrees().map(|i| (i, degree_homology(&e, &c.ring, i))).collect();
    HomologyReport { degrees }
}

/// H^i alone.
pub fn homology_at(c: &FreeComplex, i: i64) -> DegreeHomology {
    degree_homology(&expanded(c), &c.ring, i)
}

fn degree_homology(e: &FreeComplex, source_ring: &Ring, i: i64) -> DegreeHomology {
    let ring = e.ring.clone();
    let engine = Engine::for_ring(&ring).expect("engine ring");
    with_engine!(&engine, ops => compute(ops, &ring, source_ring, e, i))
}

fn compute<R: Euclid>(r: &R, ring: &Ring, source_ring: &Ring, c: &FreeComplex, i: i64) -> DegreeHomology {
    let di = c.diff(i);
    let dprev = c.diff(i - 1);
    let n = c.rank(i);
    let s1 = smith(r, to_grid(r, &di), n, true);
    let k = s1.diag.len();
    // Z = ker d_i, generated by V e_j * a_j
    let mut zscale: Vec<(usize, R::E)> = Vec::new();
    for j in 0..n {
        let a = if j < k { r.ann(&s1.diag[j]) } else { Some(r.one()) };
        if let Some(a) = a {
            zscale.push((j, a));
        }
    }
    let gcols: Vec<Vec<R::E>> =
        zscale.iter().map(|(j, a)| (0..n).map(|t| r.mul(&s1.v[t][*j], a)).collect()).collect();
    // coordinates of boundaries in the Z generators
    let bg = to_grid(r, &dprev);
    let l = dprev.cols;
    let zlen = zscale.len();
    let mut pres = vec![vec![r.zero(); zlen + l]; zlen];
    for (row, (_, a)) in zscale.iter().enumerate() {
        pres[row][row] = r.ann(a).unwrap_or_else(|| r.zero());
    }
    for col in 0..l {
        let y: Vec<R::E> = (0..n)
            .map(|t| (0..n).fold(r.zero(), |acc, s| r.add(&acc, &r.mul(&s1.vinv[t][s], &bg[s][col]))))
            .collect();
        for (row, (j, a)) in zscale.iter().enumerate() {
            pres[row][zlen + col] = r.div_exact(&y[*j], a).expect("boundary lies in the kernel");
        }
    }
    let s2 = smith(r, pres, zlen + l, true);
    let keep: Vec<usize> = (0..zlen).filter(|&j| !r.is_unit(&s2.diag[j])).collect();
    let factors: Vec<Elt> = keep.iter().map(|&j| r.to_elt(&s2.diag[j])).collect();
    // reps = G * U2^{-1}[:, keep]
    let reps_grid: Vec<Vec<R::E>> = (0..n)
        .map(|t| {
            keep.iter()
                .map(|&j| (0..zlen).fold(r.zero(), |acc, s| r.add(&acc, &r.mul(&gcols[s][t], &s2.uinv[s][j]))))
                .collect()
        })
        .collect();
    let reps = from_grid(r, ring, &reps_grid, keep.len());
    let vinv = from_grid(r, ring, &s1.vinv, n);
    let u2 = from_grid(r, ring, &s2.u, zlen);
    DegreeHomology {
        degree: i,
        ring: ring.clone(),
        source_ring: source_ring.clone(),
        factors,
        reps,
        vinv,
        zscale: zscale.into_iter().map(|(j, a)| (j, r.to_elt(&a))).collect(),
        u2,
        keep,
    }
}

impl DegreeHomology {
    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn num_generators(&self) -> usize {
        self.factors.len()
    }

    pub fn is_expanded(&self) -> bool {
        self.ring != self.source_ring
    }

    /// Number of free summands (zero factors).
    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|f| self.ring.is_zero(f)).count()
    }

    /// Length over the engine ring: Σ valuations for Z/p^c (free summands
    /// count c), dimension over fields, Σ degrees of torsion factors over F_p[S]
    /// (free summands excluded).
    pub fn length(&self) -> u64 {
        let r = &self.ring;
        self.factors
            .iter()
            .map(|f| {
                if r.is_poly_pid() {
                    if r.is_zero(f) {
                        0
                    } else {
                        (f.len() - 1) as u64
                    }
                } else if r.field().is_some_and(|g| g.degree() > 1) {
                    1
                } else {
                    r.valuation(f) as u64
                }
            })
            .sum()
    }

    /// Factors as a canonical JSON list.
    pub fn factors_json(&self) -> Value {
        Value::Array(self.factors.iter().map(|f| self.ring.elt_to_json(f)).collect())
    }

    /// Express a vector of the complex's ring in engine coordinates.
    pub fn lift_vec(&self, x: &[Elt]) -> Vec<Elt> {
        if self.is_expanded() {
            Mat::expand_vec(&self.source_ring, x)
        } else {
            x.to_vec()
        }
    }

    /// Coordinates of the class of a cycle (given in engine coordinates),
    /// reduced modulo the factors.
    pub fn coords(&self, x: &[Elt]) -> Vec<Elt> {
        let engine = Engine::for_ring(&self.ring).unwrap();
        with_engine!(&engine, ops => self.coords_engine(ops, x))
    }

    fn coords_engine<R: Euclid>(&self, r: &R, x: &[Elt]) -> Vec<Elt> {
        let n = self.vinv.rows;
        let xv: Vec<R::E> = x.iter().map(|e| r.from_elt(e)).collect();
        let vinv = to_grid(r, &self.vinv);
        let y: Vec<R::E> =
            (0..n).map(|t| (0..n).fold(r.zero(), |acc, s| r.add(&acc, &r.mul(&vinv[t][s], &xv[s])))).collect();
        let t: Vec<R::E> = self
            .zscale
            .iter()
            .map(|(j, a)| r.div_exact(&y[*j], &r.from_elt(a)).unwrap_or_else(|| panic!("not a cycle in degree {}", self.degree)))
            .collect();
        let u2 = to_grid(r, &self.u2);
        self.keep
            .iter()
            .zip(&self.factors)
            .map(|(&j, f)| {
                let s = (0..t.len()).fold(r.zero(), |acc, m| r.add(&acc, &r.mul(&u2[j][m], &t[m])));
                let f = r.from_elt(f);
                let red = if r.is_zero(&f) { s } else { r.divrem(&s, &f).1 };
                r.to_elt(&red)
            })
            .collect()
    }

    /// Diagonal presentation matrix of H.
    pub fn presentation(&self) -> Mat {
        Mat::diag(&self.ring, &self.factors)
    }

    /// Check the witnesses against the complex.
    pub fn verify(&self, c: &FreeComplex) -> Result<()> {
        let e = expanded(c);
        let i = self.degree;
        let di = e.diff(i);
        let dprev = e.diff(i - 1);
        let fail = |what: &str| Err(Error::InvalidComplex(format!("homology witness failed in degree {i}: {what}")));
        if !di.mul(&self.reps).is_zero() {
            return fail("representative is not a cycle");
        }
        for j in 0..self.reps.cols {
            let rep = self.reps.col(j);
            let scaled: Vec<Elt> = rep.iter().map(|x| self.ring.mul(&self.factors[j], x)).collect();
            if solve(&dprev, &scaled).is_none() {
                return fail("factor times representative is not a boundary");
            }
            let unit: Vec<Elt> =
                (0..self.reps.cols).map(|k| if k == j { self.ring.one() } else { self.ring.zero() }).collect();
            if self.coords(&rep) != unit {
                return fail("coordinates of representatives are not the unit vectors");
            }
        }
        for j in 0..dprev.cols {
            if self.coords(&dprev.col(j)).iter().any(|x| !self.ring.is_zero(x)) {
                return fail("boundary has nonzero coordinates");
            }
        }
        let z = crate::linalg::kernel(&di);
        for j in 0..z.cols {
            let g = z.col(j);
            let co = self.coords(&g);
            let back = self.reps.mul_vec(&co);
            let diff: Vec<Elt> = g.iter().zip(&back).map(|(a, b)| self.ring.sub(a, b)).collect();
            if solve(&dprev, &diff).is_none() {
                return fail("cycle not generated by representatives");
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "factors": self.factors_json(),
            "generators": self.num_generators(),
            "free_rank": self.free_rank(),
            "length": self.length(),
        })
    }
}

impl HomologyReport {
    pub fn get(&self, i: i64) -> Option<&DegreeHomology> {
        self.degrees.get(&i)
    }

    pub fn is_acyclic(&self) -> bool {
        self.degrees.values().all(|h| h.is_zero())
    }

    pub fn verify(&self, c: &FreeComplex) -> Result<()> {
        self.degrees.values().try_for_each(|h| h.verify(c))
    }

    /// Isomorphism type per degree (factor lists), zero degrees dropped.
    pub fn signature(&self) -> BTreeMap<i64, Vec<Elt>> {
        self.degrees.iter().filter(|(_, h)| !h.is_zero()).map(|(&i, h)| (i, h.factors.clone())).collect()
    }

    pub fn to_json(&self) -> Value {
        let mut m = serde_json::Map::new();
        for (i, h) in &self.degrees {
            m.insert(i.to_string(), h.to_json());
        }
        Value::Object(m)
    }
}

/// Matrix of the map induced on H^i by a chain map (columns: images of the
/// source generators in target coordinates).
pub fn induced_map(f: &ChainMap, src: &DegreeHomology, tgt: &DegreeHomology) -> Mat {
    let i = src.degree;
    let fi = f.comp(i);
    let fe = if src.is_expanded() { fi.expand(&src.ring) } else { fi };
    let cols: Vec<Vec<Elt>> = (0..src.reps.cols).map(|j| tgt.coords(&fe.mul_vec(&src.reps.col(j)))).collect();
    Mat::from_cols(&tgt.ring, tgt.num_generators(), &cols)
}

/// dim_k H^i(C ⊗ k) for every degree.
pub fn residue_dims(c: &FreeComplex) -> BTreeMap<i64, usize> {
    let mut out = BTreeMap::new();
    for i in c.degrees() {
        let r_out = rank_mod_m(&c.diff(i));
        let r_in = rank_mod_m(&c.diff(i - 1));
        out.insert(i, c.rank(i) - r_out - r_in);
    }
    out
}

/// Exactness of A --alpha--> B --beta--> C at B, for presented modules
/// B = R^k / diag(rb), C = R^l / diag(rc).
pub fn exact_at(alpha: &Mat, rb: &[Elt], beta: &Mat, rc: &[Elt]) -> bool {
    let ring = &beta.ring;
    let k = rb.len();
    // ker beta: x with beta x in diag(rc)
    let stacked = beta.hstack(&Mat::diag(ring, rc));
    let kern = crate::linalg::kernel(&stacked);
    let mut kgens: Vec<Vec<Elt>> = (0..kern.cols).map(|j| kern.col(j)[..k].to_vec()).collect();
    let mut igens: Vec<Vec<Elt>> = (0..alpha.cols).map(|j| alpha.col(j)).collect();
    for (j, f) in rb.iter().enumerate() {
        let mut e = vec![ring.zero(); k];
        e[j] = f.clone();
        kgens.push(e.clone());
        igens.push(e);
    }
    Submodule::span(ring, k, &kgens) == Submodule::span(ring, k, &igens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn multiplication_by_three_on_z9() {
        let r = Ring::zpc(3, 2).unwrap();
        let c = FreeComplex::two_term(0, Mat::from_ints(&r, &[vec![3]]));
        let h = homology(&c);
        h.verify(&c).unwrap();
        assert_eq!(h.get(0).unwrap().factors, vec![r.from_int(3)]);
        assert_eq!(h.get(1).unwrap().factors, vec![r.from_int(3)]);
    }

    #[test]
    fn zero_differentials_give_free_homology() {
        let r = Ring::zpc(3, 2).unwrap();
        let c = FreeComplex::two_term(0, Mat::zeros(&r, 1, 2));
        let h = homology(&c);
        h.verify(&c).unwrap();
        assert_eq!(h.get(0).unwrap().free_rank(), 2);
        assert_eq!(h.get(1).unwrap().free_rank(), 1);
    }

    #[test]
    fn identity_is_acyclic() {
        let r = Ring::zpc(3, 2).unwrap();
        let c = FreeComplex::two_term(0, Mat::from_ints(&r, &[vec![1]]));
        assert!(homology(&c).is_acyclic());
    }
}
