//! Chain maps modulo homotopy, as H^0 of the Hom complex.

use std::collections::BTreeMap;

use super::homology::{homology, homology_at, induced_map, DegreeHomology};
use super::{ChainMap, FreeComplex, Homotopy};
use crate::error::{Error, Result};
use crate::linalg::{kernel, solve, Mat};
use crate::rings::Elt;

/// Block layout of Hom^k(C, D) = ⊕_i Hom(C^i, D^{i+k}), row-major blocks.
#[derive(Clone, Debug)]
struct Layout {
    k: i64,
    blocks: Vec<(i64, usize, usize, usize)>, // (i, rows, cols, offset)
    dim: usize,
}

impl Layout {
    fn new(c: &FreeComplex, d: &FreeComplex, k: i64) -> Layout {
        let mut blocks = Vec::new();
        let mut off = 0;
        for i in c.degrees() {
            let (rows, cols) = (d.rank(i + k), c.rank(i));
            if rows * cols > 0 {
                blocks.push((i, rows, cols, off));
                off += rows * cols;
            }
        }
        Layout { k, blocks, dim: off }
    }

    fn flatten(&self, comp: impl Fn(i64) -> Mat) -> Vec<Elt> {
        let mut out = Vec::with_capacity(self.dim);
        for &(i, _, _, _) in &self.blocks {
            out.extend(comp(i).data);
        }
        out
    }

    fn unflatten(&self, ring: &crate::rings::Ring, v: &[Elt]) -> BTreeMap<i64, Mat> {
        self.blocks
            .iter()
            .map(|&(i, rows, cols, off)| {
                (i, Mat { ring: ring.clone(), rows, cols, data: v[off..off + rows * cols].to_vec() })
            })
            .collect()
    }
}

/// Matrix of δ(φ) = d φ - (-1)^k φ d on Hom^k -> Hom^{k+1}.
fn hom_differential(c: &FreeComplex, d: &FreeComplex, from: &Layout, to: &Layout) -> Mat {
    let ring = &c.ring;
    let k = from.k;
    let sign = if k % 2 == 0 { ring.from_int(-1) } else { ring.one() };
    let mut cols = Vec::with_capacity(from.dim);
    for &(i, rows, ccols, _) in &from.blocks {
        for a in 0..rows {
            for b in 0..ccols {
                let mut phi = Mat::zeros(ring, rows, ccols);
                phi.set(a, b, ring.one());
                // contributes to block i (d_D phi) and block i-1 (phi d_C)
                let left = d.diff(i + k).mul(&phi);
                let right = phi.mul(&c.diff(i - 1)).scale(&sign);
                let col = to.flatten(|j| {
                    if j == i {
                        left.clone()
                    } else if j == i - 1 {
                        right.clone()
                    } else {
                        Mat::zeros(ring, d.rank(j + k + 1), c.rank(j))
                    }
                });
                cols.push(col);
            }
        }
    }
    Mat::from_cols(ring, to.dim, &cols)
}

/// Generators of the module of chain maps C -> D.
pub fn chain_map_generators(c: &FreeComplex, d: &FreeComplex) -> Vec<ChainMap> {
    let ring = &c.ring;
    let lay_0 = Layout::new(c, d, 0);
    let lay_1 = Layout::new(c, d, 1);
    let delta_0 = hom_differential(c, d, &lay_0, &lay_1);
    let z = kernel(&delta_0);
    (0..z.cols)
        .map(|j| ChainMap::graded(c, d, lay_0.unflatten(ring, &z.col(j))).expect("layout shapes"))
        .filter(|f| !f.is_zero())
        .collect()
}

/// Generators of the chain self-maps of C inducing zero on all homology.
pub fn homology_null_generators(c: &FreeComplex) -> Vec<ChainMap> {
    let gens = chain_map_generators(c, c);
    if gens.is_empty() {
        return gens;
    }
    let h = homology(c);
    let base = h.degrees.values().next().map(|x| x.ring.clone()).unwrap_or_else(|| c.ring.clone());
    // each generator gives the stacked entries of its induced maps; entries
    // live in R/(factor of the target row)
    let mut rows_rel: Vec<Elt> = Vec::new();
    let mut cols: Vec<Vec<Elt>> = vec![Vec::new(); gens.len()];
    for hd in h.degrees.values() {
        if hd.is_zero() {
            continue;
        }
        for (k, f) in gens.iter().enumerate() {
            let m = induced_map(f, hd, hd);
            cols[k].extend(m.data.iter().cloned());
        }
        for _ in 0..hd.num_generators() {
            rows_rel.extend(hd.factors.iter().cloned());
        }
    }
    if rows_rel.is_empty() {
        return gens;
    }
    let nrows = rows_rel.len();
    let v = Mat::from_cols(&base, nrows, &cols);
    let stacked = v.hstack(&Mat::diag(&base, &rows_rel));
    let ker = kernel(&stacked);
    let expanded = base != c.ring;
    (0..ker.cols)
        .map(|j| {
            let coeffs = ker.col(j);
            let mut acc = ChainMap::zero(c, c);
            for (k, g) in gens.iter().enumerate() {
                let a = if expanded { c.ring.from_int(coeffs[k][0] as i64) } else { coeffs[k].clone() };
                acc = acc.add(&g.scale(&a));
            }
            acc
        })
        .filter(|f| !f.is_zero())
        .collect()
}

#[derive(Clone, Debug)]
pub struct HomotopyClassBasis {
    pub source: FreeComplex,
    pub target: FreeComplex,
    /// H^0 of the Hom complex
    pub classes: DegreeHomology,
    /// representative chain map for each generator
    pub reps: Vec<ChainMap>,
    lay_m1: Layout,
    lay_0: Layout,
    delta_m1: Mat,
}

pub fn homotopy_classes(c: &FreeComplex, d: &FreeComplex) -> Result<HomotopyClassBasis> {
    if !c.ring.is_finite() {
        return Err(Error::InfiniteHomSpace);
    }
    let ring = &c.ring;
    let lay_m1 = Layout::new(c, d, -1);
    let lay_0 = Layout::new(c, d, 0);
    let lay_1 = Layout::new(c, d, 1);
    let delta_m1 = hom_differential(c, d, &lay_m1, &lay_0);
    let delta_0 = hom_differential(c, d, &lay_0, &lay_1);
    let hom = FreeComplex::new_unchecked(ring, -1, vec![lay_m1.dim, lay_0.dim, lay_1.dim], vec![delta_m1.clone(), delta_0]);
    let classes = homology_at(&hom, 0);
    let reps = (0..classes.reps.cols)
        .map(|j| {
            let col = classes.reps.col(j);
            let v = if classes.is_expanded() { Mat::collapse_vec(ring, &col) } else { col };
            ChainMap::graded(c, d, lay_0.unflatten(ring, &v)).expect("layout shapes")
        })
        .collect();
    Ok(HomotopyClassBasis { source: c.clone(), target: d.clone(), classes, reps, lay_m1, lay_0, delta_m1 })
}

impl HomotopyClassBasis {
    pub fn num_generators(&self) -> usize {
        self.classes.num_generators()
    }

    pub fn factors(&self) -> &[Elt] {
        &self.classes.factors
    }

    fn vectorize(&self, f: &ChainMap) -> Vec<Elt> {
        self.lay_0.flatten(|i| f.comp(i))
    }

    /// Coordinates of the class of a chain map.
    pub fn class_of(&self, f: &ChainMap) -> Vec<Elt> {
        self.classes.coords(&self.classes.lift_vec(&self.vectorize(f)))
    }

    pub fn is_null(&self, f: &ChainMap) -> bool {
        self.class_of(f).iter().all(|x| self.classes.ring.is_zero(x))
    }

    /// A homotopy h with f - g = d h + h d, if one exists.
    pub fn homotopy_between(&self, f: &ChainMap, g: &ChainMap) -> Option<Homotopy> {
        let ring = &self.source.ring;
        let v = self.vectorize(&f.sub(g));
        let x = solve(&self.delta_m1, &v)?;
        Some(Homotopy::from_comps(&self.source, &self.target, self.lay_m1.unflatten(ring, &x)))
    }

    /// The chain map Σ a_j rep_j.
    pub fn element(&self, coords: &[Elt]) -> ChainMap {
        let ring = &self.source.ring;
        let mut acc = ChainMap::zero(&self.source, &self.target);
        for (a, rep) in coords.iter().zip(&self.reps) {
            let scalar = if self.classes.is_expanded() { ring.from_int(a[0] as i64) } else { a.clone() };
            acc = acc.add(&rep.scale(&scalar));
        }
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Ring;

    #[test]
    fn zero_differential_two_scalars() {
        let r = Ring::zpc(3, 1).unwrap();
        let c = FreeComplex::two_term(0, Mat::zeros(&r, 1, 1));
        let b = homotopy_classes(&c, &c).unwrap();
        assert_eq!(b.num_generators(), 2);
        assert_eq!(b.classes.free_rank(), 2);
    }

    #[test]
    fn contractible_has_only_zero_class() {
        let r = Ring::zpc(3, 2).unwrap();
        let c = FreeComplex::two_term(0, Mat::from_ints(&r, &[vec![1]]));
        let b = homotopy_classes(&c, &c).unwrap();
        assert_eq!(b.num_generators(), 0);
        let id = ChainMap::identity(&c);
        assert!(b.is_null(&id));
        let h = b.homotopy_between(&id, &ChainMap::zero(&c, &c)).unwrap();
        assert!(h.boundary().sub(&id).is_zero());
    }

    #[test]
    fn zero_source_single_class() {
        let r = Ring::zpc(3, 2).unwrap();
        let z = FreeComplex::zero(&r, 0, 0);
        let c = FreeComplex::two_term(0, Mat::from_ints(&r, &[vec![3]]));
        let b = homotopy_classes(&z, &c).unwrap();
        assert_eq!(b.num_generators(), 0);
    }

    #[test]
    fn polynomial_ring_rejected() {
        let r = Ring::new(&crate::rings::RingSpec::PolyPID { p: 3 }).unwrap();
        let c = FreeComplex::free(&r, 0, 1);
        assert_eq!(homotopy_classes(&c, &c).unwrap_err(), Error::InfiniteHomSpace);
    }
}
