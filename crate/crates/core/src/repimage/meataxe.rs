//! Submodule search for modules over finite group algebras: Norton's
//! irreducibility test, composition factors, Hom spaces, and the complete
//! list of simple submodules.

use std::collections::BTreeSet;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{gf_row_reduce, Echelon, FMat};
use crate::rings::gfpoly;
use crate::rings::Gf;

/// Largest number of vectors enumerated by the exhaustive fallbacks.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 16;
const NORTON_ATTEMPTS: usize = 64;

/// A k[H]-module given by the action matrices of the generators of H on
/// column vectors.
#[derive(Clone, Debug)]
pub struct Module {
    pub k: Arc<Gf>,
    pub dim: usize,
    pub gens: Vec<FMat>,
}

/// A simple submodule with its reduced row echelon basis.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct SimpleSubmodule {
    pub basis: Vec<Vec<u32>>,
    /// "exhaustive" when every nonzero vector was spun, else "norton".
    pub certified: &'static str,
}

impl SimpleSubmodule {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_json(&self) -> Value {
        json!({ "dim": self.dim(), "basis": self.basis, "certified": self.certified })
    }
}

impl Module {
    pub fn new(k: &Arc<Gf>, dim: usize, gens: Vec<FMat>) -> Result<Module> {
        if gens.iter().any(|g| g.rows != dim || g.cols != dim) {
            return Err(Error::DimensionMismatch(format!("action matrices must be {dim}x{dim}")));
        }
        Ok(Module { k: k.clone(), dim, gens })
    }

    /// The dual module, acting by transposes.
    fn dual(&self) -> Module {
        Module { k: self.k.clone(), dim: self.dim, gens: self.gens.iter().map(FMat::transpose).collect() }
    }

    /// Smallest submodule containing the seeds.
    pub fn spin(&self, seeds: &[Vec<u32>]) -> Echelon {
        let k = &self.k;
        let mut e = Echelon::new(self.dim);
        let mut queue: Vec<Vec<u32>> = Vec::new();
        for s in seeds {
            if let Some(v) = e.insert(k, s.clone()) {
                queue.push(v);
            }
        }
        while let Some(v) = queue.pop() {
            for g in &self.gens {
                if let Some(w) = e.insert(k, g.apply(k, &v)) {
                    queue.push(w);
                }
            }
            if e.rank() == self.dim {
                break;
            }
        }
        e
    }

    /// Action on a submodule with reduced row echelon basis `basis`.
    pub fn restrict(&self, basis: &[Vec<u32>]) -> Module {
        let k = &self.k;
        let pivots: Vec<usize> = basis.iter().map(|b| b.iter().position(|&x| x != 0).unwrap()).collect();
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let cols: Vec<Vec<u32>> = basis
                    .iter()
                    .map(|b| {
                        let w = g.apply(k, b);
                        pivots.iter().map(|&p| w[p]).collect()
                    })
                    .collect();
                FMat::from_cols(basis.len(), &cols)
            })
            .collect();
        Module { k: k.clone(), dim: basis.len(), gens }
    }

    /// Action on the quotient by a submodule with reduced row echelon basis,
    /// in the coordinates of the non-pivot standard vectors.
    pub fn quotient(&self, basis: &[Vec<u32>]) -> Module {
        let k = &self.k;
        let pivots: Vec<usize> = basis.iter().map(|b| b.iter().position(|&x| x != 0).unwrap()).collect();
        let free: Vec<usize> = (0..self.dim).filter(|c| !pivots.contains(c)).collect();
        let reduce = |mut v: Vec<u32>| {
            for (b, &p) in basis.iter().zip(&pivots) {
                let c = v[p];
                if c != 0 {
                    for (x, &y) in v.iter_mut().zip(b) {
                        *x = k.sub(*x, k.mul(c, y));
                    }
                }
            }
            v
        };
        let gens = self
            .gens
            .iter()
            .map(|g| {
                let cols: Vec<Vec<u32>> = free
                    .iter()
                    .map(|&c| {
                        let w = reduce(g.col(c));
                        free.iter().map(|&f| w[f]).collect()
                    })
                    .collect();
                FMat::from_cols(free.len(), &cols)
            })
            .collect();
        Module { k: k.clone(), dim: free.len(), gens }
    }

    /// A proper nonzero submodule (reduced basis), or `None` when the module
    /// is irreducible.
    pub fn proper_submodule(&self) -> Result<Option<Vec<Vec<u32>>>> {
        Ok(match self.split()? {
            Split::Proper(b) => Some(b),
            Split::Irreducible(_) => None,
        })
    }

    fn split(&self) -> Result<Split> {
        let k = &self.k;
        let d = self.dim;
        if d <= 1 {
            return Ok(Split::Irreducible("exhaustive"));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(0x6d65_6174);
        let mut pool: Vec<FMat> = self.gens.clone();
        if pool.is_empty() {
            pool.push(FMat::identity(d));
        }
        for _ in 0..NORTON_ATTEMPTS {
            let i = rng.gen_range(0..pool.len());
            let j = rng.gen_range(0..pool.len());
            let prod = pool[i].mul(k, &pool[j]);
            pool.push(prod);
            let mut a = FMat::scalar(d, rng.gen_range(0..k.size()));
            for m in &pool {
                let c = rng.gen_range(0..k.size());
                if c != 0 {
                    a = a.add(k, &m.scale(k, c));
                }
            }
            let mut factors = gfpoly::factor(k, &a.charpoly(k));
            factors.sort_by_key(|(f, _)| f.len());
            for (f, _) in factors {
                let n = a.eval_poly(k, &f);
                let ker = n.kernel(k);
                for c in 0..ker.cols {
                    let sp = self.spin(&[ker.col(c)]);
                    if sp.rank() < d {
                        return Ok(Split::Proper(sp.canonical(k)));
                    }
                }
                if ker.cols == f.len() - 1 {
                    let dker = n.transpose().kernel(k);
                    let dual = self.dual();
                    let sp = dual.spin(&[dker.col(0)]);
                    if sp.rank() < d {
                        return Ok(Split::Proper(annihilator(k, d, sp.rows())));
                    }
                    return Ok(Split::Irreducible("norton"));
                }
            }
        }
        let total = (k.size() as u64).checked_pow(d as u32).unwrap_or(u64::MAX);
        if total > EXHAUSTIVE_LIMIT {
            return Err(Error::BoundExceeded(EXHAUSTIVE_LIMIT as usize));
        }
        for v in projective_points(k, d) {
            let sp = self.spin(&[v]);
            if sp.rank() < d {
                return Ok(Split::Proper(sp.canonical(k)));
            }
        }
        Ok(Split::Irreducible("exhaustive"))
    }

    /// Composition factors with multiplicity, each tagged with how its
    /// irreducibility was certified.
    pub fn composition_factors(&self) -> Result<Vec<(Module, &'static str)>> {
        if self.dim == 0 {
            return Ok(Vec::new());
        }
        match self.split()? {
            Split::Irreducible(how) => Ok(vec![(self.clone(), how)]),
            Split::Proper(b) => {
                let mut out = self.restrict(&b).composition_factors()?;
                out.extend(self.quotient(&b).composition_factors()?);
                Ok(out)
            }
        }
    }
}

enum Split {
    Proper(Vec<Vec<u32>>),
    Irreducible(&'static str),
}

/// {x : u·x = 0 for every row u}, as a reduced basis.
fn annihilator(k: &Gf, d: usize, rows: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let m = FMat { rows: rows.len(), cols: d, a: rows.to_vec() };
    let ker = m.kernel(k);
    let mut basis: Vec<Vec<u32>> = (0..ker.cols).map(|c| ker.col(c)).collect();
    gf_row_reduce(k, &mut basis);
    basis
}

/// Nonzero vectors of k^d whose first nonzero coordinate is 1.
pub fn projective_points(k: &Gf, d: usize) -> impl Iterator<Item = Vec<u32>> + '_ {
    let q = k.size() as u64;
    (0..d).rev().flat_map(move |lead| {
        let tail = d - lead - 1;
        (0..q.pow(tail as u32)).map(move |mut t| {
            let mut v = vec![0u32; d];
            v[lead] = 1;
            for x in v[lead + 1..].iter_mut() {
                *x = (t % q) as u32;
                t /= q;
            }
            v
        })
    })
}

/// Basis of Hom_H(S, V) as dim V × dim S matrices.
pub fn hom_space(s: &Module, v: &Module) -> Vec<FMat> {
    let k = &v.k;
    let (m, n) = (v.dim, s.dim);
    let unknowns = m * n;
    let mut rows = Vec::new();
    for (gv, gs) in v.gens.iter().zip(&s.gens) {
        for i in 0..m {
            for j in 0..n {
                let mut row = vec![0u32; unknowns];
                for t in 0..m {
                    row[t * n + j] = k.add(row[t * n + j], gv.a[i][t]);
                }
                for t in 0..n {
                    row[i * n + t] = k.sub(row[i * n + t], gs.a[t][j]);
                }
                rows.push(row);
            }
        }
    }
    let sys = FMat { rows: rows.len(), cols: unknowns, a: rows };
    let ker = sys.kernel(k);
    (0..ker.cols)
        .map(|c| {
            let x = ker.col(c);
            FMat { rows: m, cols: n, a: x.chunks(n.max(1)).take(m).map(<[u32]>::to_vec).collect() }
        })
        .collect()
}

/// Every simple submodule of V.
///
/// The isomorphism types come from the composition factors; each simple
/// submodule of type S is the image of a nonzero map S → V, so all of them
/// are listed by running through Hom_H(S, V) up to scalars.
pub fn simple_submodules(v: &Module) -> Result<Vec<SimpleSubmodule>> {
    let k = &v.k;
    if v.dim == 0 {
        return Ok(Vec::new());
    }
    let mut types: Vec<(Module, &'static str)> = Vec::new();
    for (f, how) in v.composition_factors()? {
        let seen = types.iter().any(|(t, _)| t.dim == f.dim && !hom_space(&f, t).is_empty());
        if !seen {
            types.push((f, how));
        }
    }
    let mut found: BTreeSet<SimpleSubmodule> = BTreeSet::new();
    for (s, how) in types {
        let homs = hom_space(&s, v);
        if homs.is_empty() {
            continue;
        }
        let count = (k.size() as u64).checked_pow(homs.len() as u32).unwrap_or(u64::MAX);
        if count > EXHAUSTIVE_LIMIT {
            return Err(Error::BoundExceeded(EXHAUSTIVE_LIMIT as usize));
        }
        let mut images: BTreeSet<Vec<Vec<u32>>> = BTreeSet::new();
        for c in projective_points(k, homs.len()) {
            let mut f = FMat::zeros(v.dim, s.dim);
            for (ci, h) in c.iter().zip(&homs) {
                if *ci != 0 {
                    f = f.add(k, &h.scale(k, *ci));
                }
            }
            let mut basis = f.transpose().a;
            gf_row_reduce(k, &mut basis);
            basis.retain(|r| r.iter().any(|&x| x != 0));
            images.insert(basis);
        }
        for basis in images {
            let certified = if certify_exhaustively(v, &basis) { "exhaustive" } else { how };
            found.insert(SimpleSubmodule { basis, certified });
        }
    }
    Ok(found.into_iter().collect())
}

/// Spins every nonzero vector of a small subspace; true when the subspace is
/// small enough to check and every vector spins back to all of it.
fn certify_exhaustively(v: &Module, basis: &[Vec<u32>]) -> bool {
    let k = &v.k;
    let total = (k.size() as u64).checked_pow(basis.len() as u32).unwrap_or(u64::MAX);
    if total > 4096 {
        return false;
    }
    projective_points(k, basis.len()).all(|c| {
        let mut w = vec![0u32; v.dim];
        for (ci, b) in c.iter().zip(basis) {
            for (x, &y) in w.iter_mut().zip(b) {
                *x = k.add(*x, k.mul(*ci, y));
            }
        }
        v.spin(&[w]).rank() == basis.len()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repimage::adjoint::{ad_action, ad_dim};
    use crate::repimage::{dihedral_example, mat};

    #[test]
    fn trivial_group_on_plane_has_all_lines() {
        let k = Gf::prime(5).unwrap();
        let m = Module::new(&k, 2, vec![FMat::identity(2)]).unwrap();
        assert_eq!(simple_submodules(&m).unwrap().len(), 6);
        let bare = Module::new(&k, 2, vec![]).unwrap();
        assert_eq!(simple_submodules(&bare).unwrap().len(), 6);
    }

    #[test]
    fn dihedral_adjoint_has_three_lines() {
        let h = dihedral_example();
        let gens = h.generators.iter().map(|g| ad_action(&h.k, g, 1)).collect();
        let m = Module::new(&h.k, ad_dim(2), gens).unwrap();
        let s = simple_submodules(&m).unwrap();
        let bases: Vec<Vec<Vec<u32>>> = s.iter().map(|w| w.basis.clone()).collect();
        // coordinates (E12, E21, H1)
        assert_eq!(bases, vec![vec![vec![0, 0, 1]], vec![vec![1, 1, 0]], vec![vec![1, 4, 0]]]);
    }

    #[test]
    fn irreducible_rotation_is_its_own_simple() {
        // rotation of order 3 over F_2-free field F_5: x^2 + x + 1 has no root mod 5
        let k = Gf::prime(5).unwrap();
        let r = mat(&k, &[&[0, 4], &[1, 4]]);
        let m = Module::new(&k, 2, vec![r]).unwrap();
        let s = simple_submodules(&m).unwrap();
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].dim(), 2);
    }

    #[test]
    fn hom_dimension_of_permutation_module() {
        // k[C_3] over F_7 splits into three distinct characters
        let k = Gf::prime(7).unwrap();
        let c = mat(&k, &[&[0, 0, 1], &[1, 0, 0], &[0, 1, 0]]);
        let m = Module::new(&k, 3, vec![c.clone()]).unwrap();
        assert_eq!(hom_space(&m, &m).len(), 3);
        assert_eq!(simple_submodules(&m).unwrap().len(), 3);
        assert_eq!(m.composition_factors().unwrap().len(), 3);
    }
}
