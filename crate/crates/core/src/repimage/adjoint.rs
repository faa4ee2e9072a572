//! The trace-zero adjoint module ad⁰ and its low-degree cohomology.
//!
//! Basis order: off-diagonal E_ij in row-major order, then
//! H_i = E_ii − E_nn for i < n − 1.

use crate::linalg::{Echelon, FMat};
use crate::rings::Gf;

use super::MatGroup;

pub fn ad_dim(n: usize) -> usize {
    n * n - 1
}

pub fn ad_basis(k: &Gf, n: usize, j: usize) -> FMat {
    let mut coords = vec![0u32; ad_dim(n)];
    coords[j] = 1;
    ad_from_coords(k, n, &coords)
}

pub fn ad_from_coords(k: &Gf, n: usize, c: &[u32]) -> FMat {
    let mut m = FMat::zeros(n, n);
    let mut t = 0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                m.a[i][j] = c[t];
                t += 1;
            }
        }
    }
    for i in 0..n - 1 {
        m.a[i][i] = c[t + i];
        m.a[n - 1][n - 1] = k.sub(m.a[n - 1][n - 1], c[t + i]);
    }
    m
}

/// Coordinates of a trace-zero matrix.
pub fn ad_coords(n: usize, x: &FMat) -> Vec<u32> {
    let mut c = Vec::with_capacity(ad_dim(n));
    for i in 0..n {
        for j in 0..n {
            if i != j {
                c.push(x.a[i][j]);
            }
        }
    }
    c.extend((0..n - 1).map(|i| x.a[i][i]));
    c
}

/// Matrix of X ↦ ω · h X h⁻¹ on ad⁰.
pub fn ad_action(k: &Gf, h: &FMat, omega: u32) -> FMat {
    let n = h.rows;
    let hinv = h.inverse(k).expect("invertible");
    let cols: Vec<Vec<u32>> = (0..ad_dim(n))
        .map(|j| {
            let y = h.mul(k, &ad_basis(k, n, j)).mul(k, &hinv).scale(k, omega);
            ad_coords(n, &y)
        })
        .collect();
    FMat::from_cols(ad_dim(n), &cols)
}

/// Action matrices of every group element, optionally twisted by a character.
pub fn element_actions(h: &MatGroup, omega: Option<&[u32]>) -> Vec<FMat> {
    h.elements
        .iter()
        .enumerate()
        .map(|(x, g)| ad_action(&h.k, g, omega.map_or(1, |w| w[x])))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Cohomology {
    pub h0: usize,
    pub z1: usize,
    pub b1: usize,
    pub h1: usize,
}

/// H⁰ and H¹ of a group with coefficients in a module given by the action
/// matrix of every element.
///
/// A cocycle is determined by its values on generators; those d·r unknowns
/// are propagated along the enumeration tree and then constrained by
/// φ(xs) = φ(x) + x·φ(s) for every element x and generator s.
pub fn cohomology(g: &MatGroup, acts: &[FMat]) -> Cohomology {
    let k = &g.k;
    let d = acts[0].rows;
    let r = g.generators.len();
    let unknowns = d * r;
    let id = FMat::identity(d);

    let mut fixed: Vec<FMat> = (0..r).map(|s| acts[g.generator_index(s)].sub(k, &id)).collect();
    if fixed.is_empty() {
        fixed.push(FMat::zeros(0, d));
    }
    let h0 = d - FMat::vstack(&fixed, d).rank(k);

    // phi[x] is the d × (d·r) matrix taking generator values to φ(x).
    let place = |a: &FMat, s: usize| {
        let mut m = FMat::zeros(d, unknowns);
        for i in 0..d {
            m.a[i][s * d..(s + 1) * d].copy_from_slice(&a.a[i]);
        }
        m
    };
    let mut phi = vec![FMat::zeros(d, unknowns); g.order()];
    for x in 1..g.order() {
        let (y, s) = g.parent[x].expect("tree parent");
        phi[x] = phi[y].add(k, &place(&acts[y], s));
    }
    let mut echelon = Echelon::new(unknowns);
    'outer: for x in 0..g.order() {
        for s in 0..r {
            let y = g.right[x][s];
            let c = phi[y].sub(k, &phi[x]).sub(k, &place(&acts[x], s));
            for row in c.a {
                echelon.insert(k, row);
                if echelon.rank() == unknowns {
                    break 'outer;
                }
            }
        }
    }
    let z1 = unknowns - echelon.rank();
    let b1 = d - h0;
    Cohomology { h0, z1, b1, h1: z1 - b1 }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repimage::{dihedral_example, enumerate_group, mat};

    #[test]
    fn coordinates_round_trip() {
        let k = Gf::prime(7).unwrap();
        for n in 2..5 {
            let c: Vec<u32> = (0..ad_dim(n) as u32).map(|i| (3 * i + 1) % 7).collect();
            let x = ad_from_coords(&k, n, &c);
            assert_eq!(x.trace(&k), 0);
            assert_eq!(ad_coords(n, &x), c);
        }
    }

    #[test]
    fn dihedral_cohomology_vanishes() {
        let h = dihedral_example();
        let c = cohomology(&h, &element_actions(&h, None));
        assert_eq!(c, Cohomology { h0: 0, z1: 3, b1: 3, h1: 0 });
    }

    #[test]
    fn unipotent_group_has_cohomology() {
        // over F_5, ad⁰ of ⟨[[1,1],[0,1]]⟩ is one Jordan block of size 3 < 5, so
        // the norm map vanishes and H¹ = ker N / (g − 1)M has dimension 3 − 2
        let k = Gf::prime(5).unwrap();
        let u = enumerate_group(&k, 2, &[mat(&k, &[&[1, 1], &[0, 1]])], 10).unwrap();
        let c = cohomology(&u, &element_actions(&u, None));
        assert_eq!(c, Cohomology { h0: 1, z1: 3, b1: 2, h1: 1 });
        // over F_3 the block has size p, ad⁰ is free and H¹ vanishes
        let k = Gf::prime(3).unwrap();
        let u = enumerate_group(&k, 2, &[mat(&k, &[&[1, 1], &[0, 1]])], 10).unwrap();
        assert_eq!(cohomology(&u, &element_actions(&u, None)).h1, 0);
    }
}
