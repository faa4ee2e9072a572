//! Random modules with endomorphisms over Z/p^c.

use rand::Rng;

use super::PresentedModule;
use crate::complexes::random::{random_entry, random_invertible};
use crate::error::Result;
use crate::linalg::{inverse, Mat};
use crate::rings::Ring;

/// ⊕ Z/p^{a_i} for random exponents a_i in 1..=c.
pub fn random_exponents(ring: &Ring, n: usize, rng: &mut impl Rng) -> Vec<u32> {
    (0..n).map(|_| rng.gen_range(1..=ring.c())).collect()
}

/// A random map ⊕ Z/p^{cols} -> ⊕ Z/p^{rows} (entries divisible where needed).
pub fn random_compatible(ring: &Ring, rows: &[u32], cols: &[u32], rng: &mut impl Rng) -> Mat {
    let p = ring.p() as i64;
    Mat::from_fn(ring, rows.len(), cols.len(), |i, j| {
        let k = rows[i].saturating_sub(cols[j]);
        ring.mul(&random_entry(ring, rng), &ring.from_int(p.pow(k)))
    })
}

fn relation_matrix(ring: &Ring, exps: &[u32]) -> Mat {
    let p = ring.p() as i64;
    Mat::diag(ring, &exps.iter().map(|&a| ring.from_int(p.pow(a))).collect::<Vec<_>>())
}

/// The module in a random basis: relations P N, endomorphism P T P^{-1}.
pub fn conjugate(m: &PresentedModule, t: &Mat, rng: &mut impl Rng) -> Result<(PresentedModule, Mat, Mat)> {
    let p = random_invertible(&m.ring, m.n, rng);
    let pinv = inverse(&p).expect("invertible");
    let m2 = PresentedModule::new(&m.ring, m.n, p.mul(&m.relations))?;
    Ok((m2, p.mul(t).mul(&pinv), p))
}

/// A random finite module over Z/p^c with a random endomorphism.
pub fn random_module_endo(ring: &Ring, n: usize, rng: &mut impl Rng) -> Result<(PresentedModule, Mat)> {
    let exps = random_exponents(ring, n, rng);
    let m = PresentedModule::new(ring, n, relation_matrix(ring, &exps))?;
    let t = random_compatible(ring, &exps, &exps, rng);
    let (m, t, _) = conjugate(&m, &t, rng)?;
    Ok((m, t))
}

/// N = M1 ⊕ M2 with T_N = [[T1, X], [0, T2]], the inclusion of M1 and the
/// projection onto M2; both intertwine the endomorphisms.
#[derive(Clone, Debug)]
pub struct Extension {
    pub m1: PresentedModule,
    pub t1: Mat,
    pub n: PresentedModule,
    pub tn: Mat,
    pub m2: PresentedModule,
    pub t2: Mat,
    pub incl: Mat,
    pub proj: Mat,
}

pub fn random_extension(ring: &Ring, n1: usize, n2: usize, rng: &mut impl Rng) -> Result<Extension> {
    let a1 = random_exponents(ring, n1, rng);
    let a2 = random_exponents(ring, n2, rng);
    let t1 = random_compatible(ring, &a1, &a1, rng);
    let t2 = random_compatible(ring, &a2, &a2, rng);
    let x = random_compatible(ring, &a1, &a2, rng);
    let all: Vec<u32> = a1.iter().chain(&a2).copied().collect();
    let tn = Mat::blocks(ring, &[vec![t1.clone(), x], vec![Mat::zeros(ring, n2, n1), t2.clone()]]);
    let m1 = PresentedModule::new(ring, n1, relation_matrix(ring, &a1))?;
    let m2 = PresentedModule::new(ring, n2, relation_matrix(ring, &a2))?;
    let n = PresentedModule::new(ring, n1 + n2, relation_matrix(ring, &all))?;
    let incl = Mat::identity(ring, n1).vstack(&Mat::zeros(ring, n2, n1));
    let proj = Mat::zeros(ring, n2, n1).hstack(&Mat::identity(ring, n2));
    // move N to a random basis
    let (n, tn, p) = conjugate(&n, &tn, rng)?;
    let pinv = inverse(&p).expect("invertible");
    Ok(Extension { m1, t1, n, tn, m2, t2, incl: p.mul(&incl), proj: proj.mul(&pinv) })
}
