//! Seeded random instances shared by the suites and the corpus generator.

use std::collections::BTreeMap;
use std::sync::Arc;

use ordkit::complexes::random::{random_elt, random_invertible};
use ordkit::complexes::{chain_map_generators, ChainMap, FreeComplex};
use ordkit::hecke::{all_perms, HeckeElt};
use ordkit::linalg::{inverse, FMat, Mat};
use ordkit::repimage::Module;
use ordkit::rings::Gf;
use ordkit::tower::{ComplexTower, TowerLevel};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

/// Per-item seed, independent of evaluation order.
pub fn item_seed(label: &str, seed: u64, index: usize) -> u64 {
    let mut h = Sha256::new();
    h.update(label.as_bytes());
    h.update(seed.to_le_bytes());
    h.update((index as u64).to_le_bytes());
    u64::from_le_bytes(h.finalize()[..8].try_into().expect("32-byte digest"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random linear combination of the chain-map generators of End(c).
pub fn random_endo(c: &FreeComplex, rng: &mut ChaCha8Rng) -> ChainMap {
    let mut t = ChainMap::zero(c, c);
    for g in chain_map_generators(c, c) {
        t = t.add(&g.scale(&random_elt(&c.ring, rng)));
    }
    t
}

/// Random basis change per degree, as an isomorphism c -> c'.
pub fn random_automorphism(c: &FreeComplex, rng: &mut ChaCha8Rng) -> ChainMap {
    let p: BTreeMap<i64, (Mat, Mat)> = c
        .degrees()
        .map(|i| {
            let g = random_invertible(&c.ring, c.rank(i), rng);
            let gi = inverse(&g).expect("invertible");
            (i, (g, gi))
        })
        .collect();
    let target = c.transport(&p);
    ChainMap::from_fn(c, &target, |i| p[&i].0.clone())
}

/// Move every level of a tower to a random basis, adjusting transitions and
/// endomorphisms.
pub fn scramble_tower(tower: &ComplexTower, rng: &mut ChaCha8Rng) -> ComplexTower {
    let autos: Vec<ChainMap> = tower.levels.iter().map(|l| random_automorphism(&l.complex, rng)).collect();
    let invs: Vec<ChainMap> = autos.iter().map(|a| a.inverse().expect("automorphism")).collect();
    let conj = |k: usize, m: &ChainMap| autos[k].compose(m).compose(&invs[k]);
    let mut levels = Vec::new();
    for (k, lv) in tower.levels.iter().enumerate() {
        let transition = (k > 0).then(|| {
            let down = invs[k].base_change(&tower.chain.step(k - 1));
            autos[k - 1].compose(&tower.transition(k)).compose(&down)
        });
        levels.push(TowerLevel {
            complex: autos[k].target.clone(),
            transition,
            t: lv.t.as_ref().map(|t| conj(k, t)),
            s: lv.s.as_ref().map(|s| conj(k, s)),
        });
    }
    ComplexTower::new(tower.chain.clone(), levels).expect("scrambling keeps the shape")
}

pub fn random_hecke_elt(n: usize, k: &Arc<Gf>, q: u32, rng: &mut ChaCha8Rng) -> HeckeElt {
    let perms = all_perms(n);
    let mut x = HeckeElt::zero(n, k, q);
    for _ in 0..rng.gen_range(1..=4) {
        let lambda: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let w = perms[rng.gen_range(0..perms.len())].clone();
        let c = rng.gen_range(1..k.size());
        x = x.add(&HeckeElt::basis(n, k, q, lambda, w).scale(c)).expect("same algebra");
    }
    x
}

pub fn random_matrix(k: &Gf, rows: usize, cols: usize, density: f64, rng: &mut ChaCha8Rng) -> FMat {
    let mut m = FMat::zeros(rows, cols);
    for row in m.a.iter_mut() {
        for x in row.iter_mut() {
            if rng.gen_bool(density) {
                *x = rng.gen_range(0..k.size());
            }
        }
    }
    m
}

pub fn random_invertible_fmat(k: &Gf, n: usize, density: f64, rng: &mut ChaCha8Rng) -> FMat {
    loop {
        let m = random_matrix(k, n, n, density, rng);
        if m.det(k) != 0 {
            return m;
        }
    }
}

/// Block upper triangular action matrices (diagonal blocks sometimes
/// repeated), conjugated by a random change of basis.
pub fn random_block_module(k: &Arc<Gf>, d: usize, ngens: usize, rng: &mut ChaCha8Rng) -> Module {
    let q = k.size();
    let mut sizes = Vec::new();
    let mut left = d;
    while left > 0 {
        let s = rng.gen_range(1..=left);
        sizes.push(s);
        left -= s;
    }
    let repeat = rng.gen_bool(0.4);
    let p = random_invertible_fmat(k, d, 1.0, rng);
    let pinv = p.inverse(k).expect("invertible");
    let mut gens = Vec::new();
    for _ in 0..ngens {
        let mut b = FMat::zeros(d, d);
        let mut start = 0;
        let mut first: Option<Vec<Vec<u32>>> = None;
        for &s in &sizes {
            let block: Vec<Vec<u32>> = match (&first, repeat) {
                (Some(f), true) if f.len() == s => f.clone(),
                _ => (0..s).map(|_| (0..s).map(|_| rng.gen_range(0..q)).collect()).collect(),
            };
            if first.is_none() {
                first = Some(block.clone());
            }
            for i in 0..s {
                for j in 0..s {
                    b.a[start + i][start + j] = block[i][j];
                }
                for j in start + s..d {
                    b.a[start + i][j] = if rng.gen_bool(0.3) { rng.gen_range(0..q) } else { 0 };
                }
            }
            start += s;
        }
        gens.push(p.mul(k, &b).mul(k, &pinv));
    }
    Module::new(k, d, gens).expect("square generators")
}
