//! Random complexes and maps for tests and corpora.

use rand::Rng;

use super::FreeComplex;
use crate::linalg::Mat;
use crate::rings::{Elt, Ring};

pub fn random_elt(ring: &Ring, rng: &mut impl Rng) -> Elt {
    if ring.is_poly_pid() {
        let p = ring.p() as i64;
        let len = rng.gen_range(0..=3);
        let coeffs: Vec<i64> = (0..len).map(|_| rng.gen_range(0..p)).collect();
        return ring.canon(&coeffs).unwrap();
    }
    if let Some(f) = ring.field() {
        return ring.from_field_elt(rng.gen_range(0..f.size()));
    }
    let n = ring.base_modulus() as i64;
    let coeffs: Vec<i64> = (0..ring.base_rank()).map(|_| rng.gen_range(0..n)).collect();
    ring.canon(&coeffs).unwrap()
}

/// A random element of the maximal ideal (S ↦ 0 convention over F_p[S]).
pub fn random_nonunit(ring: &Ring, rng: &mut impl Rng) -> Elt {
    let e = random_elt(ring, rng);
    ring.sub(&e, &ring.lift_residue(ring.residue(&e)))
}

/// Mostly nonunits, sometimes units, sometimes zero.
pub fn random_entry(ring: &Ring, rng: &mut impl Rng) -> Elt {
    match rng.gen_range(0..6) {
        0 => ring.zero(),
        1 | 2 => random_elt(ring, rng),
        _ => random_nonunit(ring, rng),
    }
}

/// Product of random unit-triangular matrices, with a random unit diagonal.
pub fn random_invertible(ring: &Ring, n: usize, rng: &mut impl Rng) -> Mat {
    let lower = Mat::from_fn(ring, n, n, |i, j| if i > j { random_elt(ring, rng) } else if i == j { ring.one() } else { ring.zero() });
    let upper = Mat::from_fn(ring, n, n, |i, j| if i < j { random_elt(ring, rng) } else { ring.zero() });
    let diag: Vec<Elt> = (0..n)
        .map(|_| loop {
            let e = random_elt(ring, rng);
            if ring.is_unit(&e) {
                break e;
            }
        })
        .collect();
    lower.mul(&Mat::diag(ring, &diag).add(&upper))
}

/// A random complex in degrees [lo, hi] with ranks at most `max_rank`: a sum of
/// two-term pieces R --a--> R and free summands, in randomly changed bases.
pub fn random_complex(ring: &Ring, lo: i64, hi: i64, max_rank: usize, rng: &mut impl Rng) -> FreeComplex {
    let len = (hi - lo + 1) as usize;
    let mut ranks = vec![0usize; len];
    // pieces[k]: entries a of R --a--> R from degree lo+k to lo+k+1
    let mut pieces: Vec<Vec<Elt>> = vec![Vec::new(); len.saturating_sub(1)];
    for k in 0..len {
        let room = max_rank - ranks[k];
        if room == 0 {
            continue;
        }
        let free = rng.gen_range(0..=room.min(1));
        ranks[k] += free;
        if k + 1 < len {
            let room_next = max_rank - ranks[k + 1];
            let m = rng.gen_range(0..=(max_rank - ranks[k]).min(room_next));
            for _ in 0..m {
                pieces[k].push(random_entry(ring, rng));
            }
            ranks[k] += m;
            ranks[k + 1] += m;
        }
    }
    // normal form: in degree k the basis is [targets of pieces[k-1], sources of pieces[k], free]
    let d: Vec<Mat> = (0..len.saturating_sub(1))
        .map(|k| {
            let incoming = if k > 0 { pieces[k - 1].len() } else { 0 };
            let mut m = Mat::zeros(ring, ranks[k + 1], ranks[k]);
            for (t, a) in pieces[k].iter().enumerate() {
                m.set(t, incoming + t, a.clone());
            }
            m
        })
        .collect();
    let normal = FreeComplex::new_unchecked(ring, lo, ranks.clone(), d);
    let p = (0..len)
        .map(|k| {
            let g = random_invertible(ring, ranks[k], rng);
            let gi = crate::linalg::inverse(&g).expect("triangular product is invertible");
            (lo + k as i64, (g, gi))
        })
        .collect();
    normal.transport(&p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn random_complexes_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for (p, c) in [(3, 1), (3, 2), (5, 3)] {
            let r = Ring::zpc(p, c).unwrap();
            for _ in 0..20 {
                let cx = random_complex(&r, 0, 3, 4, &mut rng);
                cx.validate().unwrap();
                assert!(cx.ranks().iter().all(|&n| n <= 4));
            }
        }
    }
}
