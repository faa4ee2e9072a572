use std::collections::HashMap;

use ordkit::complexes::random::{random_complex, random_elt};
use ordkit::complexes::{chain_map_generators, ChainMap};
use ordkit::linalg::Mat;
use ordkit::ordinary::random::{random_extension, random_module_endo};
use ordkit::ordinary::{
    complex_ordinary, derived_idempotent, module_ordinary, verify_decomposition, PresentedModule, ShortExact,
};
use ordkit::rings::{Elt, Ideal, Ring};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Enumerate M and find e as the eventual idempotent power of T acting on the
/// set of elements (preperiod and period of the sequence of functions T^j).
fn brute_force_e(m: &PresentedModule, t: &Mat) -> HashMap<Vec<Elt>, Vec<Elt>> {
    let ring = &m.ring;
    let all = ring.elements(1 << 12).unwrap();
    let mut elems: Vec<Vec<Elt>> = vec![Vec::new()];
    for _ in 0..m.n {
        elems = elems
            .into_iter()
            .flat_map(|v| {
                all.iter().map(move |x| {
                    let mut w = v.clone();
                    w.push(x.clone());
                    w
                })
            })
            .collect();
    }
    let canon = |v: &[Elt]| m.relation_module().reduce(v);
    let mut reps: Vec<Vec<Elt>> = elems.iter().map(|v| canon(v)).collect();
    reps.sort();
    reps.dedup();
    let apply = |f: &HashMap<Vec<Elt>, Vec<Elt>>, v: &Vec<Elt>| f[v].clone();
    let t_map: HashMap<Vec<Elt>, Vec<Elt>> = reps.iter().map(|v| (v.clone(), canon(&t.mul_vec(v)))).collect();
    let mut powers: Vec<HashMap<Vec<Elt>, Vec<Elt>>> = vec![t_map.clone()];
    loop {
        let last = powers.last().unwrap();
        let next: HashMap<_, _> = reps.iter().map(|v| (v.clone(), apply(&t_map, &apply(last, v)))).collect();
        if let Some(s) = powers.iter().position(|f| *f == next) {
            // powers[s] = T^{s+1} recurs at exponent powers.len() + 1
            let period = powers.len() - s;
            let start = s + 1;
            let m_exp = start.div_ceil(period) * period;
            return powers[m_exp - 1].clone();
        }
        powers.push(next);
    }
}

fn small_ring(rng: &mut ChaCha8Rng) -> Ring {
    let choices = [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2), (7, 1)];
    let (p, c) = choices[rng.gen_range(0..choices.len())];
    Ring::zpc(p, c).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn limit_matches_brute_force(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = small_ring(&mut rng);
        let n = if ring.base_modulus() > 9 { 2 } else { 3 };
        let (m, t) = random_module_endo(&ring, n, &mut rng).unwrap();
        let d = module_ordinary(&m, &t).unwrap();
        let oracle = brute_force_e(&m, &t);
        for (v, ev) in &oracle {
            prop_assert_eq!(&m.relation_module().reduce(&d.e.mul_vec(v)), ev);
        }
    }

    #[test]
    fn decomposition_properties(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let ring = Ring::zpc(p, rng.gen_range(1..=3)).unwrap();
        let (m, t) = random_module_endo(&ring, rng.gen_range(1..=6), &mut rng).unwrap();
        let d = module_ordinary(&m, &t).unwrap();
        prop_assert_eq!(verify_decomposition(&m, &t, &d), Ok(()));
    }

    #[test]
    fn base_change_commutes(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::zpc(3, 3).unwrap();
        let (m, t) = random_module_endo(&ring, 3, &mut rng).unwrap();
        let j = rng.gen_range(1..=2);
        let red = ring.quotient(&Ideal::PPower { j }).unwrap();
        let mq = m.base_change(&red).unwrap();
        let dq = module_ordinary(&mq, &t.map(&red)).unwrap();
        let d = module_ordinary(&m, &t).unwrap();
        prop_assert_eq!(dq.e, mq.canonical(&d.e.map(&red)));
    }

    #[test]
    fn functoriality(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::zpc(5, 2).unwrap();
        let x = random_extension(&ring, rng.gen_range(1..=3), rng.gen_range(1..=3), &mut rng).unwrap();
        let e1 = module_ordinary(&x.m1, &x.t1).unwrap().e;
        let en = module_ordinary(&x.n, &x.tn).unwrap().e;
        let e2 = module_ordinary(&x.m2, &x.t2).unwrap().e;
        prop_assert!(x.n.same_map(&x.incl.mul(&e1), &en.mul(&x.incl)));
        prop_assert!(x.m2.same_map(&x.proj.mul(&en), &e2.mul(&x.proj)));
    }

    #[test]
    fn parts_of_short_exact_sequences_are_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::zpc(3, 2).unwrap();
        let (m2, t2) = random_module_endo(&ring, rng.gen_range(2..=4), &mut rng).unwrap();
        let w: Vec<Elt> = (0..m2.n).map(|_| random_elt(&ring, &mut rng)).collect();
        let ses = ShortExact::cyclic(&m2, &t2, &w).unwrap();
        prop_assert_eq!(ses.check_parts().unwrap(), (true, true));
    }

    #[test]
    fn complex_parts_and_derived_idempotent(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::zpc(3, 2).unwrap();
        let c = random_complex(&ring, 0, rng.gen_range(0..=2), 3, &mut rng);
        let gens = chain_map_generators(&c, &c);
        let mut t = ChainMap::zero(&c, &c);
        for g in &gens {
            t = t.add(&g.scale(&random_elt(&ring, &mut rng)));
        }
        let o = complex_ordinary(&c, &t).unwrap();
        prop_assert_eq!(o.verify(&c, &t), Ok(()));
        let d = derived_idempotent(&c, &t).unwrap();
        prop_assert!(d.unique());
    }
}
