use std::collections::BTreeMap;

use ordkit::complexes::random::{random_complex, random_elt, random_invertible};
use ordkit::complexes::{chain_map_generators, minimalize, ChainMap, FreeComplex};
use ordkit::linalg::{inverse, Mat};
use ordkit::tower::{
    control_check, find_isomorphism, glue_good, glue_minimal, glue_ordinary, ComplexTower, QuotientChain, TowerLevel,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEARCH: usize = 1 << 14;

fn chain(rng: &mut ChaCha8Rng) -> QuotientChain {
    let (p, depth) = [(3, 2), (3, 3), (5, 2)][rng.gen_range(0..3)];
    QuotientChain::p_adic(p, depth).unwrap()
}

fn random_endo(c: &FreeComplex, rng: &mut ChaCha8Rng) -> ChainMap {
    let mut t = ChainMap::zero(c, c);
    for g in chain_map_generators(c, c) {
        t = t.add(&g.scale(&random_elt(&c.ring, rng)));
    }
    t
}

/// Random basis change per degree, as an isomorphism c -> c'.
fn random_automorphism(c: &FreeComplex, rng: &mut ChaCha8Rng) -> ChainMap {
    let p: BTreeMap<i64, (Mat, Mat)> = c
        .degrees()
        .map(|i| {
            let g = random_invertible(&c.ring, c.rank(i), rng);
            let gi = inverse(&g).unwrap();
            (i, (g, gi))
        })
        .collect();
    let target = c.transport(&p);
    ChainMap::from_fn(c, &target, |i| p[&i].0.clone())
}

/// Move every level to a random basis, adjusting transitions and endomorphisms.
fn scramble(tower: &ComplexTower, rng: &mut ChaCha8Rng) -> ComplexTower {
    let autos: Vec<ChainMap> = tower.levels.iter().map(|l| random_automorphism(&l.complex, rng)).collect();
    let invs: Vec<ChainMap> = autos.iter().map(|a| a.inverse().unwrap()).collect();
    let conj = |k: usize, m: &ChainMap| autos[k].compose(m).compose(&invs[k]);
    let mut levels: Vec<TowerLevel> = Vec::new();
    for (k, lv) in tower.levels.iter().enumerate() {
        let complex = autos[k].target.clone();
        let transition = (k > 0).then(|| {
            let step = tower.chain.step(k - 1);
            let down = invs[k].base_change(&step);
            autos[k - 1].compose(&tower.transition(k)).compose(&down)
        });
        levels.push(TowerLevel {
            complex,
            transition,
            t: lv.t.as_ref().map(|t| conj(k, t)),
            s: lv.s.as_ref().map(|s| conj(k, s)),
        });
    }
    ComplexTower::new(tower.chain.clone(), levels).unwrap()
}

/// Add a contractible summand R --1--> R to the chosen levels.
fn pad(tower: &ComplexTower, which: &[bool], deg: i64) -> ComplexTower {
    let mut levels: Vec<TowerLevel> = Vec::new();
    let padded: Vec<FreeComplex> = tower
        .levels
        .iter()
        .zip(which)
        .map(|(l, &w)| {
            if !w {
                return l.complex.clone();
            }
            let one = Mat::from_ints(&l.complex.ring, &[vec![1]]);
            l.complex.direct_sum(&FreeComplex::two_term(deg, one))
        })
        .collect();
    for k in 0..tower.len() {
        let proj = |target: &FreeComplex, src: &FreeComplex| {
            ChainMap::from_fn(src, target, |i| Mat::identity(&target.ring, target.rank(i)).hstack(&Mat::zeros(&target.ring, target.rank(i), src.rank(i) - target.rank(i))))
        };
        let incl = |src: &FreeComplex, target: &FreeComplex| {
            ChainMap::from_fn(src, target, |i| Mat::identity(&src.ring, src.rank(i)).vstack(&Mat::zeros(&src.ring, target.rank(i) - src.rank(i), src.rank(i))))
        };
        let transition = (k > 0).then(|| {
            let f = tower.transition(k);
            let red_src = padded[k].base_change(&tower.chain.step(k - 1));
            let into = incl(&f.target, &padded[k - 1]);
            let out = proj(&f.source, &red_src);
            into.compose(&f).compose(&out)
        });
        levels.push(TowerLevel { complex: padded[k].clone(), transition, t: None, s: None });
    }
    ComplexTower::new(tower.chain.clone(), levels).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn good_limit_reproduces_levels(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chain = chain(&mut rng);
        let m = random_complex(&chain.top, 0, rng.gen_range(0..=2), 3, &mut rng);
        let tower = ComplexTower::constant(&chain, &m, None, None);
        let l = glue_good(&tower).unwrap();
        prop_assert!(l.verified());
        for (k, lv) in tower.levels.iter().enumerate() {
            prop_assert_eq!(&l.complex.base_change(&chain.reds[k]), &lv.complex);
        }
        let scrambled = scramble(&tower, &mut rng);
        let l = glue_good(&scrambled).unwrap();
        prop_assert!(l.verified());
        for (k, f) in l.isos.iter().enumerate() {
            prop_assert!(f.commutator_defect().is_none());
            prop_assert!(f.inverse().is_some());
            prop_assert_eq!(&f.target, &scrambled.levels[k].complex);
        }
    }

    #[test]
    fn minimal_limit_ignores_padding_and_bases(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chain = chain(&mut rng);
        let m = random_complex(&chain.top, 0, 1, 2, &mut rng);
        let tower = ComplexTower::constant(&chain, &m, None, None);
        let which: Vec<bool> = (0..chain.len()).map(|_| rng.gen_bool(0.5)).collect();
        let padded = scramble(&pad(&tower, &which, rng.gen_range(0..=1)), &mut rng);
        let l = glue_minimal(&padded).unwrap();
        prop_assert!(l.verified());
        let model = minimalize(&m).complex;
        let found = find_isomorphism(&l.complex, &model, SEARCH);
        prop_assert!(matches!(found, Ok(Some(_))), "{:?} {} {}", found.map(|x| x.is_some()), l.complex.to_json(), model.to_json());
    }

    #[test]
    fn ordinary_limit_conclusions_and_control(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chain = chain(&mut rng);
        let m = random_complex(&chain.top, 0, rng.gen_range(0..=1), 3, &mut rng);
        let t = random_endo(&m, &mut rng);
        let s = t.compose(&t).add(&t);
        let tower = scramble(&ComplexTower::constant(&chain, &m, Some(&t), Some(&s)), &mut rng);
        let l = glue_ordinary(&tower).unwrap();
        prop_assert!(l.verified(), "{}", l.to_json());
        let r = control_check(&l.complex, &tower);
        prop_assert!(r.passed(), "{}", r.to_json());
    }

    #[test]
    fn deepening_and_reruns_give_isomorphic_limits(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let chain = QuotientChain::p_adic(3, 3).unwrap();
        let m = random_complex(&chain.top, 0, 1, 2, &mut rng);
        let t = random_endo(&m, &mut rng);
        let tower = ComplexTower::constant(&chain, &m, Some(&t), None);
        let full = glue_ordinary(&scramble(&tower, &mut rng)).unwrap();
        let again = glue_ordinary(&scramble(&tower, &mut rng)).unwrap();
        prop_assert!(find_isomorphism(&full.complex, &again.complex, SEARCH).unwrap().is_some());
        let shallow = glue_ordinary(&tower.truncated().unwrap()).unwrap();
        let down = full.complex.base_change(&chain.reds[chain.len() - 2]);
        prop_assert!(find_isomorphism(&shallow.complex, &down, SEARCH).unwrap().is_some());
    }
}
