use std::sync::atomic::{AtomicUsize, Ordering};

use rand::Rng;
use serde_json::{json, Value};

use ordkit::complexes::homology::homology;
use ordkit::complexes::random::random_complex;
use ordkit::complexes::{ChainMap, FreeComplex};
use ordkit::linalg::Mat;
use ordkit::patching::algebra::variable;
use ordkit::patching::{constant_input, koszul_input, patch, FinAlg};
use ordkit::rings::Ring;
use ordkit::tower::{control_check, find_isomorphism, glue_good, glue_minimal, glue_ordinary, ComplexTower, QuotientChain};

use super::{fixed, seeded, Case, Item};
use crate::gen::{random_endo, scramble_tower};

const SEARCH: usize = 1 << 14;

pub fn gluing(seed: u64) -> (Vec<Item>, Value) {
    let identical = AtomicUsize::new(0);
    let items = seeded("gluing", seed, 30, |i, rng| {
        let p = [3u64, 5][rng.gen_range(0..2)];
        // depths 2..=5 in turn
        let depth = 2 + (i % 4) as u32;
        let chain = QuotientChain::p_adic(p, depth).expect("p-adic chain");
        let m = random_complex(&chain.top, 0, rng.gen_range(0..=1), 2, rng);
        let t = random_endo(&m, rng);
        let s = t.compose(&t).add(&t);
        let tower = scramble_tower(&ComplexTower::constant(&chain, &m, Some(&t), Some(&s)), rng);
        let mut case = Case::new(tower.to_json());
        if let Some(l) = case.expect(glue_good(&tower), "glue_good") {
            case.check(l.verified(), "good limit not verified");
        }
        if let Some(l) = case.expect(glue_minimal(&tower), "glue_minimal") {
            case.check(l.verified(), "minimal limit not verified");
        }
        let Some(full) = case.expect(glue_ordinary(&tower), "glue_ordinary") else { return case };
        case.check(full.verified(), format!("ordinary limit not verified: {}", full.to_json()));
        let control = control_check(&full.complex, &tower);
        case.check(control.passed(), format!("control check failed: {}", control.to_json()));
        // the shallower tower must give the same answer below the dropped level
        let shallow_tower = tower.truncated().expect("depth at least 2");
        let Some(shallow) = case.expect(glue_ordinary(&shallow_tower), "glue_ordinary on the shallower tower") else { return case };
        case.check(shallow.verified(), "shallower ordinary limit not verified");
        let down = full.complex.base_change(&chain.reds[chain.len() - 2]);
        case.check(homology(&shallow.complex).signature() == homology(&down).signature(), "deepening changed the homology of the limit");
        if shallow.complex == down {
            identical.fetch_add(1, Ordering::Relaxed);
        } else {
            let iso = find_isomorphism(&shallow.complex, &down, SEARCH);
            case.check(matches!(iso, Ok(Some(_))), "deepening changed the ordinary limit");
        }
        if let Some(shallow_min) = case.expect(glue_minimal(&shallow_tower), "glue_minimal on the shallower tower") {
            let full_min = glue_minimal(&tower).expect("checked above").complex.base_change(&chain.reds[chain.len() - 2]);
            let same = shallow_min.complex == full_min || matches!(find_isomorphism(&shallow_min.complex, &full_min, SEARCH), Ok(Some(_)));
            case.check(same, "deepening changed the minimal limit");
        }
        case
    });
    (items, json!({"deepening_identical": identical.into_inner()}))
}

pub fn patching(seed: u64) -> (Vec<Item>, Value) {
    let mut items = seeded("patching/q0", seed, 8, |_, rng| {
        let c = rng.gen_range(1..=3);
        let lam = Ring::zpc(3, c).expect("Z/3^c");
        let c0 = random_complex(&lam, 0, rng.gen_range(0..=1), 2, rng);
        let amb = Ring::trunc(3, c, 1, 3).expect("ambient ring");
        let x = variable(&amb, 1, 0);
        let r0 = FinAlg::new(&amb, 1, &[amb.pow(&x, 2)]);
        let horizon = rng.gen_range(1..=3);
        let mut case = Case::new(json!({"q": 0, "c0": c0.to_json(), "horizon": horizon}));
        let Some(input) = case.expect(constant_input(&c0, &r0, &[ChainMap::zero(&c0, &c0)], 0, 3, None), "constant input") else { return case };
        if let Some(out) = case.expect(patch(&input, horizon), "patch") {
            case.check(out.verified(), "patched output not verified");
            // at a shallow horizon the coefficients are truncated: expect C_0 ⊗ Λ_h
            let red = lam.natural_map(&input.lambda_at(horizon)).expect("quotient of Λ");
            let expect = c0.base_change(&red);
            case.check(out.complex == expect, format!("q = 0 output {} differs from C_0 ⊗ Λ_h = {}", out.complex.to_json(), expect.to_json()));
        }
        case
    });
    items.extend(seeded("patching/constant", seed, 8, |_, rng| {
        let lam = Ring::zpc(3, 1).expect("F_3");
        let c0 = loop {
            let c = random_complex(&lam, 0, rng.gen_range(0..=1), 1, rng);
            if c.ranks().iter().all(|&r| r <= 1) {
                break c;
            }
        };
        let amb = Ring::trunc(3, 1, 1, 3).expect("ambient ring");
        let x = variable(&amb, 1, 0);
        let r0 = FinAlg::new(&amb, 1, &[amb.pow(&x, 2)]);
        let horizon = rng.gen_range(1..=3);
        let mut case = Case::new(json!({"q": 1, "c0": c0.to_json(), "horizon": horizon}));
        let Some(input) = case.expect(constant_input(&c0, &r0, &[ChainMap::zero(&c0, &c0)], 1, 4, None), "constant input") else { return case };
        if let Some(out) = case.expect(patch(&input, horizon), "patch") {
            case.check(out.verified(), "patched output not verified");
            case.check(out.complex == input.levels[horizon - 1].complex, "constant tower output differs from its level");
        }
        case
    }));
    let koszul = vec![(3u64, 5usize, 1usize), (3, 5, 2), (3, 5, 3), (3, 5, 4), (5, 3, 2)];
    items.extend(fixed("patching/koszul", koszul, |(p, levels, horizon)| {
        let mut case = Case::new(json!({"koszul": {"p": p, "levels": levels}, "horizon": horizon}));
        let Some(input) = case.expect(koszul_input(p, levels), "koszul input") else { return case };
        let Some(out) = case.expect(patch(&input, horizon), "patch") else { return case };
        case.check(out.verified(), format!("patched output not verified: {}", out.to_json()));
        let s_ring = input.level_ring(horizon);
        let s = variable(&s_ring, 1, 0);
        let expect = FreeComplex::two_term(0, Mat::scalar(&s_ring, 1, &s));
        case.check(matches!(find_isomorphism(&out.complex, &expect, SEARCH), Ok(Some(_))), "output is not [S --S--> S]");
        if let Some(again) = case.expect(patch(&input, horizon), "replay") {
            case.check(again.to_json().to_string() == out.to_json().to_string(), "replay differs");
        }
        case
    }));
    (items, json!({}))
}
