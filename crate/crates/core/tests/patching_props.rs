use std::collections::BTreeMap;

use ordkit::complexes::random::{random_complex, random_elt, random_invertible};
use ordkit::complexes::{homotopy_classes, ChainMap, FreeComplex};
use ordkit::linalg::{inverse, Mat};
use ordkit::patching::algebra::{max_ideal_power, variable};
use ordkit::patching::{
    canonical_form, constant_input, datum_isomorphism, koszul_input, patch, reduce_level, FinAlg, InputLevel,
    PatchingDatum, PatchingInput,
};
use ordkit::rings::Ring;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Λ = F_3, q = 1, d = 0: C_N = S_N in degree 0, R_N = F_3[X]/(X^N), S acting as X and X as S.
fn line_input(levels: usize) -> PatchingInput {
    let lam = Ring::zpc(3, 1).unwrap();
    let amb = Ring::trunc(3, 1, 1, levels as u32 + 1).unwrap();
    let x = variable(&amb, 1, 0);
    let c0 = FreeComplex::free(&lam, 0, 1);
    let mut input = PatchingInput {
        lambda: lam.clone(),
        q: 1,
        d: 0,
        schedule: (1..=levels as u32).collect(),
        ambient: amb.clone(),
        vars: 1,
        r_inf: FinAlg::new(&amb, 1, &[]),
        c0: c0.clone(),
        r0: FinAlg::new(&amb, 1, &[x.clone()]),
        r0_action: vec![ChainMap::zero(&c0, &c0)],
        levels: Vec::new(),
    };
    for n in 1..=levels {
        let s_ring = input.level_ring(n);
        let complex = FreeComplex::free(&s_ring, 0, 1);
        let reduced = complex.base_change(&input.augmentation(n));
        let framing = ChainMap::identity(&reduced).retarget(&reduced, &input.c0_at(n));
        let action = vec![ChainMap::identity(&complex).scale(&variable(&s_ring, 1, 0))];
        let algebra = FinAlg::new(&amb, 1, &[amb.pow(&x, n as u64)]);
        input.levels.push(InputLevel { complex, framing, algebra, sigma: vec![x.clone()], action, to_r0: vec![amb.zero()] });
    }
    input.validate().unwrap();
    input
}

fn units(ring: &Ring) -> Vec<ordkit::rings::Elt> {
    ring.elements(1 << 12).unwrap().into_iter().filter(|x| ring.is_unit(x)).collect()
}

/// Every graded invertible map between two rank-≤1-per-degree complexes.
fn all_isos(a: &FreeComplex, b: &FreeComplex) -> Vec<ChainMap> {
    let us = units(&a.ring);
    let degs: Vec<i64> = a.degrees().filter(|&i| a.rank(i) > 0).collect();
    assert!(a.degrees().all(|i| a.rank(i) <= 1 && a.rank(i) == b.rank(i)));
    let mut out = Vec::new();
    let total = us.len().pow(degs.len() as u32);
    for mut k in 0..total {
        let mut comps = BTreeMap::new();
        for &i in &degs {
            comps.insert(i, Mat::scalar(&a.ring, 1, &us[k % us.len()]));
            k /= us.len();
        }
        out.push(ChainMap::from_fn(a, b, |i| comps.get(&i).cloned().unwrap_or_else(|| Mat::zeros(&a.ring, 0, 0))));
    }
    out
}

/// Isomorphism in Patch_N straight from the definition, by enumeration.
fn brute_isomorphic(input: &PatchingInput, a: &PatchingDatum, b: &PatchingDatum) -> bool {
    if a.level != b.level || a.complex.ranks() != b.complex.ranks() {
        return false;
    }
    if a.algebra != b.algebra || a.r0_target != b.r0_target {
        return false;
    }
    if a.sigma.iter().zip(&b.sigma).any(|(x, y)| a.algebra.reduce(x) != a.algebra.reduce(y)) {
        return false;
    }
    if a.to_r0.iter().zip(&b.to_r0).any(|(x, y)| a.r0_target.reduce(x) != a.r0_target.reduce(y)) {
        return false;
    }
    let aug = input.augmentation(a.level);
    let hb = homotopy_classes(&a.complex, &b.complex).unwrap();
    all_isos(&a.complex, &b.complex).into_iter().any(|f| {
        if f.commutator_defect().is_some() {
            return false;
        }
        let fa = f.base_change(&aug).retarget(&a.framing.source, &b.framing.source);
        if b.framing.compose(&fa).retarget(&a.framing.source, &a.framing.target) != a.framing {
            return false;
        }
        a.action.iter().zip(&b.action).all(|(s, t)| hb.is_null(&f.compose(s).sub(&t.compose(&f))))
    })
}

/// All valid level-n data for `line_input`, up to equality of reduced fields.
fn all_line_data(input: &PatchingInput, n: usize) -> Vec<PatchingDatum> {
    let s_ring = input.level_ring(n);
    let amb = &input.ambient;
    let b = input.bound(n);
    let base = FinAlg::new(amb, 1, &max_ideal_power(amb, 1, b));
    let x = variable(amb, 1, 0);
    let ideals: Vec<FinAlg> = (0..=b as u64 + 1).map(|k| base.with(&[amb.pow(&x, k)])).collect();
    let target = input.r0_target(n, Some(b));
    let c = FreeComplex::free(&s_ring, 0, 1);
    let reduced = c.base_change(&input.augmentation(n));
    let c0n = input.c0_at(n);
    let mut out: Vec<PatchingDatum> = Vec::new();
    for alg in ideals {
        let reps: Vec<_> = {
            let mut seen = Vec::new();
            for e in amb.elements(1 << 12).unwrap() {
                let r = alg.reduce(&e);
                if !seen.contains(&r) {
                    seen.push(r);
                }
            }
            seen
        };
        for psi in units(&input.lambda_at(n)) {
            for sigma in &reps {
                for a in s_ring.elements(1 << 12).unwrap() {
                    let d = PatchingDatum {
                        level: n,
                        complex: c.clone(),
                        framing: ChainMap::from_fn(&reduced, &c0n, |_| Mat::scalar(&c0n.ring, 1, &psi)),
                        algebra: alg.clone(),
                        sigma: vec![sigma.clone()],
                        action: vec![ChainMap::identity(&c).scale(&a)],
                        r0_target: target.clone(),
                        to_r0: vec![amb.zero()],
                    };
                    if d.validate(input).is_ok() && !out.contains(&d) {
                        out.push(d);
                    }
                }
            }
        }
    }
    out
}

#[test]
fn canonical_form_matches_brute_force_on_all_small_data() {
    let input = line_input(2);
    for n in 1..=2 {
        let data = all_line_data(&input, n);
        assert!(!data.is_empty());
        let forms: Vec<Vec<u8>> = data.iter().map(|d| canonical_form(d).unwrap().bytes).collect();
        for i in 0..data.len() {
            for j in 0..data.len() {
                assert_eq!(forms[i] == forms[j], brute_isomorphic(&input, &data[i], &data[j]), "level {n}: {i} vs {j}");
            }
        }
        let classes: std::collections::BTreeSet<_> = forms.iter().collect();
        // level 1: R = F_3 and X acts by 0, so only the framing varies and it is absorbed
        if n == 1 {
            assert_eq!(classes.len(), 1);
        } else {
            assert!(classes.len() > 1);
        }
    }
}

/// Rank-0 complex: the only level-1 datum over C_0 = 0.
#[test]
fn zero_complex_has_one_class() {
    let lam = Ring::zpc(3, 1).unwrap();
    let c0 = FreeComplex::zero(&lam, 0, 0);
    let amb = Ring::trunc(3, 1, 1, 3).unwrap();
    let r0 = FinAlg::new(&amb, 1, &[variable(&amb, 1, 0)]);
    let input = constant_input(&c0, &r0, &[ChainMap::zero(&c0, &c0)], 1, 2, None).unwrap();
    input.validate().unwrap();
    let d = PatchingDatum::at(&input, 2, 1).unwrap();
    let e = PatchingDatum::top(&input, 1).unwrap();
    assert_eq!(canonical_form(&d).unwrap().bytes, canonical_form(&e).unwrap().bytes);
}

/// Move a datum along a random chain isomorphism f, fixing the framing so that f is a morphism.
fn scramble(input: &PatchingInput, d: &PatchingDatum, rng: &mut ChaCha8Rng) -> PatchingDatum {
    let ring = &d.complex.ring;
    let p: BTreeMap<i64, (Mat, Mat)> = d
        .complex
        .degrees()
        .map(|i| {
            let g = random_invertible(ring, d.complex.rank(i), rng);
            let gi = inverse(&g).unwrap();
            (i, (g, gi))
        })
        .collect();
    let complex = d.complex.transport(&p);
    let f_inv = ChainMap::from_fn(&complex, &d.complex, |i| p[&i].1.clone());
    let aug = input.augmentation(d.level);
    let reduced = complex.base_change(&aug);
    let framing = d.framing.compose(&f_inv.base_change(&aug).retarget(&reduced, &d.framing.source));
    let conj = |t: &ChainMap| ChainMap::from_fn(&complex, &complex, |i| p[&i].0.mul(&t.comp(i)).mul(&p[&i].1));
    PatchingDatum {
        level: d.level,
        framing: framing.retarget(&reduced, &d.framing.target),
        action: d.action.iter().map(conj).collect(),
        complex,
        algebra: d.algebra.clone(),
        sigma: d.sigma.clone(),
        r0_target: d.r0_target.clone(),
        to_r0: d.to_r0.clone(),
    }
}

fn small_constant_input(rng: &mut ChaCha8Rng) -> PatchingInput {
    let q = rng.gen_range(0..=1);
    let lam = if q == 0 { Ring::zpc(3, rng.gen_range(1..=3)).unwrap() } else { Ring::zpc(3, 1).unwrap() };
    let d = rng.gen_range(0..=1);
    let c0 = loop {
        let c = random_complex(&lam, 0, d, if q == 0 { 2 } else { 1 }, rng);
        if q == 0 || c.ranks().iter().all(|&r| r <= 1) {
            break c;
        }
    };
    let amb = Ring::trunc(3, lam.c(), 1, 3).unwrap();
    let x = variable(&amb, 1, 0);
    let r0 = FinAlg::new(&amb, 1, &[amb.pow(&x, 2)]);
    let t = {
        let gens = ordkit::complexes::chain_map_generators(&c0, &c0);
        let mut t = ChainMap::zero(&c0, &c0);
        for g in gens {
            t = t.add(&g.scale(&random_elt(&lam, rng)));
        }
        t
    };
    // X acts by an endomorphism with X^2 ≃ 0: use 3t (nilpotent over Z/9) or 0
    let act = if lam.c() > 1 && rng.gen_bool(0.5) { t.scale(&lam.from_int(lam.p().pow(lam.c() - 1) as i64)) } else { ChainMap::zero(&c0, &c0) };
    constant_input(&c0, &r0, &[act], q, 4, None).unwrap()
}

/// F_N applied twice, against one direct base change from level N+2 to N.
fn reduce_two_levels(input: &PatchingInput, d: &PatchingDatum) -> PatchingDatum {
    let n = d.level - 2;
    let red = input.level_ring(n + 2).natural_map(&input.level_ring(n)).unwrap();
    let complex = d.complex.base_change(&red);
    let lam_red = input.lambda_at(n + 2).natural_map(&input.lambda_at(n)).unwrap();
    let reduced = complex.base_change(&input.augmentation(n));
    let b = input.bound(n);
    let mut extra = max_ideal_power(&input.ambient, input.vars, b);
    extra.push(input.ambient.from_int(input.p().pow(input.c_at(n)) as i64));
    // monomials of degree e_N in the σ_i (q <= 1 here)
    if input.q == 1 {
        extra.push(input.ambient.pow(&d.sigma[0], input.e(n) as u64));
    }
    let algebra = d.algebra.with(&extra);
    let r0_target = input.r0_target(n, Some(b));
    PatchingDatum {
        level: n,
        framing: d.framing.base_change(&lam_red).retarget(&reduced, &input.c0_at(n)),
        sigma: d.sigma.iter().map(|s| algebra.reduce(s)).collect(),
        to_r0: d.to_r0.iter().map(|y| r0_target.reduce(y)).collect(),
        action: d.action.iter().map(|t| t.base_change(&red).retarget(&complex, &complex)).collect(),
        complex,
        algebra,
        r0_target,
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn canonical_form_is_an_isomorphism_invariant(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = if rng.gen_bool(0.5) { koszul_input(3, 3).unwrap() } else { small_constant_input(&mut rng) };
        input.validate().unwrap();
        let m = rng.gen_range(1..=3);
        let n = rng.gen_range(1..=m);
        let d = PatchingDatum::at(&input, m, n).unwrap();
        let e = scramble(&input, &d, &mut rng);
        e.validate(&input).unwrap();
        prop_assert_eq!(canonical_form(&d).unwrap().bytes, canonical_form(&e).unwrap().bytes);
        let f = datum_isomorphism(&d, &e).unwrap().unwrap();
        prop_assert!(f.commutator_defect().is_none());
        if d.complex.ranks().iter().all(|&r| r <= 1) && d.complex.ring.size().unwrap() <= 27 {
            prop_assert!(brute_isomorphic(&input, &d, &e));
        }
    }

    #[test]
    fn reduction_is_a_functor(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = if rng.gen_bool(0.5) { koszul_input(3, 4).unwrap() } else { small_constant_input(&mut rng) };
        let m = rng.gen_range(3..=4);
        let top = scramble(&input, &PatchingDatum::top(&input, m).unwrap(), &mut rng);
        let twice = reduce_level(&input, &reduce_level(&input, &top).unwrap()).unwrap();
        twice.validate(&input).unwrap();
        prop_assert_eq!(&twice, &reduce_two_levels(&input, &top));
        // isomorphic inputs reduce to isomorphic outputs, and D(M, ·) is compatible
        let other = scramble(&input, &top, &mut rng);
        let a = canonical_form(&reduce_level(&input, &other).unwrap()).unwrap().bytes;
        let b = canonical_form(&reduce_level(&input, &top).unwrap()).unwrap().bytes;
        prop_assert_eq!(a, b);
        let direct = PatchingDatum::at(&input, m, m - 2).unwrap();
        let via = reduce_level(&input, &reduce_level(&input, &PatchingDatum::top(&input, m).unwrap()).unwrap()).unwrap();
        prop_assert_eq!(direct, via);
    }

    #[test]
    fn patched_output_lies_in_every_level_orbit(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let input = small_constant_input(&mut rng);
        let horizon = rng.gen_range(1..=3);
        let out = patch(&input, horizon).unwrap();
        prop_assert!(out.verified(), "{}", out.to_json());
        let mut e = out.datum.clone();
        loop {
            let n = e.level;
            let f = canonical_form(&e).unwrap().bytes;
            let orbit: Vec<Vec<u8>> = (n..=input.num_levels())
                .map(|m| canonical_form(&PatchingDatum::at(&input, m, n).unwrap()).unwrap().bytes)
                .collect();
            prop_assert!(orbit.contains(&f));
            prop_assert!(e.algebra.kills_max_power(input.bound(n)));
            if n == 1 { break; }
            e = reduce_level(&input, &e).unwrap();
        }
        // constant input: C_∞ is C_0 over the horizon ring
        let expect = ordkit::patching::constant_input(&input.c0, &input.r0, &input.r0_action, input.q, 1, None);
        prop_assert!(expect.is_ok());
        let lifted = input.levels[horizon - 1].complex.clone();
        prop_assert_eq!(&out.complex, &lifted);
        let again = patch(&input, horizon).unwrap();
        prop_assert_eq!(again.to_json().to_string(), out.to_json().to_string());
    }
}
