use std::collections::BTreeMap;
use std::sync::Arc;

use ordkit::hecke::module::FMat;
use ordkit::hecke::{
    all_perms, bernstein_fraction, center_element, hecke_mul, left_simple, mod_p_group_algebra_check, module_support,
    non_commuting, perm_inverse, reduced_word, HeckeElt, HeckeModule,
};
use ordkit::rings::Gf;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Laurent = BTreeMap<Vec<i64>, u32>;

fn lp_add(k: &Gf, a: &mut Laurent, m: Vec<i64>, c: u32) {
    let v = k.add(*a.get(&m).unwrap_or(&0), c);
    if v == 0 {
        a.remove(&m);
    } else {
        a.insert(m, v);
    }
}

fn swap_vars(f: &Laurent, i: usize) -> Laurent {
    f.iter()
        .map(|(m, &c)| {
            let mut m = m.clone();
            m.swap(i, i + 1);
            (m, c)
        })
        .collect()
}

/// Exact long division by 1 - x_{i+1}/x_i, leading terms by the exponent of x_i.
fn div_one_minus(k: &Gf, g: &Laurent, i: usize) -> Laurent {
    let mut r = g.clone();
    let mut h = Laurent::new();
    let floor = g.keys().map(|m| m[i]).min().unwrap_or(0);
    while let Some((m, &c)) = r.iter().max_by_key(|(m, _)| (m[i], (*m).clone())) {
        let m = m.clone();
        assert!(m[i] >= floor, "not divisible");
        lp_add(k, &mut h, m.clone(), c);
        lp_add(k, &mut r, m.clone(), k.neg(c));
        let mut my = m;
        my[i] -= 1;
        my[i + 1] += 1;
        lp_add(k, &mut r, my, c);
    }
    h
}

/// Demazure–Lusztig operator: T_s f = q s(f) + (q-1)(f - s(f))/(1 - x^{-α∨}).
fn dl(k: &Gf, q: u32, i: usize, f: &Laurent) -> Laurent {
    let sf = swap_vars(f, i);
    let mut diff = f.clone();
    for (m, &c) in &sf {
        lp_add(k, &mut diff, m.clone(), k.neg(c));
    }
    let frac = div_one_minus(k, &diff, i);
    let mut out = Laurent::new();
    for (m, &c) in &sf {
        lp_add(k, &mut out, m.clone(), k.mul(q, c));
    }
    for (m, &c) in &frac {
        lp_add(k, &mut out, m.clone(), k.mul(k.sub(q, 1), c));
    }
    out
}

/// Action of a Hecke element on the polynomial representation.
fn act(x: &HeckeElt, f: &Laurent) -> Laurent {
    let k = &x.k;
    let mut out = Laurent::new();
    for ((lambda, w), &c) in &x.terms {
        let mut g = f.clone();
        for &i in reduced_word(w).iter().rev() {
            g = dl(k, x.q, i, &g);
        }
        for (m, &d) in &g {
            let shifted: Vec<i64> = m.iter().zip(lambda).map(|(a, b)| a + b).collect();
            lp_add(k, &mut out, shifted, k.mul(c, d));
        }
    }
    out
}

fn probes(n: usize) -> Vec<Laurent> {
    let mut out = Vec::new();
    let mono = |m: Vec<i64>| -> Laurent { [(m, 1u32)].into_iter().collect() };
    out.push(mono(vec![0; n]));
    for j in 0..n {
        let mut m = vec![0; n];
        m[j] = 1;
        out.push(mono(m.clone()));
        m[j] = -2;
        out.push(mono(m));
    }
    out.push(mono((0..n as i64).map(|j| j * 2 - 1).collect()));
    out
}

fn random_elt(n: usize, k: &Arc<Gf>, q: u32, rng: &mut ChaCha8Rng) -> HeckeElt {
    let perms = all_perms(n);
    let mut x = HeckeElt::zero(n, k, q);
    for _ in 0..rng.gen_range(1..=4) {
        let lambda: Vec<i64> = (0..n).map(|_| rng.gen_range(-3..=3)).collect();
        let w = perms[rng.gen_range(0..perms.len())].clone();
        let c = rng.gen_range(1..k.size());
        x = x.add(&HeckeElt::basis(n, k, q, lambda, w).scale(c)).unwrap();
    }
    x
}

fn setting(rng: &mut ChaCha8Rng) -> (usize, Arc<Gf>, u32) {
    let p = [3u64, 5, 7][rng.gen_range(0..3)];
    let k = Gf::prime(p).unwrap();
    let q = rng.gen_range(0..p as u32);
    (rng.gen_range(1..=3), k, q)
}

#[test]
fn oracle_agrees_on_defining_relations() {
    let k = Gf::prime(7).unwrap();
    let q = 3;
    let t = HeckeElt::t_simple(2, &k, q, 0);
    for f in probes(2) {
        let tt = act(&t, &act(&t, &f));
        let mut expect = act(&t, &f);
        expect = expect.into_iter().map(|(m, c)| (m, k.mul(c, k.sub(q, 1)))).collect();
        for (m, c) in &f {
            lp_add(&k, &mut expect, m.clone(), k.mul(*c, q));
        }
        assert_eq!(tt, expect);
    }
    // T_s θ_{(1,0)} = θ_{(0,1)} T_s + (q−1) θ_{(1,0)}
    let lhs = hecke_mul(&t, &HeckeElt::theta(2, &k, q, vec![1, 0])).unwrap();
    let s = left_simple(0, &[0, 1]);
    let rhs = HeckeElt::basis(2, &k, q, vec![0, 1], s)
        .add(&HeckeElt::theta(2, &k, q, vec![1, 0]).scale(k.sub(q, 1)))
        .unwrap();
    assert_eq!(lhs, rhs);
    for f in probes(2) {
        assert_eq!(act(&lhs, &f), act(&t, &act(&HeckeElt::theta(2, &k, q, vec![1, 0]), &f)));
    }
}

#[test]
fn braid_relation_at_q_one_and_generic_q() {
    for (p, q) in [(5u64, 1u32), (7, 3)] {
        let k = Gf::prime(p).unwrap();
        let t1 = HeckeElt::t_simple(3, &k, q, 0);
        let t2 = HeckeElt::t_simple(3, &k, q, 1);
        let a = hecke_mul(&hecke_mul(&t1, &t2).unwrap(), &t1).unwrap();
        let b = hecke_mul(&hecke_mul(&t2, &t1).unwrap(), &t2).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn group_algebra_verdicts() {
    let v = mod_p_group_algebra_check(2, &Gf::prime(3).unwrap(), 1).unwrap();
    assert!(v.pass, "{:?}", v.violated);
    let v = mod_p_group_algebra_check(3, &Gf::prime(5).unwrap(), 1).unwrap();
    assert!(v.pass, "{:?}", v.violated);
    let v = mod_p_group_algebra_check(2, &Gf::prime(3).unwrap(), 2).unwrap();
    assert!(!v.pass);
    assert!(v.violated[0].starts_with("s1^2 = 1"));
    let f9 = Gf::new(3, vec![1, 0, 1]).unwrap();
    assert!(mod_p_group_algebra_check(2, &f9, 1).unwrap().pass);
}

#[test]
fn center_elements_are_central() {
    for n in 1..=3 {
        for (p, q) in [(3u64, 1u32), (5, 2), (7, 6)] {
            let k = Gf::prime(p).unwrap();
            for i in 1..=n {
                let z = center_element(i, n, &k, q).unwrap();
                assert!(non_commuting(&z).unwrap().is_empty(), "n = {n}, i = {i}, q = {q}");
            }
        }
    }
    let k = Gf::prime(5).unwrap();
    assert_eq!(center_element(2, 2, &k, 1).unwrap(), HeckeElt::theta(2, &k, 1, vec![1, 1]));
    let z = center_element(2, 3, &k, 1).unwrap();
    assert_eq!(z.terms.len(), 3);
    // a non-symmetric θ is not central
    assert!(!non_commuting(&HeckeElt::theta(2, &k, 2, vec![1, 0])).unwrap().is_empty());
}

fn dim_by_counting(k: &Gf, ops: &[FMat], d: usize) -> usize {
    // log_p of the number of vectors killed by every operator
    let p = k.size() as u64;
    let mut count = 0u64;
    for code in 0..p.pow(d as u32) {
        let v: Vec<u32> = (0..d).map(|i| ((code / p.pow(i as u32)) % p) as u32).collect();
        let col = FMat::from_cols(d, &[v]);
        if ops.iter().all(|m| m.mul(k, &col).is_zero()) {
            count += 1;
        }
    }
    (count as f64).log(p as f64).round() as usize
}

/// k[W] ⊗ V for commuting invertible A_1..A_n on V, conjugated by a random basis change.
fn induced_module(n: usize, k: &Arc<Gf>, a: &[FMat], rng: &mut ChaCha8Rng) -> HeckeModule {
    let perms = all_perms(n);
    let r = a[0].rows;
    let d = perms.len() * r;
    let idx = |w: &Vec<u8>| perms.iter().position(|u| u == w).unwrap();
    let theta: Vec<FMat> = (0..n)
        .map(|j| {
            let mut m = FMat::zeros(d, d);
            for (c, u) in perms.iter().enumerate() {
                let aj = &a[perm_inverse(u)[j] as usize];
                for x in 0..r {
                    for y in 0..r {
                        m.a[c * r + x][c * r + y] = aj.a[x][y];
                    }
                }
            }
            m
        })
        .collect();
    let t: Vec<FMat> = (0..n - 1)
        .map(|i| {
            let mut m = FMat::zeros(d, d);
            for (c, u) in perms.iter().enumerate() {
                let target = idx(&left_simple(i, u));
                for x in 0..r {
                    m.a[target * r + x][c * r + x] = 1;
                }
            }
            m
        })
        .collect();
    let p = loop {
        let mut m = FMat::zeros(d, d);
        for row in m.a.iter_mut() {
            for x in row.iter_mut() {
                *x = rng.gen_range(0..k.size());
            }
        }
        if m.inverse(k).is_some() {
            break m;
        }
    };
    let pi = p.inverse(k).unwrap();
    let conj = |m: &FMat| p.mul(k, m).mul(k, &pi);
    HeckeModule::new(n, k, 1, theta.iter().map(conj).collect(), t.iter().map(conj).collect()).unwrap()
}

fn random_torus_rep(n: usize, k: &Gf, r: usize, rng: &mut ChaCha8Rng) -> (Vec<FMat>, Vec<u32>) {
    // A_j = c_j (1 + N)^{e_j} with N strictly upper triangular
    let units: Vec<u32> = (1..k.size()).collect();
    let mut nil = FMat::zeros(r, r);
    for x in 0..r {
        for y in x + 1..r {
            nil.a[x][y] = rng.gen_range(0..k.size());
        }
    }
    let u = FMat::identity(r).add(k, &nil);
    let cs: Vec<u32> = (0..n).map(|_| units[rng.gen_range(0..units.len())]).collect();
    let a = cs.iter().map(|&c| u.pow(k, rng.gen_range(0..3)).scale(k, c)).collect();
    (a, cs)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn multiplication_is_associative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, k, q) = setting(&mut rng);
        let a = random_elt(n, &k, q, &mut rng);
        let b = random_elt(n, &k, q, &mut rng);
        let c = random_elt(n, &k, q, &mut rng);
        let left = hecke_mul(&hecke_mul(&a, &b).unwrap(), &c).unwrap();
        let right = hecke_mul(&a, &hecke_mul(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(left, right);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn products_match_the_polynomial_representation(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (n, k, q) = setting(&mut rng);
        let a = random_elt(n, &k, q, &mut rng);
        let b = random_elt(n, &k, q, &mut rng);
        let ab = hecke_mul(&a, &b).unwrap();
        for f in probes(n) {
            prop_assert_eq!(act(&ab, &f), act(&a, &act(&b, &f)));
        }
    }

    #[test]
    fn fraction_expands_to_a_polynomial(lambda in proptest::collection::vec(-6i64..=6, 2..=4), i in 0usize..3) {
        let n = lambda.len();
        let i = i % (n - 1);
        let k = Gf::prime(5).unwrap();
        let mut exp = HeckeElt::zero(n, &k, 1);
        for (nu, sign) in bernstein_fraction(&lambda, i) {
            exp = exp.add(&HeckeElt::theta(n, &k, 1, nu).scale(k.from_int(sign))).unwrap();
        }
        let mut neg = vec![0; n];
        neg[i] = -1;
        neg[i + 1] = 1;
        let one_minus = HeckeElt::one(n, &k, 1).sub(&HeckeElt::theta(n, &k, 1, neg)).unwrap();
        let mut sl = lambda.clone();
        sl.swap(i, i + 1);
        let expect = HeckeElt::theta(n, &k, 1, sl).sub(&HeckeElt::theta(n, &k, 1, lambda.clone())).unwrap();
        prop_assert_eq!(hecke_mul(&one_minus, &exp).unwrap(), expect);
    }

    #[test]
    fn support_matches_counting(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=2);
        let k = Gf::prime([3u64, 5][rng.gen_range(0..2)]).unwrap();
        let r = rng.gen_range(1..=2);
        let (a, _) = random_torus_rep(n, &k, r, &mut rng);
        let m = induced_module(n, &k, &a, &mut rng);
        prop_assert!(m.violated_relations().is_empty());
        let gamma: Vec<u32> = (0..n).map(|_| rng.gen_range(1..k.size())).collect();
        let rep = module_support(&m, &gamma).unwrap();
        prop_assert!(rep.ok(), "{}", rep.to_json());
        prop_assert!(rep.kk_relation && rep.splitting);
        let d = m.dim;
        for e in &rep.support {
            let ops: Vec<FMat> = (0..n)
                .map(|j| m.theta[j].sub(&k, &FMat::scalar(d, gamma[e.w[j] as usize])).pow(&k, d))
                .collect();
            prop_assert_eq!(e.dim, dim_by_counting(&k, &ops, d));
        }
        let big_k = all_perms(n).iter().fold(FMat::zeros(d, d), |acc, w| acc.add(&k, &m.t_op(w)));
        prop_assert_eq!(rep.k_rank, d - dim_by_counting(&k, &[big_k], d));
        if rep.regular_hypothesis {
            prop_assert_eq!(rep.induction_iso, Some(true));
            prop_assert_eq!(rep.trace_iso, Some(true));
        }
        if rep.eigen_hypothesis {
            prop_assert_eq!(rep.eigen_conclusion, Some(true));
        }
    }
}

#[test]
fn regular_model_report() {
    let k = Gf::prime(3).unwrap();
    let m = HeckeModule::regular(2, &k, &[1, 2]).unwrap();
    let r = module_support(&m, &[1, 2]).unwrap();
    assert!(r.ok() && r.k_nonzero() && r.regular_hypothesis);
    assert_eq!(r.support.iter().filter(|e| e.dim > 0).count(), 2);
    assert_eq!(r.other_support_dim, Some(0));
    let back = HeckeModule::from_json(&m.to_json()).unwrap();
    assert_eq!(back.theta, m.theta);
    assert_eq!(back.t, m.t);
}

#[test]
fn regular_model_rank_three() {
    let k = Gf::prime(7).unwrap();
    let m = HeckeModule::regular(3, &k, &[1, 2, 3]).unwrap();
    let r = module_support(&m, &[1, 2, 3]).unwrap();
    assert!(r.ok());
    assert_eq!(r.eigen_conclusion, Some(true));
    assert_eq!(r.induction_iso, Some(true));
    assert_eq!(r.trace_iso, Some(true));
    assert!(r.support.iter().all(|e| e.dim == 1));
}
