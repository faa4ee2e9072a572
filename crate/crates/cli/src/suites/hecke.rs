use std::sync::Arc;

use serde_json::{json, Value};

use ordkit::hecke::{act, bernstein_fraction, identity_perm, left_simple, center_element, hecke_mul, mod_p_group_algebra_check, module_support, HeckeElt, HeckeModule};
use ordkit::rings::Gf;

use super::{fixed, Case, Item};
use crate::gen::{item_seed, random_hecke_elt, rng};

/// Cocharacters with entries in [-2, 2].
fn window(n: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v| (-2..=2).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out
}

fn mul(a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
    hecke_mul(a, b).expect("same algebra")
}

fn sum(a: &HeckeElt, b: &HeckeElt) -> HeckeElt {
    a.add(b).expect("same algebra")
}

/// Defining relations of one family, checked by multiplying in the algebra.
fn relations(n: usize, p: u64, q: u32, family: &str) -> Case {
    let k = Gf::prime(p).expect("prime");
    let mut case = Case::new(json!({"n": n, "p": p, "q": q, "family": family}));
    let t = |i| HeckeElt::t_simple(n, &k, q, i);
    let th = |l: &[i64]| HeckeElt::theta(n, &k, q, l.to_vec());
    let one = HeckeElt::one(n, &k, q);
    let qm1 = k.sub(q, 1);
    match family {
        "quadratic" => {
            for i in 0..n - 1 {
                let rhs = sum(&one.scale(q), &t(i).scale(qm1));
                case.check(mul(&t(i), &t(i)) == rhs, format!("T_{}^2 = q + (q-1)T_{}", i + 1, i + 1));
            }
        }
        "braid" => {
            for i in 0..n.saturating_sub(2) {
                let a = mul(&mul(&t(i), &t(i + 1)), &t(i));
                let b = mul(&mul(&t(i + 1), &t(i)), &t(i + 1));
                case.check(a == b, format!("braid relation at {}", i + 1));
            }
        }
        "commutation" => {
            let lams = window(n);
            for l in &lams {
                for m in lams.iter().step_by(7) {
                    let lm: Vec<i64> = l.iter().zip(m).map(|(a, b)| a + b).collect();
                    case.check(mul(&th(l), &th(m)) == th(&lm), format!("theta{l:?} theta{m:?}"));
                }
                for i in 0..n - 1 {
                    if l[i] == l[i + 1] {
                        case.check(mul(&t(i), &th(l)) == mul(&th(l), &t(i)), format!("T_{} commutes with theta{l:?}", i + 1));
                    }
                }
            }
        }
        _ => {
            // T_s θ_λ − θ_{sλ} T_s = (q − 1)(θ_λ − θ_{sλ})/(1 − θ_{−α∨})
            for l in window(n) {
                for i in 0..n - 1 {
                    let s = left_simple(i, &identity_perm(n));
                    let sl = act(&s, &l);
                    let lhs = mul(&t(i), &th(&l)).sub(&mul(&th(&sl), &t(i))).expect("same algebra");
                    let mut frac = HeckeElt::zero(n, &k, q);
                    for (nu, c) in bernstein_fraction(&l, i) {
                        frac = sum(&frac, &th(&nu).scale(k.from_int(c)));
                    }
                    case.check(lhs == frac.scale(k.neg(qm1)), format!("Bernstein relation for s_{} and {l:?}", i + 1));
                }
            }
        }
    }
    case
}

pub fn hecke(seed: u64) -> (Vec<Item>, Value) {
    let mut settings = Vec::new();
    for n in [2usize, 3] {
        for p in [3u64, 5] {
            for q in [1u32, 2] {
                for family in ["quadratic", "braid", "commutation", "bernstein"] {
                    settings.push((n, p, q, family));
                }
            }
        }
    }
    let mut items = fixed("hecke/relations", settings, |(n, p, q, f)| relations(n, p, q, f));

    let mut iso = Vec::new();
    for n in [2usize, 3] {
        for p in [3u64, 5] {
            for q in 0..p as u32 {
                iso.push((n, p, q));
            }
        }
    }
    items.extend(fixed("hecke/check-iso", iso, |(n, p, q)| {
        let mut case = Case::new(json!({"check-iso": {"n": n, "p": p, "q": q}}));
        let k = Gf::prime(p).expect("prime");
        if let Some(v) = case.expect(mod_p_group_algebra_check(n, &k, q), "check") {
            if q == 1 && p > n as u64 {
                case.check(v.pass, format!("q = 1 rejected: {:?}", v.violated));
            } else if q == 1 {
                // outside the check's domain: it must say so
                case.check(!v.pass && v.violated.iter().any(|r| r.starts_with("p > n")), "p <= n not reported");
            } else {
                case.check(!v.pass, "q != 1 accepted");
                case.check(v.violated.first().is_some_and(|r| r.contains('=')), "no located relation");
            }
        }
        case
    }));

    let mut centers = Vec::new();
    for n in [2usize, 3] {
        for (p, q) in [(3u64, 1u32), (5, 1), (5, 2), (7, 3)] {
            for i in 1..=n {
                centers.push((n, p, q, i));
            }
        }
    }
    items.extend(fixed("hecke/center", centers, |(n, p, q, i)| {
        let k: Arc<Gf> = Gf::prime(p).expect("prime");
        let mut case = Case::new(json!({"center": {"n": n, "p": p, "q": q, "i": i}, "seed": seed}));
        let Some(z) = case.expect(center_element(i, n, &k, q), "center element") else { return case };
        let mut r = rng(item_seed("hecke/center", seed, (n * 1000 + p as usize) * 100 + i * 10 + q as usize));
        for j in 0..50 {
            let x = random_hecke_elt(n, &k, q, &mut r);
            case.check(mul(&z, &x) == mul(&x, &z), format!("z_{i} does not commute with random element {j}"));
        }
        case
    }));

    let models: Vec<(usize, u64, Vec<u32>)> = vec![(2, 3, vec![1, 2]), (2, 5, vec![1, 3]), (2, 7, vec![2, 5]), (3, 5, vec![1, 2, 3]), (3, 7, vec![1, 2, 3]), (3, 7, vec![2, 3, 6])];
    items.extend(fixed("hecke/regular", models, |(n, p, gamma)| {
        let k = Gf::prime(p).expect("prime");
        let mut case = Case::new(json!({"regular": {"n": n, "p": p, "gamma": gamma}}));
        let Some(m) = case.expect(HeckeModule::regular(n, &k, &gamma), "model module") else { return case };
        let bad = m.violated_relations();
        case.check(bad.is_empty(), format!("model violates {bad:?}"));
        if let Some(r) = case.expect(module_support(&m, &gamma), "support") {
            case.check(r.ok(), format!("support report not ok: {}", r.to_json()));
            case.check(r.induction_iso == Some(true), "induction isomorphism not verified");
            case.check(r.trace_iso == Some(true), "trace isomorphism not verified");
        }
        case
    }));
    (items, json!({}))
}
