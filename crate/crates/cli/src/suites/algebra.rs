use rand::Rng;
use serde_json::{json, Value};

use ordkit::complexes::homology::{homology, residue_dims};
use ordkit::complexes::random::{random_complex, random_elt};
use ordkit::complexes::{homology_null_generators, homotopy_classes, minimalize, tor_base_change_check, ChainMap, FreeComplex, RegularElement};
use ordkit::linalg::Mat;
use ordkit::ordinary::random::{random_extension, random_module_endo};
use ordkit::ordinary::{module_ordinary, verify_decomposition, ShortExact};
use ordkit::rings::{Elt, Ideal, Ring, RingSpec};

use super::{seeded, Case, Item};

pub fn ordinary(seed: u64) -> (Vec<Item>, Value) {
    let items = seeded("ordinary", seed, 200, |_, rng| {
        let p = [3u64, 5, 7][rng.gen_range(0..3)];
        let c = rng.gen_range(1..=3);
        let ring = Ring::zpc(p, c).expect("prime modulus");
        let (m, t) = random_module_endo(&ring, rng.gen_range(1..=6), rng).expect("random module");
        let mut case = Case::new(json!({"ring": ring.spec(), "module": m.to_json(), "T": t.to_json()}));
        let Some(d) = case.expect(module_ordinary(&m, &t), "module_ordinary") else { return case };
        if let Err(e) = verify_decomposition(&m, &t, &d) {
            case.check(false, e);
        }
        case.check(d.e.to_json() == d.hensel.to_json(), "Hensel and limit idempotents serialize differently");
        if c > 1 {
            let j = rng.gen_range(1..c);
            let red = ring.quotient(&Ideal::PPower { j }).expect("p-power quotient");
            let mq = m.base_change(&red).expect("base change");
            if let Some(dq) = case.expect(module_ordinary(&mq, &t.map(&red)), "ordinary part after base change") {
                case.check(dq.e == mq.canonical(&d.e.map(&red)), format!("base change to p^{j} does not commute with e"));
            }
        }
        let x = random_extension(&ring, rng.gen_range(1..=3), rng.gen_range(1..=3), rng).expect("random extension");
        let es: Vec<_> = [(&x.m1, &x.t1), (&x.n, &x.tn), (&x.m2, &x.t2)].iter().map(|(m, t)| module_ordinary(m, t)).collect();
        if let [Ok(e1), Ok(en), Ok(e2)] = es.as_slice() {
            case.check(x.n.same_map(&x.incl.mul(&e1.e), &en.e.mul(&x.incl)), "e does not commute with the inclusion");
            case.check(x.m2.same_map(&x.proj.mul(&en.e), &e2.e.mul(&x.proj)), "e does not commute with the projection");
        } else {
            case.check(false, "ordinary part of an extension term failed");
        }
        case
    });
    (items, json!({}))
}

pub fn exactness(seed: u64) -> (Vec<Item>, Value) {
    let items = seeded("exactness", seed, 100, |_, rng| {
        let ring = Ring::zpc([3u64, 5][rng.gen_range(0..2)], rng.gen_range(1..=2)).expect("prime modulus");
        let (m2, t2) = random_module_endo(&ring, rng.gen_range(2..=4), rng).expect("random module");
        let w: Vec<Elt> = (0..m2.n).map(|_| random_elt(&ring, rng)).collect();
        let mut case = Case::new(json!({
            "ring": ring.spec(),
            "module": m2.to_json(),
            "T": t2.to_json(),
            "w": w.iter().map(|x| ring.elt_to_json(x)).collect::<Vec<_>>(),
        }));
        if let Some(ses) = case.expect(ShortExact::cyclic(&m2, &t2, &w), "short exact sequence") {
            if let Some((ord, non)) = case.expect(ses.check_parts(), "check_parts") {
                case.check(ord, "ordinary parts not exact");
                case.check(non, "non-ordinary parts not exact");
            }
        }
        case
    });
    (items, json!({}))
}

pub fn minimalization(seed: u64) -> (Vec<Item>, Value) {
    let items = seeded("minimalization", seed, 200, |_, rng| {
        let ring = Ring::zpc([3u64, 5][rng.gen_range(0..2)], rng.gen_range(1..=3)).expect("prime modulus");
        let len = rng.gen_range(1..=4);
        let c = random_complex(&ring, 0, len - 1, 5, rng);
        let mut case = Case::new(c.to_json());
        let m = minimalize(&c);
        case.check(m.complex.is_minimal(), "output not minimal");
        case.check(m.certify(), "quasi-isomorphism not certified");
        let dims = residue_dims(&c);
        for i in c.degrees() {
            case.check(m.complex.rank(i) == dims[&i], format!("rank in degree {i} is {}, residue homology has dim {}", m.complex.rank(i), dims[&i]));
        }
        case.check(homology(&m.complex).signature() == homology(&c).signature(), "homology changed");
        case
    });
    (items, json!({}))
}

pub fn nilpotence(seed: u64) -> (Vec<Item>, Value) {
    let items = seeded("nilpotence", seed, 50, |i, rng| {
        let ring = Ring::zpc(3, rng.gen_range(1..=2)).expect("prime modulus");
        // every length 0..=3 appears
        let d = (i % 4) as i64;
        let c = random_complex(&ring, 0, d, if d == 3 { 2 } else { 3 }, rng);
        let mut f = ChainMap::zero(&c, &c);
        for g in homology_null_generators(&c) {
            f = f.add(&g.scale(&random_elt(&ring, rng)));
        }
        let mut case = Case::new(json!({"complex": c.to_json(), "f": f.to_json()}));
        if let Some(basis) = case.expect(homotopy_classes(&c, &c), "homotopy classes") {
            case.check(basis.is_null(&f.pow(d as u32 + 1)), format!("f^{} is not null-homotopic", d + 1));
        }
        case
    });
    (items, json!({}))
}

pub fn tor(seed: u64) -> (Vec<Item>, Value) {
    let ring = Ring::new(&RingSpec::PolyPID { p: 3 }).expect("F_3[S]");
    let held = std::sync::atomic::AtomicUsize::new(0);
    let items = seeded("tor", seed, 100, |i, rng| {
        let x = [RegularElement::SPower { j: 1 }, RegularElement::SPower { j: 2 }, RegularElement::SMinus { u: 1 }][i % 3];
        // half the items are two-term square complexes, which usually meet the concentration hypothesis
        let c = if rng.gen_bool(0.5) {
            let r = rng.gen_range(1..=3);
            FreeComplex::two_term(0, Mat::from_fn(&ring, r, r, |_, _| random_elt(&ring, rng)))
        } else {
            random_complex(&ring, 0, rng.gen_range(0..=2), 3, rng)
        };
        let mut case = Case::new(json!({"complex": c.to_json(), "x": x}));
        if let Some(rep) = case.expect(tor_base_change_check(&c, x), "tor check") {
            case.check(rep.ses_holds, "three-term sequence not exact");
            case.check(rep.conclusions != Some(false), "conclusions fail under the hypothesis");
            if rep.hypothesis {
                held.fetch_add(1, std::sync::atomic::Ordering::Relaxed);
            }
        }
        case
    });
    (items, json!({"hypothesis_held": held.into_inner()}))
}
