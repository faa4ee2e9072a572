use std::collections::BTreeSet;
use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Value};

use ordkit::linalg::{gf_row_reduce, FMat};
use ordkit::repimage::adjoint::ad_from_coords;
use ordkit::repimage::induced::induced_corpus;
use ordkit::repimage::tw::extensions_by_simples;
use ordkit::repimage::{diag, dihedral_example, enormous_check, enumerate_group, mat, simple_submodules, tw_witness, MatGroup};
use ordkit::rings::Gf;
use ordkit::Error;

use super::{fixed, seeded, Case, Item};
use crate::gen::{item_seed, random_block_module, rng};

fn apply(k: &Gf, m: &FMat, v: &[u32]) -> Vec<u32> {
    (0..m.rows).map(|i| (0..m.cols).fold(0, |s, j| k.add(s, k.mul(m.a[i][j], v[j])))).collect()
}

fn canonical(k: &Gf, vs: &[Vec<u32>]) -> Vec<Vec<u32>> {
    let mut g = vs.to_vec();
    gf_row_reduce(k, &mut g);
    g.retain(|r| r.iter().any(|&x| x != 0));
    g
}

/// Span of v under the generators, by closing the set of vectors reached.
fn naive_spin(k: &Gf, gens: &[FMat], v: &[u32]) -> Vec<Vec<u32>> {
    let mut basis = canonical(k, &[v.to_vec()]);
    loop {
        let mut all = basis.clone();
        for b in &basis {
            for g in gens {
                all.push(apply(k, g, b));
            }
        }
        let next = canonical(k, &all);
        if next.len() == basis.len() {
            return basis;
        }
        basis = next;
    }
}

fn all_vectors(k: &Gf, d: usize) -> Vec<Vec<u32>> {
    let q = k.size() as usize;
    (1..q.pow(d as u32))
        .map(|mut t| {
            (0..d)
                .map(|_| {
                    let x = (t % q) as u32;
                    t /= q;
                    x
                })
                .collect()
        })
        .collect()
}

/// Minimal nonzero submodules: cyclic submodules every nonzero vector of
/// which generates the whole thing.
fn brute_simples(k: &Gf, gens: &[FMat], d: usize) -> BTreeSet<Vec<Vec<u32>>> {
    let mut out = BTreeSet::new();
    let vecs = all_vectors(k, d);
    for v in &vecs {
        let c = naive_spin(k, gens, v);
        if out.contains(&c) {
            continue;
        }
        let in_c = |w: &Vec<u32>| canonical(k, &[c.clone(), vec![w.clone()]].concat()).len() == c.len();
        if vecs.iter().filter(|w| in_c(w)).all(|w| naive_spin(k, gens, w).len() == c.len()) {
            out.insert(c);
        }
    }
    out
}

fn expect_cond2(label: &str, h: MatGroup) -> Case {
    let mut case = Case::new(json!({"fails": label, "group": h.to_json()}));
    if let Some(r) = case.expect(enormous_check(&h), "enormous check") {
        case.check(!r.enormous(), "certified enormous");
        case.check(r.failed().contains(&"cond2"), format!("failed conditions {:?} do not include cond2", r.failed()));
    }
    case
}

pub fn enormous(seed: u64) -> (Vec<Item>, Value) {
    let mut items = fixed("enormous/dihedral", vec![dihedral_example()], |h| {
        let k = h.k.clone();
        let mut case = Case::new(json!({"dihedral": h.to_json()}));
        let Some(r) = case.expect(enormous_check(&h), "enormous check") else { return case };
        case.check(r.enormous(), format!("not enormous: {:?}", r.failed()));
        let got: Vec<_> = r
            .simples
            .iter()
            .map(|s| s.witness.as_ref().map(|w| (s.module.basis.clone(), w.h.clone(), w.alpha, w.trace, w.projectors_ok)))
            .collect();
        let want = vec![
            Some((vec![vec![0, 0, 1]], mat(&k, &[&[2, 0], &[0, 3]]), 2, 1, true)),
            Some((vec![vec![1, 1, 0]], mat(&k, &[&[0, 1], &[1, 0]]), 1, 1, true)),
            Some((vec![vec![1, 4, 0]], mat(&k, &[&[0, 2], &[3, 0]]), 1, 3, true)),
        ];
        case.check(got == want, "witnesses differ from the expected ones");
        case
    });

    let k5 = Gf::prime(5).expect("prime");
    let k7 = Gf::prime(7).expect("prime");
    let small = vec![
        ("scalars mod 5", enumerate_group(&k5, 2, &[diag(2, &[2, 2])], 64)),
        ("scalars mod 7", enumerate_group(&k7, 2, &[diag(2, &[3, 3])], 64)),
        ("torus mod 5", enumerate_group(&k5, 2, &[diag(2, &[2, 1]), diag(2, &[1, 2])], 64)),
    ];
    items.extend(fixed("enormous/cond2", small, |(label, h)| match h {
        Ok(h) => expect_cond2(label, h),
        Err(e) => {
            let mut case = Case::new(json!({"fails": label}));
            case.check(false, format!("enumeration failed: {e}"));
            case
        }
    }));

    items.extend(seeded("enormous/simples", seed, 60, |i, r| {
        let k: Arc<Gf> = Gf::prime([3u64, 5][i % 2]).expect("prime");
        let d = 1 + (i / 2) % 4;
        let ngens = r.gen_range(0..=2);
        let m = random_block_module(&k, d, ngens, r);
        let mut case = Case::new(json!({"field": k.p(), "dim": d, "generators": m.gens.iter().map(|g| g.a.clone()).collect::<Vec<_>>()}));
        if let Some(s) = case.expect(simple_submodules(&m), "simple submodules") {
            let got: BTreeSet<_> = s.into_iter().map(|w| w.basis).collect();
            case.check(got == brute_simples(&k, &m.gens, d), "simple submodules differ from enumeration");
        }
        case
    }));

    let corpus = induced_corpus();
    let mut hold = 0;
    let mut specs = Vec::new();
    for (label, spec) in corpus {
        if spec.validate().map(|ind| ind.hypotheses().hold()).unwrap_or(false) {
            hold += 1;
            specs.push((label, spec));
        }
    }
    items.extend(fixed("enormous/induced", specs, |(label, spec)| {
        let mut case = Case::new(json!({"induced": label, "spec": spec.to_json()}));
        let ind = spec.validate().expect("validated above");
        if let Some(h) = case.expect(ind.image(), "image") {
            if let Some(r) = case.expect(enormous_check(&h), "enormous check") {
                case.check(r.enormous(), format!("{label}: failed {:?}", r.failed()));
            }
        }
        case
    }));
    let mut size = Case::new(json!({"induced corpus": "size"}));
    size.check(hold >= 10, format!("only {hold} specs satisfy the hypotheses"));
    items.push(size.into_item());
    (items, json!({"induced_specs_with_hypotheses": hold}))
}

pub fn tw(seed: u64) -> (Vec<Item>, Value) {
    let mut groups = Vec::new();
    for (label, spec) in induced_corpus() {
        let Ok(h) = spec.validate().and_then(|ind| ind.image()) else { continue };
        if enormous_check(&h).map(|r| r.enormous()).unwrap_or(false) {
            groups.push((label, h));
        }
    }
    let mut instances = Vec::new();
    for (label, h) in &groups {
        match extensions_by_simples(h, 4000) {
            Ok(inputs) => instances.extend(inputs.into_iter().enumerate().map(|(j, x)| (format!("{label}#{j}"), h.clone(), Ok(x)))),
            Err(e) => instances.push((label.clone(), h.clone(), Err(e))),
        }
    }
    let count = instances.len();
    let indexed: Vec<_> = instances.into_iter().enumerate().collect();
    let mut items = fixed("tw", indexed, |(i, (label, h, input))| {
        let mut case = Case::new(json!({"tw": label}));
        let Some(input) = case.expect(input, "extensions by simples") else { return case };
        let k = h.k.clone();
        let mut r = rng(item_seed("tw", seed, i));
        let c = r.gen_range(1..k.size());
        let coords: Vec<u32> = (0..h.n * h.n - 1).map(|_| r.gen_range(0..k.size())).collect();
        let shifted = input.scale(c).add_coboundary(&ad_from_coords(&k, h.n, &coords));
        for (what, inp) in [("cocycle", &input), ("scaled and shifted cocycle", &shifted)] {
            if let Some(rep) = case.expect(tw_witness(inp), what) {
                case.check(!rep.is_coboundary, format!("{what} reported as a coboundary"));
                case.check(rep.found(), format!("{what}: no witness"));
            }
        }
        case.check(tw_witness(&input.scale(0)).err() == Some(Error::ZeroCocycle), "zero cocycle not rejected");
        case
    });
    let mut size = Case::new(json!({"tw": "instances"}));
    size.check(count >= 10, format!("only {count} instances"));
    items.push(size.into_item());
    (items, json!({"enormous_groups": groups.len(), "instances": count}))
}
