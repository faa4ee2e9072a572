use serde_json::{json, Value};

use super::{lift_int, lifted_relations, ComplexTower};
use crate::complexes::homology::{exact_at, expanded, homology, homology_at, induced_map, DegreeHomology};
use crate::complexes::{minimalize, FreeComplex};
use crate::linalg::Mat;
use crate::ordinary::{complex_ordinary, module_ordinary, PresentedModule};
use crate::rings::{Elt, Ideal, Ring};

#[derive(Clone, Debug)]
pub struct ControlDegree {
    /// 1-based level
    pub level: usize,
    pub degree: i64,
    /// length of H^q(M_c)_ord
    pub expected_length: u64,
    /// length of H^q(F_∞ ⊗ R_c)
    pub length: u64,
    /// same invariant factors as the ordinary part of the minimal model
    pub same_type: bool,
    /// exactness of the homology sequence of 0 -> F/p^{a-b} -> F/p^a -> F/p^b -> 0
    /// at the three spots starting in degree q, when the step R_c -> R_{c-1} is p-adic
    pub sequence_exact: Option<bool>,
}

impl ControlDegree {
    pub fn ok(&self) -> bool {
        self.expected_length == self.length && self.same_type && self.sequence_exact != Some(false)
    }
}

#[derive(Clone, Debug)]
pub struct ControlReport {
    pub degrees: Vec<ControlDegree>,
    /// first failure: (level, degree, reason)
    pub failure: Option<(usize, i64, String)>,
}

impl ControlReport {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "passed": self.passed(),
            "failure": self.failure.as_ref().map(|(l, d, r)| json!({"level": l, "degree": d, "reason": r})),
            "degrees": self.degrees.iter().map(|d| json!({
                "level": d.level,
                "degree": d.degree,
                "expected_length": d.expected_length,
                "length": d.length,
                "same_type": d.same_type,
                "sequence_exact": d.sequence_exact,
            })).collect::<Vec<_>>(),
        })
    }
}

fn square_defect(c: &FreeComplex) -> Option<i64> {
    (c.lo..c.hi).find(|&i| !c.diff(i + 1).mul(&c.diff(i)).is_zero())
}

fn size_length(p: u64, h: &DegreeHomology) -> u64 {
    PresentedModule::from_homology(h).size().ilog(p as u128) as u64
}

/// Exactness of the long homology sequence of 0 -> F/p^{a-b} --p^b--> F -> F/p^b -> 0
/// for a complex F over Z/p^a; entry q covers the spots H^q(F), H^q(F/p^b), H^{q+1}(F/p^{a-b}).
fn p_adic_sequence(f: &FreeComplex, b: u32) -> Vec<(i64, bool)> {
    let e = f.ring.clone();
    let a = e.c();
    let p = e.p();
    let fb = f.base_change(&e.quotient(&Ideal::PPower { j: b }).unwrap());
    let fs = f.base_change(&e.quotient(&Ideal::PPower { j: a - b }).unwrap());
    let (ha, hb, hs) = (homology(f), homology(&fb), homology(&fs));
    let pb = p.pow(b) as i64;
    let empty = |i: i64| homology_at(&FreeComplex::zero(&e, i, i), i);
    let get = |r: &crate::complexes::HomologyReport, i: i64| r.get(i).cloned().unwrap_or_else(|| empty(i));
    let coords = |h: &DegreeHomology, v: Vec<Elt>| -> Vec<Elt> {
        let v: Vec<Elt> = v.iter().map(|x| h.ring.from_int(x[0] as i64)).collect();
        h.coords(&v).iter().map(|x| lift_int(&e, x)).collect()
    };
    let as_mat = |rows: usize, cols: Vec<Vec<Elt>>| Mat::from_cols(&e, rows, &cols);
    let alpha = |q: i64| {
        let (src, tgt) = (get(&hs, q), get(&ha, q));
        let cols = (0..src.reps.cols)
            .map(|j| coords(&tgt, src.reps.col(j).iter().map(|x| e.from_int(x[0] as i64 * pb)).collect()))
            .collect();
        as_mat(tgt.num_generators(), cols)
    };
    let beta = |q: i64| {
        let (src, tgt) = (get(&ha, q), get(&hb, q));
        let cols = (0..src.reps.cols).map(|j| coords(&tgt, src.reps.col(j))).collect();
        as_mat(tgt.num_generators(), cols)
    };
    let delta = |q: i64| {
        let (src, tgt) = (get(&hb, q), get(&hs, q + 1));
        let d = f.diff(q);
        let cols = (0..src.reps.cols)
            .map(|j| {
                let lifted: Vec<Elt> = src.reps.col(j).iter().map(|x| lift_int(&e, x)).collect();
                let image = d.mul_vec(&lifted);
                coords(&tgt, image.iter().map(|x| e.from_int((x[0] as i64) / pb)).collect())
            })
            .collect();
        as_mat(tgt.num_generators(), cols)
    };
    let rel = |h: &DegreeHomology| lifted_relations(&e, h);
    (f.lo - 1..=f.hi)
        .map(|q| {
            let (a_q, b_q, s_q1) = (get(&ha, q), get(&hb, q), get(&hs, q + 1));
            let a_q1 = get(&ha, q + 1);
            let ok = exact_at(&alpha(q), &rel(&a_q), &beta(q), &rel(&b_q))
                && exact_at(&beta(q), &rel(&b_q), &delta(q), &rel(&s_q1))
                && exact_at(&delta(q), &rel(&s_q1), &alpha(q + 1), &rel(&a_q1));
            (q, ok)
        })
        .collect()
}

/// Compare H*(F_∞ ⊗ R_c) with the ordinary homology of every level, and check
/// the homology sequences attached to p-adic steps of the chain.
pub fn control_check(f_inf: &FreeComplex, tower: &ComplexTower) -> ControlReport {
    let mut degrees = Vec::new();
    let mut failure = None;
    let fail = |failure: &mut Option<(usize, i64, String)>, l: usize, d: i64, r: &str| {
        if failure.is_none() {
            *failure = Some((l, d, r.to_string()));
        }
    };
    if f_inf.ring != tower.chain.top {
        fail(&mut failure, tower.len(), f_inf.lo, "F_∞ is over the wrong ring");
        return ControlReport { degrees, failure };
    }
    if let Some(i) = square_defect(f_inf) {
        fail(&mut failure, tower.len(), i, "d∘d is not zero");
        return ControlReport { degrees, failure };
    }
    for (k, lv) in tower.levels.iter().enumerate() {
        let level = k + 1;
        let Some(t) = &lv.t else {
            fail(&mut failure, level, lv.complex.lo, "level has no t");
            continue;
        };
        let fc = f_inf.base_change(&tower.chain.reds[k]);
        let hf = homology(&fc);
        let hm = homology(&lv.complex);
        let mz = minimalize(&lv.complex);
        let ord = match complex_ordinary(&mz.complex, &mz.g.compose(t).compose(&mz.f)) {
            Ok(o) => o.ord,
            Err(e) => {
                fail(&mut failure, level, lv.complex.lo, &e.to_string());
                continue;
            }
        };
        let ho = homology(&ord);
        let seq: Vec<(i64, bool)> = if k > 0 && is_p_adic_step(&tower.chain.rings[k], &tower.chain.rings[k - 1]) {
            let b = tower.chain.rings[k - 1].c();
            p_adic_sequence(&expanded(&f_inf.base_change(&tower.chain.reds[k])), b)
        } else {
            Vec::new()
        };
        let p = tower.chain.top.p();
        let lo = fc.lo.min(lv.complex.lo);
        let hi = fc.hi.max(lv.complex.hi);
        for q in lo - 1..=hi {
            let expected_length = match hm.get(q) {
                Some(h) => {
                    let m = PresentedModule::from_homology(h);
                    match module_ordinary(&m, &induced_map(t, h, h)) {
                        Ok(d) => m.image_size(&d.e).ilog(p as u128) as u64,
                        Err(e) => {
                            fail(&mut failure, level, q, &e.to_string());
                            continue;
                        }
                    }
                }
                None => 0,
            };
            let length = hf.get(q).map_or(0, |h| size_length(p, h));
            let sig = |r: &crate::complexes::HomologyReport| r.get(q).filter(|h| !h.is_zero()).map(|h| h.factors.clone());
            let same_type = sig(&hf) == sig(&ho);
            let sequence_exact = seq.iter().find(|(d, _)| *d == q).map(|&(_, ok)| ok);
            let d = ControlDegree { level, degree: q, expected_length, length, same_type, sequence_exact };
            if !d.ok() {
                let why = if d.sequence_exact == Some(false) {
                    "homology sequence is not exact"
                } else {
                    "homology differs from the ordinary part"
                };
                fail(&mut failure, level, q, why);
            }
            degrees.push(d);
        }
    }
    ControlReport { degrees, failure }
}

fn is_p_adic_step(upper: &Ring, lower: &Ring) -> bool {
    lower.c() < upper.c() && upper.quotient(&Ideal::PPower { j: lower.c() }).is_ok_and(|r| r.to == *lower)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::ChainMap;
    use crate::tower::{glue_ordinary, QuotientChain};

    #[test]
    fn glued_tower_passes_and_corruption_is_located() {
        let chain = QuotientChain::p_adic(3, 3).unwrap();
        let m = FreeComplex::two_term(0, Mat::from_ints(&chain.top, &[vec![3, 0], vec![0, 1]]));
        let t = ChainMap::from_fn(&m, &m, |_| Mat::from_ints(&chain.top, &[vec![1, 0], vec![0, 3]]));
        let tower = ComplexTower::constant(&chain, &m, Some(&t), None);
        let l = glue_ordinary(&tower).unwrap();
        let r = control_check(&l.complex, &tower);
        assert!(r.passed(), "{}", r.to_json());
        assert!(r.degrees.iter().any(|d| d.sequence_exact == Some(true)));

        let mut bad = l.complex.clone();
        let d0 = bad.diff(0);
        let mut d0b = d0.clone();
        let x = chain.top.add(d0.at(0, 0), &chain.top.one());
        d0b.set(0, 0, x);
        bad = FreeComplex::new(&bad.ring, bad.lo, bad.ranks().to_vec(), vec![d0b]).unwrap();
        let r = control_check(&bad, &tower);
        let (_, degree, _) = r.failure.clone().unwrap();
        assert!(degree == 0 || degree == 1);
    }

    #[test]
    fn zero_tower_passes() {
        let chain = QuotientChain::p_adic(5, 2).unwrap();
        let m = FreeComplex::zero(&chain.top, 0, 0);
        let t = ChainMap::identity(&m);
        let tower = ComplexTower::constant(&chain, &m, Some(&t), None);
        let l = glue_ordinary(&tower).unwrap();
        assert!(control_check(&l.complex, &tower).passed());
    }

    #[test]
    fn p_adic_sequence_on_a_free_module() {
        let r = Ring::zpc(3, 3).unwrap();
        let f = FreeComplex::two_term(0, Mat::from_ints(&r, &[vec![3, 0], vec![0, 0]]));
        assert!(p_adic_sequence(&f, 1).iter().all(|&(_, ok)| ok));
        assert!(p_adic_sequence(&f, 2).iter().all(|&(_, ok)| ok));
    }
}
