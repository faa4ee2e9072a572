//! Pigeonhole selection of a compatible chain of data up to a horizon.
//!
//! For every supplied level M the data D(M, N), N <= min(M, L), are reduced
//! from D(M, M) and hashed by canonical form. At level N the surviving set of
//! M is split by class; a class qualifies when it still reaches a supplied
//! level >= L (so every deeper level up to the horizon stays available), and
//! the least qualifying class in byte order is kept.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::algebra::{elt_to_terms, eval_endos};
use super::canonical::{canonical_form, datum_isomorphism};
use super::{reduce_level, FinAlg, PatchingDatum, PatchingInput};
use crate::complexes::{homotopy_classes, ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::rings::{Elt, Ring};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagonalStep {
    pub level: usize,
    /// M_N
    pub m: usize,
    /// digest of the chosen class
    pub class: String,
    /// number of distinct classes among the surviving M
    pub classes: usize,
    /// surviving M after this level
    pub survivors: Vec<usize>,
}

/// Conclusions checked on the patched output reduced to level N.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LevelCheck {
    pub level: usize,
    /// the reduction lies in the chosen class, i.e. is isomorphic to D(M_N, N)
    pub class_matches: bool,
    /// C_∞/(𝔞) ≅ C_0 ⊗ S_N via the framing
    pub framing_iso: bool,
    /// R -> End(C) and R -> R_0 -> End(C_0) agree after reduction, up to homotopy
    pub square_commutes: bool,
    /// S_i acts on C through the image of S_i in R
    pub s_algebra: bool,
    /// an explicit isomorphism F_N(D(M_{N+1}, N+1)) -> D(M_N, N) was found and checked
    pub transition_iso: bool,
}

impl LevelCheck {
    pub fn ok(&self) -> bool {
        self.class_matches && self.framing_iso && self.square_commutes && self.s_algebra && self.transition_iso
    }
}

#[derive(Clone, Debug)]
pub struct PatchedOutput {
    pub horizon: usize,
    /// S_∞/(I_L)
    pub ring: Ring,
    /// C_∞ ⊗ S_L
    pub complex: FreeComplex,
    /// C_∞/(𝔞) -> C_0 ⊗ S_L
    pub framing: ChainMap,
    /// R^∞ at the horizon, a quotient of R_∞
    pub algebra: FinAlg,
    /// lift of S_∞ -> R^∞ to R_∞: images of S_1..S_q
    pub s_lift: Vec<Elt>,
    /// images of X_j in End(C_∞)
    pub action: Vec<ChainMap>,
    /// images of X_j in R_0/m^{b_L}
    pub to_r0: Vec<Elt>,
    pub datum: PatchingDatum,
    pub diagonal: Vec<DiagonalStep>,
    pub checks: Vec<LevelCheck>,
}

impl PatchedOutput {
    pub fn verified(&self) -> bool {
        self.checks.len() == self.horizon && self.checks.iter().all(|c| c.ok())
    }

    pub fn subsequence(&self) -> Vec<usize> {
        self.diagonal.iter().map(|s| s.m).collect()
    }

    pub fn to_json(&self) -> Value {
        let amb = &self.algebra.ambient;
        let v = self.algebra.vars;
        let elts = |xs: &[Elt]| xs.iter().map(|x| elt_to_terms(amb, v, x)).collect::<Vec<_>>();
        json!({
            "horizon": self.horizon,
            "ring": self.ring.spec(),
            "complex": self.complex.to_json(),
            "framing": self.framing.to_json(),
            "relations": self.algebra.to_json(),
            "s_lift": elts(&self.s_lift),
            "action": self.action.iter().map(|m| m.to_json()).collect::<Vec<_>>(),
            "to_r0": elts(&self.to_r0),
            "subsequence": self.subsequence(),
            "diagonal": self.diagonal.iter().map(|s| json!({
                "level": s.level, "m": s.m, "class": s.class, "classes": s.classes, "survivors": s.survivors,
            })).collect::<Vec<_>>(),
            "checks": self.checks.iter().map(|c| json!({
                "level": c.level,
                "class_matches": c.class_matches,
                "framing_iso": c.framing_iso,
                "square_commutes": c.square_commutes,
                "s_algebra": c.s_algebra,
                "transition_iso": c.transition_iso,
            })).collect::<Vec<_>>(),
            "verified": self.verified(),
        })
    }
}

/// Run the diagonal argument up to `horizon` over the supplied levels.
pub fn patch(input: &PatchingInput, horizon: usize) -> Result<PatchedOutput> {
    let supplied = input.num_levels();
    if horizon == 0 || horizon > supplied {
        return Err(Error::HorizonTooDeep { horizon, levels: supplied });
    }
    input.validate()?;
    // data[m][n-1] = D(m, n), forms likewise
    let mut data: BTreeMap<usize, Vec<PatchingDatum>> = BTreeMap::new();
    let mut forms: BTreeMap<usize, Vec<Vec<u8>>> = BTreeMap::new();
    for m in 1..=supplied {
        let mut chain = vec![PatchingDatum::top(input, m)?];
        while chain.last().unwrap().level > 1 {
            let next = reduce_level(input, chain.last().unwrap())?;
            chain.push(next);
        }
        chain.reverse();
        chain.truncate(horizon);
        let fs = chain.iter().map(|d| canonical_form(d).map(|f| f.bytes)).collect::<Result<Vec<_>>>()?;
        data.insert(m, chain);
        forms.insert(m, fs);
    }
    let mut alive: Vec<usize> = (1..=supplied).collect();
    let mut diagonal = Vec::new();
    let mut chosen: Vec<Vec<u8>> = Vec::new();
    for n in 1..=horizon {
        let mut by_class: BTreeMap<&Vec<u8>, Vec<usize>> = BTreeMap::new();
        for &m in alive.iter().filter(|&&m| m >= n) {
            by_class.entry(&forms[&m][n - 1]).or_default().push(m);
        }
        let classes = by_class.len();
        let Some((class, members)) = by_class.into_iter().find(|(_, ms)| ms.iter().any(|&m| m >= horizon)) else {
            return Err(Error::HorizonTooDeep { horizon, levels: supplied });
        };
        let class = class.clone();
        alive = members;
        let digest = {
            use sha2::{Digest, Sha256};
            Sha256::digest(&class).iter().take(12).map(|b| format!("{b:02x}")).collect()
        };
        diagonal.push(DiagonalStep { level: n, m: alive[0], class: digest, classes, survivors: alive.clone() });
        chosen.push(class);
    }
    let m_top = diagonal[horizon - 1].m;
    let out = data[&m_top][horizon - 1].clone();
    let mut checks = Vec::new();
    let mut reduced = out.clone();
    let mut per_level: Vec<PatchingDatum> = vec![out.clone()];
    while reduced.level > 1 {
        reduced = reduce_level(input, &reduced)?;
        per_level.push(reduced.clone());
    }
    per_level.reverse();
    for n in 1..=horizon {
        let e = &per_level[n - 1];
        let class_matches = canonical_form(e)?.bytes == chosen[n - 1];
        let framing_iso = e.framing.inverse().is_some() && e.framing.commutator_defect().is_none();
        let (square_commutes, s_algebra) = conclusions(input, e)?;
        let transition_iso = if n < horizon {
            let upper = reduce_level(input, &data[&diagonal[n].m][n])?;
            let lower = &data[&diagonal[n - 1].m][n - 1];
            match datum_isomorphism(&upper, lower)? {
                Some(f) => is_patch_morphism(input, &upper, lower, &f)?,
                None => false,
            }
        } else {
            true
        };
        checks.push(LevelCheck { level: n, class_matches, framing_iso, square_commutes, s_algebra, transition_iso });
    }
    Ok(PatchedOutput {
        horizon,
        ring: out.complex.ring.clone(),
        complex: out.complex.clone(),
        framing: out.framing.clone(),
        algebra: out.algebra.clone(),
        s_lift: out.sigma.iter().map(|s| input.r_inf.reduce(s)).collect(),
        action: out.action.clone(),
        to_r0: out.to_r0.clone(),
        datum: out,
        diagonal,
        checks,
    })
}

/// (square, S-algebra) conclusions for a datum, checked up to homotopy.
fn conclusions(input: &PatchingInput, e: &PatchingDatum) -> Result<(bool, bool)> {
    let n = e.level;
    let aug = input.augmentation(n);
    let reduced = e.complex.base_change(&aug);
    let c0n = input.c0_at(n);
    let fr = e.framing.retarget(&reduced, &c0n);
    let hf = homotopy_classes(&reduced, &c0n)?;
    let r0_act = input.r0_action_at(n);
    let square = e.action.iter().zip(&e.to_r0).all(|(t, y)| {
        let lhs = fr.compose(&t.base_change(&aug).retarget(&reduced, &reduced));
        let rhs = eval_endos(&input.ambient, input.vars, y, &r0_act, &c0n).compose(&fr);
        hf.is_null(&lhs.sub(&rhs))
    });
    let hb = homotopy_classes(&e.complex, &e.complex)?;
    let s_ring = &e.complex.ring;
    let s_alg = e.sigma.iter().enumerate().all(|(i, s)| {
        let lhs = eval_endos(&input.ambient, input.vars, s, &e.action, &e.complex);
        let rhs = ChainMap::identity(&e.complex).scale(&super::algebra::variable(s_ring, input.q, i));
        hb.is_null(&lhs.sub(&rhs))
    });
    Ok((square, s_alg))
}

/// f is a chain isomorphism a -> b compatible with framings and actions, and
/// the algebra parts of a and b agree.
fn is_patch_morphism(input: &PatchingInput, a: &PatchingDatum, b: &PatchingDatum, f: &ChainMap) -> Result<bool> {
    let n = a.level;
    let f = f.retarget(&a.complex, &b.complex);
    if f.commutator_defect().is_some() || f.inverse().is_none() {
        return Ok(false);
    }
    let aug = input.augmentation(n);
    let fa = f.base_change(&aug);
    let framed = b.framing.compose(&fa.retarget(&a.framing.source, &b.framing.source));
    if framed.retarget(&a.framing.source, &a.framing.target) != a.framing {
        return Ok(false);
    }
    if a.algebra != b.algebra || a.r0_target != b.r0_target {
        return Ok(false);
    }
    let same = |x: &[Elt], y: &[Elt], r: &FinAlg| x.iter().zip(y).all(|(u, v)| r.reduce(u) == r.reduce(v));
    if !same(&a.sigma, &b.sigma, &a.algebra) || !same(&a.to_r0, &b.to_r0, &a.r0_target) {
        return Ok(false);
    }
    let hb = homotopy_classes(&a.complex, &b.complex)?;
    Ok(a.action.iter().zip(&b.action).all(|(s, t)| hb.is_null(&f.compose(s).sub(&t.compose(&f)))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complexes::FreeComplex;
    use crate::linalg::Mat;
    use crate::patching::{constant_input, koszul_input};

    #[test]
    fn koszul_patches_to_multiplication_by_s() {
        let input = koszul_input(3, 5).unwrap();
        let out = patch(&input, 4).unwrap();
        assert!(out.verified(), "{}", out.to_json());
        let s_ring = input.level_ring(4);
        let s = crate::patching::algebra::variable(&s_ring, 1, 0);
        let expect = FreeComplex::two_term(0, Mat::scalar(&s_ring, 1, &s));
        let f = crate::patching::canonical_form(&out.datum).unwrap();
        assert_eq!(f.complex, crate::patching::canonical_form(&PatchingDatum::top(&input, 4).unwrap()).unwrap().complex);
        assert!(crate::tower::find_isomorphism(&out.complex, &expect, 1 << 12).unwrap().is_some());
        assert_eq!(out.subsequence(), vec![1, 2, 3, 4]);
        let again = patch(&input, 4).unwrap();
        assert_eq!(again.to_json().to_string(), out.to_json().to_string());
    }

    #[test]
    fn q_zero_returns_c0() {
        let lam = Ring::zpc(3, 2).unwrap();
        let c0 = FreeComplex::two_term(0, Mat::from_ints(&lam, &[vec![3]]));
        let amb = Ring::trunc(3, 2, 1, 3).unwrap();
        let x = crate::patching::algebra::variable(&amb, 1, 0);
        let r0 = FinAlg::new(&amb, 1, &[amb.pow(&x, 2)]);
        let act = vec![ChainMap::zero(&c0, &c0)];
        let input = constant_input(&c0, &r0, &act, 0, 3, None).unwrap();
        let out = patch(&input, 3).unwrap();
        assert!(out.verified(), "{}", out.to_json());
        assert_eq!(out.complex, c0);
    }

    #[test]
    fn horizon_beyond_supply() {
        let input = koszul_input(3, 2).unwrap();
        assert!(matches!(patch(&input, 3), Err(Error::HorizonTooDeep { horizon: 3, levels: 2 })));
        assert!(matches!(patch(&input, 0), Err(Error::HorizonTooDeep { .. })));
    }
}
