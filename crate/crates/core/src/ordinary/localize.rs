//! Splitting a complex along the maximal ideals of a commutative algebra of
//! homotopy classes of self-maps.
//!
//! Everything runs on the minimal model F, where null-homotopic self-maps have
//! entries in the maximal ideal; idempotent classes therefore lift to honest
//! idempotent chain maps by iterating x -> 3x^2 - 2x^3.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::idempotent::{eval_chain, factor_idempotent, residue_factors, split_complex, total_matrix};
use crate::complexes::{homotopy_classes, minimalize, ChainMap, FreeComplex, HomotopyClassBasis};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rings::gfpoly::GfPoly;
use crate::rings::poly::charpoly;

#[derive(Clone, Debug)]
pub struct LocalFactor {
    /// per generator, the irreducible residue factor of its characteristic
    /// polynomial on this factor
    pub factors: Vec<GfPoly>,
    /// idempotent chain map on the minimal model
    pub idempotent: ChainMap,
    /// minimal complex representing the factor
    pub complex: FreeComplex,
    /// factor -> minimal model
    pub incl: ChainMap,
    /// whether the residue algebra is known to be a field
    pub local_certified: bool,
}

impl LocalFactor {
    /// Residue value of each generator when its factor is linear.
    pub fn residues(&self) -> Vec<Option<u32>> {
        self.factors
            .iter()
            .map(|f| (f.len() == 2).then(|| self.idempotent.source.ring.residue_field().neg(f[0])))
            .collect()
    }
}

#[derive(Clone, Debug)]
pub struct Localization {
    pub minimal: FreeComplex,
    pub factors: Vec<LocalFactor>,
    /// the factors together are isomorphic to the minimal model
    pub recovers: bool,
}

impl Localization {
    /// The factor at the maximal ideal with the given residues of the
    /// generators; None when no factor lives there.
    pub fn select(&self, residues: &[u32]) -> Result<Option<&LocalFactor>> {
        let k = self.minimal.ring.residue_field();
        let expected = self.factors.first().map_or(residues.len(), |f| f.factors.len());
        if residues.len() != expected {
            return Err(Error::NotMaximalIdeal(format!("{} residues for {expected} generators", residues.len())));
        }
        if let Some(&bad) = residues.iter().find(|&&x| x >= k.size()) {
            return Err(Error::NotMaximalIdeal(format!("residue {bad} is not in the residue field")));
        }
        let want: Vec<Option<u32>> = residues.iter().map(|&x| Some(x)).collect();
        Ok(self.factors.iter().find(|f| f.residues() == want))
    }

    pub fn to_json(&self) -> Value {
        let factors: Vec<Value> = self
            .factors
            .iter()
            .map(|f| {
                json!({
                    "residues": f.residues(),
                    "factors": f.factors,
                    "complex": f.complex.to_json(),
                    "local_certified": f.local_certified,
                })
            })
            .collect();
        json!({"minimal": self.minimal.to_json(), "factors": factors, "recovers": self.recovers})
    }
}

/// Lift a homotopy-idempotent self-map of a minimal complex to an idempotent.
fn lift_idempotent(x: &ChainMap) -> ChainMap {
    let mut x = x.clone();
    let (two, three) = (x.source.ring.from_int(2), x.source.ring.from_int(3));
    for _ in 0..64 {
        let x2 = x.compose(&x);
        if x2 == x {
            return x;
        }
        let x3 = x2.compose(&x);
        x = x2.scale(&three).sub(&x3.scale(&two));
    }
    unreachable!("defect of a homotopy idempotent on a minimal complex is nilpotent")
}

fn is_zero_class(basis: &HomotopyClassBasis, f: &ChainMap) -> bool {
    f.is_zero() || basis.is_null(f)
}

/// Split each idempotent e by the residue factors of the characteristic
/// polynomial of a (acting on eF).
fn split_by(e: &ChainMap, a: &ChainMap, basis: &HomotopyClassBasis) -> Vec<(ChainMap, GfPoly)> {
    let ring = &a.source.ring;
    let p = charpoly(&total_matrix(a));
    let fs = residue_factors(ring, &p);
    let mut out = Vec::new();
    for s in 0..fs.len() {
        let select: Vec<bool> = (0..fs.len()).map(|j| j == s).collect();
        let q = factor_idempotent(ring, &p, &fs, &select);
        let x = e.compose(&eval_chain(&q, a));
        if is_zero_class(basis, &x) {
            continue;
        }
        out.push((lift_idempotent(&x), fs[s].0.clone()));
    }
    out
}

fn coprime_degrees(fs: &[GfPoly]) -> bool {
    let degs: Vec<usize> = fs.iter().map(|f| f.len() - 1).filter(|&d| d > 1).collect();
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    degs.iter().enumerate().all(|(i, &a)| degs[i + 1..].iter().all(|&b| gcd(a, b) == 1))
}

pub fn localize_complex(c: &FreeComplex, gens: &[ChainMap]) -> Result<Localization> {
    if !c.ring.is_finite() {
        return Err(Error::InvalidInput("localization needs a finite ring".into()));
    }
    for t in gens {
        t.check().map_err(|e| Error::InvalidEndomorphism(e.to_string()))?;
    }
    let ring = &c.ring;
    let mz = minimalize(c);
    let f = mz.complex.clone();
    let ts: Vec<ChainMap> = gens.iter().map(|t| mz.g.compose(t).compose(&mz.f)).collect();
    let basis = homotopy_classes(&f, &f)?;
    for (i, a) in ts.iter().enumerate() {
        for b in &ts[i + 1..] {
            if !basis.is_null(&a.compose(b).sub(&b.compose(a))) {
                return Err(Error::InvalidEndomorphism("generators do not commute up to homotopy".into()));
            }
        }
    }
    let mut parts: Vec<(ChainMap, Vec<GfPoly>)> = Vec::new();
    if !is_zero_class(&basis, &ChainMap::identity(&f)) {
        parts.push((ChainMap::identity(&f), Vec::new()));
    }
    for t in &ts {
        let mut next = Vec::new();
        for (e, labels) in &parts {
            for (x, g) in split_by(e, t, &basis) {
                let mut l = labels.clone();
                l.push(g);
                next.push((x, l));
            }
        }
        parts = next;
    }
    // residue algebras generated by several extension fields of non-coprime
    // degree may still split; try random combinations of the generators
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut done: Vec<(ChainMap, Vec<GfPoly>, bool)> = Vec::new();
    let mut queue: Vec<(ChainMap, Vec<GfPoly>)> = parts;
    while let Some((e, labels)) = queue.pop() {
        if coprime_degrees(&labels) {
            done.push((e, labels, true));
            continue;
        }
        let mut split = None;
        for _ in 0..8 {
            let mut a = ChainMap::zero(&f, &f);
            for t in &ts {
                let coef = ring.from_int(rng.gen_range(0..ring.residue_field().size() as i64));
                a = a.add(&t.scale(&coef));
            }
            let pieces = split_by(&e, &e.compose(&a).compose(&e), &basis);
            if pieces.len() > 1 {
                split = Some(pieces);
                break;
            }
        }
        match split {
            Some(pieces) => done.extend(pieces.into_iter().map(|(x, _)| (x, labels.clone(), false))),
            None => done.push((e, labels, false)),
        }
    }
    let mut factors = Vec::new();
    for (e, labels, certified) in done {
        let (complex, incl, _) = split_complex(&f, &e);
        factors.push(LocalFactor { factors: labels, idempotent: e, complex, incl, local_certified: certified });
    }
    factors.sort_by(|a, b| a.factors.cmp(&b.factors));
    let recovers = recovers(&f, &factors);
    Ok(Localization { minimal: f, factors, recovers })
}

/// ⊕ factors -> F, summing the inclusions, is an isomorphism of complexes.
fn recovers(f: &FreeComplex, factors: &[LocalFactor]) -> bool {
    let ring = &f.ring;
    let sum = factors.iter().fold(FreeComplex::zero(ring, f.lo, f.hi), |acc, x| acc.direct_sum(&x.complex));
    let map = ChainMap::from_fn(&sum, f, |i| {
        factors.iter().fold(Mat::zeros(ring, f.rank(i), 0), |acc, x| acc.hstack(&x.incl.comp(i)))
    });
    map.commutator_defect().is_none() && map.inverse().is_some()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::Ring;

    #[test]
    fn identity_gives_one_factor() {
        let r = Ring::zpc(3, 2).unwrap();
        let c = FreeComplex::two_term(0, Mat::from_ints(&r, &[vec![3, 1]]));
        let l = localize_complex(&c, &[ChainMap::identity(&c)]).unwrap();
        assert_eq!(l.factors.len(), 1);
        assert!(l.recovers);
        assert_eq!(l.factors[0].residues(), vec![Some(1)]);
        assert_eq!(l.factors[0].complex.ranks(), l.minimal.ranks());
    }

    #[test]
    fn split_endomorphism_two_factors() {
        let r = Ring::zpc(3, 2).unwrap();
        let c = FreeComplex::two_term(0, Mat::zeros(&r, 2, 2));
        let t = ChainMap::from_fn(&c, &c, |_| Mat::from_ints(&r, &[vec![2, 0], vec![0, 3]]));
        let l = localize_complex(&c, &[t]).unwrap();
        assert_eq!(l.factors.len(), 2);
        assert!(l.recovers);
        let at2 = l.select(&[2]).unwrap().unwrap();
        assert_eq!(at2.complex.ranks(), &[1, 1]);
        assert!(l.select(&[1]).unwrap().is_none());
        assert!(matches!(l.select(&[1, 2]), Err(Error::NotMaximalIdeal(_))));
    }

    #[test]
    fn nonrational_factor_over_f3() {
        // t with characteristic polynomial X^2 + 1, irreducible over F_3
        let r = Ring::zpc(3, 1).unwrap();
        let c = FreeComplex::free(&r, 0, 2);
        let t = ChainMap::from_fn(&c, &c, |_| Mat::from_ints(&r, &[vec![0, -1], vec![1, 0]]));
        let l = localize_complex(&c, &[t]).unwrap();
        assert_eq!(l.factors.len(), 1);
        assert_eq!(l.factors[0].residues(), vec![None]);
        assert!(l.factors[0].local_certified);
    }
}
