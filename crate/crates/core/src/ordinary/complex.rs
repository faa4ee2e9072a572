//! Degreewise ordinary parts of a complex with a chain endomorphism.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::idempotent::split_complex;
use super::{limit_idempotent, module_ordinary, PresentedModule};
use crate::complexes::homology::{homology, induced_map};
use crate::complexes::{ChainMap, FreeComplex};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct ComplexOrdinary {
    pub e: ChainMap,
    pub ord: FreeComplex,
    pub nonord: FreeComplex,
    /// ord -> C and C -> ord
    pub ord_incl: ChainMap,
    pub ord_proj: ChainMap,
    pub nonord_incl: ChainMap,
    pub nonord_proj: ChainMap,
}

pub fn complex_ordinary(c: &FreeComplex, t: &ChainMap) -> Result<ComplexOrdinary> {
    if !c.ring.is_finite() {
        return Err(Error::InvalidInput("ordinary parts need a finite ring".into()));
    }
    t.check().map_err(|e| Error::InvalidEndomorphism(e.to_string()))?;
    // one exponent k! that works in every degree
    let mut k = 1;
    for i in c.degrees() {
        let (_, ki) = limit_idempotent(&t.comp(i), |x| x.mul(x) == *x)?;
        k = k.max(ki);
    }
    let e = ChainMap::from_fn(c, c, |i| {
        let mut x = t.comp(i);
        for j in 2..=k {
            x = x.pow(j as u64);
        }
        x
    });
    let one_minus = ChainMap::identity(c).sub(&e);
    let (ord, ord_incl, ord_proj) = split_complex(c, &e);
    let (nonord, nonord_incl, nonord_proj) = split_complex(c, &one_minus);
    Ok(ComplexOrdinary { e, ord, nonord, ord_incl, ord_proj, nonord_incl, nonord_proj })
}

impl ComplexOrdinary {
    /// Chain-map identities, and H(ord) ≅ H(C)_ord, H(nonord) ≅ H(C)_non-ord
    /// via the inclusions.
    pub fn verify(&self, c: &FreeComplex, t: &ChainMap) -> std::result::Result<(), String> {
        for (name, m) in [
            ("ord inclusion", &self.ord_incl),
            ("ord projection", &self.ord_proj),
            ("non-ord inclusion", &self.nonord_incl),
            ("non-ord projection", &self.nonord_proj),
        ] {
            if let Some(i) = m.commutator_defect() {
                return Err(format!("{name} is not a chain map in degree {i}"));
            }
        }
        if !self.ord_proj.compose(&self.ord_incl).sub(&ChainMap::identity(&self.ord)).is_zero()
            || !self.nonord_proj.compose(&self.nonord_incl).sub(&ChainMap::identity(&self.nonord)).is_zero()
        {
            return Err("projection after inclusion is not the identity".into());
        }
        let sum = self.ord_incl.compose(&self.ord_proj).add(&self.nonord_incl.compose(&self.nonord_proj));
        if !sum.sub(&ChainMap::identity(c)).is_zero() {
            return Err("the two parts do not recover C".into());
        }
        let hc = homology(c);
        let ho = homology(&self.ord);
        let hn = homology(&self.nonord);
        for i in c.degrees() {
            let h = hc.get(i).unwrap();
            let m = PresentedModule::from_homology(h);
            let th = induced_map(t, h, h);
            let d = module_ordinary(&m, &th).map_err(|e| e.to_string())?;
            for (part, hp, incl, name) in [
                (&d.e, ho.get(i).unwrap(), &self.ord_incl, "ordinary"),
                (&d.one_minus_e(), hn.get(i).unwrap(), &self.nonord_incl, "non-ordinary"),
            ] {
                let img = induced_map(incl, hp, h);
                let sub = PresentedModule::from_homology(hp);
                if m.image(&img) != m.image(part) || sub.size() != m.image_size(part) {
                    return Err(format!("{name} part of H^{i} does not match"));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let e: BTreeMap<String, Value> = self.e.degrees().into_iter().map(|i| (i.to_string(), self.e.comp(i).to_json())).collect();
        json!({
            "e": e,
            "ord": self.ord.to_json(),
            "nonord": self.nonord.to_json(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat;
    use crate::rings::Ring;

    #[test]
    fn diag_two_three_keeps_first_coordinates() {
        let r = Ring::zpc(3, 2).unwrap();
        let c = FreeComplex::two_term(0, Mat::zeros(&r, 2, 2));
        let t = ChainMap::from_fn(&c, &c, |_| Mat::from_ints(&r, &[vec![2, 0], vec![0, 3]]));
        let o = complex_ordinary(&c, &t).unwrap();
        assert_eq!(o.ord, FreeComplex::two_term(0, Mat::zeros(&r, 1, 1)));
        assert_eq!(o.ord_incl.comp(0), Mat::from_ints(&r, &[vec![1], vec![0]]));
        o.verify(&c, &t).unwrap();
    }

    #[test]
    fn identity_and_zero() {
        let r = Ring::zpc(5, 1).unwrap();
        let c = FreeComplex::two_term(0, Mat::from_ints(&r, &[vec![1, 2]]));
        let id = ChainMap::identity(&c);
        let o = complex_ordinary(&c, &id).unwrap();
        assert_eq!(o.ord.ranks(), c.ranks());
        o.verify(&c, &id).unwrap();
        let z = ChainMap::zero(&c, &c);
        let o = complex_ordinary(&c, &z).unwrap();
        assert_eq!(o.ord.total_rank(), 0);
        o.verify(&c, &z).unwrap();
    }
}
