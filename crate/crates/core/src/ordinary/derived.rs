//! The ordinary idempotent of a self-map up to homotopy, as a polynomial in t.

use std::collections::BTreeMap;

use serde_json::{json, Value};

use super::idempotent::{eval_chain, factor_idempotent, residue_factors, total_matrix};
use super::{hensel_idempotent_poly, module_ordinary, PresentedModule};
use crate::complexes::homology::{homology, induced_map};
use crate::complexes::{homotopy_classes, ChainMap, FreeComplex, HomotopyClassBasis};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rings::poly::charpoly;
use crate::rings::Elt;

#[derive(Clone, Debug)]
pub struct DerivedIdempotent {
    /// e = poly(t), coefficients constant term first
    pub poly: Vec<Elt>,
    /// poly(t), an idempotent chain map
    pub e: ChainMap,
    /// coordinates of the class of e
    pub class: Vec<Elt>,
    /// H(e) on each H^i, in homology coordinates
    pub homology_projectors: BTreeMap<i64, Mat>,
    /// number of distinct idempotent classes in R[t]
    pub idempotents: usize,
    /// how many of them cut out the part where H(t) is invertible
    pub matching: usize,
}

impl DerivedIdempotent {
    pub fn unique(&self) -> bool {
        self.matching == 1
    }

    pub fn to_json(&self, ring: &crate::rings::Ring) -> Value {
        let proj: BTreeMap<String, Value> =
            self.homology_projectors.iter().map(|(i, m)| (i.to_string(), m.to_json())).collect();
        json!({
            "poly": self.poly.iter().map(|c| ring.elt_to_json(c)).collect::<Vec<_>>(),
            "class": self.class.iter().map(|c| c.iter().copied().collect::<Vec<u64>>()).collect::<Vec<_>>(),
            "homology_projectors": proj,
            "idempotents": self.idempotents,
            "matching": self.matching,
            "unique": self.unique(),
        })
    }
}

/// Whether H(eps) is, in every degree, the ordinary projector of H(t).
fn cuts_ordinary_part(c: &FreeComplex, t: &ChainMap, eps: &ChainMap) -> Result<bool> {
    for h in homology(c).degrees.values() {
        let m = PresentedModule::from_homology(h);
        let d = module_ordinary(&m, &induced_map(t, h, h))?;
        if !m.same_map(&d.e, &induced_map(eps, h, h)) {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn derived_idempotent(c: &FreeComplex, t: &ChainMap) -> Result<DerivedIdempotent> {
    if !c.ring.is_finite() {
        return Err(Error::InvalidInput("derived idempotents need a finite ring".into()));
    }
    t.check().map_err(|e| Error::InvalidEndomorphism(e.to_string()))?;
    let ring = &c.ring;
    let total = total_matrix(t);
    let poly = if total.rows == 0 { vec![ring.one()] } else { hensel_idempotent_poly(&total)? };
    let e = eval_chain(&poly, t);
    let basis: HomotopyClassBasis = homotopy_classes(c, c)?;
    let class = basis.class_of(&e);

    let mut homology_projectors = BTreeMap::new();
    for (&i, h) in &homology(c).degrees {
        let m = PresentedModule::from_homology(h);
        homology_projectors.insert(i, m.canonical(&induced_map(&e, h, h)));
    }

    // every idempotent of R[t] is the image of one of R[X]/(P)
    let (idempotents, matching) = if total.rows == 0 {
        (1, 1)
    } else {
        let p = charpoly(&total);
        let factors = residue_factors(ring, &p);
        let k = factors.len();
        if k > 16 {
            return Err(Error::BoundExceeded(1 << 16));
        }
        let mut seen: Vec<Vec<Elt>> = Vec::new();
        let mut matching = 0;
        for mask in 0u32..(1 << k) {
            let select: Vec<bool> = (0..k).map(|j| mask >> j & 1 == 1).collect();
            let q = factor_idempotent(ring, &p, &factors, &select);
            let eps = eval_chain(&q, t);
            let cl = basis.class_of(&eps);
            if seen.contains(&cl) {
                continue;
            }
            seen.push(cl.clone());
            if cuts_ordinary_part(c, t, &eps)? {
                matching += 1;
                if cl != class {
                    return Err(Error::InvalidEndomorphism("two idempotent classes cut out the ordinary part".into()));
                }
            }
        }
        (seen.len(), matching)
    };
    Ok(DerivedIdempotent { poly, e, class, homology_projectors, idempotents, matching })
}
