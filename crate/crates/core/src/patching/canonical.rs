//! Canonical forms of patching data up to isomorphism.
//!
//! A datum is first moved to the basis in which its framing is the identity
//! (the framing is lifted through the constants Λ_N ⊂ S_N). The remaining
//! isomorphisms are the chain isomorphisms f ≡ 1 mod 𝔞; the form takes the
//! least differential over that group, then the least homotopy classes of
//! the X-actions over the stabiliser. Algebra data are already canonical:
//! ideals are in Howell form and elements are reduced.

use std::collections::BTreeMap;

use serde_json::json;
use sha2::{Digest, Sha256};

use super::{lift_mat, PatchingDatum};
use crate::complexes::{homotopy_classes, ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::linalg::{inverse, Mat};
use crate::rings::{Elt, Ring};

/// Largest isomorphism group enumerated by `canonical_form`.
pub const DEFAULT_ORBIT_BOUND: usize = 1 << 16;

#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub bytes: Vec<u8>,
    /// the canonical representative of the complex
    pub complex: FreeComplex,
    /// datum complex -> canonical complex
    pub transform: ChainMap,
}

impl CanonicalForm {
    pub fn digest(&self) -> String {
        let h = Sha256::digest(&self.bytes);
        h.iter().take(12).map(|b| format!("{b:02x}")).collect()
    }
}

/// Elements of S_N with zero constant term.
fn augmentation_elements(ring: &Ring) -> Vec<Elt> {
    if ring.base_rank() == 1 {
        return vec![ring.zero()];
    }
    let n = ring.base_modulus();
    let r = ring.base_rank();
    let total = (n as u128).pow(r as u32 - 1);
    (0..total)
        .map(|mut k| {
            let mut e = ring.zero();
            for slot in e.iter_mut().take(r).skip(1) {
                *slot = (k % n as u128) as u64;
                k /= n as u128;
            }
            e
        })
        .collect()
}

/// All I + A with A over 𝔞, paired with their inverses.
fn unipotent(ring: &Ring, r: usize, aug: &[Elt]) -> Vec<(Mat, Mat)> {
    let cells = r * r;
    let total = aug.len().pow(cells as u32);
    (0..total)
        .map(|mut k| {
            let mut m = Mat::identity(ring, r);
            for cell in 0..cells {
                let a = &aug[k % aug.len()];
                k /= aug.len();
                let (i, j) = (cell / r, cell % r);
                m.set(i, j, ring.add(m.at(i, j), a));
            }
            let inv = inverse(&m).expect("unipotent matrices are invertible");
            (m, inv)
        })
        .collect()
}

fn flatten(mats: impl Iterator<Item = Mat>) -> Vec<u64> {
    let mut out = Vec::new();
    for m in mats {
        for i in 0..m.rows {
            for j in 0..m.cols {
                out.extend(m.at(i, j).iter().copied());
            }
        }
    }
    out
}

pub fn canonical_form(datum: &PatchingDatum) -> Result<CanonicalForm> {
    canonical_form_bounded(datum, DEFAULT_ORBIT_BOUND)
}

/// Canonical form, enumerating at most `bound` isomorphisms.
pub fn canonical_form_bounded(datum: &PatchingDatum, bound: usize) -> Result<CanonicalForm> {
    let c = &datum.complex;
    let ring = c.ring.clone();
    let psi_inv = datum.framing.inverse().ok_or_else(|| Error::InvalidDatum("framing is not invertible".into()))?;
    let lift: BTreeMap<i64, (Mat, Mat)> =
        c.degrees().map(|i| (i, (lift_mat(&datum.framing.comp(i), &ring), lift_mat(&psi_inv.comp(i), &ring)))).collect();
    let norm = c.transport(&lift);
    let aug = augmentation_elements(&ring);
    let mut size: u128 = 1;
    for i in c.degrees() {
        let r = c.rank(i) as u32;
        size = size.saturating_mul((aug.len() as u128).saturating_pow(r * r));
    }
    if size > bound as u128 {
        return Err(Error::BoundExceeded(bound));
    }
    let degrees: Vec<i64> = c.degrees().collect();
    let groups: Vec<Vec<(Mat, Mat)>> = degrees.iter().map(|&i| unipotent(&ring, c.rank(i), &aug)).collect();
    let conj = |idx: &[usize]| -> FreeComplex {
        let p: BTreeMap<i64, (Mat, Mat)> = degrees.iter().zip(idx).map(|(&i, &k)| (i, groups[(i - c.lo) as usize][k].clone())).collect();
        norm.transport(&p)
    };
    // odometer over the product of the per-degree groups
    let mut idx = vec![0usize; degrees.len()];
    let mut best_key: Option<Vec<u64>> = None;
    let mut best: Vec<Vec<usize>> = Vec::new();
    loop {
        let d = conj(&idx);
        let key = flatten((d.lo..d.hi).map(|i| d.diff(i)));
        match best_key.as_ref().map(|b| key.cmp(b)) {
            None | Some(std::cmp::Ordering::Less) => {
                best_key = Some(key);
                best = vec![idx.clone()];
            }
            Some(std::cmp::Ordering::Equal) => best.push(idx.clone()),
            _ => {}
        }
        let mut k = 0;
        while k < idx.len() {
            idx[k] += 1;
            if idx[k] < groups[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
        if k == idx.len() {
            break;
        }
    }
    let canon = conj(&best[0]);
    let hb = homotopy_classes(&canon, &canon)?;
    let total = |sel: &[usize], which: usize| -> Mat {
        let deg = degrees[which];
        groups[which][sel[which]].0.mul(&lift[&deg].0)
    };
    let total_inv = |sel: &[usize], which: usize| -> Mat {
        let deg = degrees[which];
        lift[&deg].1.mul(&groups[which][sel[which]].1)
    };
    let mut best_action: Option<(Vec<u64>, usize)> = None;
    for (n, sel) in best.iter().enumerate() {
        let coords: Vec<u64> = datum
            .action
            .iter()
            .flat_map(|t| {
                let moved = ChainMap::from_fn(&canon, &canon, |i| {
                    let w = (i - c.lo) as usize;
                    total(sel, w).mul(&t.comp(i)).mul(&total_inv(sel, w))
                });
                hb.class_of(&moved).into_iter().flat_map(|x| x.into_iter())
            })
            .collect();
        if best_action.as_ref().is_none_or(|(b, _)| coords < *b) {
            best_action = Some((coords, n));
        }
    }
    let (action_key, chosen) = best_action.unwrap_or((Vec::new(), 0));
    let sel = &best[chosen];
    let transform = ChainMap::from_fn(c, &canon, |i| total(sel, (i - c.lo) as usize));
    let rows = |m: &crate::linalg::Submodule| m.rows.iter().map(|r| r.iter().map(|x| x.to_vec()).collect::<Vec<_>>()).collect::<Vec<_>>();
    let value = json!({
        "level": datum.level,
        "complex": canon.to_json(),
        "framing_target": datum.framing.target.to_json(),
        "action": action_key,
        "relations": rows(&datum.algebra.ideal),
        "sigma": datum.sigma.iter().map(|s| datum.algebra.reduce(s).to_vec()).collect::<Vec<_>>(),
        "r0_target": rows(&datum.r0_target.ideal),
        "to_r0": datum.to_r0.iter().map(|y| datum.r0_target.reduce(y).to_vec()).collect::<Vec<_>>(),
    });
    Ok(CanonicalForm { bytes: serde_json::to_vec(&value).unwrap(), complex: canon, transform })
}

/// An isomorphism a -> b in Patch_N (its complex part), if one exists.
pub fn datum_isomorphism(a: &PatchingDatum, b: &PatchingDatum) -> Result<Option<ChainMap>> {
    if a.level != b.level || a.complex.ring != b.complex.ring {
        return Ok(None);
    }
    let (fa, fb) = (canonical_form(a)?, canonical_form(b)?);
    if fa.bytes != fb.bytes {
        return Ok(None);
    }
    let back = fb.transform.inverse().expect("transforms are isomorphisms");
    Ok(Some(back.compose(&fa.transform)))
}
