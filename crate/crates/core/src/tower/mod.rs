//! Inverse systems of complexes over nested quotients R -> R_c and their limits.
//!
//! Towers are finite with I_C = 0, so R_C = R and every limit is the top level
//! pulled down through the transition maps.

mod control;
mod glue;

use serde_json::{json, Value};

pub use control::{control_check, ControlDegree, ControlReport};
pub use glue::{
    find_isomorphism, glue_good, glue_minimal, glue_ordinary, GoodLimit, LimitDegree, MinimalLimit, OrdinaryLimit,
};

use crate::complexes::homology::DegreeHomology;
use crate::complexes::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rings::{Elt, Ideal, Reduction, Ring, RingSpec};

/// R with ideals I_1 ⊇ … ⊇ I_C = 0 and the quotients R_c = R/I_c.
#[derive(Clone, Debug)]
pub struct QuotientChain {
    pub top: Ring,
    pub ideals: Vec<Ideal>,
    pub rings: Vec<Ring>,
    /// R -> R_c
    pub reds: Vec<Reduction>,
}

impl QuotientChain {
    pub fn new(top: &Ring, ideals: Vec<Ideal>) -> Result<QuotientChain> {
        if !top.is_finite() {
            return Err(Error::InvalidInput("towers need a finite top ring".into()));
        }
        if ideals.is_empty() {
            return Err(Error::InvalidInput("a tower needs at least one level".into()));
        }
        let reds = ideals.iter().map(|i| top.quotient(i)).collect::<Result<Vec<_>>>()?;
        let rings: Vec<Ring> = reds.iter().map(|r| r.to.clone()).collect();
        let c = rings.len();
        if rings[c - 1] != *top {
            return Err(Error::IncompatibleTower { level: c, reason: "the last ideal is not zero".into() });
        }
        for k in 1..c {
            rings[k].natural_map(&rings[k - 1]).map_err(|_| Error::IncompatibleTower {
                level: k + 1,
                reason: "ideals are not nested".into(),
            })?;
        }
        Ok(QuotientChain { top: top.clone(), ideals, rings, reds })
    }

    /// Z/p^depth with I_c = (p^c).
    pub fn p_adic(p: u64, depth: u32) -> Result<QuotientChain> {
        let top = Ring::zpc(p, depth)?;
        QuotientChain::new(&top, (1..=depth).map(|j| Ideal::PPower { j }).collect())
    }

    pub fn len(&self) -> usize {
        self.rings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rings.is_empty()
    }

    /// R_{k+1} -> R_k (0-based level indices).
    pub fn step(&self, k: usize) -> Reduction {
        self.rings[k + 1].natural_map(&self.rings[k]).expect("checked in new")
    }

    /// The same chain without its last level; the new top is R_{C-1}.
    pub fn truncated(&self) -> Result<QuotientChain> {
        let c = self.len();
        if c < 2 {
            return Err(Error::InvalidInput("cannot drop the only level".into()));
        }
        let top = self.rings[c - 2].clone();
        let ideals = self.ideals[..c - 1]
            .iter()
            .zip(&self.rings)
            .map(|(i, r)| if *r == top { Ideal::PPower { j: top.c() } } else { i.clone() })
            .collect();
        QuotientChain::new(&top, ideals)
    }

    pub fn to_json(&self) -> Value {
        json!({"ring": self.top.spec(), "ideals": self.ideals})
    }

    pub fn from_json(v: &Value) -> Result<QuotientChain> {
        let spec: RingSpec = serde_json::from_value(v.get("ring").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::InvalidInput(format!("chain ring: {e}")))?;
        let ideals: Vec<Ideal> = serde_json::from_value(v.get("ideals").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::InvalidInput(format!("chain ideals: {e}")))?;
        QuotientChain::new(&Ring::new(&spec)?, ideals)
    }
}

#[derive(Clone, Debug)]
pub struct TowerLevel {
    pub complex: FreeComplex,
    /// M_c ⊗ R_{c-1} -> M_{c-1}; None on the first level
    pub transition: Option<ChainMap>,
    pub t: Option<ChainMap>,
    pub s: Option<ChainMap>,
}

#[derive(Clone, Debug)]
pub struct ComplexTower {
    pub chain: QuotientChain,
    pub levels: Vec<TowerLevel>,
}

fn incompatible(level: usize, reason: impl Into<String>) -> Error {
    Error::IncompatibleTower { level, reason: reason.into() }
}

impl ComplexTower {
    pub fn new(chain: QuotientChain, levels: Vec<TowerLevel>) -> Result<ComplexTower> {
        let tower = ComplexTower { chain, levels };
        tower.check_shape()?;
        Ok(tower)
    }

    /// M_c = M ⊗ R_c with identity transitions; t and s are reduced too.
    pub fn constant(chain: &QuotientChain, m: &FreeComplex, t: Option<&ChainMap>, s: Option<&ChainMap>) -> ComplexTower {
        let levels = (0..chain.len())
            .map(|k| {
                let red = &chain.reds[k];
                let complex = m.base_change(red);
                let transition = (k > 0).then(|| ChainMap::identity(&m.base_change(&chain.reds[k - 1])));
                TowerLevel {
                    complex,
                    transition,
                    t: t.map(|x| x.base_change(red)),
                    s: s.map(|x| x.base_change(red)),
                }
            })
            .collect();
        ComplexTower { chain: chain.clone(), levels }
    }

    pub fn len(&self) -> usize {
        self.levels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.levels.is_empty()
    }

    /// M_{k+1} ⊗ R_k.
    pub fn reduced(&self, k: usize) -> FreeComplex {
        self.levels[k + 1].complex.base_change(&self.chain.step(k))
    }

    /// Transition at 0-based level k >= 1, retargeted onto the reduced complex.
    pub fn transition(&self, k: usize) -> ChainMap {
        self.levels[k].transition.as_ref().expect("checked").retarget(&self.reduced(k - 1), &self.levels[k - 1].complex)
    }

    /// The tower without its top level.
    pub fn truncated(&self) -> Result<ComplexTower> {
        let chain = self.chain.truncated()?;
        let levels = self.levels[..self.len() - 1].to_vec();
        ComplexTower::new(chain, levels)
    }

    pub fn check_shape(&self) -> Result<()> {
        if self.levels.len() != self.chain.len() {
            return Err(incompatible(
                self.levels.len(),
                format!("{} levels for a chain of length {}", self.levels.len(), self.chain.len()),
            ));
        }
        for (k, lv) in self.levels.iter().enumerate() {
            let rc = &self.chain.rings[k];
            if lv.complex.ring != *rc {
                return Err(incompatible(k + 1, "complex is over the wrong ring"));
            }
            lv.complex.validate().map_err(|e| incompatible(k + 1, e.to_string()))?;
            for (name, m) in [("t", &lv.t), ("s", &lv.s)] {
                if let Some(m) = m {
                    if m.source != lv.complex || m.target != lv.complex {
                        return Err(incompatible(k + 1, format!("{name} is not an endomorphism of the level complex")));
                    }
                }
            }
            match (&lv.transition, k) {
                (None, 0) => {}
                (Some(_), 0) => return Err(incompatible(1, "the first level has no transition")),
                (None, _) => return Err(incompatible(k + 1, "missing transition")),
                (Some(f), _) => {
                    let src = self.reduced(k - 1);
                    let tgt = &self.levels[k - 1].complex;
                    if f.degrees().iter().any(|&i| f.comp(i).rows != tgt.rank(i) || f.comp(i).cols != src.rank(i)) {
                        return Err(incompatible(k + 1, "transition has the wrong shape"));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Value {
        let levels: Vec<Value> = self
            .levels
            .iter()
            .map(|lv| {
                json!({
                    "complex": lv.complex.to_json(),
                    "transition": lv.transition.as_ref().map(|f| f.to_json()),
                    "t": lv.t.as_ref().map(|f| f.to_json()),
                    "s": lv.s.as_ref().map(|f| f.to_json()),
                })
            })
            .collect();
        json!({"chain": self.chain.to_json(), "levels": levels})
    }

    pub fn from_json(v: &Value) -> Result<ComplexTower> {
        let chain = QuotientChain::from_json(v.get("chain").unwrap_or(&Value::Null))?;
        let raw = v
            .get("levels")
            .and_then(|l| l.as_array())
            .ok_or_else(|| Error::InvalidInput("tower needs \"levels\"".into()))?;
        if raw.len() != chain.len() {
            return Err(incompatible(raw.len(), "number of levels differs from the chain"));
        }
        let mut levels: Vec<TowerLevel> = Vec::new();
        for (k, lv) in raw.iter().enumerate() {
            let ring = &chain.rings[k];
            let complex = FreeComplex::from_json_over(ring, lv.get("complex").unwrap_or(&Value::Null))?;
            let endo = |key: &str| -> Result<Option<ChainMap>> {
                match lv.get(key) {
                    None | Some(Value::Null) => Ok(None),
                    Some(x) => ChainMap::from_json(&complex, &complex, x).map(Some),
                }
            };
            let (t, s) = (endo("t")?, endo("s")?);
            let transition = match lv.get("transition") {
                None | Some(Value::Null) => None,
                Some(x) if k > 0 => {
                    let src = complex.base_change(&chain.step(k - 1));
                    Some(ChainMap::graded(&src, &levels[k - 1].complex, parse_graded(&src, &levels[k - 1].complex, x)?)?)
                }
                Some(_) => return Err(incompatible(1, "the first level has no transition")),
            };
            levels.push(TowerLevel { complex, transition, t, s });
        }
        ComplexTower::new(chain, levels)
    }
}

fn parse_graded(src: &FreeComplex, tgt: &FreeComplex, v: &Value) -> Result<std::collections::BTreeMap<i64, Mat>> {
    let obj = v.as_object().ok_or_else(|| Error::InvalidInput("transition must be an object".into()))?;
    let mut comps = std::collections::BTreeMap::new();
    for (k, x) in obj {
        let i: i64 = k.parse().map_err(|_| Error::InvalidInput(format!("bad degree key {k}")))?;
        comps.insert(i, Mat::from_json(&src.ring, x, tgt.rank(i), src.rank(i))?);
    }
    Ok(comps)
}

/// Matrix of H^i(X) -> H^i(Y) where the chain-level map is reduction along
/// `red` followed by `m` (a matrix over Y's ring).
pub(crate) fn cross_induced(src: &DegreeHomology, red: &Reduction, m: &Mat, tgt: &DegreeHomology) -> Mat {
    let cols: Vec<Vec<Elt>> = (0..src.reps.cols)
        .map(|j| {
            let rep = src.reps.col(j);
            let v = if src.is_expanded() { Mat::collapse_vec(&src.source_ring, &rep) } else { rep };
            let v: Vec<Elt> = v.iter().map(|x| red.apply(x)).collect();
            tgt.coords(&tgt.lift_vec(&m.mul_vec(&v)))
        })
        .collect();
    Mat::from_cols(&tgt.ring, tgt.num_generators(), &cols)
}

/// Lift an element of Z/p^m (or a residue field) to an integer-valued element
/// of `to` = Z/p^M with M >= m.
pub(crate) fn lift_int(to: &Ring, x: &Elt) -> Elt {
    to.from_int(x[0] as i64)
}

/// Relations of H as a module over the bigger engine ring `to`: a zero factor
/// becomes |engine ring| so that torsion is kept.
pub(crate) fn lifted_relations(to: &Ring, h: &DegreeHomology) -> Vec<Elt> {
    h.factors
        .iter()
        .map(|f| if h.ring.is_zero(f) { to.from_int(h.ring.base_modulus() as i64) } else { lift_int(to, f) })
        .collect()
}
