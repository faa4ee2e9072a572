//! Bounded complexes of finite free modules (cohomological indexing,
//! d_i : C^i -> C^{i+1}), chain maps and homotopies.

pub mod homology;
pub mod homotopy;
pub mod minimal;
pub mod random;
pub mod tor;
pub mod truncate;

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::error::{invalid, Error, Result};
use crate::linalg::{inverse, Mat};
use crate::rings::{Elt, Reduction, Ring, RingSpec};

pub use homology::{homology, DegreeHomology, HomologyReport};
pub use homotopy::{chain_map_generators, homology_null_generators, homotopy_classes, HomotopyClassBasis};
pub use minimal::{minimalize, Minimalization};
pub use tor::{tor_base_change_check, RegularElement, TorReport};
pub use truncate::{truncate, Side, Truncation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeComplex {
    pub ring: Ring,
    pub lo: i64,
    pub hi: i64,
    ranks: Vec<usize>,
    /// d[i - lo] : C^i -> C^{i+1} for lo <= i < hi
    d: Vec<Mat>,
}

impl FreeComplex {
    pub fn new(ring: &Ring, lo: i64, ranks: Vec<usize>, d: Vec<Mat>) -> Result<FreeComplex> {
        if ranks.is_empty() {
            return invalid("complex needs at least one degree");
        }
        if d.len() + 1 != ranks.len() {
            return Err(Error::InvalidComplex(format!(
                "{} differentials for {} degrees",
                d.len(),
                ranks.len()
            )));
        }
        let hi = lo + ranks.len() as i64 - 1;
        for (k, m) in d.iter().enumerate() {
            if m.rows != ranks[k + 1] || m.cols != ranks[k] {
                return Err(Error::InvalidComplex(format!(
                    "d_{} has shape {}x{}, expected {}x{}",
                    lo + k as i64,
                    m.rows,
                    m.cols,
                    ranks[k + 1],
                    ranks[k]
                )));
            }
            if m.ring != *ring {
                return Err(Error::InvalidComplex("differential over a different ring".into()));
            }
        }
        let c = FreeComplex { ring: ring.clone(), lo, hi, ranks, d };
        c.validate()?;
        Ok(c)
    }

    /// Construct without the d^2 = 0 check (callers guarantee it).
    pub(crate) fn new_unchecked(ring: &Ring, lo: i64, ranks: Vec<usize>, d: Vec<Mat>) -> FreeComplex {
        let hi = lo + ranks.len() as i64 - 1;
        let c = FreeComplex { ring: ring.clone(), lo, hi, ranks, d };
        debug_assert!(c.validate().is_ok(), "d^2 != 0 in internal construction");
        c
    }

    pub fn zero(ring: &Ring, lo: i64, hi: i64) -> FreeComplex {
        let n = (hi - lo + 1).max(1) as usize;
        let d = (0..n - 1).map(|_| Mat::zeros(ring, 0, 0)).collect();
        FreeComplex { ring: ring.clone(), lo, hi: lo + n as i64 - 1, ranks: vec![0; n], d }
    }

    /// A single free module in degree `deg`.
    pub fn free(ring: &Ring, deg: i64, rank: usize) -> FreeComplex {
        FreeComplex { ring: ring.clone(), lo: deg, hi: deg, ranks: vec![rank], d: Vec::new() }
    }

    /// Two-term complex R^m --a--> R^n in degrees deg, deg+1.
    pub fn two_term(deg: i64, a: Mat) -> FreeComplex {
        let ring = a.ring.clone();
        FreeComplex::new_unchecked(&ring, deg, vec![a.cols, a.rows], vec![a])
    }

    pub fn validate(&self) -> Result<()> {
        for k in 1..self.d.len() {
            if !self.d[k].mul(&self.d[k - 1]).is_zero() {
                return Err(Error::InvalidComplex(format!("d_{} d_{} != 0", self.lo + k as i64, self.lo + k as i64 - 1)));
            }
        }
        Ok(())
    }

    pub fn rank(&self, i: i64) -> usize {
        if i < self.lo || i > self.hi {
            0
        } else {
            self.ranks[(i - self.lo) as usize]
        }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_rank() == 0
    }

    /// d_i : C^i -> C^{i+1}, zero outside the stored range.
    pub fn diff(&self, i: i64) -> Mat {
        if i >= self.lo && i < self.hi {
            self.d[(i - self.lo) as usize].clone()
        } else {
            Mat::zeros(&self.ring, self.rank(i + 1), self.rank(i))
        }
    }

    pub fn diff_ref(&self, i: i64) -> Option<&Mat> {
        if i >= self.lo && i < self.hi {
            Some(&self.d[(i - self.lo) as usize])
        } else {
            None
        }
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i64> {
        self.lo..=self.hi
    }

    /// Every differential vanishes modulo the maximal ideal.
    pub fn is_minimal(&self) -> bool {
        self.d.iter().all(|m| m.is_zero_mod_m())
    }

    /// Same complex viewed on a wider degree range.
    pub fn widen(&self, lo: i64, hi: i64) -> FreeComplex {
        let (lo, hi) = (lo.min(self.lo), hi.max(self.hi));
        let ranks: Vec<usize> = (lo..=hi).map(|i| self.rank(i)).collect();
        let d = (lo..hi).map(|i| self.diff(i)).collect();
        FreeComplex { ring: self.ring.clone(), lo, hi, ranks, d }
    }

    /// Drop zero terms at both ends (keeping at least one degree).
    pub fn trimmed(&self) -> FreeComplex {
        let nz: Vec<i64> = self.degrees().filter(|&i| self.rank(i) > 0).collect();
        match (nz.first(), nz.last()) {
            (Some(&a), Some(&b)) => {
                let ranks = (a..=b).map(|i| self.rank(i)).collect();
                let d = (a..b).map(|i| self.diff(i)).collect();
                FreeComplex { ring: self.ring.clone(), lo: a, hi: b, ranks, d }
            }
            _ => FreeComplex::zero(&self.ring, self.lo, self.lo),
        }
    }

    /// C[k]: (C[k])^i = C^{i+k}, d negated when k is odd.
    pub fn shift(&self, k: i64) -> FreeComplex {
        let d = self.d.iter().map(|m| if k % 2 != 0 { m.neg() } else { m.clone() }).collect();
        FreeComplex { ring: self.ring.clone(), lo: self.lo - k, hi: self.hi - k, ranks: self.ranks.clone(), d }
    }

    pub fn direct_sum(&self, other: &FreeComplex) -> FreeComplex {
        let (lo, hi) = (self.lo.min(other.lo), self.hi.max(other.hi));
        let ranks = (lo..=hi).map(|i| self.rank(i) + other.rank(i)).collect();
        let d = (lo..hi).map(|i| self.diff(i).direct_sum(&other.diff(i))).collect();
        FreeComplex { ring: self.ring.clone(), lo, hi, ranks, d }
    }

    pub fn base_change(&self, red: &Reduction) -> FreeComplex {
        let d = self.d.iter().map(|m| m.map(red)).collect();
        FreeComplex { ring: red.to.clone(), lo: self.lo, hi: self.hi, ranks: self.ranks.clone(), d }
    }

    /// Conjugate by basis changes: d'_i = P_{i+1} d_i P_i^{-1}, with P given
    /// together with its inverse per degree.
    pub fn transport(&self, p: &BTreeMap<i64, (Mat, Mat)>) -> FreeComplex {
        let d = (self.lo..self.hi)
            .map(|i| {
                let m = self.diff(i);
                let left = p.get(&(i + 1)).map(|x| x.0.clone()).unwrap_or_else(|| Mat::identity(&self.ring, self.rank(i + 1)));
                let right = p.get(&i).map(|x| x.1.clone()).unwrap_or_else(|| Mat::identity(&self.ring, self.rank(i)));
                left.mul(&m).mul(&right)
            })
            .collect();
        FreeComplex { ring: self.ring.clone(), lo: self.lo, hi: self.hi, ranks: self.ranks.clone(), d }
    }

    pub fn to_json(&self) -> Value {
        let mut ranks = Map::new();
        for i in self.degrees() {
            ranks.insert(i.to_string(), json!(self.rank(i)));
        }
        let mut diffs = Map::new();
        for i in self.lo..self.hi {
            diffs.insert(i.to_string(), self.diff(i).to_json());
        }
        json!({
            "ring": serde_json::to_value(self.ring.spec()).unwrap(),
            "degrees": [self.lo, self.hi],
            "ranks": ranks,
            "differentials": diffs,
        })
    }

    pub fn from_json(v: &Value) -> Result<FreeComplex> {
        let spec: RingSpec = serde_json::from_value(v.get("ring").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::InvalidInput(format!("ring: {e}")))?;
        let ring = Ring::new(&spec)?;
        FreeComplex::from_json_over(&ring, v)
    }

    /// Parse with a known ring (the "ring" key, if present, must agree).
    pub fn from_json_over(ring: &Ring, v: &Value) -> Result<FreeComplex> {
        if let Some(r) = v.get("ring") {
            let spec: RingSpec =
                serde_json::from_value(r.clone()).map_err(|e| Error::InvalidInput(format!("ring: {e}")))?;
            if spec != *ring.spec() {
                return invalid("complex ring differs from the expected ring");
            }
        }
        let degs = v
            .get("degrees")
            .and_then(|d| d.as_array())
            .filter(|d| d.len() == 2)
            .ok_or_else(|| Error::InvalidInput("complex needs \"degrees\": [a, b]".into()))?;
        let lo = degs[0].as_i64().ok_or_else(|| Error::InvalidInput("bad degree".into()))?;
        let hi = degs[1].as_i64().ok_or_else(|| Error::InvalidInput("bad degree".into()))?;
        if hi < lo || hi - lo > 64 {
            return invalid(format!("bad degree range [{lo}, {hi}]"));
        }
        let ranks_obj = v.get("ranks").and_then(|r| r.as_object());
        let mut ranks = Vec::new();
        for i in lo..=hi {
            let r = match ranks_obj.and_then(|o| o.get(&i.to_string())) {
                Some(x) => x.as_u64().ok_or_else(|| Error::InvalidInput(format!("rank in degree {i}")))? as usize,
                None => 0,
            };
            ranks.push(r);
        }
        if let Some(o) = ranks_obj {
            for k in o.keys() {
                let deg: i64 = k.parse().map_err(|_| Error::InvalidInput(format!("bad rank key {k}")))?;
                if deg < lo || deg > hi {
                    return invalid(format!("rank given in degree {deg} outside [{lo}, {hi}]"));
                }
            }
        }
        let diffs = v.get("differentials").and_then(|d| d.as_object());
        let mut d = Vec::new();
        for i in lo..hi {
            let k = (i - lo) as usize;
            let m = match diffs.and_then(|o| o.get(&i.to_string())) {
                Some(x) => Mat::from_json(ring, x, ranks[k + 1], ranks[k])
                    .map_err(|e| Error::InvalidInput(format!("differential {i}: {e}")))?,
                None => Mat::zeros(ring, ranks[k + 1], ranks[k]),
            };
            d.push(m);
        }
        FreeComplex::new(ring, lo, ranks, d)
    }
}

/// A degree-0 map of graded modules; a chain map when it commutes with d.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    pub source: FreeComplex,
    pub target: FreeComplex,
    comps: BTreeMap<i64, Mat>,
}

impl ChainMap {
    pub fn new(source: &FreeComplex, target: &FreeComplex, comps: BTreeMap<i64, Mat>) -> Result<ChainMap> {
        let f = ChainMap::graded(source, target, comps)?;
        f.check()?;
        Ok(f)
    }

    /// Graded map without the commutation check.
    pub fn graded(source: &FreeComplex, target: &FreeComplex, comps: BTreeMap<i64, Mat>) -> Result<ChainMap> {
        for (&i, m) in &comps {
            if m.rows != target.rank(i) || m.cols != source.rank(i) {
                return Err(Error::InvalidInput(format!(
                    "map component in degree {i} has shape {}x{}, expected {}x{}",
                    m.rows,
                    m.cols,
                    target.rank(i),
                    source.rank(i)
                )));
            }
        }
        let comps = comps.into_iter().filter(|(_, m)| m.rows > 0 && m.cols > 0).collect();
        Ok(ChainMap { source: source.clone(), target: target.clone(), comps })
    }

    pub fn zero(source: &FreeComplex, target: &FreeComplex) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), comps: BTreeMap::new() }
    }

    pub fn identity(c: &FreeComplex) -> ChainMap {
        let comps = c.degrees().map(|i| (i, Mat::identity(&c.ring, c.rank(i)))).collect();
        ChainMap::graded(c, c, comps).unwrap()
    }

    pub fn from_fn(source: &FreeComplex, target: &FreeComplex, mut f: impl FnMut(i64) -> Mat) -> ChainMap {
        let (lo, hi) = (source.lo.max(target.lo), source.hi.min(target.hi));
        let comps = (lo..=hi).map(|i| (i, f(i))).collect();
        ChainMap::graded(source, target, comps).expect("component shapes")
    }

    pub fn comp(&self, i: i64) -> Mat {
        self.comps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(&self.source.ring, self.target.rank(i), self.source.rank(i)))
    }

    pub fn degrees(&self) -> Vec<i64> {
        let (lo, hi) = (self.source.lo.min(self.target.lo), self.source.hi.max(self.target.hi));
        (lo..=hi).collect()
    }

    /// Failure of d f = f d, if any, as the first offending degree.
    pub fn commutator_defect(&self) -> Option<i64> {
        for i in self.degrees() {
            let lhs = self.target.diff(i).mul(&self.comp(i));
            let rhs = self.comp(i + 1).mul(&self.source.diff(i));
            if lhs != rhs {
                return Some(i);
            }
        }
        None
    }

    pub fn check(&self) -> Result<()> {
        match self.commutator_defect() {
            None => Ok(()),
            Some(i) => Err(Error::InvalidInput(format!("not a chain map: d f != f d in degree {i}"))),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.comps.values().all(|m| m.is_zero())
    }

    pub fn compose(&self, inner: &ChainMap) -> ChainMap {
        // self ∘ inner
        let comps = inner
            .degrees()
            .into_iter()
            .chain(self.degrees())
            .filter(|&i| inner.source.rank(i) > 0 && self.target.rank(i) > 0)
            .map(|i| (i, self.comp(i).mul(&inner.comp(i))))
            .collect();
        ChainMap { source: inner.source.clone(), target: self.target.clone(), comps }
    }

    fn zip(&self, other: &ChainMap, f: impl Fn(&Mat, &Mat) -> Mat) -> ChainMap {
        let degs: Vec<i64> = self.comps.keys().chain(other.comps.keys()).copied().collect();
        let comps = degs.into_iter().map(|i| (i, f(&self.comp(i), &other.comp(i)))).collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), comps }
    }

    pub fn add(&self, other: &ChainMap) -> ChainMap {
        self.zip(other, |a, b| a.add(b))
    }

    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        self.zip(other, |a, b| a.sub(b))
    }

    pub fn scale(&self, k: &Elt) -> ChainMap {
        let comps = self.comps.iter().map(|(&i, m)| (i, m.scale(k))).collect();
        ChainMap { source: self.source.clone(), target: self.target.clone(), comps }
    }

    pub fn neg(&self) -> ChainMap {
        self.scale(&self.source.ring.from_int(-1))
    }

    pub fn pow(&self, e: u32) -> ChainMap {
        let mut acc = ChainMap::identity(&self.source);
        for _ in 0..e {
            acc = self.compose(&acc);
        }
        acc
    }

    pub fn base_change(&self, red: &Reduction) -> ChainMap {
        let comps = self.comps.iter().map(|(&i, m)| (i, m.map(red))).collect();
        ChainMap { source: self.source.base_change(red), target: self.target.base_change(red), comps }
    }

    /// Degreewise inverse when every component is invertible.
    pub fn inverse(&self) -> Option<ChainMap> {
        let mut comps = BTreeMap::new();
        for i in self.degrees() {
            if self.source.rank(i) != self.target.rank(i) {
                return None;
            }
            if self.source.rank(i) == 0 {
                continue;
            }
            comps.insert(i, inverse(&self.comp(i))?);
        }
        Some(ChainMap { source: self.target.clone(), target: self.source.clone(), comps })
    }

    /// Same components, viewed between other (equal-rank) complexes.
    pub fn retarget(&self, source: &FreeComplex, target: &FreeComplex) -> ChainMap {
        ChainMap { source: source.clone(), target: target.clone(), comps: self.comps.clone() }
    }

    /// Mapping cone: cone^i = X^{i+1} ⊕ Y^i, d = [[-d_X, 0], [f, d_Y]].
    pub fn cone(&self) -> FreeComplex {
        let (x, y) = (&self.source, &self.target);
        let ring = &x.ring;
        let lo = (x.lo - 1).min(y.lo);
        let hi = (x.hi - 1).max(y.hi);
        let ranks: Vec<usize> = (lo..=hi).map(|i| x.rank(i + 1) + y.rank(i)).collect();
        let d = (lo..hi)
            .map(|i| {
                let top = x.diff(i + 1).neg().hstack(&Mat::zeros(ring, x.rank(i + 2), y.rank(i)));
                let bottom = self.comp(i + 1).hstack(&y.diff(i));
                top.vstack(&bottom)
            })
            .collect();
        FreeComplex::new_unchecked(ring, lo, ranks, d)
    }

    pub fn to_json(&self) -> Value {
        let mut m = Map::new();
        for (i, c) in &self.comps {
            m.insert(i.to_string(), c.to_json());
        }
        Value::Object(m)
    }

    pub fn from_json(source: &FreeComplex, target: &FreeComplex, v: &Value) -> Result<ChainMap> {
        let obj = v.as_object().ok_or_else(|| Error::InvalidInput("chain map must be an object".into()))?;
        let mut comps = BTreeMap::new();
        for (k, x) in obj {
            let i: i64 = k.parse().map_err(|_| Error::InvalidInput(format!("bad degree key {k}")))?;
            comps.insert(i, Mat::from_json(&source.ring, x, target.rank(i), source.rank(i))?);
        }
        ChainMap::new(source, target, comps)
    }
}

/// A degree -1 map h^i : C^i -> D^{i-1}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Homotopy {
    pub source: FreeComplex,
    pub target: FreeComplex,
    comps: BTreeMap<i64, Mat>,
}

impl Homotopy {
    pub fn zero(source: &FreeComplex, target: &FreeComplex) -> Homotopy {
        Homotopy { source: source.clone(), target: target.clone(), comps: BTreeMap::new() }
    }

    pub fn from_comps(source: &FreeComplex, target: &FreeComplex, comps: BTreeMap<i64, Mat>) -> Homotopy {
        Homotopy { source: source.clone(), target: target.clone(), comps }
    }

    pub fn comp(&self, i: i64) -> Mat {
        self.comps
            .get(&i)
            .cloned()
            .unwrap_or_else(|| Mat::zeros(&self.source.ring, self.target.rank(i - 1), self.source.rank(i)))
    }

    /// The chain map d h + h d.
    pub fn boundary(&self) -> ChainMap {
        let (c, d) = (&self.source, &self.target);
        ChainMap::from_fn(c, d, |i| {
            let a = d.diff(i - 1).mul(&self.comp(i));
            let b = self.comp(i + 1).mul(&c.diff(i));
            a.add(&b)
        })
    }

    pub fn add(&self, other: &Homotopy) -> Homotopy {
        let degs: Vec<i64> = self.comps.keys().chain(other.comps.keys()).copied().collect();
        let comps = degs.into_iter().map(|i| (i, self.comp(i).add(&other.comp(i)))).collect();
        Homotopy { source: self.source.clone(), target: self.target.clone(), comps }
    }

    /// outer ∘ self ∘ inner.
    pub fn sandwich(&self, outer: &ChainMap, inner: &ChainMap) -> Homotopy {
        let degs: Vec<i64> = inner.degrees();
        let comps = degs
            .into_iter()
            .map(|i| (i, outer.comp(i - 1).mul(&self.comp(i)).mul(&inner.comp(i))))
            .collect();
        Homotopy { source: inner.source.clone(), target: outer.target.clone(), comps }
    }
}
