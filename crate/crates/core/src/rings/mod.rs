//! Coefficient rings: Z/p^c, group algebras Z/p^c[Δ], F_p[S], GF(p^m), and
//! truncated power series Z/p^c[S_1..S_q]/(S)^e.
//!
//! Elements are dense coefficient vectors (`Elt`). For every finite ring other
//! than GF the vector is also the coordinate vector over the base Z/p^c, which
//! is what the linear algebra layer expands into.

pub mod gf;
pub mod gfpoly;
pub mod poly;

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use smallvec::SmallVec;

use crate::error::{invalid, Error, Result};
pub use gf::Gf;

pub type Elt = SmallVec<[u64; 4]>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum RingSpec {
    Zpc { p: u64, c: u32 },
    GroupAlg { p: u64, c: u32, delta: Vec<u64> },
    PolyPID { p: u64 },
    GF { p: u64, m: usize, modulus: Vec<u64> },
    Trunc { p: u64, c: u32, vars: usize, order: u32 },
}

/// Ideals the quotient constructor understands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Ideal {
    /// (p^j)
    PPower { j: u32 },
    /// (p^j, g_i^{delta_i} - 1) in a group algebra
    Level { j: u32, delta: Vec<u64> },
    /// augmentation ideal of a group algebra, or (S_1..S_q) in a truncated ring
    Augmentation,
    /// (S^j) in F_p[S] or (S_1..S_q)^j in a truncated ring
    SPower { j: u32 },
    /// (S - u) in F_p[S]
    SMinus { u: u64 },
    /// the maximal ideal
    Maximal,
}

/// How the linear algebra layer treats a ring.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Shape {
    /// Z/p^c or a finite field: ideals are totally ordered.
    Chain,
    /// finite local algebra, free over its base Z/p^c.
    Expand,
    /// F_p[S].
    Pid,
}

#[derive(Debug)]
enum Kind {
    Zpc,
    GroupAlg { delta: Vec<u64>, sum: Vec<u32> },
    PolyPid,
    Field(Arc<Gf>),
    Trunc { vars: usize, order: u32, monos: Vec<Vec<u32>>, table: Vec<Option<u32>> },
}

#[derive(Debug)]
struct Inner {
    spec: RingSpec,
    kind: Kind,
    p: u64,
    c: u32,
    n: u64,
    residue: Arc<Gf>,
}

#[derive(Clone)]
pub struct Ring(Arc<Inner>);

impl PartialEq for Ring {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.spec == other.0.spec
    }
}
impl Eq for Ring {}

impl fmt::Debug for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0.spec)
    }
}

const MAX_GROUP: u64 = 1024;
const MAX_MONOMIALS: usize = 4096;

fn checked_pow(p: u64, c: u32) -> Result<u64> {
    let n = (p as u128).pow(c);
    if c == 0 || n > (1u128 << 40) {
        return invalid(format!("p^c = {p}^{c} out of range"));
    }
    Ok(n as u64)
}

fn monomials(vars: usize, order: u32) -> Vec<Vec<u32>> {
    fn rec(vars: usize, budget: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == vars {
            out.push(cur.clone());
            return;
        }
        for e in 0..=budget {
            cur.push(e);
            rec(vars, budget - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if order > 0 {
        rec(vars, order - 1, &mut Vec::new(), &mut out);
    }
    out.sort_by(|a, b| {
        let (da, db): (u32, u32) = (a.iter().sum(), b.iter().sum());
        da.cmp(&db).then_with(|| b.cmp(a))
    });
    out
}

impl Ring {
    pub fn new(spec: &RingSpec) -> Result<Ring> {
        let (p, c, kind, spec) = match spec {
            RingSpec::Zpc { p, c } => {
                if !gf::is_prime(*p) {
                    return Err(Error::NonPrimeModulus(*p));
                }
                (*p, *c, Kind::Zpc, spec.clone())
            }
            RingSpec::GroupAlg { p, c, delta } => {
                if !gf::is_prime(*p) {
                    return Err(Error::NonPrimeModulus(*p));
                }
                for &d in delta {
                    let mut x = d;
                    while x > 1 && x % p == 0 {
                        x /= p;
                    }
                    if d == 0 || x != 1 {
                        return Err(Error::MixedCharacteristic { p: *p, factor: d });
                    }
                }
                let size: u64 = delta.iter().product();
                if size > MAX_GROUP {
                    return invalid(format!("group of order {size} is too large"));
                }
                let size = size as usize;
                let mut sum = vec![0u32; size * size];
                for i in 0..size {
                    let a = group_digits(delta, i);
                    for j in 0..size {
                        let b = group_digits(delta, j);
                        let s: Vec<u64> =
                            (0..delta.len()).map(|k| (a[k] + b[k]) % delta[k]).collect();
                        sum[i * size + j] = group_index(delta, &s) as u32;
                    }
                }
                (*p, *c, Kind::GroupAlg { delta: delta.clone(), sum }, spec.clone())
            }
            RingSpec::PolyPID { p } => {
                if !gf::is_prime(*p) {
                    return Err(Error::NonPrimeModulus(*p));
                }
                (*p, 1, Kind::PolyPid, spec.clone())
            }
            RingSpec::GF { p, m, modulus } => {
                if modulus.len() != m + 1 {
                    return invalid(format!("GF modulus must have {} coefficients", m + 1));
                }
                let field = Gf::new(*p, modulus.clone())?;
                (*p, 1, Kind::Field(field), spec.clone())
            }
            RingSpec::Trunc { p, c, vars, order } => {
                if !gf::is_prime(*p) {
                    return Err(Error::NonPrimeModulus(*p));
                }
                if *order == 0 {
                    return invalid("truncation order must be positive");
                }
                let monos = monomials(*vars, *order);
                if monos.len() > MAX_MONOMIALS {
                    return invalid("too many monomials in truncated ring");
                }
                let index: HashMap<&Vec<u32>, usize> =
                    monos.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let r = monos.len();
                let mut table = vec![None; r * r];
                for i in 0..r {
                    for j in 0..r {
                        let s: Vec<u32> =
                            monos[i].iter().zip(&monos[j]).map(|(a, b)| a + b).collect();
                        table[i * r + j] = index.get(&s).map(|&k| k as u32);
                    }
                }
                (
                    *p,
                    *c,
                    Kind::Trunc { vars: *vars, order: *order, monos, table },
                    spec.clone(),
                )
            }
        };
        let n = checked_pow(p, c)?;
        let residue = match &kind {
            Kind::Field(f) => f.clone(),
            _ => Gf::prime(p)?,
        };
        Ok(Ring(Arc::new(Inner { spec, kind, p, c, n, residue })))
    }

    pub fn zpc(p: u64, c: u32) -> Result<Ring> {
        Ring::new(&RingSpec::Zpc { p, c })
    }

    /// Z/p^c[S_1..S_q]/(S)^order, collapsing to Z/p^c when no variable survives.
    pub fn trunc(p: u64, c: u32, vars: usize, order: u32) -> Result<Ring> {
        if vars == 0 || order <= 1 {
            Ring::zpc(p, c)
        } else {
            Ring::new(&RingSpec::Trunc { p, c, vars, order })
        }
    }

    pub fn gf(p: u64, modulus: Vec<u64>) -> Result<Ring> {
        let m = modulus.len().saturating_sub(1);
        Ring::new(&RingSpec::GF { p, m, modulus })
    }

    pub fn from_field(field: &Arc<Gf>) -> Ring {
        Ring::gf(field.p(), field.modulus().to_vec()).expect("field already validated")
    }

    pub fn spec(&self) -> &RingSpec {
        &self.0.spec
    }
    pub fn p(&self) -> u64 {
        self.0.p
    }
    /// Exponent of the base Z/p^c (1 for fields and F_p[S]).
    pub fn c(&self) -> u32 {
        self.0.c
    }
    /// Size of the base Z/p^c.
    pub fn base_modulus(&self) -> u64 {
        self.0.n
    }
    pub fn residue_field(&self) -> &Arc<Gf> {
        &self.0.residue
    }

    pub fn shape(&self) -> Shape {
        match self.0.kind {
            Kind::Zpc | Kind::Field(_) => Shape::Chain,
            Kind::GroupAlg { .. } | Kind::Trunc { .. } => Shape::Expand,
            Kind::PolyPid => Shape::Pid,
        }
    }

    pub fn is_finite(&self) -> bool {
        !matches!(self.0.kind, Kind::PolyPid)
    }

    pub fn is_field(&self) -> bool {
        matches!(self.0.kind, Kind::Field(_)) || (matches!(self.0.kind, Kind::Zpc) && self.0.c == 1)
    }

    pub fn field(&self) -> Option<&Arc<Gf>> {
        match &self.0.kind {
            Kind::Field(f) => Some(f),
            _ => None,
        }
    }

    pub fn is_poly_pid(&self) -> bool {
        matches!(self.0.kind, Kind::PolyPid)
    }

    pub fn group_delta(&self) -> Option<&[u64]> {
        match &self.0.kind {
            Kind::GroupAlg { delta, .. } => Some(delta),
            _ => None,
        }
    }

    pub fn trunc_shape(&self) -> Option<(usize, u32)> {
        match &self.0.kind {
            Kind::Trunc { vars, order, .. } => Some((*vars, *order)),
            _ => None,
        }
    }

    pub fn monomials(&self) -> Option<&[Vec<u32>]> {
        match &self.0.kind {
            Kind::Trunc { monos, .. } => Some(monos),
            _ => None,
        }
    }

    /// Rank over the base Z/p^c (length of an element vector). Not defined
    /// for F_p[S].
    pub fn base_rank(&self) -> usize {
        match &self.0.kind {
            Kind::Zpc => 1,
            Kind::GroupAlg { delta, .. } => delta.iter().product::<u64>() as usize,
            Kind::PolyPid => 1,
            Kind::Field(f) => f.degree(),
            Kind::Trunc { monos, .. } => monos.len(),
        }
    }

    /// Number of elements, saturating; `None` for F_p[S].
    pub fn size(&self) -> Option<u128> {
        if !self.is_finite() {
            return None;
        }
        let r = self.base_rank() as u32;
        let base = if let Kind::Field(f) = &self.0.kind { f.size() as u128 } else { self.0.n as u128 };
        let base_rank = if matches!(self.0.kind, Kind::Field(_)) { 1 } else { r };
        Some(base.checked_pow(base_rank).unwrap_or(u128::MAX))
    }

    // ---- elements ----

    pub fn zero(&self) -> Elt {
        match &self.0.kind {
            Kind::PolyPid => Elt::new(),
            _ => smallvec::smallvec![0; self.base_rank()],
        }
    }

    pub fn one(&self) -> Elt {
        self.from_int(1)
    }

    pub fn from_int(&self, v: i64) -> Elt {
        match &self.0.kind {
            Kind::PolyPid => {
                let c = v.rem_euclid(self.0.p as i64) as u64;
                if c == 0 {
                    Elt::new()
                } else {
                    smallvec::smallvec![c]
                }
            }
            Kind::Field(f) => {
                let mut e = self.zero();
                e[0] = v.rem_euclid(f.p() as i64) as u64;
                e
            }
            _ => {
                let mut e = self.zero();
                e[0] = v.rem_euclid(self.0.n as i64) as u64;
                e
            }
        }
    }

    /// Reduce an arbitrary integer vector to canonical form.
    pub fn canon(&self, v: &[i64]) -> Result<Elt> {
        match &self.0.kind {
            Kind::PolyPid => {
                let mut e: Elt = v.iter().map(|&x| x.rem_euclid(self.0.p as i64) as u64).collect();
                while e.last() == Some(&0) {
                    e.pop();
                }
                Ok(e)
            }
            Kind::Field(f) => {
                let mut e = self.zero();
                for (i, &x) in v.iter().enumerate() {
                    if i >= f.degree() {
                        let tail: Vec<i64> = v[i..].to_vec();
                        if tail.iter().any(|&t| t.rem_euclid(f.p() as i64) != 0) {
                            // reduce by the modulus
                            return self.canon_field_poly(v);
                        }
                        break;
                    }
                    e[i] = x.rem_euclid(f.p() as i64) as u64;
                }
                Ok(e)
            }
            _ => {
                let r = self.base_rank();
                if v.len() > r {
                    return invalid(format!("element has {} coordinates, ring has {r}", v.len()));
                }
                let mut e = self.zero();
                for (i, &x) in v.iter().enumerate() {
                    e[i] = x.rem_euclid(self.0.n as i64) as u64;
                }
                Ok(e)
            }
        }
    }

    fn canon_field_poly(&self, v: &[i64]) -> Result<Elt> {
        let f = self.field().unwrap();
        let x = f.from_digits(&[0, 1]);
        let mut acc = 0u32;
        for &c in v.iter().rev() {
            acc = f.add(f.mul(acc, x), f.from_int(c));
        }
        Ok(self.from_field_elt(acc))
    }

    pub fn is_zero(&self, a: &Elt) -> bool {
        a.iter().all(|&x| x == 0)
    }

    pub fn add(&self, a: &Elt, b: &Elt) -> Elt {
        match &self.0.kind {
            Kind::PolyPid => {
                let p = self.0.p;
                let n = a.len().max(b.len());
                let mut out: Elt = (0..n)
                    .map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % p)
                    .collect();
                while out.last() == Some(&0) {
                    out.pop();
                }
                out
            }
            Kind::Field(f) => {
                let p = f.p();
                a.iter().zip(b.iter()).map(|(x, y)| (x + y) % p).collect()
            }
            _ => {
                let n = self.0.n;
                a.iter().zip(b.iter()).map(|(x, y)| (x + y) % n).collect()
            }
        }
    }

    pub fn neg(&self, a: &Elt) -> Elt {
        let m = match &self.0.kind {
            Kind::PolyPid => self.0.p,
            Kind::Field(f) => f.p(),
            _ => self.0.n,
        };
        a.iter().map(|&x| (m - x) % m).collect()
    }

    pub fn sub(&self, a: &Elt, b: &Elt) -> Elt {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &Elt, b: &Elt) -> Elt {
        match &self.0.kind {
            Kind::Zpc => smallvec::smallvec![mulmod(a[0], b[0], self.0.n)],
            Kind::PolyPid => {
                if a.is_empty() || b.is_empty() {
                    return Elt::new();
                }
                let p = self.0.p;
                let mut out: Elt = smallvec::smallvec![0; a.len() + b.len() - 1];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate() {
                        out[i + j] = (out[i + j] + x * y) % p;
                    }
                }
                while out.last() == Some(&0) {
                    out.pop();
                }
                out
            }
            Kind::Field(f) => {
                let x = f.mul(f.from_digits(a), f.from_digits(b));
                self.from_field_elt(x)
            }
            Kind::GroupAlg { sum, .. } => {
                let n = self.0.n;
                let s = a.len();
                let mut out: Elt = smallvec::smallvec![0; s];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate() {
                        if y == 0 {
                            continue;
                        }
                        let k = sum[i * s + j] as usize;
                        out[k] = (out[k] + mulmod(x, y, n)) % n;
                    }
                }
                out
            }
            Kind::Trunc { table, monos, .. } => {
                let n = self.0.n;
                let r = monos.len();
                let mut out: Elt = smallvec::smallvec![0; r];
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    for (j, &y) in b.iter().enumerate() {
                        if y == 0 {
                            continue;
                        }
                        if let Some(k) = table[i * r + j] {
                            let k = k as usize;
                            out[k] = (out[k] + mulmod(x, y, n)) % n;
                        }
                    }
                }
                out
            }
        }
    }

    pub fn pow(&self, a: &Elt, mut e: u64) -> Elt {
        let mut result = self.one();
        let mut b = a.clone();
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(&result, &b);
            }
            e >>= 1;
            if e > 0 {
                b = self.mul(&b, &b);
            }
        }
        result
    }

    pub fn scalar_mul(&self, k: i64, a: &Elt) -> Elt {
        self.mul(&self.from_int(k), a)
    }

    /// Image in the residue field (for F_p[S]: S -> 0).
    pub fn residue(&self, a: &Elt) -> u32 {
        match &self.0.kind {
            Kind::Zpc => (a[0] % self.0.p) as u32,
            Kind::PolyPid => a.first().copied().unwrap_or(0) as u32,
            Kind::Field(f) => f.from_digits(a),
            Kind::GroupAlg { .. } => {
                (a.iter().fold(0u64, |s, &x| (s + x) % self.0.n) % self.0.p) as u32
            }
            Kind::Trunc { .. } => (a[0] % self.0.p) as u32,
        }
    }

    /// Constant lift of a residue field element.
    pub fn lift_residue(&self, r: u32) -> Elt {
        match &self.0.kind {
            Kind::Field(_) => self.from_field_elt(r),
            _ => self.from_int(r as i64),
        }
    }

    pub fn from_field_elt(&self, x: u32) -> Elt {
        match &self.0.kind {
            Kind::Field(f) => f.digits(x).into_iter().collect(),
            _ => self.from_int(x as i64),
        }
    }

    pub fn in_max_ideal(&self, a: &Elt) -> bool {
        self.residue(a) == 0
    }

    pub fn is_unit(&self, a: &Elt) -> bool {
        match &self.0.kind {
            Kind::PolyPid => a.len() == 1,
            _ => self.residue(a) != 0,
        }
    }

    pub fn inv(&self, a: &Elt) -> Option<Elt> {
        if !self.is_unit(a) {
            return None;
        }
        match &self.0.kind {
            Kind::Zpc => Some(smallvec::smallvec![modinv(a[0], self.0.n)?]),
            Kind::PolyPid => {
                let f = Gf::prime(self.0.p).ok()?;
                Some(smallvec::smallvec![f.inv(a[0] as u32)? as u64])
            }
            Kind::Field(f) => Some(self.from_field_elt(f.inv(f.from_digits(a))?)),
            Kind::GroupAlg { .. } | Kind::Trunc { .. } => {
                let scalar = match &self.0.kind {
                    Kind::GroupAlg { .. } => a.iter().fold(0u64, |s, &x| (s + x) % self.0.n),
                    _ => a[0],
                };
                let u = self.from_int(modinv(scalar, self.0.n)? as i64);
                // u a = 1 - y with y nilpotent
                let y = self.sub(&self.one(), &self.mul(&u, a));
                let mut term = self.one();
                let mut acc = self.one();
                for _ in 0..=(self.base_rank() * self.0.c as usize + 1) {
                    term = self.mul(&term, &y);
                    if self.is_zero(&term) {
                        break;
                    }
                    acc = self.add(&acc, &term);
                }
                let inv = self.mul(&acc, &u);
                debug_assert_eq!(self.mul(&inv, a), self.one());
                Some(inv)
            }
        }
    }

    /// p-adic style valuation for chain rings: smallest v with a in m^v,
    /// `c` for zero. For fields: 0 or 1.
    pub fn valuation(&self, a: &Elt) -> u32 {
        match &self.0.kind {
            Kind::Zpc => {
                if a[0] == 0 {
                    return self.0.c;
                }
                let mut v = 0;
                let mut x = a[0];
                while x % self.0.p == 0 {
                    x /= self.0.p;
                    v += 1;
                }
                v
            }
            Kind::Field(_) => u32::from(self.is_zero(a)),
            _ => panic!("valuation only defined for chain rings"),
        }
    }

    /// Multiplication by `a` as a base-rank square matrix over Z/p^c
    /// (column j holds the coordinates of a * b_j).
    pub fn mul_matrix(&self, a: &Elt) -> Vec<Vec<u64>> {
        let r = self.base_rank();
        let mut cols = Vec::with_capacity(r);
        for j in 0..r {
            let mut b = self.zero();
            b[j] = 1;
            cols.push(self.mul(a, &b));
        }
        (0..r).map(|i| (0..r).map(|j| cols[j][i]).collect()).collect()
    }

    /// All elements of a finite ring, if at most `limit` of them.
    pub fn elements(&self, limit: u128) -> Option<Vec<Elt>> {
        let size = self.size()?;
        if size > limit {
            return None;
        }
        if let Kind::Field(f) = &self.0.kind {
            return Some(f.elements().map(|x| self.from_field_elt(x)).collect());
        }
        let r = self.base_rank();
        let n = self.0.n;
        let mut out = Vec::with_capacity(size as usize);
        for mut k in 0..size {
            let mut e = self.zero();
            for slot in e.iter_mut().take(r) {
                *slot = (k % n as u128) as u64;
                k /= n as u128;
            }
            out.push(e);
        }
        Some(out)
    }

    // ---- JSON ----

    pub fn elt_to_json(&self, a: &Elt) -> Value {
        match &self.0.kind {
            Kind::Zpc => Value::from(a[0]),
            _ => Value::from(a.iter().copied().collect::<Vec<u64>>()),
        }
    }

    pub fn elt_from_json(&self, v: &Value) -> Result<Elt> {
        match v {
            Value::Number(n) => {
                let x = n.as_i64().ok_or_else(|| Error::InvalidInput(format!("bad integer {n}")))?;
                Ok(self.from_int(x))
            }
            Value::Array(items) => {
                let mut ints = Vec::with_capacity(items.len());
                for it in items {
                    ints.push(
                        it.as_i64().ok_or_else(|| Error::InvalidInput(format!("bad coefficient {it}")))?,
                    );
                }
                self.canon(&ints)
            }
            _ => invalid(format!("ring element must be an integer or a list, got {v}")),
        }
    }

    pub fn fmt_elt(&self, a: &Elt) -> String {
        match &self.0.kind {
            Kind::Zpc => a[0].to_string(),
            _ => format!("{:?}", a.as_slice()),
        }
    }

    // ---- quotients ----

    /// The quotient ring R/I together with the reduction map.
    pub fn quotient(&self, ideal: &Ideal) -> Result<Reduction> {
        let p = self.0.p;
        let unsupported = || Err(Error::UnsupportedQuotient(format!("{ideal:?} of {:?}", self.0.spec)));
        let target = match (&self.0.kind, ideal) {
            (Kind::Zpc, Ideal::PPower { j }) if *j >= 1 => Ring::zpc(p, (*j).min(self.0.c))?,
            (Kind::Zpc, Ideal::Maximal) => Ring::zpc(p, 1)?,
            (Kind::GroupAlg { delta, .. }, Ideal::PPower { j }) if *j >= 1 => Ring::new(
                &RingSpec::GroupAlg { p, c: (*j).min(self.0.c), delta: delta.clone() },
            )?,
            (Kind::GroupAlg { delta, .. }, Ideal::Level { j, delta: d2 }) if *j >= 1 => {
                if d2.len() != delta.len() || d2.iter().zip(delta).any(|(a, b)| *a == 0 || b % a != 0) {
                    return unsupported();
                }
                Ring::new(&RingSpec::GroupAlg { p, c: (*j).min(self.0.c), delta: d2.clone() })?
            }
            (Kind::GroupAlg { .. }, Ideal::Augmentation) => Ring::zpc(p, self.0.c)?,
            (Kind::GroupAlg { .. } | Kind::Trunc { .. }, Ideal::Maximal) => Ring::zpc(p, 1)?,
            (Kind::Trunc { vars, order, .. }, Ideal::PPower { j }) if *j >= 1 => {
                Ring::trunc(p, (*j).min(self.0.c), *vars, *order)?
            }
            (Kind::Trunc { vars, order, .. }, Ideal::SPower { j }) if *j >= 1 => {
                Ring::trunc(p, self.0.c, *vars, (*j).min(*order))?
            }
            (Kind::Trunc { .. }, Ideal::Augmentation) => Ring::zpc(p, self.0.c)?,
            (Kind::PolyPid, Ideal::SPower { j }) if *j >= 1 => Ring::trunc(p, 1, 1, *j)?,
            (Kind::PolyPid, Ideal::SMinus { u }) => {
                let target = Ring::zpc(p, 1)?;
                return Ok(Reduction { from: self.clone(), to: target, eval_at: Some(u % p) });
            }
            (Kind::PolyPid, Ideal::Maximal) => Ring::zpc(p, 1)?,
            (Kind::Field(_), Ideal::Maximal) => self.clone(),
            _ => return unsupported(),
        };
        Ok(Reduction { from: self.clone(), to: target, eval_at: None })
    }

    /// The natural surjection onto `to`, when `to` is one of the quotients
    /// produced by `quotient` (or the ring itself).
    pub fn natural_map(&self, to: &Ring) -> Result<Reduction> {
        let ok = match (&self.0.kind, &to.0.kind) {
            _ if self == to => true,
            (Kind::Zpc, Kind::Zpc) => self.0.p == to.0.p && to.0.c <= self.0.c,
            (Kind::GroupAlg { delta, .. }, Kind::GroupAlg { delta: d2, .. }) => {
                self.0.p == to.0.p
                    && to.0.c <= self.0.c
                    && delta.len() == d2.len()
                    && delta.iter().zip(d2).all(|(a, b)| a % b == 0)
            }
            (Kind::GroupAlg { .. } | Kind::Trunc { .. }, Kind::Zpc) => {
                self.0.p == to.0.p && to.0.c <= self.0.c
            }
            (Kind::Trunc { vars, order, .. }, Kind::Trunc { vars: v2, order: o2, .. }) => {
                self.0.p == to.0.p && to.0.c <= self.0.c && vars == v2 && o2 <= order
            }
            (Kind::PolyPid, Kind::Trunc { vars: 1, .. }) => self.0.p == to.0.p && to.0.c == 1,
            (Kind::PolyPid, Kind::Zpc) => self.0.p == to.0.p && to.0.c == 1,
            _ => false,
        };
        if !ok {
            return Err(Error::UnsupportedQuotient(format!(
                "no natural map {:?} -> {:?}",
                self.0.spec, to.0.spec
            )));
        }
        Ok(Reduction { from: self.clone(), to: to.clone(), eval_at: None })
    }
}

/// A ring surjection R -> R/I.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub from: Ring,
    pub to: Ring,
    eval_at: Option<u64>,
}

impl Reduction {
    pub fn apply(&self, a: &Elt) -> Elt {
        let (from, to) = (&self.from, &self.to);
        if from == to {
            return a.clone();
        }
        match (&from.0.kind, &to.0.kind) {
            (Kind::Zpc, Kind::Zpc) => smallvec::smallvec![a[0] % to.0.n],
            (Kind::GroupAlg { delta, .. }, Kind::GroupAlg { delta: d2, .. }) => {
                let mut out = to.zero();
                for (i, &x) in a.iter().enumerate() {
                    if x == 0 {
                        continue;
                    }
                    let g = group_digits(delta, i);
                    let h: Vec<u64> = g.iter().zip(d2).map(|(x, d)| x % d).collect();
                    let k = group_index(d2, &h);
                    out[k] = (out[k] + x) % to.0.n;
                }
                out
            }
            (Kind::GroupAlg { .. }, Kind::Zpc) => {
                smallvec::smallvec![a.iter().fold(0u64, |s, &x| (s + x) % to.0.n)]
            }
            (Kind::Trunc { .. }, Kind::Zpc) => smallvec::smallvec![a[0] % to.0.n],
            (Kind::Trunc { monos, .. }, Kind::Trunc { monos: m2, .. }) => {
                let index: HashMap<&Vec<u32>, usize> =
                    m2.iter().enumerate().map(|(i, m)| (m, i)).collect();
                let mut out = to.zero();
                for (i, &x) in a.iter().enumerate() {
                    if let Some(&k) = index.get(&monos[i]) {
                        out[k] = x % to.0.n;
                    }
                }
                out
            }
            (Kind::PolyPid, Kind::Trunc { monos, .. }) => {
                let mut out = to.zero();
                for (i, &x) in a.iter().enumerate().take(monos.len()) {
                    out[i] = x;
                }
                out
            }
            (Kind::PolyPid, Kind::Zpc) => {
                let u = self.eval_at.unwrap_or(0);
                let p = from.0.p;
                let v = a.iter().rev().fold(0u64, |acc, &c| (acc * u + c) % p);
                smallvec::smallvec![v]
            }
            _ => unreachable!("reduction constructed only for supported pairs"),
        }
    }
}

pub(crate) fn group_digits(delta: &[u64], mut i: usize) -> Vec<u64> {
    let mut out = vec![0u64; delta.len()];
    for k in (0..delta.len()).rev() {
        out[k] = i as u64 % delta[k];
        i /= delta[k] as usize;
    }
    out
}

pub(crate) fn group_index(delta: &[u64], g: &[u64]) -> usize {
    let mut i = 0usize;
    for (k, &d) in delta.iter().enumerate() {
        i = i * d as usize + g[k] as usize;
    }
    i
}

pub fn mulmod(a: u64, b: u64, n: u64) -> u64 {
    ((a as u128 * b as u128) % n as u128) as u64
}

pub fn modinv(a: u64, n: u64) -> Option<u64> {
    let (mut t, mut newt) = (0i128, 1i128);
    let (mut r, mut newr) = (n as i128, (a % n) as i128);
    while newr != 0 {
        let q = r / newr;
        (t, newt) = (newt, t - q * newt);
        (r, newr) = (newr, r - q * newr);
    }
    if r != 1 {
        return if n == 1 { Some(0) } else { None };
    }
    Some(t.rem_euclid(n as i128) as u64)
}

pub fn field_from_json(v: &Value) -> Result<Arc<Gf>> {
    match serde_json::from_value::<RingSpec>(v.clone()) {
        Ok(RingSpec::GF { p, m, modulus }) => {
            if modulus.len() != m + 1 {
                return invalid("GF modulus length does not match m");
            }
            Gf::new(p, modulus)
        }
        Ok(RingSpec::Zpc { p, c: 1 }) => Gf::prime(p),
        _ => invalid("k must be a GF ring spec"),
    }
}

/// The ring spec of a finite field, for output.
pub fn field_to_json(k: &Gf) -> Value {
    serde_json::to_value(RingSpec::GF { p: k.p(), m: k.degree(), modulus: k.modulus().to_vec() })
        .expect("ring spec serializes")
}

/// A field element as an integer (prime field) or a coefficient list.
pub fn field_elt_to_json(k: &Gf, a: u32) -> Value {
    if k.degree() == 1 {
        Value::from(a)
    } else {
        Value::from(k.digits(a))
    }
}

pub fn field_elt_from_json(k: &Gf, v: &Value) -> Result<u32> {
    if let Some(x) = v.as_i64() {
        return Ok(k.from_int(x));
    }
    let digits: Vec<i64> = serde_json::from_value(v.clone()).map_err(|e| Error::InvalidInput(e.to_string()))?;
    if digits.len() > k.degree() {
        return invalid("field element has too many coefficients");
    }
    let p = k.p() as i64;
    Ok(k.from_digits(&digits.iter().map(|d| d.rem_euclid(p) as u64).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_specs_round_trip() {
        let cases = [
            r#"{"kind":"Zpc","p":3,"c":2}"#,
            r#"{"kind":"GroupAlg","p":3,"c":1,"delta":[3,9]}"#,
            r#"{"kind":"PolyPID","p":3}"#,
            r#"{"kind":"GF","p":3,"m":2,"modulus":[1,0,1]}"#,
        ];
        for s in cases {
            let spec: RingSpec = serde_json::from_str(s).unwrap();
            let ring = Ring::new(&spec).unwrap();
            assert_eq!(serde_json::to_string(ring.spec()).unwrap(), s);
        }
    }

    #[test]
    fn z9_has_nine_elements() {
        let r = Ring::zpc(3, 2).unwrap();
        assert_eq!(r.elements(100).unwrap().len(), 9);
    }

    #[test]
    fn mixed_characteristic_rejected() {
        let spec = RingSpec::GroupAlg { p: 3, c: 1, delta: vec![3, 4] };
        assert_eq!(Ring::new(&spec).unwrap_err(), Error::MixedCharacteristic { p: 3, factor: 4 });
    }

    #[test]
    fn group_algebra_inverse() {
        let r = Ring::new(&RingSpec::GroupAlg { p: 3, c: 2, delta: vec![3] }).unwrap();
        let all = r.elements(1 << 20).unwrap();
        for a in all {
            match r.inv(&a) {
                Some(b) => assert_eq!(r.mul(&a, &b), r.one()),
                None => assert!(!r.is_unit(&a)),
            }
        }
    }

    #[test]
    fn trunc_inverse_and_nilpotents() {
        let r = Ring::trunc(3, 2, 2, 3).unwrap();
        let s1 = r.canon(&[0, 1, 0]).unwrap();
        assert!(!r.is_zero(&r.mul(&s1, &s1)));
        assert!(r.is_zero(&r.pow(&s1, 3)));
        let u = r.add(&r.one(), &s1);
        let ui = r.inv(&u).unwrap();
        assert_eq!(r.mul(&u, &ui), r.one());
    }

    #[test]
    fn augmentation_quotient() {
        let r = Ring::new(&RingSpec::GroupAlg { p: 3, c: 1, delta: vec![3] }).unwrap();
        let red = r.quotient(&Ideal::Augmentation).unwrap();
        let g = r.canon(&[0, 1, 0]).unwrap();
        assert_eq!(red.apply(&g), red.to.one());
    }

    #[test]
    fn polypid_eval_quotient() {
        let r = Ring::new(&RingSpec::PolyPID { p: 3 }).unwrap();
        let red = r.quotient(&Ideal::SMinus { u: 1 }).unwrap();
        let s_minus_1 = r.canon(&[-1, 1]).unwrap();
        assert!(red.to.is_zero(&red.apply(&s_minus_1)));
    }
}
