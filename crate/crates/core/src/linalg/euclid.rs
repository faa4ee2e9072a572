//! Euclidean structures used by the normal-form algorithms: Z/p^c (norm =
//! p-adic valuation), finite fields, and F_p[S] (norm = degree).

use std::sync::Arc;

use crate::rings::{gf::Gf, modinv, mulmod, Elt, Ring, Shape};

pub trait Euclid {
    type E: Clone + PartialEq + std::fmt::Debug;
    fn zero(&self) -> Self::E;
    fn one(&self) -> Self::E;
    fn is_zero(&self, a: &Self::E) -> bool;
    fn add(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn sub(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn mul(&self, a: &Self::E, b: &Self::E) -> Self::E;
    fn neg(&self, a: &Self::E) -> Self::E {
        self.sub(&self.zero(), a)
    }
    /// Euclidean norm of a nonzero element; units have norm 0.
    fn norm(&self, a: &Self::E) -> u64;
    /// a = q b + r with r = 0 or norm(r) < norm(b); r canonical for
    /// normalized b.
    fn divrem(&self, a: &Self::E, b: &Self::E) -> (Self::E, Self::E);
    /// Unit u such that u a is the canonical associate of a.
    fn normal_unit(&self, a: &Self::E) -> Self::E;
    fn unit_inv(&self, u: &Self::E) -> Self::E;
    /// Generator of the annihilator of a, or None when it is zero.
    fn ann(&self, a: &Self::E) -> Option<Self::E>;
    fn from_elt(&self, a: &Elt) -> Self::E;
    fn to_elt(&self, a: &Self::E) -> Elt;

    fn is_unit(&self, a: &Self::E) -> bool {
        !self.is_zero(a) && self.norm(a) == 0
    }
    fn div_exact(&self, a: &Self::E, b: &Self::E) -> Option<Self::E> {
        if self.is_zero(b) {
            return if self.is_zero(a) { Some(self.zero()) } else { None };
        }
        let (q, r) = self.divrem(a, b);
        if self.is_zero(&r) {
            Some(q)
        } else {
            None
        }
    }
}

#[derive(Clone, Debug)]
pub struct ZpcOps {
    pub p: u64,
    pub c: u32,
    pub n: u64,
}

impl ZpcOps {
    pub fn new(p: u64, c: u32) -> Self {
        ZpcOps { p, c, n: p.pow(c) }
    }
    pub fn val(&self, a: u64) -> u32 {
        if a == 0 {
            return self.c;
        }
        let (mut v, mut x) = (0, a);
        while x % self.p == 0 {
            x /= self.p;
            v += 1;
        }
        v
    }
}

impl Euclid for ZpcOps {
    type E = u64;
    fn zero(&self) -> u64 {
        0
    }
    fn one(&self) -> u64 {
        1 % self.n
    }
    fn is_zero(&self, a: &u64) -> bool {
        *a == 0
    }
    fn add(&self, a: &u64, b: &u64) -> u64 {
        (a + b) % self.n
    }
    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.n - b) % self.n
    }
    fn mul(&self, a: &u64, b: &u64) -> u64 {
        mulmod(*a, *b, self.n)
    }
    fn norm(&self, a: &u64) -> u64 {
        self.val(*a) as u64
    }
    fn divrem(&self, a: &u64, b: &u64) -> (u64, u64) {
        let v = self.val(*b);
        let pv = self.p.pow(v);
        let unit = b / pv;
        let uinv = modinv(unit, self.n).expect("unit part");
        let q = mulmod(a / pv, uinv, self.n);
        (q, a % pv)
    }
    fn normal_unit(&self, a: &u64) -> u64 {
        if *a == 0 {
            return 1;
        }
        let pv = self.p.pow(self.val(*a));
        modinv(a / pv, self.n).expect("unit part")
    }
    fn unit_inv(&self, u: &u64) -> u64 {
        modinv(*u, self.n).expect("unit")
    }
    fn ann(&self, a: &u64) -> Option<u64> {
        let v = self.val(*a);
        if v == 0 {
            None
        } else {
            Some(self.p.pow(self.c - v) % self.n)
        }
    }
    fn from_elt(&self, a: &Elt) -> u64 {
        a[0]
    }
    fn to_elt(&self, a: &u64) -> Elt {
        smallvec::smallvec![*a]
    }
}

#[derive(Clone, Debug)]
pub struct GfOps {
    pub f: Arc<Gf>,
}

impl Euclid for GfOps {
    type E = u32;
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        self.f.add(*a, *b)
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        self.f.sub(*a, *b)
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        self.f.mul(*a, *b)
    }
    fn norm(&self, _a: &u32) -> u64 {
        0
    }
    fn divrem(&self, a: &u32, b: &u32) -> (u32, u32) {
        (self.f.div(*a, *b).expect("nonzero divisor"), 0)
    }
    fn normal_unit(&self, a: &u32) -> u32 {
        if *a == 0 {
            1
        } else {
            self.f.inv(*a).unwrap()
        }
    }
    fn unit_inv(&self, u: &u32) -> u32 {
        self.f.inv(*u).expect("unit")
    }
    fn ann(&self, a: &u32) -> Option<u32> {
        if *a == 0 {
            Some(1)
        } else {
            None
        }
    }
    fn from_elt(&self, a: &Elt) -> u32 {
        self.f.from_digits(a)
    }
    fn to_elt(&self, a: &u32) -> Elt {
        self.f.digits(*a).into_iter().collect()
    }
}

/// F_p[S] with coefficient vectors, constant term first, trimmed.
#[derive(Clone, Debug)]
pub struct PolyOps {
    pub p: u64,
}

impl PolyOps {
    fn trim(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }
}

impl Euclid for PolyOps {
    type E = Vec<u64>;
    fn zero(&self) -> Vec<u64> {
        Vec::new()
    }
    fn one(&self) -> Vec<u64> {
        vec![1]
    }
    fn is_zero(&self, a: &Vec<u64>) -> bool {
        a.is_empty()
    }
    fn add(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let n = a.len().max(b.len());
        PolyOps::trim((0..n).map(|i| (a.get(i).unwrap_or(&0) + b.get(i).unwrap_or(&0)) % self.p).collect())
    }
    fn sub(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        let n = a.len().max(b.len());
        PolyOps::trim(
            (0..n)
                .map(|i| (a.get(i).unwrap_or(&0) + self.p - b.get(i).unwrap_or(&0)) % self.p)
                .collect(),
        )
    }
    fn mul(&self, a: &Vec<u64>, b: &Vec<u64>) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % self.p;
            }
        }
        PolyOps::trim(out)
    }
    fn norm(&self, a: &Vec<u64>) -> u64 {
        (a.len() - 1) as u64
    }
    fn divrem(&self, a: &Vec<u64>, b: &Vec<u64>) -> (Vec<u64>, Vec<u64>) {
        let db = b.len() - 1;
        let lead_inv = modinv(b[db], self.p).expect("nonzero lead");
        let mut r = a.clone();
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0u64; r.len() - db];
        for k in (db..r.len()).rev() {
            let c = r[k] * lead_inv % self.p;
            if c == 0 {
                continue;
            }
            q[k - db] = c;
            for (i, &bi) in b.iter().enumerate() {
                r[k - db + i] = (r[k - db + i] + self.p - c * bi % self.p) % self.p;
            }
        }
        r.truncate(db);
        (PolyOps::trim(q), PolyOps::trim(r))
    }
    fn normal_unit(&self, a: &Vec<u64>) -> Vec<u64> {
        match a.last() {
            None => vec![1],
            Some(&l) => vec![modinv(l, self.p).unwrap()],
        }
    }
    fn unit_inv(&self, u: &Vec<u64>) -> Vec<u64> {
        vec![modinv(u[0], self.p).expect("unit")]
    }
    fn ann(&self, a: &Vec<u64>) -> Option<Vec<u64>> {
        if a.is_empty() {
            Some(vec![1])
        } else {
            None
        }
    }
    fn from_elt(&self, a: &Elt) -> Vec<u64> {
        a.to_vec()
    }
    fn to_elt(&self, a: &Vec<u64>) -> Elt {
        a.iter().copied().collect()
    }
}

/// A normal-form engine for a ring the algorithms can work over directly.
pub enum Engine {
    Zpc(ZpcOps),
    Gf(GfOps),
    Poly(PolyOps),
}

impl Engine {
    /// The engine for `ring`, or None when the ring must be expanded first.
    pub fn for_ring(ring: &Ring) -> Option<Engine> {
        match ring.shape() {
            Shape::Chain => Some(match ring.field() {
                Some(f) if f.degree() > 1 => Engine::Gf(GfOps { f: f.clone() }),
                _ => Engine::Zpc(ZpcOps::new(ring.p(), ring.c())),
            }),
            Shape::Pid => Some(Engine::Poly(PolyOps { p: ring.p() })),
            Shape::Expand => None,
        }
    }
}

/// Run a generic body against whichever engine `ring` uses.
#[macro_export]
macro_rules! with_engine {
    ($engine:expr, $ops:ident => $body:expr) => {
        match $engine {
            $crate::linalg::euclid::Engine::Zpc($ops) => $body,
            $crate::linalg::euclid::Engine::Gf($ops) => $body,
            $crate::linalg::euclid::Engine::Poly($ops) => $body,
        }
    };
}

pub fn to_grid<R: Euclid>(r: &R, m: &super::Mat) -> Vec<Vec<R::E>> {
    (0..m.rows).map(|i| (0..m.cols).map(|j| r.from_elt(m.at(i, j))).collect()).collect()
}

pub fn from_grid<R: Euclid>(r: &R, ring: &Ring, g: &[Vec<R::E>], cols: usize) -> super::Mat {
    super::Mat::from_fn(ring, g.len(), cols, |i, j| r.to_elt(&g[i][j]))
}
