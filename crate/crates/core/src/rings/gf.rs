//! Finite fields GF(p^m) with elements stored as base-p digit indices.
//!
//! An element index `a` encodes the polynomial `sum a_i X^i` where `a_i` are
//! the base-p digits of `a`. Multiplication goes through log/exp tables.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::rings::gfpoly;

pub const MAX_FIELD_SIZE: u64 = 1 << 20;

#[derive(Debug)]
pub struct Gf {
    p: u64,
    m: usize,
    modulus: Vec<u64>,
    q: u32,
    exp: Vec<u32>,
    log: Vec<u32>,
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

impl PartialEq for Gf {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.modulus == other.modulus
    }
}
impl Eq for Gf {}

impl Gf {
    pub fn prime(p: u64) -> Result<Arc<Gf>> {
        Gf::new(p, vec![0, 1])
    }

    /// `modulus` is monic, constant term first.
    pub fn new(p: u64, modulus: Vec<u64>) -> Result<Arc<Gf>> {
        if !is_prime(p) {
            return Err(Error::NonPrimeModulus(p));
        }
        let mut modulus: Vec<u64> = modulus.into_iter().map(|c| c % p).collect();
        while modulus.len() > 1 && *modulus.last().unwrap() == 0 {
            modulus.pop();
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidInput(format!(
                "field modulus {modulus:?} must be monic of positive degree"
            )));
        }
        let m = modulus.len() - 1;
        let q = (p as u128).pow(m as u32);
        if q > MAX_FIELD_SIZE as u128 {
            return Err(Error::InvalidInput(format!("field of size {q} is too large")));
        }
        if m > 1 && !irreducible_over_prime_field(p, &modulus) {
            return Err(Error::ReducibleGFModulus(modulus, p));
        }
        let q = q as u32;
        let mut field = Gf { p, m, modulus, q, exp: Vec::new(), log: Vec::new() };
        field.build_tables();
        Ok(Arc::new(field))
    }

    fn build_tables(&mut self) {
        let order = (self.q - 1) as usize;
        if order == 0 {
            return;
        }
        for g in 1..self.q {
            let mut exp = Vec::with_capacity(order);
            let mut x = 1u32;
            loop {
                exp.push(x);
                x = self.slow_mul(x, g);
                if x == 1 || exp.len() > order {
                    break;
                }
            }
            if exp.len() == order {
                let mut log = vec![0u32; self.q as usize];
                for (i, &e) in exp.iter().enumerate() {
                    log[e as usize] = i as u32;
                }
                self.exp = exp;
                self.log = log;
                return;
            }
        }
        unreachable!("multiplicative group of a finite field is cyclic");
    }

    fn slow_mul(&self, a: u32, b: u32) -> u32 {
        let a = self.digits(a);
        let b = self.digits(b);
        let mut prod = vec![0u64; 2 * self.m];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                prod[i + j] = (prod[i + j] + x * y) % self.p;
            }
        }
        for k in (self.m..prod.len()).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for (i, &mc) in self.modulus.iter().enumerate() {
                let idx = k - self.m + i;
                prod[idx] = (prod[idx] + (self.p - c) * mc) % self.p;
            }
        }
        self.from_digits(&prod[..self.m])
    }

    pub fn p(&self) -> u64 {
        self.p
    }
    pub fn degree(&self) -> usize {
        self.m
    }
    pub fn size(&self) -> u32 {
        self.q
    }
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn digits(&self, a: u32) -> Vec<u64> {
        let mut a = a as u64;
        let mut out = vec![0u64; self.m];
        for d in out.iter_mut() {
            *d = a % self.p;
            a /= self.p;
        }
        out
    }

    pub fn from_digits(&self, digits: &[u64]) -> u32 {
        let mut a = 0u64;
        for &d in digits.iter().take(self.m).rev() {
            a = a * self.p + d % self.p;
        }
        a as u32
    }

    pub fn from_int(&self, n: i64) -> u32 {
        n.rem_euclid(self.p as i64) as u32
    }

    pub fn add(&self, a: u32, b: u32) -> u32 {
        if self.m == 1 {
            let s = a as u64 + b as u64;
            return (if s >= self.p { s - self.p } else { s }) as u32;
        }
        let (mut a, mut b) = (a as u64, b as u64);
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 || b > 0 {
            out += ((a % self.p + b % self.p) % self.p) * place;
            a /= self.p;
            b /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn neg(&self, a: u32) -> u32 {
        if self.m == 1 {
            return if a == 0 { 0 } else { (self.p - a as u64) as u32 };
        }
        let mut a = a as u64;
        let (mut out, mut place) = (0u64, 1u64);
        while a > 0 {
            out += ((self.p - a % self.p) % self.p) * place;
            a /= self.p;
            place *= self.p;
        }
        out as u32
    }

    pub fn sub(&self, a: u32, b: u32) -> u32 {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: u32, b: u32) -> u32 {
        if a == 0 || b == 0 {
            return 0;
        }
        let order = self.q - 1;
        let s = self.log[a as usize] + self.log[b as usize];
        self.exp[(if s >= order { s - order } else { s }) as usize]
    }

    pub fn inv(&self, a: u32) -> Option<u32> {
        if a == 0 {
            return None;
        }
        let order = self.q - 1;
        Some(self.exp[((order - self.log[a as usize]) % order) as usize])
    }

    pub fn div(&self, a: u32, b: u32) -> Option<u32> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    pub fn pow(&self, a: u32, e: u64) -> u32 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        let order = (self.q - 1) as u64;
        let l = (self.log[a as usize] as u64 * (e % order)) % order;
        self.exp[l as usize]
    }

    /// Multiplicative order of a nonzero element.
    pub fn order(&self, a: u32) -> u64 {
        let n = (self.q - 1) as u64;
        let l = self.log[a as usize] as u64;
        n / gcd(n, l)
    }

    pub fn elements(&self) -> impl Iterator<Item = u32> {
        0..self.q
    }
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Ben-Or test: `f` of degree m is irreducible iff gcd(f, X^{p^j} - X) = 1 for
/// all 1 <= j <= m/2.
fn irreducible_over_prime_field(p: u64, f: &[u64]) -> bool {
    let fp = Gf::prime(p).expect("prime checked by caller");
    let f: Vec<u32> = f.iter().map(|&c| c as u32).collect();
    let m = f.len() - 1;
    let x = vec![0u32, 1];
    let mut xp = x.clone();
    for _ in 1..=m / 2 {
        xp = gfpoly::powmod(&fp, &xp, p, &f);
        let diff = gfpoly::sub(&fp, &xp, &x);
        let g = gfpoly::gcd(&fp, &f, &diff);
        if g.len() > 1 {
            return false;
        }
    }
    true
}

/// Roots of `f` (constant term first) in GF(p^j), by exhaustive search.
pub fn roots_in_extension(p: u64, f: &[u64], j: usize) -> Vec<u32> {
    let mut modulus = None;
    for cand in 0..(p as u64).pow(j as u32) {
        let mut m: Vec<u64> = Vec::with_capacity(j + 1);
        let mut c = cand;
        for _ in 0..j {
            m.push(c % p);
            c /= p;
        }
        m.push(1);
        if j == 1 || irreducible_over_prime_field(p, &m) {
            modulus = Some(m);
            break;
        }
    }
    let field = Gf::new(p, modulus.expect("irreducible polynomials exist in every degree"))
        .expect("valid extension");
    field
        .elements()
        .filter(|&a| {
            let mut acc = 0u32;
            for &c in f.iter().rev() {
                acc = field.add(field.mul(acc, a), field.from_int(c as i64));
            }
            acc == 0
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn x_squared_plus_one_over_f3() {
        let f = Gf::new(3, vec![1, 0, 1]).unwrap();
        let x = f.from_digits(&[0, 1]);
        assert_eq!(f.mul(x, x), f.from_int(2));
    }

    #[test]
    fn reducible_modulus_rejected() {
        assert!(matches!(Gf::new(3, vec![2, 0, 1]), Err(Error::ReducibleGFModulus(..))));
    }

    #[test]
    fn quintic_split_two_three_is_rejected() {
        // (X^2+1)(X^3+2X+1) over F_3 has no roots in F_3 and is reducible.
        let quad = [1u64, 0, 1];
        let cubic = [1u64, 2, 0, 1];
        let mut prod = vec![0u64; 6];
        for (i, a) in quad.iter().enumerate() {
            for (j, b) in cubic.iter().enumerate() {
                prod[i + j] = (prod[i + j] + a * b) % 3;
            }
        }
        assert!(roots_in_extension(3, &prod, 1).is_empty());
        assert!(matches!(Gf::new(3, prod), Err(Error::ReducibleGFModulus(..))));
    }

    #[test]
    fn non_prime_rejected() {
        assert_eq!(Gf::prime(9).unwrap_err(), Error::NonPrimeModulus(9));
    }
}
