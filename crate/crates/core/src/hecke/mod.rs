//! The Iwahori–Hecke algebra of GL_n in the Bernstein presentation, with
//! coefficients in a finite field k and a chosen value of q in k.
//!
//! Elements are kept in normal form Σ c θ_λ T_w, all θ's to the left.
//! Permutations are one-line vectors, 0-based internally and 1-based on the
//! wire. W acts on cocharacters by permuting coordinates: (wλ)_{w(j)} = λ_j.
//!
//! Commutation rule: T_s θ_λ = θ_{sλ} T_s + (q−1)(θ_λ − θ_{sλ})/(1 − θ_{−α∨}).
//! With the opposite sign on the fraction the rule is incompatible with
//! T_s² = q + (q−1)T_s once q ≠ 1 (T_s would have trace 1 − q on the span of
//! θ_{(1,0)}, θ_{(0,1)} in the polynomial representation).

pub mod module;

use std::collections::BTreeMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::rings::{Gf, RingSpec};
pub use crate::rings::{field_elt_from_json, field_from_json};

pub use module::{module_support, HeckeModule, SupportEntry, SupportReport};

pub type Cochar = Vec<i64>;
pub type Perm = Vec<u8>;

/// Largest n accepted; |W| = n! elements are enumerated in places.
pub const MAX_RANK: usize = 6;

pub fn identity_perm(n: usize) -> Perm {
    (0..n as u8).collect()
}

/// All of S_n in lexicographic order of one-line notation.
pub fn all_perms(n: usize) -> Vec<Perm> {
    let mut out = Vec::new();
    let mut cur = identity_perm(n);
    loop {
        out.push(cur.clone());
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
}

pub fn perm_inverse(w: &[u8]) -> Perm {
    let mut inv = vec![0u8; w.len()];
    for (i, &x) in w.iter().enumerate() {
        inv[x as usize] = i as u8;
    }
    inv
}

pub fn perm_compose(a: &[u8], b: &[u8]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

pub fn length(w: &[u8]) -> usize {
    let mut l = 0;
    for i in 0..w.len() {
        for j in i + 1..w.len() {
            if w[i] > w[j] {
                l += 1;
            }
        }
    }
    l
}

fn position(w: &[u8], value: usize) -> usize {
    w.iter().position(|&x| x as usize == value).unwrap()
}

/// s_i · w: swap the values i and i+1.
pub fn left_simple(i: usize, w: &[u8]) -> Perm {
    w.iter()
        .map(|&x| match x as usize {
            v if v == i => (i + 1) as u8,
            v if v == i + 1 => i as u8,
            _ => x,
        })
        .collect()
}

/// A reduced word i_1..i_k with w = s_{i_1} ⋯ s_{i_k}.
pub fn reduced_word(w: &[u8]) -> Vec<usize> {
    let mut word = Vec::new();
    let mut cur = w.to_vec();
    while let Some(i) = (0..cur.len().saturating_sub(1)).find(|&i| position(&cur, i) > position(&cur, i + 1)) {
        word.push(i);
        cur = left_simple(i, &cur);
    }
    word
}

pub fn act(w: &[u8], lambda: &[i64]) -> Cochar {
    let mut out = vec![0; lambda.len()];
    for (j, &x) in lambda.iter().enumerate() {
        out[w[j] as usize] = x;
    }
    out
}

pub fn unit_vector(n: usize, j: usize) -> Cochar {
    let mut v = vec![0; n];
    v[j] = 1;
    v
}

fn add_cochar(a: &[i64], b: &[i64]) -> Cochar {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// The coroot e_i - e_{i+1} of the simple root α_i.
pub fn simple_coroot(n: usize, i: usize) -> Cochar {
    let mut v = vec![0; n];
    v[i] = 1;
    v[i + 1] = -1;
    v
}

/// (θ_{s(λ)} − θ_λ)/(1 − θ_{−α∨}) for α = α_i, as a signed list of θ's.
pub fn bernstein_fraction(lambda: &[i64], i: usize) -> Vec<(Cochar, i64)> {
    let n = lambda.len();
    let m = lambda[i] - lambda[i + 1];
    let cor = simple_coroot(n, i);
    let shift = |k: i64| -> Cochar { lambda.iter().zip(&cor).map(|(l, c)| l + k * c).collect() };
    if m >= 1 {
        (0..m).map(|k| (shift(-k), -1)).collect()
    } else {
        (1..=-m).map(|k| (shift(k), 1)).collect()
    }
}

#[derive(Clone, Debug)]
pub struct HeckeElt {
    pub n: usize,
    pub k: Arc<Gf>,
    pub q: u32,
    pub terms: BTreeMap<(Cochar, Perm), u32>,
}

impl PartialEq for HeckeElt {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && *self.k == *other.k && self.q == other.q && self.terms == other.terms
    }
}
impl Eq for HeckeElt {}

impl HeckeElt {
    pub fn zero(n: usize, k: &Arc<Gf>, q: u32) -> HeckeElt {
        HeckeElt { n, k: k.clone(), q, terms: BTreeMap::new() }
    }

    pub fn basis(n: usize, k: &Arc<Gf>, q: u32, lambda: Cochar, w: Perm) -> HeckeElt {
        let mut e = HeckeElt::zero(n, k, q);
        e.add_term(lambda, w, 1);
        e
    }

    pub fn one(n: usize, k: &Arc<Gf>, q: u32) -> HeckeElt {
        HeckeElt::basis(n, k, q, vec![0; n], identity_perm(n))
    }

    pub fn theta(n: usize, k: &Arc<Gf>, q: u32, lambda: Cochar) -> HeckeElt {
        HeckeElt::basis(n, k, q, lambda, identity_perm(n))
    }

    pub fn t(n: usize, k: &Arc<Gf>, q: u32, w: Perm) -> HeckeElt {
        HeckeElt::basis(n, k, q, vec![0; n], w)
    }

    /// T_{s_i}, 0-based i.
    pub fn t_simple(n: usize, k: &Arc<Gf>, q: u32, i: usize) -> HeckeElt {
        HeckeElt::t(n, k, q, left_simple(i, &identity_perm(n)))
    }

    fn like(&self) -> HeckeElt {
        HeckeElt::zero(self.n, &self.k, self.q)
    }

    fn add_term(&mut self, lambda: Cochar, w: Perm, c: u32) {
        if c == 0 {
            return;
        }
        let key = (lambda, w);
        let v = self.k.add(*self.terms.get(&key).unwrap_or(&0), c);
        if v == 0 {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, v);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn compatible(&self, other: &HeckeElt) -> Result<()> {
        if self.n != other.n || *self.k != *other.k || self.q != other.q {
            return Err(Error::DimensionMismatch(format!(
                "Hecke algebras differ: n = {} vs {}, q = {} vs {}",
                self.n, other.n, self.q, other.q
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &HeckeElt) -> Result<HeckeElt> {
        self.compatible(other)?;
        let mut out = self.clone();
        for ((l, w), &c) in &other.terms {
            out.add_term(l.clone(), w.clone(), c);
        }
        Ok(out)
    }

    pub fn scale(&self, c: u32) -> HeckeElt {
        let mut out = self.like();
        for ((l, w), &x) in &self.terms {
            out.add_term(l.clone(), w.clone(), self.k.mul(c, x));
        }
        out
    }

    pub fn sub(&self, other: &HeckeElt) -> Result<HeckeElt> {
        self.add(&other.scale(self.k.neg(1)))
    }

    /// θ_μ · self.
    fn shift(&self, mu: &[i64]) -> HeckeElt {
        let mut out = self.like();
        for ((l, w), &c) in &self.terms {
            out.add_term(add_cochar(l, mu), w.clone(), c);
        }
        out
    }

    /// T_{s_i} · self.
    pub fn left_simple(&self, i: usize) -> HeckeElt {
        let k = &self.k;
        let qm1 = k.sub(self.q, 1);
        let mut out = self.like();
        for ((lambda, u), &c) in &self.terms {
            let mut sl = lambda.clone();
            sl.swap(i, i + 1);
            let su = left_simple(i, u);
            if position(u, i) < position(u, i + 1) {
                out.add_term(sl, su, c);
            } else {
                out.add_term(sl.clone(), su, k.mul(c, self.q));
                out.add_term(sl, u.clone(), k.mul(c, qm1));
            }
            // (q-1)(θ_λ − θ_{sλ})/(1 − θ_{−α∨}): the negated fraction
            for (nu, sign) in bernstein_fraction(lambda, i) {
                let coeff = k.mul(c, qm1);
                out.add_term(nu, u.clone(), if sign < 0 { coeff } else { k.neg(coeff) });
            }
        }
        out
    }

    /// T_w · self.
    pub fn left_t(&self, w: &[u8]) -> HeckeElt {
        let mut x = self.clone();
        for &i in reduced_word(w).iter().rev() {
            x = x.left_simple(i);
        }
        x
    }

    pub fn mul(&self, other: &HeckeElt) -> Result<HeckeElt> {
        hecke_mul(self, other)
    }

    /// Coefficient list of a field element, constant term first.
    fn coeff_json(k: &Gf, c: u32) -> Value {
        json!(k.digits(c))
    }

    pub fn to_json(&self) -> Value {
        let spec = RingSpec::GF { p: self.k.p(), m: self.k.degree(), modulus: self.k.modulus().to_vec() };
        let terms: Vec<Value> = self
            .terms
            .iter()
            .map(|((l, w), &c)| {
                json!({
                    "lambda": l,
                    "w": w.iter().map(|&x| x as u64 + 1).collect::<Vec<_>>(),
                    "coeff": HeckeElt::coeff_json(&self.k, c),
                })
            })
            .collect();
        json!({"n": self.n, "k": spec, "q": HeckeElt::coeff_json(&self.k, self.q), "terms": terms})
    }

    pub fn from_json(v: &Value) -> Result<HeckeElt> {
        let n = v["n"].as_u64().ok_or_else(|| Error::InvalidInput("HeckeElt needs n".into()))? as usize;
        if n == 0 || n > MAX_RANK {
            return invalid(format!("n = {n} out of range 1..={MAX_RANK}"));
        }
        let k = field_from_json(&v["k"])?;
        let q = field_elt_from_json(&k, &v["q"])?;
        let mut out = HeckeElt::zero(n, &k, q);
        for t in v["terms"].as_array().ok_or_else(|| Error::InvalidInput("HeckeElt needs terms".into()))? {
            let lambda: Cochar = serde_json::from_value(t["lambda"].clone()).map_err(|e| Error::InvalidInput(e.to_string()))?;
            let w1: Vec<u64> = serde_json::from_value(t["w"].clone()).map_err(|e| Error::InvalidInput(e.to_string()))?;
            if lambda.len() != n || w1.len() != n {
                return invalid("term of the wrong length");
            }
            let w: Perm = w1.iter().map(|&x| x.wrapping_sub(1) as u8).collect();
            let mut seen = w.clone();
            seen.sort_unstable();
            if seen != identity_perm(n) {
                return invalid(format!("{w1:?} is not a permutation"));
            }
            out.add_term(lambda, w, field_elt_from_json(&k, &t["coeff"])?);
        }
        Ok(out)
    }
}

/// Product in Bernstein normal form.
pub fn hecke_mul(a: &HeckeElt, b: &HeckeElt) -> Result<HeckeElt> {
    a.compatible(b)?;
    let mut out = a.like();
    for ((lambda, w), &c) in &a.terms {
        let moved = b.left_t(w).shift(lambda).scale(c);
        out = out.add(&moved)?;
    }
    Ok(out)
}

/// θ_{±e_j} and T_{s_i}: a generating set of the algebra as a ring.
pub fn generators(n: usize, k: &Arc<Gf>, q: u32) -> Vec<(String, HeckeElt)> {
    let mut out = Vec::new();
    for j in 0..n {
        out.push((format!("theta_e{}", j + 1), HeckeElt::theta(n, k, q, unit_vector(n, j))));
        let neg: Cochar = unit_vector(n, j).iter().map(|x| -x).collect();
        out.push((format!("theta_-e{}", j + 1), HeckeElt::theta(n, k, q, neg)));
    }
    for i in 0..n.saturating_sub(1) {
        out.push((format!("T{}", i + 1), HeckeElt::t_simple(n, k, q, i)));
    }
    out
}

/// Names of generators that fail to commute with x.
pub fn non_commuting(x: &HeckeElt) -> Result<Vec<String>> {
    let mut out = Vec::new();
    for (name, g) in generators(x.n, &x.k, x.q) {
        if hecke_mul(x, &g)? != hecke_mul(&g, x)? {
            out.push(name);
        }
    }
    Ok(out)
}

/// e_i(t_1, …, t_n) with t_j = θ_{e_j}, for 1 ≤ i ≤ n.
pub fn center_element(i: usize, n: usize, k: &Arc<Gf>, q: u32) -> Result<HeckeElt> {
    if i == 0 || i > n {
        return invalid(format!("center_element needs 1 <= i <= n, got i = {i}, n = {n}"));
    }
    let mut out = HeckeElt::zero(n, k, q);
    for mask in 0u32..(1 << n) {
        if mask.count_ones() as usize == i {
            let lambda: Cochar = (0..n).map(|j| ((mask >> j) & 1) as i64).collect();
            out.add_term(lambda, identity_perm(n), 1);
        }
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct GroupAlgebraVerdict {
    pub n: usize,
    pub q: u32,
    pub pass: bool,
    pub violated: Vec<String>,
    /// generator of k[X_*(T) ⋊ W] and its image
    pub generator_map: Vec<(String, String)>,
    /// basis products checked on the window |λ|_1 ≤ 1
    pub products_checked: usize,
}

impl GroupAlgebraVerdict {
    pub fn to_json(&self) -> Value {
        json!({
            "n": self.n,
            "q": self.q,
            "pass": self.pass,
            "violated": self.violated,
            "generator_map": self.generator_map.iter().map(|(a, b)| json!([a, b])).collect::<Vec<_>>(),
            "products_checked": self.products_checked,
        })
    }
}

/// Checks that e_λ w ↦ θ_λ T_w respects the relations of k[X_*(T) ⋊ W].
pub fn mod_p_group_algebra_check(n: usize, k: &Arc<Gf>, q: u32) -> Result<GroupAlgebraVerdict> {
    if n == 0 || n > MAX_RANK {
        return invalid(format!("n = {n} out of range 1..={MAX_RANK}"));
    }
    let mut violated = Vec::new();
    if k.p() <= n as u64 {
        violated.push(format!("p > n (p = {}, n = {n})", k.p()));
    }
    let one = HeckeElt::one(n, k, q);
    let ts: Vec<HeckeElt> = (0..n - 1).map(|i| HeckeElt::t_simple(n, k, q, i)).collect();
    let th = |l: Cochar| HeckeElt::theta(n, k, q, l);
    let mul = |a: &HeckeElt, b: &HeckeElt| hecke_mul(a, b).expect("same algebra");
    for i in 0..n.saturating_sub(1) {
        if mul(&ts[i], &ts[i]) != one {
            violated.push(format!("s{0}^2 = 1 (T{0}^2 = q + (q-1)T{0})", i + 1));
        }
        if i + 2 < n {
            let lhs = mul(&mul(&ts[i], &ts[i + 1]), &ts[i]);
            let rhs = mul(&mul(&ts[i + 1], &ts[i]), &ts[i + 1]);
            if lhs != rhs {
                violated.push(format!("braid s{0}s{1}s{0} = s{1}s{0}s{1}", i + 1, i + 2));
            }
        }
        for j in i + 2..n - 1 {
            if mul(&ts[i], &ts[j]) != mul(&ts[j], &ts[i]) {
                violated.push(format!("s{}s{} = s{}s{}", i + 1, j + 1, j + 1, i + 1));
            }
        }
        for j in 0..n {
            let e = unit_vector(n, j);
            let lhs = mul(&mul(&ts[i], &th(e.clone())), &ts[i]);
            let mut se = e.clone();
            se.swap(i, i + 1);
            if lhs != th(se) {
                violated.push(format!("s{} e_(e{}) s{} = e_(s{} e{})", i + 1, j + 1, i + 1, i + 1, j + 1));
            }
        }
    }
    for j in 0..n {
        let e = unit_vector(n, j);
        let neg: Cochar = e.iter().map(|x| -x).collect();
        if mul(&th(e.clone()), &th(neg)) != one {
            violated.push(format!("e_(e{0}) e_(-e{0}) = 1", j + 1));
        }
        for l in j + 1..n {
            let f = unit_vector(n, l);
            if mul(&th(e.clone()), &th(f.clone())) != mul(&th(f), &th(e.clone())) {
                violated.push(format!("e_(e{}) e_(e{}) = e_(e{}) e_(e{})", j + 1, l + 1, l + 1, j + 1));
            }
        }
    }
    // direct check of the group law on a window of basis elements
    let mut window: Vec<Cochar> = vec![vec![0; n]];
    for j in 0..n {
        window.push(unit_vector(n, j));
        window.push(unit_vector(n, j).iter().map(|x| -x).collect());
    }
    let perms = all_perms(n);
    let mut checked = 0;
    let mut law_ok = true;
    'outer: for l in &window {
        for w in &perms {
            let a = HeckeElt::basis(n, k, q, l.clone(), w.clone());
            for m in &window {
                for v in &perms {
                    let b = HeckeElt::basis(n, k, q, m.clone(), v.clone());
                    let expect = HeckeElt::basis(n, k, q, add_cochar(l, &act(w, m)), perm_compose(w, v));
                    checked += 1;
                    if mul(&a, &b) != expect {
                        law_ok = false;
                        break 'outer;
                    }
                }
            }
        }
    }
    if !law_ok {
        violated.push("e_λ w · e_μ v = e_(λ + wμ) wv on basis elements".into());
    }
    let mut generator_map = Vec::new();
    for j in 0..n {
        generator_map.push((format!("e_(e{})", j + 1), format!("theta_e{}", j + 1)));
    }
    for i in 0..n.saturating_sub(1) {
        generator_map.push((format!("s{}", i + 1), format!("T{}", i + 1)));
    }
    Ok(GroupAlgebraVerdict { n, q, pass: violated.is_empty(), violated, generator_map, products_checked: checked })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(p: u64) -> Arc<Gf> {
        Gf::prime(p).unwrap()
    }

    #[test]
    fn perm_helpers() {
        assert_eq!(all_perms(3).len(), 6);
        for w in all_perms(4) {
            let word = reduced_word(&w);
            assert_eq!(word.len(), length(&w));
            let mut x = identity_perm(4);
            for &i in word.iter().rev() {
                x = left_simple(i, &x);
            }
            assert_eq!(x, w);
            assert_eq!(perm_compose(&w, &perm_inverse(&w)), identity_perm(4));
        }
    }

    #[test]
    fn quadratic_relation() {
        let k = f(5);
        let q = 3;
        let t = HeckeElt::t_simple(2, &k, q, 0);
        let expect = HeckeElt::one(2, &k, q).scale(q).add(&t.scale(k.sub(q, 1))).unwrap();
        assert_eq!(hecke_mul(&t, &t).unwrap(), expect);
    }

    #[test]
    fn ts_theta_rank_two() {
        let k = f(7);
        let q = 4;
        let t = HeckeElt::t_simple(2, &k, q, 0);
        let lhs = hecke_mul(&t, &HeckeElt::theta(2, &k, q, vec![1, 0])).unwrap();
        let s = left_simple(0, &identity_perm(2));
        let rhs = HeckeElt::basis(2, &k, q, vec![0, 1], s)
            .add(&HeckeElt::theta(2, &k, q, vec![1, 0]).scale(k.sub(q, 1)))
            .unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn json_round_trip() {
        let k = Gf::new(3, vec![1, 0, 1]).unwrap();
        let x = HeckeElt::basis(3, &k, 1, vec![1, -2, 0], vec![2, 0, 1]).scale(5);
        let back = HeckeElt::from_json(&x.to_json()).unwrap();
        assert_eq!(back, x);
        assert_eq!(x.to_json()["terms"][0]["w"], json!([3, 1, 2]));
    }

    #[test]
    fn mismatched_algebras() {
        let k = f(3);
        let a = HeckeElt::one(2, &k, 1);
        let b = HeckeElt::one(3, &k, 1);
        assert!(matches!(hecke_mul(&a, &b), Err(Error::DimensionMismatch(_))));
    }
}
