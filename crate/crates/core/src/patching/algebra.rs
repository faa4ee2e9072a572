//! Finite local Λ-algebras as quotients P/J of P = Z/p^c[X_1..X_g]/(X)^K.
//!
//! Every algebra in a patching problem is presented as a quotient of one
//! ambient P, so a surjection out of R_∞ = P/J_∞ is the identity on X and is
//! recorded by its kernel alone.

use serde_json::{json, Value};

use crate::complexes::{ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::linalg::howell::Submodule;
use crate::rings::{Elt, Ring};

/// Exponent vectors of P's monomial basis, in coefficient order.
pub fn exponents(ambient: &Ring, vars: usize) -> Vec<Vec<u32>> {
    match ambient.monomials() {
        Some(m) => m.to_vec(),
        None => vec![vec![0; vars]],
    }
}

/// The variable X_j as an element of P (zero when P has no room for it).
pub fn variable(ambient: &Ring, vars: usize, j: usize) -> Elt {
    let mut x = ambient.zero();
    let mut e = vec![0u32; vars];
    e[j] = 1;
    if let Some(k) = exponents(ambient, vars).iter().position(|m| *m == e) {
        x[k] = 1;
    }
    x
}

/// Generators of m^b for m = (p, X_1..X_g): p^a X^β with a + |β| >= b.
pub fn max_ideal_power(ambient: &Ring, vars: usize, b: u64) -> Vec<Elt> {
    let c = ambient.c() as u64;
    exponents(ambient, vars)
        .iter()
        .enumerate()
        .filter_map(|(k, m)| {
            let deg: u64 = m.iter().map(|&e| e as u64).sum();
            let a = b.saturating_sub(deg);
            (a < c).then(|| {
                let mut x = ambient.zero();
                x[k] = ambient.p().pow(a as u32) % ambient.base_modulus();
                x
            })
        })
        .collect()
}

/// f(y_1..y_g) computed in P.
pub fn substitute(ambient: &Ring, vars: usize, f: &Elt, ys: &[Elt]) -> Elt {
    let mut acc = ambient.zero();
    for (k, m) in exponents(ambient, vars).iter().enumerate() {
        if f[k] == 0 {
            continue;
        }
        let mut term = ambient.from_int(f[k] as i64);
        for (j, &e) in m.iter().enumerate() {
            if e > 0 {
                term = ambient.mul(&term, &ambient.pow(&ys[j], e as u64));
            }
        }
        acc = ambient.add(&acc, &term);
    }
    acc
}

/// f evaluated on commuting endomorphisms of `c` (coefficients reduced into c's ring).
pub fn eval_endos(ambient: &Ring, vars: usize, f: &Elt, endos: &[ChainMap], c: &FreeComplex) -> ChainMap {
    let mut acc = ChainMap::zero(c, c);
    for (k, m) in exponents(ambient, vars).iter().enumerate() {
        if f[k] == 0 {
            continue;
        }
        let mut term = ChainMap::identity(c).scale(&c.ring.from_int(f[k] as i64));
        for (j, &e) in m.iter().enumerate() {
            if e > 0 {
                term = term.compose(&endos[j].pow(e));
            }
        }
        acc = acc.add(&term);
    }
    acc
}

/// P/J with J in canonical form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FinAlg {
    pub ambient: Ring,
    pub vars: usize,
    pub ideal: Submodule,
}

impl FinAlg {
    pub fn new(ambient: &Ring, vars: usize, gens: &[Elt]) -> FinAlg {
        let rows: Vec<Vec<Elt>> = gens.iter().map(|g| vec![g.clone()]).collect();
        FinAlg { ambient: ambient.clone(), vars, ideal: Submodule::span(ambient, 1, &rows) }
    }

    pub fn gens(&self) -> Vec<Elt> {
        self.ideal.generators().into_iter().map(|mut v| v.remove(0)).collect()
    }

    pub fn reduce(&self, x: &Elt) -> Elt {
        self.ideal.reduce(std::slice::from_ref(x)).remove(0)
    }

    pub fn contains(&self, x: &Elt) -> bool {
        self.ambient.is_zero(&self.reduce(x))
    }

    /// P/(J + more).
    pub fn with(&self, more: &[Elt]) -> FinAlg {
        let mut gens = self.gens();
        gens.extend(more.iter().cloned());
        FinAlg::new(&self.ambient, self.vars, &gens)
    }

    /// True when self is a quotient of `other` (J_other ⊆ J_self).
    pub fn is_quotient_of(&self, other: &FinAlg) -> bool {
        other.gens().iter().all(|g| self.contains(g))
    }

    pub fn size(&self) -> u128 {
        self.ambient.size().unwrap() / self.ideal.size().unwrap()
    }

    pub fn is_zero_ring(&self) -> bool {
        self.contains(&self.ambient.one())
    }

    pub fn max_power(&self, b: u64) -> Vec<Elt> {
        max_ideal_power(&self.ambient, self.vars, b)
    }

    /// m^b = 0 in P/J.
    pub fn kills_max_power(&self, b: u64) -> bool {
        self.max_power(b).iter().all(|g| self.contains(g))
    }

    /// dim_k m/m^2 (absolute tangent space, p included).
    pub fn tangent_dim(&self) -> usize {
        if self.is_zero_ring() {
            return 0;
        }
        let m = self.with(&self.max_power(1));
        let m2 = self.with(&self.max_power(2));
        let ratio = m2.size() / m.size();
        ratio.ilog(self.ambient.p() as u128) as usize
    }

    pub fn variables(&self) -> Vec<Elt> {
        (0..self.vars).map(|j| variable(&self.ambient, self.vars, j)).collect()
    }

    pub fn elt_to_json(&self, x: &Elt) -> Value {
        elt_to_terms(&self.ambient, self.vars, x)
    }

    pub fn to_json(&self) -> Value {
        json!(self.gens().iter().map(|g| self.elt_to_json(g)).collect::<Vec<_>>())
    }
}

/// [[coeff, [e_1..e_g]], ...] with zero terms dropped.
pub fn elt_to_terms(ambient: &Ring, vars: usize, x: &Elt) -> Value {
    let terms: Vec<Value> = exponents(ambient, vars)
        .iter()
        .enumerate()
        .filter(|(k, _)| x[*k] != 0)
        .map(|(k, m)| json!([x[k], m]))
        .collect();
    Value::Array(terms)
}

pub fn terms_to_elt(ambient: &Ring, vars: usize, v: &Value) -> Result<Elt> {
    let bad = |why: &str| Error::InvalidInput(format!("algebra element {v}: {why}"));
    let items = v.as_array().ok_or_else(|| bad("expected a list of [coeff, exponents] terms"))?;
    let exps = exponents(ambient, vars);
    let mut x = ambient.zero();
    for t in items {
        let pair = t.as_array().filter(|a| a.len() == 2).ok_or_else(|| bad("term must be [coeff, exponents]"))?;
        let coeff = pair[0].as_i64().ok_or_else(|| bad("coefficient must be an integer"))?;
        let e: Vec<u32> = pair[1]
            .as_array()
            .ok_or_else(|| bad("exponents must be a list"))?
            .iter()
            .map(|e| e.as_u64().map(|e| e as u32))
            .collect::<Option<_>>()
            .ok_or_else(|| bad("exponents must be non-negative integers"))?;
        if e.len() != vars {
            return Err(bad("wrong number of exponents"));
        }
        let Some(k) = exps.iter().position(|m| *m == e) else {
            // monomial beyond the truncation is zero
            continue;
        };
        let mut term = ambient.zero();
        term[k] = 1;
        x = ambient.add(&x, &ambient.scalar_mul(coeff, &term));
    }
    Ok(x)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn truncated_line_over_f3() {
        let p = Ring::trunc(3, 1, 1, 4).unwrap();
        let x = variable(&p, 1, 0);
        let r = FinAlg::new(&p, 1, &[p.pow(&x, 2)]);
        assert_eq!(r.size(), 9);
        assert_eq!(r.tangent_dim(), 1);
        assert!(r.kills_max_power(2));
        assert!(!r.kills_max_power(1));
        let k = r.with(&r.max_power(1));
        assert_eq!(k.size(), 3);
        assert_eq!(k.tangent_dim(), 0);
    }

    #[test]
    fn p_counts_in_the_tangent_space() {
        let p = Ring::trunc(3, 2, 1, 3).unwrap();
        let r = FinAlg::new(&p, 1, &[]);
        assert_eq!(r.tangent_dim(), 2);
        let lam = Ring::zpc(3, 2).unwrap();
        assert_eq!(FinAlg::new(&lam, 0, &[]).tangent_dim(), 1);
        assert_eq!(FinAlg::new(&Ring::zpc(3, 1).unwrap(), 0, &[]).tangent_dim(), 0);
    }

    #[test]
    fn substitution_and_terms_round_trip() {
        let p = Ring::trunc(5, 1, 2, 4).unwrap();
        let f = terms_to_elt(&p, 2, &json!([[2, [1, 0]], [1, [0, 2]]])).unwrap();
        assert_eq!(terms_to_elt(&p, 2, &elt_to_terms(&p, 2, &f)).unwrap(), f);
        let y = variable(&p, 2, 1);
        let g = substitute(&p, 2, &f, &[y.clone(), p.zero()]);
        assert_eq!(g, p.scalar_mul(2, &y));
    }

    #[test]
    fn ideal_equality_is_canonical() {
        let p = Ring::trunc(3, 1, 1, 5).unwrap();
        let x = variable(&p, 1, 0);
        let a = FinAlg::new(&p, 1, &[p.pow(&x, 2)]);
        let b = FinAlg::new(&p, 1, &[p.add(&p.pow(&x, 2), &p.pow(&x, 3)), p.pow(&x, 4)]);
        assert_eq!(a, b);
    }
}
