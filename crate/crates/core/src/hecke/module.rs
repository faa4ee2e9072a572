//! Finite-dimensional Hecke modules at q = 1 and their support over k[X_*(T)].
//!
//! A module is given by matrices for t_j = θ_{e_j} and for T_{s_i}. At q = 1
//! the T_w generate a copy of k[W] and [K] = Σ_w T_w.

use std::sync::Arc;

use serde_json::{json, Value};

use super::{all_perms, bernstein_fraction, center_element, field_elt_from_json, field_from_json, perm_inverse, reduced_word, HeckeElt, Perm, MAX_RANK};
use crate::error::{invalid, Error, Result};
pub use crate::linalg::FMat;
use crate::rings::{Gf, RingSpec};

#[derive(Clone, Debug)]
pub struct HeckeModule {
    pub n: usize,
    pub k: Arc<Gf>,
    pub q: u32,
    pub dim: usize,
    /// t_1..t_n
    pub theta: Vec<FMat>,
    /// T_{s_1}..T_{s_{n-1}}
    pub t: Vec<FMat>,
}

fn fail<T>(clause: impl Into<String>) -> Result<T> {
    Err(Error::HypothesisFailure { level: 0, square: clause.into() })
}

impl HeckeModule {
    pub fn new(n: usize, k: &Arc<Gf>, q: u32, theta: Vec<FMat>, t: Vec<FMat>) -> Result<HeckeModule> {
        if n == 0 || n > MAX_RANK {
            return invalid(format!("n = {n} out of range 1..={MAX_RANK}"));
        }
        if theta.len() != n || t.len() != n - 1 {
            return Err(Error::DimensionMismatch(format!("need {n} theta and {} T matrices", n - 1)));
        }
        let dim = theta[0].rows;
        if theta.iter().chain(&t).any(|m| m.rows != dim || m.cols != dim) {
            return Err(Error::DimensionMismatch("action matrices must all be square of one size".into()));
        }
        Ok(HeckeModule { n, k: k.clone(), q, dim, theta, t })
    }

    pub fn zero(n: usize, k: &Arc<Gf>) -> HeckeModule {
        HeckeModule { n, k: k.clone(), q: 1, dim: 0, theta: vec![FMat::zeros(0, 0); n], t: vec![FMat::zeros(0, 0); n - 1] }
    }

    /// k[W] with t_j acting on the basis vector u by γ_{u^{-1}(j)} and W by
    /// left translation.
    pub fn regular(n: usize, k: &Arc<Gf>, gamma: &[u32]) -> Result<HeckeModule> {
        if gamma.len() != n {
            return Err(Error::DimensionMismatch("gamma needs n entries".into()));
        }
        let perms = all_perms(n);
        let idx = |w: &Perm| perms.iter().position(|u| u == w).unwrap();
        let dim = perms.len();
        let theta = (0..n)
            .map(|j| {
                let mut m = FMat::zeros(dim, dim);
                for (c, u) in perms.iter().enumerate() {
                    m.a[c][c] = gamma[perm_inverse(u)[j] as usize];
                }
                m
            })
            .collect();
        let t = (0..n - 1)
            .map(|i| {
                let mut m = FMat::zeros(dim, dim);
                for (c, u) in perms.iter().enumerate() {
                    m.a[idx(&super::left_simple(i, u))][c] = 1;
                }
                m
            })
            .collect();
        HeckeModule::new(n, k, 1, theta, t)
    }

    fn k(&self) -> &Gf {
        &self.k
    }

    /// θ_λ = Π t_j^{λ_j}, or None if some t_j with λ_j < 0 is singular.
    pub fn theta_op(&self, lambda: &[i64]) -> Option<FMat> {
        let k = self.k();
        let mut out = FMat::identity(self.dim);
        for (j, &e) in lambda.iter().enumerate() {
            let base = if e < 0 { self.theta[j].inverse(k)? } else { self.theta[j].clone() };
            out = out.mul(k, &base.pow(k, e.unsigned_abs() as usize));
        }
        Some(out)
    }

    pub fn t_op(&self, w: &[u8]) -> FMat {
        let k = self.k();
        reduced_word(w).iter().fold(FMat::identity(self.dim), |acc, &i| acc.mul(k, &self.t[i]))
    }

    /// The operator of a Hecke algebra element.
    pub fn act(&self, x: &HeckeElt) -> Result<FMat> {
        if x.n != self.n || *x.k != *self.k || x.q != self.q {
            return Err(Error::DimensionMismatch("element and module use different algebras".into()));
        }
        let k = self.k();
        let mut out = FMat::zeros(self.dim, self.dim);
        for ((l, w), &c) in &x.terms {
            let th = self.theta_op(l).ok_or_else(|| Error::HypothesisFailure { level: 0, square: "t_j invertible".into() })?;
            out = out.add(k, &th.mul(k, &self.t_op(w)).scale(k, c));
        }
        Ok(out)
    }

    /// Defining relations of the algebra that fail on the matrices.
    pub fn violated_relations(&self) -> Vec<String> {
        let k = self.k();
        let (n, q) = (self.n, self.q);
        let qm1 = k.sub(q, 1);
        let id = FMat::identity(self.dim);
        let mut out = Vec::new();
        let inverses: Vec<Option<FMat>> = self.theta.iter().map(|m| m.inverse(k)).collect();
        for (j, inv) in inverses.iter().enumerate() {
            if inv.is_none() {
                out.push(format!("t{} invertible", j + 1));
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if self.theta[a].mul(k, &self.theta[b]) != self.theta[b].mul(k, &self.theta[a]) {
                    out.push(format!("t{} t{} = t{} t{}", a + 1, b + 1, b + 1, a + 1));
                }
            }
        }
        for i in 0..n.saturating_sub(1) {
            let ti = &self.t[i];
            if ti.mul(k, ti) != id.scale(k, q).add(k, &ti.scale(k, qm1)) {
                out.push(format!("T{0}^2 = q + (q-1)T{0}", i + 1));
            }
            if i + 2 < n {
                let tj = &self.t[i + 1];
                if ti.mul(k, tj).mul(k, ti) != tj.mul(k, ti).mul(k, tj) {
                    out.push(format!("T{0}T{1}T{0} = T{1}T{0}T{1}", i + 1, i + 2));
                }
            }
            for j in i + 2..n - 1 {
                if ti.mul(k, &self.t[j]) != self.t[j].mul(k, ti) {
                    out.push(format!("T{}T{} = T{}T{}", i + 1, j + 1, j + 1, i + 1));
                }
            }
            if inverses.iter().any(|x| x.is_none()) {
                continue;
            }
            for j in 0..n {
                let e = super::unit_vector(n, j);
                let mut se = e.clone();
                se.swap(i, i + 1);
                let mut rhs = self.theta_op(&se).unwrap().mul(k, ti);
                for (nu, sign) in bernstein_fraction(&e, i) {
                    let c = if sign < 0 { qm1 } else { k.neg(qm1) };
                    rhs = rhs.add(k, &self.theta_op(&nu).unwrap().scale(k, c));
                }
                if ti.mul(k, &self.theta[j]) != rhs {
                    out.push(format!("Bernstein relation T{} t{}", i + 1, j + 1));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        let spec = RingSpec::GF { p: self.k.p(), m: self.k.degree(), modulus: self.k.modulus().to_vec() };
        json!({
            "n": self.n,
            "k": spec,
            "q": self.k.digits(self.q),
            "dim": self.dim,
            "theta": self.theta.iter().map(FMat::to_json).collect::<Vec<_>>(),
            "t": self.t.iter().map(FMat::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn from_json(v: &Value) -> Result<HeckeModule> {
        let n = v["n"].as_u64().ok_or_else(|| Error::InvalidInput("module needs n".into()))? as usize;
        let k = field_from_json(&v["k"])?;
        let q = if v["q"].is_null() { 1 } else { field_elt_from_json(&k, &v["q"])? };
        let dim = v["dim"].as_u64().ok_or_else(|| Error::InvalidInput("module needs dim".into()))? as usize;
        let list = |key: &str| -> Result<Vec<FMat>> {
            v[key]
                .as_array()
                .ok_or_else(|| Error::InvalidInput(format!("module needs {key}")))?
                .iter()
                .map(|m| FMat::from_json_square(&k, m, dim))
                .collect()
        };
        if n == 0 {
            return invalid("n must be positive");
        }
        let theta = list("theta")?;
        let t = if n == 1 { Vec::new() } else { list("t")? };
        let mut m = HeckeModule::new(n, &k, q, theta, t)?;
        m.dim = dim;
        Ok(m)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupportEntry {
    pub w: Perm,
    /// dim M_{m_w}
    pub dim: usize,
}

#[derive(Clone, Debug)]
pub struct SupportReport {
    pub dim: usize,
    /// rank of [K] on M
    pub k_rank: usize,
    /// [K]^2 = |W| [K]
    pub kk_relation: bool,
    /// |W|^{-1}[K] is an idempotent projecting onto the W-invariants
    pub splitting: bool,
    pub gamma_distinct: bool,
    pub support: Vec<SupportEntry>,
    /// part of M supported away from every m_w (only when γ is distinct)
    pub other_support_dim: Option<usize>,
    /// [K]M ≠ 0, γ distinct, and e_i(t) acts on [K]M as e_i(γ)
    pub eigen_hypothesis: bool,
    /// every m_w in the support (checked when the hypothesis holds)
    pub eigen_conclusion: Option<bool>,
    /// e_i(t) − e_i(γ) nilpotent on M for all i
    pub central_unique: bool,
    pub regular_hypothesis: bool,
    /// k[W] ⊗ M_m → M bijective for every m in the support
    pub induction_iso: Option<bool>,
    /// M_m → [K]M bijective for every m in the support
    pub trace_iso: Option<bool>,
    pub unmet: Vec<String>,
}

impl SupportReport {
    pub fn k_nonzero(&self) -> bool {
        self.k_rank > 0
    }

    pub fn ok(&self) -> bool {
        self.kk_relation
            && self.splitting
            && self.eigen_conclusion != Some(false)
            && self.induction_iso != Some(false)
            && self.trace_iso != Some(false)
            && (!self.regular_hypothesis || self.dim == 0 || self.k_nonzero())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "ok": self.ok(),
            "dim": self.dim,
            "k_nonzero": self.k_nonzero(),
            "k_rank": self.k_rank,
            "kk_relation": self.kk_relation,
            "splitting": self.splitting,
            "gamma_distinct": self.gamma_distinct,
            "support": self.support.iter().filter(|e| e.dim > 0).map(|e| json!({
                "w": e.w.iter().map(|&x| x as u64 + 1).collect::<Vec<_>>(),
                "dim": e.dim,
            })).collect::<Vec<_>>(),
            "other_support_dim": self.other_support_dim,
            "eigen_hypothesis": self.eigen_hypothesis,
            "eigen_conclusion": self.eigen_conclusion,
            "central_unique": self.central_unique,
            "regular_hypothesis": self.regular_hypothesis,
            "induction_iso": self.induction_iso,
            "trace_iso": self.trace_iso,
            "unmet": self.unmet,
            "normalization": "q^(1/2) = 1",
        })
    }
}

fn elementary_symmetric(k: &Gf, xs: &[u32], i: usize) -> u32 {
    let mut e = vec![0u32; xs.len() + 1];
    e[0] = 1;
    for &x in xs {
        for j in (1..e.len()).rev() {
            e[j] = k.add(e[j], k.mul(e[j - 1], x));
        }
    }
    e[i]
}

/// Support of M over k[X_*(T)] at the maximal ideals m_w = (t_j − γ_{w(j)}).
pub fn module_support(m: &HeckeModule, gamma: &[u32]) -> Result<SupportReport> {
    let k = m.k.clone();
    let k = &*k;
    let n = m.n;
    if m.q != 1 {
        return fail("q = 1 in k");
    }
    if k.p() <= n as u64 {
        return fail(format!("p > n (p = {}, n = {n})", k.p()));
    }
    if gamma.len() != n {
        return Err(Error::DimensionMismatch(format!("gamma has {} entries, expected {n}", gamma.len())));
    }
    if let Some(clause) = m.violated_relations().into_iter().next() {
        return fail(clause);
    }
    let d = m.dim;
    let perms = all_perms(n);
    let order = perms.len() as u64;
    let big_k = perms.iter().fold(FMat::zeros(d, d), |acc, w| acc.add(k, &m.t_op(w)));
    let k_rank = big_k.rank(k);
    let w_mod = k.from_int((order % k.p()) as i64);
    let kk_relation = big_k.mul(k, &big_k) == big_k.scale(k, w_mod);
    let e = big_k.scale(k, k.inv(w_mod).expect("p > n"));
    let inv_basis = FMat::vstack(&m.t.iter().map(|t| t.sub(k, &FMat::identity(d))).collect::<Vec<_>>(), d).kernel(k);
    let splitting = e.mul(k, &e) == e && e.rank(k) == inv_basis.cols && e.mul(k, &inv_basis) == inv_basis;

    let gamma_distinct = (0..n).all(|a| (a + 1..n).all(|b| gamma[a] != gamma[b]));
    let local = |w: &Perm| -> FMat {
        let parts: Vec<FMat> =
            (0..n).map(|j| m.theta[j].sub(k, &FMat::scalar(d, gamma[w[j] as usize])).pow(k, d)).collect();
        FMat::vstack(&parts, d).kernel(k)
    };
    let locals: Vec<FMat> = perms.iter().map(local).collect();
    let support: Vec<SupportEntry> =
        perms.iter().zip(&locals).map(|(w, v)| SupportEntry { w: w.clone(), dim: v.cols }).collect();
    let other_support_dim = gamma_distinct.then(|| d - support.iter().map(|e| e.dim).sum::<usize>());

    let sym: Vec<FMat> = (1..=n)
        .map(|i| m.act(&center_element(i, n, &m.k, 1).expect("1 <= i <= n")))
        .collect::<Result<_>>()?;
    let e_gamma: Vec<u32> = (1..=n).map(|i| elementary_symmetric(k, gamma, i)).collect();
    let k_image = big_k.image(k);
    let scalar_on_k = sym.iter().zip(&e_gamma).all(|(s, &c)| s.mul(k, &k_image) == k_image.scale(k, c));
    let mut unmet = Vec::new();
    if k_rank == 0 {
        unmet.push("[K]M != 0".to_string());
    }
    if !gamma_distinct {
        unmet.push("gamma pairwise distinct".to_string());
    }
    if !scalar_on_k {
        unmet.push("e_i(t) acts on [K]M as e_i(gamma)".to_string());
    }
    let eigen_hypothesis = k_rank > 0 && gamma_distinct && scalar_on_k;
    let eigen_conclusion = eigen_hypothesis.then(|| support.iter().all(|e| e.dim > 0));

    let central_unique =
        sym.iter().zip(&e_gamma).all(|(s, &c)| s.sub(k, &FMat::scalar(d, c)).pow(k, d).is_zero());
    if !central_unique {
        unmet.push("unique central maximal ideal n_gamma in the support".to_string());
    }
    let regular_hypothesis = central_unique && gamma_distinct;
    let (mut induction_iso, mut trace_iso) = (None, None);
    if regular_hypothesis {
        let mut ind = true;
        let mut tr = true;
        for v in locals.iter().filter(|v| v.cols > 0) {
            let mut cols = Vec::new();
            for w in &perms {
                let img = m.t_op(w).mul(k, v);
                cols.extend((0..img.cols).map(|j| img.col(j)));
            }
            let induced = FMat::from_cols(d, &cols);
            ind &= induced.cols == d && induced.rank(k) == d;
            tr &= big_k.mul(k, v).rank(k) == v.cols && v.cols == k_rank;
        }
        induction_iso = Some(ind);
        trace_iso = Some(tr);
    }
    Ok(SupportReport {
        dim: d,
        k_rank,
        kk_relation,
        splitting,
        gamma_distinct,
        support,
        other_support_dim,
        eigen_hypothesis,
        eigen_conclusion,
        central_unique,
        regular_hypothesis,
        induction_iso,
        trace_iso,
        unmet,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn regular_model_rank_two() {
        let k = Gf::prime(3).unwrap();
        let m = HeckeModule::regular(2, &k, &[1, 2]).unwrap();
        assert!(m.violated_relations().is_empty());
        let r = module_support(&m, &[1, 2]).unwrap();
        assert!(r.ok());
        assert!(r.k_nonzero());
        assert_eq!(r.k_rank, 1);
        assert!(r.support.iter().all(|e| e.dim == 1));
        assert_eq!(r.eigen_conclusion, Some(true));
        assert_eq!(r.induction_iso, Some(true));
        assert_eq!(r.trace_iso, Some(true));
    }

    #[test]
    fn equal_gamma_fails_regularity() {
        let k = Gf::prime(5).unwrap();
        let m = HeckeModule::new(2, &k, 1, vec![FMat::scalar(1, 3), FMat::scalar(1, 3)], vec![FMat::identity(1)]).unwrap();
        let r = module_support(&m, &[3, 3]).unwrap();
        assert!(!r.regular_hypothesis);
        assert!(r.unmet.iter().any(|u| u.contains("distinct")));
        assert!(r.ok());
    }

    #[test]
    fn zero_module_is_vacuous() {
        let k = Gf::prime(3).unwrap();
        let r = module_support(&HeckeModule::zero(2, &k), &[1, 2]).unwrap();
        assert!(r.ok());
        assert!(r.support.iter().all(|e| e.dim == 0));
    }

    #[test]
    fn broken_relation_is_reported() {
        let k = Gf::prime(5).unwrap();
        let m = HeckeModule::new(2, &k, 1, vec![FMat::scalar(1, 1), FMat::scalar(1, 2)], vec![FMat::identity(1)]).unwrap();
        match module_support(&m, &[1, 2]) {
            Err(Error::HypothesisFailure { square, .. }) => assert!(square.contains("Bernstein")),
            other => panic!("{other:?}"),
        }
    }
}
