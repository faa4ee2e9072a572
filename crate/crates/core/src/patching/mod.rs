//! Finite-horizon patching: level-N patching data, the reduction functors
//! between levels, canonical forms of isomorphism classes, and the pigeonhole
//! diagonalization that produces a compatible chain of data up to a horizon.
//!
//! Conventions:
//! - Λ = Z/p^c and S_N = Λ[S_1..S_q]/(p^{c_N}, (S)^{e_N}) with c_N = min(e_N, c).
//!   Since (p, S)^{2e} ⊆ (p^e, S^e) ⊆ (p, S)^e this is cofinal with m^N.
//! - All algebras are quotients of one ambient P = Λ[X_1..X_g]/(X)^K; the
//!   surjections g_N and η_0 are the identity on X.
//! - Homomorphisms into R_0 send X_j to given elements; actions on complexes
//!   send X_j to given chain endomorphisms and are checked up to homotopy.

pub mod algebra;
mod canonical;
mod diagonal;
mod synthetic;

use serde_json::{json, Value};

pub use algebra::FinAlg;
pub use canonical::{canonical_form, canonical_form_bounded, datum_isomorphism, CanonicalForm, DEFAULT_ORBIT_BOUND};
pub use diagonal::{patch, DiagonalStep, LevelCheck, PatchedOutput};
pub use synthetic::{constant_input, koszul_input};

use crate::complexes::{homotopy_classes, minimalize, ChainMap, FreeComplex};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::rings::{Elt, Reduction, Ring, RingSpec};
use algebra::{eval_endos, substitute, terms_to_elt, variable};

/// Data of level N >= 1 as supplied by the user.
#[derive(Clone, Debug)]
pub struct InputLevel {
    /// C_N over S_N
    pub complex: FreeComplex,
    /// f_N : C_N/(𝔞) -> C_0 ⊗ S_N, a chain isomorphism
    pub framing: ChainMap,
    /// R_N = P/J_N
    pub algebra: FinAlg,
    /// images of S_1..S_q in R_N
    pub sigma: Vec<Elt>,
    /// X_j acting on C_N
    pub action: Vec<ChainMap>,
    /// images of X_j under R_N -> R_0/(I_N)
    pub to_r0: Vec<Elt>,
}

#[derive(Clone, Debug)]
pub struct PatchingInput {
    pub lambda: Ring,
    pub q: usize,
    pub d: i64,
    /// e_N for N = 1, 2, ...
    pub schedule: Vec<u32>,
    pub ambient: Ring,
    pub vars: usize,
    pub r_inf: FinAlg,
    /// C_0 over Λ in degrees [0, d]
    pub c0: FreeComplex,
    pub r0: FinAlg,
    /// X_j acting on C_0
    pub r0_action: Vec<ChainMap>,
    pub levels: Vec<InputLevel>,
}

/// A patching datum (D, ψ, R, η_0, η_1, η_2) of level N. η_0 is the identity
/// on X, η_1 sends X_j to `action[j]`, η_2 sends X_j to `to_r0[j]` in `r0_target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatchingDatum {
    pub level: usize,
    pub complex: FreeComplex,
    /// ψ : D/(𝔞) -> C_0 ⊗ S_N
    pub framing: ChainMap,
    pub algebra: FinAlg,
    pub sigma: Vec<Elt>,
    pub action: Vec<ChainMap>,
    /// R_0/m^{b_N} + (I_N)
    pub r0_target: FinAlg,
    pub to_r0: Vec<Elt>,
}

fn hyp(level: usize, square: impl Into<String>) -> Error {
    Error::HypothesisFailure { level, square: square.into() }
}

/// Entrywise image of a matrix over Z/p^c-coefficients in a ring with the same p.
pub(crate) fn lift_mat(m: &Mat, to: &Ring) -> Mat {
    Mat::from_fn(to, m.rows, m.cols, |i, j| to.from_int(m.at(i, j)[0] as i64))
}

pub(crate) fn lift_complex(c: &FreeComplex, to: &Ring) -> FreeComplex {
    let d = (c.lo..c.hi).map(|i| lift_mat(&c.diff(i), to)).collect();
    FreeComplex::new(to, c.lo, c.ranks().to_vec(), d).expect("constants form a subring")
}

pub(crate) fn lift_map(f: &ChainMap, source: &FreeComplex, target: &FreeComplex) -> ChainMap {
    ChainMap::from_fn(source, target, |i| lift_mat(&f.comp(i), &target.ring))
}

impl PatchingInput {
    pub fn p(&self) -> u64 {
        self.lambda.p()
    }

    pub fn num_levels(&self) -> usize {
        self.levels.len()
    }

    pub fn e(&self, n: usize) -> u32 {
        self.schedule[n - 1]
    }

    /// c_N = min(e_N, c).
    pub fn c_at(&self, n: usize) -> u32 {
        self.e(n).min(self.lambda.c())
    }

    /// S_N.
    pub fn level_ring(&self, n: usize) -> Ring {
        Ring::trunc(self.p(), self.c_at(n), self.q, self.e(n)).expect("validated schedule")
    }

    /// Λ_N = Λ/(I_N ∩ Λ).
    pub fn lambda_at(&self, n: usize) -> Ring {
        Ring::zpc(self.p(), self.c_at(n)).expect("validated schedule")
    }

    /// S_N -> S_N/(𝔞) = Λ_N.
    pub fn augmentation(&self, n: usize) -> Reduction {
        let s = self.level_ring(n);
        s.natural_map(&self.lambda_at(n)).expect("S_N surjects onto Λ_N")
    }

    /// S_{N+1} -> S_N.
    pub fn step(&self, n: usize) -> Reduction {
        self.level_ring(n + 1).natural_map(&self.level_ring(n)).expect("validated schedule")
    }

    pub fn c0_at(&self, n: usize) -> FreeComplex {
        self.c0.base_change(&self.lambda.natural_map(&self.lambda_at(n)).unwrap())
    }

    pub fn r0_action_at(&self, n: usize) -> Vec<ChainMap> {
        let red = self.lambda.natural_map(&self.lambda_at(n)).unwrap();
        self.r0_action.iter().map(|t| t.base_change(&red)).collect()
    }

    /// s = dim_k H*(C_0 ⊗ k).
    pub fn s(&self) -> u64 {
        let k = self.c0.base_change(&self.lambda.natural_map(&Ring::zpc(self.p(), 1).unwrap()).unwrap());
        minimalize(&k).complex.total_rank() as u64
    }

    /// g = dim of the Zariski tangent space of R_∞.
    pub fn g(&self) -> u64 {
        self.r_inf.tangent_dim() as u64
    }

    /// b_N = (d+1) N s g, raised to 1 when s or g vanishes.
    pub fn bound(&self, n: usize) -> u64 {
        ((self.d as u64 + 1) * n as u64 * self.s() * self.g()).max(1)
    }

    /// Generators of I_N R: p^{c_N} and the monomials of degree e_N in the σ_i.
    fn level_ideal(&self, n: usize, sigma: &[Elt]) -> Vec<Elt> {
        let p = &self.ambient;
        let mut out = vec![p.from_int(self.p().pow(self.c_at(n)) as i64)];
        let e = self.e(n);
        if self.q > 0 {
            let mut stack: Vec<(usize, u32, Elt)> = vec![(0, 0, p.one())];
            while let Some((start, deg, acc)) = stack.pop() {
                if deg == e {
                    out.push(acc);
                    continue;
                }
                for (i, s) in sigma.iter().enumerate().skip(start) {
                    stack.push((i, deg + 1, p.mul(&acc, s)));
                }
            }
        }
        out
    }

    /// R_0/(I_N), with m^{b} added when `bound` is given.
    pub fn r0_target(&self, n: usize, bound: Option<u64>) -> FinAlg {
        let mut extra = vec![self.ambient.from_int(self.p().pow(self.c_at(n)) as i64)];
        if let Some(b) = bound {
            extra.extend(self.r0.max_power(b));
        }
        self.r0.with(&extra)
    }

    /// Every hypothesis of the patching construction, checked exactly.
    pub fn validate(&self) -> Result<()> {
        let lam = &self.lambda;
        if !matches!(lam.spec(), RingSpec::Zpc { .. }) {
            return Err(Error::InvalidInput("Λ must be Z/p^c".into()));
        }
        if self.schedule.len() < self.levels.len() {
            return Err(Error::InvalidInput("exponent schedule is shorter than the list of levels".into()));
        }
        if self.schedule.iter().any(|&e| e == 0) || self.schedule.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidInput("exponent schedule must be positive and non-decreasing".into()));
        }
        let expect = Ring::trunc(self.p(), lam.c(), self.vars, self.ambient.trunc_shape().map_or(1, |s| s.1)).ok();
        if expect.as_ref() != Some(&self.ambient) || self.ambient.p() != self.p() || self.ambient.c() != lam.c() {
            return Err(Error::InvalidInput("ambient algebra must be Λ[X_1..X_g]/(X)^K".into()));
        }
        for a in [&self.r_inf, &self.r0] {
            if a.ambient != self.ambient || a.vars != self.vars {
                return Err(Error::InvalidInput("algebras must share the ambient presentation".into()));
            }
        }
        if self.c0.ring != *lam || self.c0.lo != 0 || self.c0.hi != self.d || self.d < 0 {
            return Err(hyp(0, "C_0 must be a complex over Λ in degrees [0, d]"));
        }
        self.c0.validate().map_err(|e| hyp(0, e.to_string()))?;
        if self.r0_action.len() != self.vars {
            return Err(hyp(0, "R_0 action needs one endomorphism per variable"));
        }
        for t in &self.r0_action {
            if t.source != self.c0 || t.target != self.c0 || t.commutator_defect().is_some() {
                return Err(hyp(0, "R_0 action is not by chain endomorphisms of C_0"));
            }
        }
        check_action(&self.ambient, self.vars, &self.c0, &self.r0, &self.r0_action).map_err(|s| hyp(0, s))?;
        for (k, lv) in self.levels.iter().enumerate() {
            let n = k + 1;
            let target = self.r0_target(n, None);
            if !lv.algebra.is_quotient_of(&self.r_inf) {
                return Err(hyp(n, "g_N: R_∞ -> R_N is not well defined"));
            }
            self.check_level(n, &lv.complex, &lv.framing, &lv.algebra, &lv.sigma, &lv.action, &target, &lv.to_r0)
                .map_err(|s| hyp(n, s))?;
        }
        Ok(())
    }

    /// Shared checks for supplied levels and patching data. Err names the failing square.
    #[allow(clippy::too_many_arguments)]
    fn check_level(
        &self,
        n: usize,
        complex: &FreeComplex,
        framing: &ChainMap,
        alg: &FinAlg,
        sigma: &[Elt],
        action: &[ChainMap],
        target: &FinAlg,
        to_r0: &[Elt],
    ) -> std::result::Result<(), String> {
        let s_ring = self.level_ring(n);
        if complex.ring != s_ring {
            return Err("complex is not over S_N".into());
        }
        if complex.lo != self.c0.lo || complex.hi != self.c0.hi {
            return Err("complex is not in degrees [0, d]".into());
        }
        complex.validate().map_err(|e| e.to_string())?;
        let reduced = complex.base_change(&self.augmentation(n));
        let c0n = self.c0_at(n);
        if framing.degrees().iter().any(|&i| framing.comp(i).rows != c0n.rank(i) || framing.comp(i).cols != reduced.rank(i)) {
            return Err("framing has the wrong shape".into());
        }
        let fr = framing.retarget(&reduced, &c0n);
        if fr.commutator_defect().is_some() || fr.inverse().is_none() {
            return Err("framing is not an isomorphism of complexes".into());
        }
        if sigma.len() != self.q || action.len() != self.vars || to_r0.len() != self.vars {
            return Err("wrong number of structure elements".into());
        }
        for t in action {
            if t.source != *complex || t.target != *complex || t.commutator_defect().is_some() {
                return Err("action is not by chain endomorphisms".into());
            }
        }
        if self.level_ideal(n, sigma).iter().any(|x| !alg.contains(x)) {
            return Err("R is not an S_N-algebra: I_N R != 0".into());
        }
        check_action(&self.ambient, self.vars, complex, alg, action)?;
        let hb = homotopy_classes(complex, complex).map_err(|e| e.to_string())?;
        for (i, s) in sigma.iter().enumerate() {
            let lhs = eval_endos(&self.ambient, self.vars, s, action, complex);
            let rhs = ChainMap::identity(complex).scale(&variable(&s_ring, self.q, i));
            if !hb.is_null(&lhs.sub(&rhs)) {
                return Err(format!("S_{} does not act through R", i + 1));
            }
        }
        let m0 = target.with(&target.max_power(1));
        if to_r0.iter().any(|y| !m0.contains(y)) {
            return Err("R -> R_0 is not local".into());
        }
        for gen in alg.gens().iter().chain(sigma) {
            if !target.contains(&substitute(&self.ambient, self.vars, gen, to_r0)) {
                return Err("R -> R_0 is not a well-defined S_N-algebra map".into());
            }
        }
        let r0_act = self.r0_action_at(n);
        let hf = homotopy_classes(&reduced, &c0n).map_err(|e| e.to_string())?;
        for (j, t) in action.iter().enumerate() {
            let lhs = fr.compose(&t.base_change(&self.augmentation(n)).retarget(&reduced, &reduced));
            let rhs = eval_endos(&self.ambient, self.vars, &to_r0[j], &r0_act, &c0n).compose(&fr);
            if !hb_null(&hf, &lhs.sub(&rhs)) {
                return Err(format!("action square fails for X_{}", j + 1));
            }
        }
        Ok(())
    }

    pub fn from_json(v: &Value) -> Result<PatchingInput> {
        let bad = |m: &str| Error::InvalidInput(format!("patching input: {m}"));
        let field = |k: &str| v.get(k).ok_or_else(|| bad(&format!("missing \"{k}\"")));
        let lam_v = field("lambda")?;
        let p = lam_v.get("p").and_then(|x| x.as_u64()).ok_or_else(|| bad("lambda.p"))?;
        let c = lam_v.get("c").and_then(|x| x.as_u64()).ok_or_else(|| bad("lambda.c"))? as u32;
        let lambda = Ring::zpc(p, c)?;
        let q = field("q")?.as_u64().ok_or_else(|| bad("q"))? as usize;
        let d = field("d")?.as_i64().ok_or_else(|| bad("d"))?;
        let alg_v = field("algebra")?;
        let vars = alg_v.get("vars").and_then(|x| x.as_u64()).ok_or_else(|| bad("algebra.vars"))? as usize;
        let order = alg_v.get("order").and_then(|x| x.as_u64()).ok_or_else(|| bad("algebra.order"))? as u32;
        let ambient = Ring::trunc(p, c, vars, order)?;
        let elts = |x: &Value| -> Result<Vec<Elt>> {
            x.as_array().ok_or_else(|| bad("expected a list of algebra elements"))?.iter().map(|t| terms_to_elt(&ambient, vars, t)).collect()
        };
        let r_inf = FinAlg::new(&ambient, vars, &elts(field("r_inf")?)?);
        let c0 = FreeComplex::from_json_over(&lambda, field("c0")?)?;
        let r0_v = field("r0")?;
        let r0 = FinAlg::new(&ambient, vars, &elts(r0_v.get("relations").unwrap_or(&json!([])))?);
        let endos = |c: &FreeComplex, x: Option<&Value>| -> Result<Vec<ChainMap>> {
            x.and_then(|a| a.as_array()).ok_or_else(|| bad("expected a list of chain maps"))?.iter().map(|m| ChainMap::from_json(c, c, m)).collect()
        };
        let r0_action = endos(&c0, r0_v.get("action"))?;
        let raw_levels = field("levels")?.as_array().ok_or_else(|| bad("levels must be a list"))?;
        let schedule: Vec<u32> = match v.get("schedule") {
            None | Some(Value::Null) => (1..=raw_levels.len() as u32).collect(),
            Some(s) => s
                .as_array()
                .ok_or_else(|| bad("schedule must be a list"))?
                .iter()
                .map(|x| x.as_u64().map(|x| x as u32))
                .collect::<Option<_>>()
                .ok_or_else(|| bad("schedule entries must be non-negative integers"))?,
        };
        let mut input = PatchingInput {
            lambda,
            q,
            d,
            schedule,
            ambient: ambient.clone(),
            vars,
            r_inf,
            c0,
            r0,
            r0_action,
            levels: Vec::new(),
        };
        if input.schedule.len() < raw_levels.len() || input.schedule.iter().any(|&e| e == 0) {
            return Err(bad("schedule must give a positive exponent for every level"));
        }
        for (k, lv) in raw_levels.iter().enumerate() {
            let n = k + 1;
            let s_ring = input.level_ring(n);
            let complex = FreeComplex::from_json_over(&s_ring, lv.get("complex").ok_or_else(|| bad("level complex"))?)?;
            let reduced = complex.base_change(&input.augmentation(n));
            let framing = ChainMap::from_json(&reduced, &input.c0_at(n), lv.get("framing").ok_or_else(|| bad("level framing"))?)?;
            let algebra = FinAlg::new(&ambient, vars, &elts(lv.get("relations").unwrap_or(&json!([])))?);
            let sigma = elts(lv.get("sigma").unwrap_or(&json!([])))?;
            let action = endos(&complex, lv.get("action"))?;
            let to_r0 = elts(lv.get("to_r0").ok_or_else(|| bad("level to_r0"))?)?;
            input.levels.push(InputLevel { complex, framing, algebra, sigma, action, to_r0 });
        }
        Ok(input)
    }

    pub fn to_json(&self) -> Value {
        let elts = |xs: &[Elt]| xs.iter().map(|x| algebra::elt_to_terms(&self.ambient, self.vars, x)).collect::<Vec<_>>();
        let maps = |xs: &[ChainMap]| xs.iter().map(|m| m.to_json()).collect::<Vec<_>>();
        json!({
            "lambda": {"p": self.p(), "c": self.lambda.c()},
            "q": self.q,
            "d": self.d,
            "schedule": self.schedule,
            "algebra": {"vars": self.vars, "order": self.ambient.trunc_shape().map_or(1, |s| s.1)},
            "r_inf": self.r_inf.to_json(),
            "c0": self.c0.to_json(),
            "r0": {"relations": self.r0.to_json(), "action": maps(&self.r0_action)},
            "levels": self.levels.iter().map(|lv| json!({
                "complex": lv.complex.to_json(),
                "framing": lv.framing.to_json(),
                "relations": lv.algebra.to_json(),
                "sigma": elts(&lv.sigma),
                "action": maps(&lv.action),
                "to_r0": elts(&lv.to_r0),
            })).collect::<Vec<_>>(),
        })
    }
}

fn hb_null(hb: &crate::complexes::HomotopyClassBasis, f: &ChainMap) -> bool {
    hb.is_null(&f.retarget(&hb.source, &hb.target))
}

/// X_j commute up to homotopy and every relation of `alg` acts null-homotopically.
fn check_action(
    ambient: &Ring,
    vars: usize,
    c: &FreeComplex,
    alg: &FinAlg,
    action: &[ChainMap],
) -> std::result::Result<(), String> {
    let hb = homotopy_classes(c, c).map_err(|e| e.to_string())?;
    for a in 0..action.len() {
        for b in a + 1..action.len() {
            let comm = action[a].compose(&action[b]).sub(&action[b].compose(&action[a]));
            if !hb.is_null(&comm) {
                return Err(format!("X_{} and X_{} do not commute up to homotopy", a + 1, b + 1));
            }
        }
    }
    for g in alg.gens() {
        if !hb.is_null(&eval_endos(ambient, vars, &g, action, c)) {
            return Err("a relation of the algebra does not act by zero".into());
        }
    }
    Ok(())
}

impl PatchingDatum {
    /// D(M, M): the supplied level M with R = R_M/m^{b_M}.
    pub fn top(input: &PatchingInput, m: usize) -> Result<PatchingDatum> {
        if m == 0 || m > input.num_levels() {
            return Err(Error::InvalidDatum(format!("no supplied level {m}")));
        }
        let lv = &input.levels[m - 1];
        let b = input.bound(m);
        let algebra = lv.algebra.with(&lv.algebra.max_power(b));
        let r0_target = input.r0_target(m, Some(b));
        Ok(PatchingDatum {
            level: m,
            complex: lv.complex.clone(),
            framing: lv.framing.clone(),
            sigma: lv.sigma.iter().map(|s| algebra.reduce(s)).collect(),
            to_r0: lv.to_r0.iter().map(|y| r0_target.reduce(y)).collect(),
            algebra,
            action: lv.action.clone(),
            r0_target,
        })
    }

    /// D(M, N) for M >= N.
    pub fn at(input: &PatchingInput, m: usize, n: usize) -> Result<PatchingDatum> {
        let mut d = PatchingDatum::top(input, m)?;
        while d.level > n {
            d = reduce_level(input, &d)?;
        }
        Ok(d)
    }

    /// Datum invariants, including m_R^{b_N} = 0.
    pub fn validate(&self, input: &PatchingInput) -> Result<()> {
        let n = self.level;
        if n == 0 || n > input.schedule.len() {
            return Err(Error::InvalidDatum(format!("level {n} outside the schedule")));
        }
        let b = input.bound(n);
        if !self.algebra.is_quotient_of(&input.r_inf) {
            return Err(Error::InvalidDatum("η_0 is not well defined".into()));
        }
        if !self.algebra.kills_max_power(b) {
            return Err(Error::InvalidDatum(format!("m_R^{b} != 0")));
        }
        if self.r0_target != input.r0_target(n, Some(b)) {
            return Err(Error::InvalidDatum("η_2 has the wrong target".into()));
        }
        input
            .check_level(n, &self.complex, &self.framing, &self.algebra, &self.sigma, &self.action, &self.r0_target, &self.to_r0)
            .map_err(Error::InvalidDatum)
    }

    pub fn to_json(&self) -> Value {
        let amb = &self.algebra.ambient;
        let v = self.algebra.vars;
        let elts = |xs: &[Elt]| xs.iter().map(|x| algebra::elt_to_terms(amb, v, x)).collect::<Vec<_>>();
        json!({
            "level": self.level,
            "complex": self.complex.to_json(),
            "framing": self.framing.to_json(),
            "relations": self.algebra.to_json(),
            "sigma": elts(&self.sigma),
            "action": self.action.iter().map(|m| m.to_json()).collect::<Vec<_>>(),
            "r0_target": self.r0_target.to_json(),
            "to_r0": elts(&self.to_r0),
        })
    }
}

/// F_N: Patch_{N+1} -> Patch_N.
pub fn reduce_level(input: &PatchingInput, datum: &PatchingDatum) -> Result<PatchingDatum> {
    let n1 = datum.level;
    if n1 < 2 {
        return Err(Error::InvalidDatum("level-1 data have no lower level".into()));
    }
    let n = n1 - 1;
    if datum.complex.ring != input.level_ring(n1) {
        return Err(Error::InvalidDatum("complex is not over S_{N+1}".into()));
    }
    let step = input.step(n);
    let complex = datum.complex.base_change(&step);
    let lam_step = input.lambda_at(n1).natural_map(&input.lambda_at(n)).unwrap();
    let framing = datum.framing.base_change(&lam_step).retarget(&complex.base_change(&input.augmentation(n)), &input.c0_at(n));
    let b = input.bound(n);
    let mut extra = datum.algebra.max_power(b);
    extra.extend(input.level_ideal(n, &datum.sigma));
    let algebra = datum.algebra.with(&extra);
    let r0_target = input.r0_target(n, Some(b));
    let out = PatchingDatum {
        level: n,
        framing,
        sigma: datum.sigma.iter().map(|s| algebra.reduce(s)).collect(),
        to_r0: datum.to_r0.iter().map(|y| r0_target.reduce(y)).collect(),
        action: datum.action.iter().map(|t| t.base_change(&step).retarget(&complex, &complex)).collect(),
        complex,
        algebra,
        r0_target,
    };
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_input_validates_and_reduces() {
        let input = koszul_input(3, 4).unwrap();
        input.validate().unwrap();
        assert_eq!(input.s(), 2);
        assert_eq!(input.g(), 1);
        assert_eq!(input.bound(2), 8);
        for m in 1..=4 {
            for n in 1..=m {
                let d = PatchingDatum::at(&input, m, n).unwrap();
                d.validate(&input).unwrap();
                assert_eq!(d.complex.ring, input.level_ring(n));
            }
        }
    }

    #[test]
    fn reduce_twice_is_reduce_over_two_levels() {
        let input = koszul_input(3, 4).unwrap();
        let top = PatchingDatum::top(&input, 4).unwrap();
        let twice = reduce_level(&input, &reduce_level(&input, &top).unwrap()).unwrap();
        assert_eq!(twice, PatchingDatum::at(&input, 4, 2).unwrap());
        assert!(reduce_level(&input, &PatchingDatum::at(&input, 4, 1).unwrap()).is_err());
    }

    #[test]
    fn broken_square_is_reported() {
        let mut input = koszul_input(3, 3).unwrap();
        let c = input.levels[1].complex.clone();
        // S acts null-homotopically on its own Koszul complex, so σ = 0 is allowed
        input.levels[1].sigma = vec![input.ambient.zero()];
        input.validate().unwrap();
        input.levels[1].to_r0 = vec![input.ambient.one()];
        assert!(matches!(input.validate(), Err(Error::HypothesisFailure { level: 2, .. })));
        input = koszul_input(3, 3).unwrap();
        input.levels[1].action = vec![ChainMap::identity(&c)];
        assert!(matches!(input.validate(), Err(Error::HypothesisFailure { level: 2, .. })));
    }

    #[test]
    fn json_round_trip() {
        let input = koszul_input(3, 3).unwrap();
        let back = PatchingInput::from_json(&input.to_json()).unwrap();
        back.validate().unwrap();
        assert_eq!(back.to_json(), input.to_json());
    }
}
