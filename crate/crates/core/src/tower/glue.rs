use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::{cross_induced, lift_int, lifted_relations, ComplexTower};
use crate::complexes::homology::{homology, homology_at, induced_map};
use crate::complexes::{homotopy_classes, minimalize, ChainMap, FreeComplex, HomotopyClassBasis};
use crate::error::{Error, Result};
use crate::linalg::Mat;
use crate::ordinary::{complex_ordinary, module_ordinary, PresentedModule};
use crate::rings::{Elt, Ring};

/// Homology of the limit against the inverse limit of levelwise homology.
#[derive(Clone, Debug)]
pub struct LimitDegree {
    pub degree: i64,
    /// length of H^i(M_c) per level
    pub lengths: Vec<u64>,
    /// length of the inverse limit, computed as a kernel over the top ring
    pub limit_length: u64,
    pub limit_iso: bool,
}

#[derive(Clone, Debug)]
pub struct GoodLimit {
    /// M_∞ over the top ring
    pub complex: FreeComplex,
    /// F_c : M_∞ ⊗ R_c -> M_c
    pub isos: Vec<ChainMap>,
    pub homology: Vec<LimitDegree>,
}

impl GoodLimit {
    pub fn verified(&self) -> bool {
        self.homology.iter().all(|d| d.limit_iso)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "complex": self.complex.to_json(),
            "isos": self.isos.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            "homology": self.homology.iter().map(|d| json!({
                "degree": d.degree,
                "lengths": d.lengths,
                "limit_length": d.limit_length,
                "limit_iso": d.limit_iso,
            })).collect::<Vec<_>>(),
            "verified": self.verified(),
        })
    }
}

fn log_size(p: u64, n: u128) -> u64 {
    n.ilog(p as u128) as u64
}

/// Transport the top level down through a chain of isomorphisms `trans[k]`:
/// M_k ⊗ R_{k-1} -> M_{k-1}.
fn pull_down(tower: &ComplexTower, complexes: &[FreeComplex], trans: &[ChainMap]) -> (FreeComplex, Vec<ChainMap>) {
    let top = complexes.len() - 1;
    let m_inf = complexes[top].clone();
    let mut isos = vec![ChainMap::identity(&m_inf); top + 1];
    for k in (0..top).rev() {
        let lower = isos[k + 1].base_change(&tower.chain.step(k));
        let src = m_inf.base_change(&tower.chain.reds[k]);
        isos[k] = trans[k + 1].compose(&lower).retarget(&src, &complexes[k]);
    }
    (m_inf, isos)
}

/// H^i(M_∞) -> lim H^i(M_c) is an isomorphism, with the limit computed as the
/// kernel of ∏ H(M_c) -> ∏ H(M_{c-1}), (x_c) -> (x_{c-1} - f(x_c)).
fn limit_degree(
    tower: &ComplexTower,
    complexes: &[FreeComplex],
    trans: &[ChainMap],
    m_inf: &FreeComplex,
    isos: &[ChainMap],
    i: i64,
) -> LimitDegree {
    let n = complexes.len();
    let hs: Vec<_> = complexes.iter().map(|c| homology_at(c, i)).collect();
    let h_inf = homology_at(m_inf, i);
    let e = h_inf.ring.clone();
    let p = e.p();
    let lift = |m: &Mat| Mat::from_fn(&e, m.rows, m.cols, |a, b| lift_int(&e, m.at(a, b)));
    let offs: Vec<usize> = hs
        .iter()
        .scan(0, |acc, h| {
            let o = *acc;
            *acc += h.num_generators();
            Some(o)
        })
        .collect();
    let total: usize = hs.iter().map(|h| h.num_generators()).sum();
    let rel_all: Vec<Elt> = hs.iter().flat_map(|h| lifted_relations(&e, h)).collect();
    let prod = PresentedModule::new(&e, total, Mat::diag(&e, &rel_all)).expect("finite");

    // phi: H(M_∞) -> ∏ H(M_c)
    let mut phi = Mat::zeros(&e, total, h_inf.num_generators());
    for k in 0..n {
        let m = lift(&cross_induced(&h_inf, &tower.chain.reds[k], &isos[k].comp(i), &hs[k]));
        for a in 0..m.rows {
            for b in 0..m.cols {
                phi.set(offs[k] + a, b, m.at(a, b).clone());
            }
        }
    }
    // delta: ∏ H(M_c) -> ∏_{c < C} H(M_c)
    let lower_gens = offs[n - 1];
    let rel_lower: Vec<Elt> = rel_all[..lower_gens].to_vec();
    let lower = PresentedModule::new(&e, lower_gens, Mat::diag(&e, &rel_lower)).expect("finite");
    let mut delta = Mat::zeros(&e, lower_gens, total);
    for k in 1..n {
        let g = hs[k - 1].num_generators();
        for a in 0..g {
            delta.set(offs[k - 1] + a, offs[k - 1] + a, e.one());
        }
        let f = lift(&cross_induced(&hs[k], &tower.chain.step(k - 1), &trans[k].comp(i), &hs[k - 1]));
        for a in 0..f.rows {
            for b in 0..f.cols {
                delta.set(offs[k - 1] + a, offs[k] + b, e.neg(f.at(a, b)));
            }
        }
    }
    let limit = prod.size() / lower.image_size(&delta);
    let source = PresentedModule::from_homology(&h_inf);
    let injective = prod.image_size(&phi) == source.size();
    let into_limit = lower.is_zero_map(&delta.mul(&phi));
    LimitDegree {
        degree: i,
        lengths: hs.iter().map(|h| log_size(p, PresentedModule::from_homology(h).size())).collect(),
        limit_length: log_size(p, limit),
        limit_iso: injective && into_limit && limit == source.size(),
    }
}

fn check_isos(trans: &[ChainMap], err: impl Fn(usize, &str) -> Error) -> Result<()> {
    for (k, f) in trans.iter().enumerate().skip(1) {
        if let Some(i) = f.commutator_defect() {
            return Err(err(k + 1, &format!("transition is not a chain map in degree {i}")));
        }
        if f.inverse().is_none() {
            return Err(err(k + 1, "transition is not an isomorphism"));
        }
    }
    Ok(())
}

fn glue_isos(tower: &ComplexTower, complexes: &[FreeComplex], trans: &[ChainMap]) -> GoodLimit {
    let (m_inf, isos) = pull_down(tower, complexes, trans);
    let lo = complexes.iter().map(|c| c.lo).min().unwrap_or(0);
    let hi = complexes.iter().map(|c| c.hi).max().unwrap_or(0);
    let homology = (lo..=hi).map(|i| limit_degree(tower, complexes, trans, &m_inf, &isos, i)).collect();
    GoodLimit { complex: m_inf, isos, homology }
}

fn transitions(tower: &ComplexTower) -> Vec<ChainMap> {
    let first = &tower.levels[0].complex;
    std::iter::once(ChainMap::identity(first)).chain((1..tower.len()).map(|k| tower.transition(k))).collect()
}

/// Limit of a tower whose transitions are isomorphisms.
pub fn glue_good(tower: &ComplexTower) -> Result<GoodLimit> {
    tower.check_shape()?;
    let trans = transitions(tower);
    check_isos(&trans, |level, reason| Error::IncompatibleTower { level, reason: reason.into() })?;
    let complexes: Vec<FreeComplex> = tower.levels.iter().map(|l| l.complex.clone()).collect();
    Ok(glue_isos(tower, &complexes, &trans))
}

fn homotopic(f: &ChainMap, g: &ChainMap) -> Result<bool> {
    Ok(homotopy_classes(&f.source, &f.target)?.is_null(&f.sub(g)))
}

/// Whether x -> apply(x) is injective on homotopy classes.
fn injective_on_classes(src: &HomotopyClassBasis, tgt: &HomotopyClassBasis, apply: impl Fn(&ChainMap) -> ChainMap) -> bool {
    let cols: Vec<Vec<Elt>> = src.reps.iter().map(|r| tgt.class_of(&apply(r))).collect();
    let a = Mat::from_cols(&tgt.classes.ring, tgt.num_generators(), &cols);
    let m = PresentedModule::from_homology(&src.classes);
    PresentedModule::from_homology(&tgt.classes).image_size(&a) == m.size()
}

#[derive(Clone, Debug)]
pub struct MinimalLimit {
    pub complex: FreeComplex,
    /// g_c : F_∞ ⊗ R_c -> M_c
    pub g: Vec<ChainMap>,
    /// f_c ∘ (g_c ⊗ R_{c-1}) ≃ g_{c-1}, per level (true on the first)
    pub commutes: Vec<bool>,
    pub quasi_iso: Vec<bool>,
    /// composing with g_C is injective on homotopy classes of self-maps of F_∞
    pub unique: bool,
    pub limit: GoodLimit,
}

impl MinimalLimit {
    pub fn verified(&self) -> bool {
        self.complex.is_minimal()
            && self.commutes.iter().all(|&x| x)
            && self.quasi_iso.iter().all(|&x| x)
            && self.unique
            && self.limit.verified()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "complex": self.complex.to_json(),
            "g": self.g.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            "commutes": self.commutes,
            "quasi_iso": self.quasi_iso,
            "unique": self.unique,
            "verified": self.verified(),
        })
    }
}

fn is_quasi_iso(f: &ChainMap) -> bool {
    homology(&f.cone()).is_acyclic()
}

/// Minimal limit of a tower whose transitions are quasi-isomorphisms.
pub fn glue_minimal(tower: &ComplexTower) -> Result<MinimalLimit> {
    tower.check_shape()?;
    let n = tower.len();
    let trans = transitions(tower);
    for (k, f) in trans.iter().enumerate().skip(1) {
        if let Some(i) = f.commutator_defect() {
            return Err(Error::IncompatibleTower { level: k + 1, reason: format!("transition is not a chain map in degree {i}") });
        }
    }
    let mz: Vec<_> = tower.levels.iter().map(|l| minimalize(&l.complex)).collect();
    let ns: Vec<FreeComplex> = mz.iter().map(|m| m.complex.clone()).collect();
    let mut ntrans = vec![ChainMap::identity(&ns[0])];
    for k in 1..n {
        let a = mz[k].f.base_change(&tower.chain.step(k - 1));
        let iso = mz[k - 1].g.compose(&trans[k]).compose(&a);
        if iso.inverse().is_none() {
            return Err(Error::NotQuasiIso { level: k + 1 });
        }
        ntrans.push(iso);
    }
    let limit = glue_isos(tower, &ns, &ntrans);
    let f_inf = limit.complex.clone();
    let g: Vec<ChainMap> = (0..n).map(|k| mz[k].f.compose(&limit.isos[k])).collect();
    let mut commutes = vec![true];
    for k in 1..n {
        let down = g[k].base_change(&tower.chain.step(k - 1)).retarget(&g[k - 1].source, &trans[k].source);
        commutes.push(homotopic(&trans[k].compose(&down), &g[k - 1])?);
    }
    let quasi_iso = g.iter().map(is_quasi_iso).collect();
    let top = &tower.levels[n - 1].complex;
    let unique = injective_on_classes(&homotopy_classes(&f_inf, &f_inf)?, &homotopy_classes(&f_inf, top)?, |x| {
        g[n - 1].compose(x)
    });
    Ok(MinimalLimit { complex: f_inf, g, commutes, quasi_iso, unique, limit })
}

/// An isomorphism a -> b of minimal complexes, searching all homotopy classes
/// modulo p. Between minimal complexes a map is invertible iff it is invertible
/// mod the maximal ideal, and null-homotopic maps vanish there, so invertibility
/// only depends on the class modulo p·Hom. Random classes are tried first; the
/// exhaustive pass (needed to answer "none") is subject to `bound`.
pub fn find_isomorphism(a: &FreeComplex, b: &FreeComplex, bound: usize) -> Result<Option<ChainMap>> {
    if a.degrees().chain(b.degrees()).any(|i| a.rank(i) != b.rank(i)) {
        return Ok(None);
    }
    let basis = homotopy_classes(a, b)?;
    let ring = basis.classes.ring.clone();
    let choices: Vec<Vec<Elt>> = basis.factors().iter().map(|f| coordinate_range(&ring, f)).collect();
    let is_iso = |coords: &[Elt]| {
        let f = basis.element(coords);
        f.inverse().is_some_and(|g| g.commutator_defect().is_none()).then_some(f)
    };
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    for _ in 0..256 {
        let coords: Vec<Elt> = choices.iter().map(|c| c[rng.gen_range(0..c.len())].clone()).collect();
        if let Some(f) = is_iso(&coords) {
            return Ok(Some(f));
        }
    }
    let total = choices.iter().try_fold(1usize, |acc, c| acc.checked_mul(c.len()));
    if total.is_none_or(|t| t > bound) {
        return Err(Error::BoundExceeded(bound));
    }
    let mut idx = vec![0usize; choices.len()];
    loop {
        let coords: Vec<Elt> = idx.iter().zip(&choices).map(|(&i, c)| c[i].clone()).collect();
        if let Some(f) = is_iso(&coords) {
            return Ok(Some(f));
        }
        let mut k = 0;
        loop {
            if k == idx.len() {
                return Ok(None);
            }
            idx[k] += 1;
            if idx[k] < choices[k].len() {
                break;
            }
            idx[k] = 0;
            k += 1;
        }
    }
}

/// Coordinates 0..p-1 (all of the field over a field engine), cut down where
/// the factor is a unit.
fn coordinate_range(ring: &Ring, f: &Elt) -> Vec<Elt> {
    if let Some(field) = ring.field() {
        if ring.is_zero(f) {
            return (0..field.size()).map(|x| ring.from_field_elt(x)).collect();
        }
        return vec![ring.zero()];
    }
    let n = if ring.is_zero(f) || ring.valuation(f) > 0 { ring.p() } else { 1 };
    (0..n).map(|x| ring.from_int(x as i64)).collect()
}

#[derive(Clone, Debug)]
pub struct OrdinaryLimit {
    pub complex: FreeComplex,
    /// g_c : F_∞ ⊗ R_c -> M_c
    pub g: Vec<ChainMap>,
    /// g'_c : M_c -> F_∞ ⊗ R_c
    pub g_prime: Vec<ChainMap>,
    pub s_inf: Option<ChainMap>,
    /// g'_c g_c = 1
    pub section: Vec<bool>,
    /// f ∘ (g_c ⊗ R_{c-1}) ≃ g_{c-1} and g'_{c-1} ∘ f ≃ g'_c ⊗ R_{c-1}
    pub compatible: Vec<bool>,
    /// g_c g'_c is idempotent up to homotopy
    pub idempotent: Vec<bool>,
    /// H(g_c g'_c) is the ordinary projector, and H(F_∞ ⊗ R_c) maps onto the ordinary part
    pub projector: Vec<bool>,
    /// s_∞ ⊗ R_c ≃ g'_c s_c g_c
    pub s_matches: Vec<bool>,
    pub s_unique: Option<bool>,
    pub limit: GoodLimit,
}

impl OrdinaryLimit {
    pub fn verified(&self) -> bool {
        let all = |v: &[bool]| v.iter().all(|&x| x);
        self.complex.is_minimal()
            && all(&self.section)
            && all(&self.compatible)
            && all(&self.idempotent)
            && all(&self.projector)
            && all(&self.s_matches)
            && self.s_unique != Some(false)
            && self.limit.verified()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "complex": self.complex.to_json(),
            "g": self.g.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            "g_prime": self.g_prime.iter().map(|f| f.to_json()).collect::<Vec<_>>(),
            "s_inf": self.s_inf.as_ref().map(|s| s.to_json()),
            "section": self.section,
            "compatible": self.compatible,
            "idempotent": self.idempotent,
            "projector": self.projector,
            "s_matches": self.s_matches,
            "s_unique": self.s_unique,
            "verified": self.verified(),
        })
    }
}

fn endo(tower: &ComplexTower, k: usize, which: &str) -> Result<Option<ChainMap>> {
    let lv = &tower.levels[k];
    let m = if which == "t" { &lv.t } else { &lv.s };
    match m {
        None => Ok(None),
        Some(m) => {
            if let Some(i) = m.commutator_defect() {
                return Err(Error::IncompatibleTower { level: k + 1, reason: format!("{which} is not a chain map in degree {i}") });
            }
            Ok(Some(m.clone()))
        }
    }
}

/// Whether H(p) is the ordinary projector of H(t) in every degree of C, and
/// H(g) maps H(F) isomorphically onto the ordinary part.
fn projects_onto_ordinary(c: &FreeComplex, t: &ChainMap, proj: &ChainMap, g: &ChainMap) -> Result<bool> {
    for (&i, h) in &homology(c).degrees {
        let m = PresentedModule::from_homology(h);
        let d = module_ordinary(&m, &induced_map(t, h, h))?;
        if !m.same_map(&d.e, &induced_map(proj, h, h)) {
            return Ok(false);
        }
        let hf = homology_at(&g.source, i);
        let img = induced_map(g, &hf, h);
        let hf_size = PresentedModule::from_homology(&hf).size();
        if m.image(&img) != m.image(&d.e) || hf_size != m.image_size(&d.e) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Glue the ordinary parts of a tower with endomorphisms t_c.
pub fn glue_ordinary(tower: &ComplexTower) -> Result<OrdinaryLimit> {
    tower.check_shape()?;
    let n = tower.len();
    let trans = transitions(tower);
    let mut ts = Vec::new();
    let mut ss = Vec::new();
    for k in 0..n {
        ts.push(endo(tower, k, "t")?.ok_or_else(|| Error::InvalidInput(format!("level {} has no t", k + 1)))?);
        ss.push(endo(tower, k, "s")?);
    }
    let with_s = ss.iter().all(|s| s.is_some());
    if !with_s && ss.iter().any(|s| s.is_some()) {
        return Err(Error::InvalidInput("s must be given on every level or on none".into()));
    }
    let step = |k: usize| tower.chain.step(k);
    for k in 1..n {
        let f = &trans[k];
        if let Some(i) = f.commutator_defect() {
            return Err(Error::IncompatibleTower { level: k + 1, reason: format!("transition is not a chain map in degree {i}") });
        }
        let tdown = ts[k].base_change(&step(k - 1)).retarget(&f.source, &f.source);
        if !homotopic(&f.compose(&tdown), &ts[k - 1].compose(f))? {
            return Err(Error::IncompatibleTower { level: k + 1, reason: "transition does not commute with t".into() });
        }
        if with_s {
            let sk = ss[k].as_ref().unwrap();
            let sdown = sk.base_change(&step(k - 1)).retarget(&f.source, &f.source);
            if !homotopic(&f.compose(&sdown), &ss[k - 1].as_ref().unwrap().compose(f))? {
                return Err(Error::IncompatibleTower { level: k + 1, reason: "transition does not commute with s".into() });
            }
        }
    }
    if with_s {
        for k in 0..n {
            let s = ss[k].as_ref().unwrap();
            if !homotopic(&s.compose(&ts[k]), &ts[k].compose(s))? {
                return Err(Error::IncompatibleTower { level: k + 1, reason: "s and t do not commute".into() });
            }
        }
    }

    // levelwise ordinary parts of the minimal models, with I_c : F_c -> M_c and
    // P_c : M_c -> F_c, P_c I_c = 1
    let mut fs = Vec::new();
    let mut incl = Vec::new();
    let mut proj = Vec::new();
    for k in 0..n {
        let mz = minimalize(&tower.levels[k].complex);
        let tk = mz.g.compose(&ts[k]).compose(&mz.f);
        let parts = complex_ordinary(&mz.complex, &tk)?;
        incl.push(mz.f.compose(&parts.ord_incl));
        proj.push(parts.ord_proj.compose(&mz.g));
        fs.push(parts.ord);
    }
    let mut ftrans = vec![ChainMap::identity(&fs[0])];
    for k in 1..n {
        let a = proj[k - 1].compose(&trans[k]).compose(&incl[k].base_change(&step(k - 1)).retarget(
            &fs[k].base_change(&step(k - 1)),
            &trans[k].source,
        ));
        if a.inverse().is_none() {
            return Err(Error::OrdinaryTransitionNotIso { level: k + 1 });
        }
        ftrans.push(a);
    }
    let limit = glue_isos(tower, &fs, &ftrans);
    let f_inf = limit.complex.clone();
    let b = &limit.isos;
    let g: Vec<ChainMap> = (0..n).map(|k| incl[k].compose(&b[k])).collect();
    let g_prime: Vec<ChainMap> = (0..n).map(|k| b[k].inverse().expect("iso").compose(&proj[k])).collect();

    let mut section = Vec::new();
    let mut compatible = vec![true];
    let mut idempotent = Vec::new();
    let mut projector = Vec::new();
    for k in 0..n {
        let m = &tower.levels[k].complex;
        let fk = &g[k].source;
        section.push(g_prime[k].compose(&g[k]).sub(&ChainMap::identity(fk)).is_zero());
        let e = g[k].compose(&g_prime[k]);
        idempotent.push(homotopic(&e.compose(&e), &e)?);
        projector.push(projects_onto_ordinary(m, &ts[k], &e, &g[k])?);
        if k > 0 {
            let f = &trans[k];
            let gd = g[k].base_change(&step(k - 1)).retarget(&g[k - 1].source, &f.source);
            let gpd = g_prime[k].base_change(&step(k - 1)).retarget(&f.source, &g[k - 1].source);
            compatible.push(homotopic(&f.compose(&gd), &g[k - 1])? && homotopic(&g_prime[k - 1].compose(f), &gpd)?);
        }
    }

    let (s_inf, s_matches, s_unique) = if with_s {
        let sp: Vec<ChainMap> = (0..n).map(|k| g_prime[k].compose(ss[k].as_ref().unwrap()).compose(&g[k])).collect();
        let s_inf = sp[n - 1].retarget(&f_inf, &f_inf);
        let mut matches = Vec::new();
        for k in 0..n {
            let down = s_inf.base_change(&tower.chain.reds[k]).retarget(&sp[k].source, &sp[k].source);
            matches.push(homotopic(&down, &sp[k])?);
        }
        let basis = homotopy_classes(&f_inf, &f_inf)?;
        let top_basis = homotopy_classes(&sp[n - 1].source, &sp[n - 1].source)?;
        let unique = injective_on_classes(&basis, &top_basis, |x| {
            x.base_change(&tower.chain.reds[n - 1]).retarget(&sp[n - 1].source, &sp[n - 1].source)
        });
        (Some(s_inf), matches, Some(unique))
    } else {
        (None, Vec::new(), None)
    };
    Ok(OrdinaryLimit {
        complex: f_inf,
        g,
        g_prime,
        s_inf,
        section,
        compatible,
        idempotent,
        projector,
        s_matches,
        s_unique,
        limit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tower::{QuotientChain, TowerLevel};

    fn z27() -> QuotientChain {
        QuotientChain::p_adic(3, 3).unwrap()
    }

    #[test]
    fn constant_free_tower() {
        let chain = z27();
        let m = FreeComplex::free(&chain.top, 0, 1);
        let l = glue_good(&ComplexTower::constant(&chain, &m, None, None)).unwrap();
        assert_eq!(l.complex, m);
        assert!(l.verified());
    }

    #[test]
    fn multiplication_by_p_limit_homology() {
        let chain = z27();
        let m = FreeComplex::two_term(0, Mat::from_ints(&chain.top, &[vec![3]]));
        let l = glue_good(&ComplexTower::constant(&chain, &m, None, None)).unwrap();
        assert_eq!(l.complex, m);
        assert!(l.verified());
        // H^0 of [R_c --3--> R_c] is Z/3 on the first level, Z/3 after that
        let h0 = l.homology.iter().find(|d| d.degree == 0).unwrap();
        assert_eq!(h0.lengths, vec![1, 1, 1]);
        assert_eq!(h0.limit_length, 1);
        let h1 = l.homology.iter().find(|d| d.degree == 1).unwrap();
        assert_eq!(h1.lengths, vec![1, 1, 1]);
    }

    #[test]
    fn non_isomorphic_transition_is_rejected() {
        let chain = QuotientChain::p_adic(3, 2).unwrap();
        let m = FreeComplex::free(&chain.top, 0, 1);
        let mut tower = ComplexTower::constant(&chain, &m, None, None);
        let r1 = &chain.rings[0];
        let c1 = FreeComplex::free(r1, 0, 1);
        tower.levels[1].transition = Some(ChainMap::zero(&c1, &c1));
        assert!(matches!(glue_good(&tower), Err(Error::IncompatibleTower { level: 2, .. })));
    }

    #[test]
    fn padded_tower_has_the_same_minimal_limit() {
        let chain = z27();
        let m = FreeComplex::two_term(0, Mat::from_ints(&chain.top, &[vec![3, 0], vec![0, 9]]));
        let plain = glue_minimal(&ComplexTower::constant(&chain, &m, None, None)).unwrap();
        let pad = m.direct_sum(&FreeComplex::two_term(0, Mat::from_ints(&chain.top, &[vec![1]])));
        let padded_tower = ComplexTower::constant(&chain, &pad, None, None);
        let padded = glue_minimal(&padded_tower).unwrap();
        assert!(plain.verified() && padded.verified());
        assert!(find_isomorphism(&plain.complex, &padded.complex, 1 << 16).unwrap().is_some());
    }

    #[test]
    fn contractible_tower_glues_to_zero() {
        let chain = z27();
        let m = FreeComplex::two_term(0, Mat::from_ints(&chain.top, &[vec![1]]));
        let l = glue_minimal(&ComplexTower::constant(&chain, &m, None, None)).unwrap();
        assert_eq!(l.complex.total_rank(), 0);
        assert!(l.verified());
    }

    #[test]
    fn all_ones_endomorphism_keeps_rank_one() {
        let chain = QuotientChain::p_adic(3, 2).unwrap();
        let m = FreeComplex::free(&chain.top, 0, 2);
        let t = ChainMap::from_fn(&m, &m, |_| Mat::from_ints(&chain.top, &[vec![1, 1], vec![1, 1]]));
        let l = glue_ordinary(&ComplexTower::constant(&chain, &m, Some(&t), Some(&t))).unwrap();
        assert_eq!(l.complex.ranks(), &[1]);
        assert!(l.verified(), "{}", l.to_json());
    }

    #[test]
    fn identity_and_zero_endomorphisms() {
        let chain = z27();
        let m = FreeComplex::two_term(0, Mat::from_ints(&chain.top, &[vec![3, 1]]));
        let id = ChainMap::identity(&m);
        let l = glue_ordinary(&ComplexTower::constant(&chain, &m, Some(&id), None)).unwrap();
        let full = glue_minimal(&ComplexTower::constant(&chain, &m, None, None)).unwrap();
        assert!(l.verified());
        assert!(find_isomorphism(&l.complex, &full.complex, 1 << 16).unwrap().is_some());
        let z = ChainMap::zero(&m, &m);
        let l = glue_ordinary(&ComplexTower::constant(&chain, &m, Some(&z), None)).unwrap();
        assert_eq!(l.complex.total_rank(), 0);
        assert!(l.verified());
    }

    #[test]
    fn transition_killing_the_ordinary_part_is_reported() {
        let chain = QuotientChain::p_adic(3, 2).unwrap();
        let m = FreeComplex::free(&chain.top, 0, 1);
        let id = ChainMap::identity(&m);
        let mut tower = ComplexTower::constant(&chain, &m, Some(&id), None);
        let c1 = &tower.levels[0].complex.clone();
        tower.levels[1] = TowerLevel { transition: Some(ChainMap::zero(c1, c1)), ..tower.levels[1].clone() };
        assert!(matches!(glue_ordinary(&tower), Err(Error::OrdinaryTransitionNotIso { level: 2 })));
    }
}
