//! Monomial images of representations induced from characters of a subgroup
//! of a permutation group.

use std::collections::HashMap;
use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::linalg::FMat;
use crate::rings::{field_elt_from_json, field_elt_to_json, field_from_json, field_to_json, Gf};

use super::eigen::{spectrum, Spectrum};
use super::{enumerate_group, MatGroup, DEFAULT_BOUND};

/// A permutation of {0, …, d−1} as its list of images.
pub type Perm = Vec<u32>;

const GROUP_LIMIT: usize = 1 << 16;

fn compose(a: &[u32], b: &[u32]) -> Perm {
    b.iter().map(|&x| a[x as usize]).collect()
}

fn invert(a: &[u32]) -> Perm {
    let mut out = vec![0u32; a.len()];
    for (i, &x) in a.iter().enumerate() {
        out[x as usize] = i as u32;
    }
    out
}

/// All products of the generators, breadth first from the identity.
fn close(gens: &[Perm], degree: usize) -> Result<Vec<Perm>> {
    let id: Perm = (0..degree as u32).collect();
    let mut seen: HashMap<Perm, ()> = HashMap::from([(id.clone(), ())]);
    let mut out = vec![id];
    let mut i = 0;
    while i < out.len() {
        for g in gens {
            let y = compose(&out[i], g);
            if seen.insert(y.clone(), ()).is_none() {
                if out.len() == GROUP_LIMIT {
                    return Err(Error::BoundExceeded(GROUP_LIMIT));
                }
                out.push(y);
            }
        }
        i += 1;
    }
    Ok(out)
}

/// An abstract group G (permutation generators), a subgroup M, a left
/// transversal g_1 = 1, …, g_n of M in G, and a character χ of M given on
/// the generators of M.
#[derive(Clone, Debug)]
pub struct InducedSpec {
    pub k: Arc<Gf>,
    pub group: Vec<Perm>,
    pub subgroup: Vec<Perm>,
    pub transversal: Vec<Perm>,
    pub chi: Vec<u32>,
    pub bound: usize,
}

/// A validated spec: enumerated G, χ on all of M.
#[derive(Clone, Debug)]
pub struct Induced {
    pub spec: InducedSpec,
    pub elements: Vec<Perm>,
    pub chi: HashMap<Perm, u32>,
}

impl InducedSpec {
    pub fn degree(&self) -> usize {
        self.transversal.len()
    }

    pub fn validate(&self) -> Result<Induced> {
        let d = self.group.first().map_or(0, Vec::len);
        let all = self.group.iter().chain(&self.subgroup).chain(&self.transversal);
        for p in all {
            let mut sorted = p.clone();
            sorted.sort_unstable();
            if p.len() != d || sorted.iter().enumerate().any(|(i, &x)| x as usize != i) {
                return invalid("every permutation must be a bijection of the same degree");
            }
        }
        if self.chi.len() != self.subgroup.len() {
            return Err(Error::DimensionMismatch("one character value per subgroup generator".into()));
        }
        if self.chi.iter().any(|&c| c == 0) {
            return invalid("character values must be nonzero");
        }
        let elements = close(&self.group, d)?;
        let members: HashMap<&Perm, ()> = elements.iter().map(|e| (e, ())).collect();
        if self.subgroup.iter().chain(&self.transversal).any(|p| !members.contains_key(p)) {
            return invalid("subgroup generators and transversal must lie in the group");
        }

        let k = &self.k;
        let id: Perm = (0..d as u32).collect();
        let mut chi = HashMap::from([(id.clone(), 1u32)]);
        let mut queue = vec![id];
        let mut i = 0;
        while i < queue.len() {
            let x = queue[i].clone();
            let cx = chi[&x];
            for (g, &c) in self.subgroup.iter().zip(&self.chi) {
                let y = compose(&x, g);
                let cy = k.mul(cx, c);
                match chi.get(&y) {
                    Some(&old) if old != cy => return invalid("character is not a homomorphism on the subgroup"),
                    Some(_) => {}
                    None => {
                        chi.insert(y.clone(), cy);
                        queue.push(y);
                    }
                }
            }
            i += 1;
        }

        let n = self.degree();
        if n == 0 || self.transversal[0] != (0..d as u32).collect::<Perm>() {
            return Err(Error::NotTransversal("the first representative must be the identity".into()));
        }
        if n * chi.len() != elements.len() {
            return Err(Error::NotTransversal(format!(
                "{n} representatives for index {}",
                elements.len() / chi.len()
            )));
        }
        for a in 0..n {
            for b in a + 1..n {
                if chi.contains_key(&compose(&invert(&self.transversal[a]), &self.transversal[b])) {
                    return Err(Error::NotTransversal(format!("representatives {} and {} share a coset", a + 1, b + 1)));
                }
            }
        }
        Ok(Induced { spec: self.clone(), elements, chi })
    }

    pub fn to_json(&self) -> Value {
        let one_based = |ps: &[Perm]| -> Vec<Vec<u32>> { ps.iter().map(|p| p.iter().map(|x| x + 1).collect()).collect() };
        json!({
            "field": field_to_json(&self.k),
            "group": one_based(&self.group),
            "subgroup": one_based(&self.subgroup),
            "transversal": one_based(&self.transversal),
            "chi": self.chi.iter().map(|&c| field_elt_to_json(&self.k, c)).collect::<Vec<_>>(),
            "bound": self.bound,
        })
    }

    /// `{"field", "group", "subgroup", "transversal", "chi", "bound"?}` with
    /// permutations as 1-based image lists.
    pub fn from_json(v: &Value) -> Result<InducedSpec> {
        let k = field_from_json(v.get("field").ok_or_else(|| Error::InvalidInput("spec needs \"field\"".into()))?)?;
        let perms = |key: &str| -> Result<Vec<Perm>> {
            let raw: Vec<Vec<u32>> = serde_json::from_value(v.get(key).cloned().unwrap_or(Value::Null))
                .map_err(|e| Error::InvalidInput(format!("{key}: {e}")))?;
            raw.into_iter()
                .map(|p| {
                    p.into_iter()
                        .map(|x| x.checked_sub(1).ok_or_else(|| Error::InvalidInput("permutations are 1-based".into())))
                        .collect()
                })
                .collect()
        };
        let chi = v
            .get("chi")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("spec needs a \"chi\" list".into()))?
            .iter()
            .map(|c| field_elt_from_json(&k, c))
            .collect::<Result<Vec<_>>>()?;
        let bound = match v.get("bound") {
            None => DEFAULT_BOUND,
            Some(b) => b.as_u64().ok_or_else(|| Error::InvalidInput("bound must be an integer".into()))? as usize,
        };
        Ok(InducedSpec {
            k,
            group: perms("group")?,
            subgroup: perms("subgroup")?,
            transversal: perms("transversal")?,
            chi,
            bound,
        })
    }
}

impl Induced {
    fn chi_of(&self, m: &Perm) -> Option<u32> {
        self.chi.get(m).copied()
    }

    /// ρ(g) e_i = χ(g_k⁻¹ g g_i) e_k, with k the coset of g g_i.
    pub fn matrix(&self, g: &Perm) -> FMat {
        let t = &self.spec.transversal;
        let n = t.len();
        let inv: Vec<Perm> = t.iter().map(|x| invert(x)).collect();
        let mut m = FMat::zeros(n, n);
        for i in 0..n {
            let y = compose(g, &t[i]);
            for kk in 0..n {
                if let Some(c) = self.chi_of(&compose(&inv[kk], &y)) {
                    m.a[kk][i] = c;
                    break;
                }
            }
        }
        m
    }

    pub fn image(&self) -> Result<MatGroup> {
        let gens: Vec<FMat> = self.spec.group.iter().map(|g| self.matrix(g)).collect();
        enumerate_group(&self.spec.k, self.spec.degree(), &gens, self.spec.bound)
    }

    /// The conjugate character m ↦ χ(g⁻¹ m g) on the subgroup generators.
    fn conjugate(&self, g: &Perm) -> Option<Vec<u32>> {
        let gi = invert(g);
        self.spec.subgroup.iter().map(|m| self.chi_of(&compose(&compose(&gi, m), g))).collect()
    }

    /// Checks the hypotheses under which the induced image is expected to
    /// be enormous: M normal, χ^g ≠ χ off M, the ratios χ^{g_i}/χ^{g_j}
    /// (i ≠ j) pairwise distinct, and an element with n distinct eigenvalues
    /// in k in every coset.
    pub fn hypotheses(&self) -> InducedHypotheses {
        let k = &self.spec.k;
        let n = self.spec.degree();
        let conj: Vec<Option<Vec<u32>>> = self.spec.transversal.iter().map(|g| self.conjugate(g)).collect();
        let normal = self.elements.iter().all(|g| self.conjugate(g).is_some());
        let chi = &conj[0];
        let distinct_conjugates = normal
            && self.elements.iter().all(|g| {
                self.chi_of(g).is_some() || self.conjugate(g).as_ref() != chi.as_ref()
            });
        let mut ratios = Vec::new();
        if normal {
            for i in 0..n {
                for j in 0..n {
                    if i != j {
                        let (a, b) = (conj[i].as_ref().unwrap(), conj[j].as_ref().unwrap());
                        let r: Vec<u32> = a.iter().zip(b).map(|(&x, &y)| k.div(x, y).unwrap()).collect();
                        ratios.push(r);
                    }
                }
            }
        }
        let mut sorted = ratios.clone();
        sorted.sort();
        sorted.dedup();
        let distinct_ratios = normal && sorted.len() == ratios.len();
        let inv: Vec<Perm> = self.spec.transversal.iter().map(|x| invert(x)).collect();
        let mut coset_has_split = vec![false; n];
        for g in &self.elements {
            let c = (0..n).find(|&i| self.chi.contains_key(&compose(&inv[i], g))).unwrap();
            if !coset_has_split[c] && matches!(spectrum(k, &self.matrix(g)), Spectrum::Distinct(_)) {
                coset_has_split[c] = true;
            }
        }
        InducedHypotheses { normal, distinct_conjugates, distinct_ratios, coset_has_split }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InducedHypotheses {
    pub normal: bool,
    pub distinct_conjugates: bool,
    pub distinct_ratios: bool,
    pub coset_has_split: Vec<bool>,
}

impl InducedHypotheses {
    pub fn hold(&self) -> bool {
        self.normal && self.distinct_conjugates && self.distinct_ratios && self.coset_has_split.iter().all(|&b| b)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "normal": self.normal,
            "distinct_conjugates": self.distinct_conjugates,
            "distinct_ratios": self.distinct_ratios,
            "coset_has_split_element": self.coset_has_split,
            "hold": self.hold(),
        })
    }
}

pub fn induced_image(spec: &InducedSpec) -> Result<MatGroup> {
    spec.validate()?.image()
}

/// G = Z/m ⋊ Z/n acting on Z/m by x ↦ x + 1 and x ↦ t·x (t of order n
/// modulo m), M the translations, χ(x ↦ x + 1) = ζ, transversal the powers
/// of x ↦ t·x.
pub fn metacyclic_spec(k: &Arc<Gf>, m: u32, t: u32, zeta: u32) -> Result<InducedSpec> {
    if m < 2 || t == 0 || t >= m {
        return invalid("need m ≥ 2 and 0 < t < m");
    }
    let shift: Perm = (0..m).map(|x| (x + 1) % m).collect();
    let mult: Perm = (0..m).map(|x| (x as u64 * t as u64 % m as u64) as u32).collect();
    let mut n = 1usize;
    let mut tp = t as u64 % m as u64;
    while tp != 1 {
        tp = tp * t as u64 % m as u64;
        n += 1;
        if n > m as usize {
            return invalid("t must be a unit modulo m");
        }
    }
    let mut transversal = vec![(0..m).collect::<Perm>()];
    for i in 1..n {
        let prev: &Perm = &transversal[i - 1];
        transversal.push(compose(prev, &mult));
    }
    Ok(InducedSpec {
        k: k.clone(),
        group: vec![shift.clone(), mult],
        subgroup: vec![shift],
        transversal,
        chi: vec![zeta],
        bound: DEFAULT_BOUND,
    })
}

/// The dihedral spec whose image is the order-8 subgroup of GL_2(F_5).
pub fn dihedral_spec() -> InducedSpec {
    let k = Gf::prime(5).expect("5 is prime");
    metacyclic_spec(&k, 4, 3, 2).expect("valid")
}

/// Smallest field element of exact multiplicative order m.
pub fn element_of_order(k: &Gf, m: u64) -> Option<u32> {
    (1..k.size()).find(|&z| k.order(z) == m)
}

/// Metacyclic induced specs over several fields: dihedral (t = −1, n = 2)
/// and order-3 twists (n = 3). Each entry is (label, spec).
pub fn induced_corpus() -> Vec<(String, InducedSpec)> {
    // (p, modulus, m, t)
    let rows: [(u64, &[u64], u32, u32); 16] = [
        (7, &[0, 1], 3, 2),
        (7, &[0, 1], 6, 5),
        (11, &[0, 1], 5, 4),
        (11, &[0, 1], 10, 9),
        (13, &[0, 1], 3, 2),
        (13, &[0, 1], 6, 5),
        (13, &[0, 1], 12, 11),
        (19, &[0, 1], 9, 8),
        (31, &[0, 1], 5, 4),
        (3, &[1, 0, 1], 8, 7),
        (5, &[2, 0, 1], 12, 11),
        (5, &[0, 1], 4, 3),
        (43, &[0, 1], 7, 2),
        (29, &[0, 1], 7, 2),
        (79, &[0, 1], 13, 3),
        (127, &[0, 1], 7, 2),
    ];
    rows.iter()
        .map(|&(p, modulus, m, t)| {
            let k = Gf::new(p, modulus.to_vec()).expect("corpus fields are valid");
            let zeta = element_of_order(&k, m as u64).expect("corpus characters exist");
            let label = format!("F_{}^{} Z/{} x| Z/{} (t = {})", p, k.degree(), m, order_mod(t, m), t);
            (label, metacyclic_spec(&k, m, t, zeta).expect("valid"))
        })
        .collect()
}

fn order_mod(t: u32, m: u32) -> u32 {
    let (mut x, mut n) = (t % m, 1);
    while x != 1 {
        x = x * t % m;
        n += 1;
    }
    n
}
