//! The three-condition enormous-image test for a finite subgroup of GL_n(k).

use serde_json::{json, Value};

use crate::error::{invalid, Result};
use crate::linalg::FMat;
use crate::rings::field_elt_to_json;

use super::adjoint::{ad_dim, ad_from_coords, cohomology, element_actions, Cohomology};
use super::eigen::{projector, projectors_are_consistent, spectrum, Spectrum};
use super::meataxe::{simple_submodules, Module, SimpleSubmodule};
use super::MatGroup;

#[derive(Clone, Debug)]
pub struct Witness {
    /// Index of h in the enumeration order.
    pub element: usize,
    pub h: FMat,
    pub alpha: u32,
    /// tr(e_{h,α} X) for X the basis vector `vector` of W.
    pub trace: u32,
    pub vector: usize,
    pub projectors_ok: bool,
}

#[derive(Clone, Debug)]
pub struct SimpleReport {
    pub module: SimpleSubmodule,
    pub witness: Option<Witness>,
}

#[derive(Clone, Debug)]
pub struct EnormousReport {
    pub order: usize,
    pub p: u64,
    pub derived_order: usize,
    pub cond1: bool,
    pub cohomology: Cohomology,
    pub cond2: bool,
    pub simples: Vec<SimpleReport>,
    pub cond3: bool,
    pub split_elements: usize,
    pub repeated_eigenvalues: usize,
    pub eigenvalues_not_in_field: usize,
}

impl EnormousReport {
    pub fn enormous(&self) -> bool {
        self.cond1 && self.cond2 && self.cond3
    }

    pub fn failed(&self) -> Vec<&'static str> {
        [("cond1", self.cond1), ("cond2", self.cond2), ("cond3", self.cond3)]
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(c, _)| c)
            .collect()
    }

    pub fn to_json(&self, h: &MatGroup) -> Value {
        let k = &h.k;
        let simples: Vec<Value> = self
            .simples
            .iter()
            .map(|s| {
                let w = s.witness.as_ref().map(|w| {
                    json!({
                        "element": w.element,
                        "h": w.h.to_field_json(k),
                        "alpha": field_elt_to_json(k, w.alpha),
                        "trace": field_elt_to_json(k, w.trace),
                        "basis_vector": w.vector,
                        "projectors_ok": w.projectors_ok,
                    })
                });
                json!({ "submodule": s.module.to_json(), "witness": w })
            })
            .collect();
        json!({
            "order": self.order,
            "p": self.p,
            "cond1": {
                "pass": self.cond1,
                "derived_order": self.derived_order,
                "abelianization_order": self.order / self.derived_order,
            },
            "cond2": {
                "pass": self.cond2,
                "h0": self.cohomology.h0,
                "z1": self.cohomology.z1,
                "b1": self.cohomology.b1,
                "h1": self.cohomology.h1,
            },
            "cond3": {
                "pass": self.cond3,
                "simples": simples,
                "split_elements": self.split_elements,
                "skipped_repeated_eigenvalues": self.repeated_eigenvalues,
                "skipped_eigenvalues_not_in_field": self.eigenvalues_not_in_field,
            },
            "enormous": self.enormous(),
            "failed": self.failed(),
        })
    }
}

/// The adjoint module ad⁰ of H as a module over the generators.
pub fn adjoint_module(h: &MatGroup) -> Module {
    let gens = h.generators.iter().map(|g| super::adjoint::ad_action(&h.k, g, 1)).collect();
    Module { k: h.k.clone(), dim: ad_dim(h.n), gens }
}

/// Condition 1 via p ∤ |H/[H,H]|; condition 2 via explicit fixed points and
/// cocycles; condition 3 via the simple submodules of ad⁰ and a search over
/// all elements with n distinct eigenvalues in k, in enumeration order.
pub fn enormous_check(h: &MatGroup) -> Result<EnormousReport> {
    let k = &h.k;
    let n = h.n;
    let p = k.p();
    if p as usize <= n {
        return invalid(format!("the characteristic {p} must exceed n = {n}"));
    }
    let derived_order = h.derived_subgroup().len();
    let cond1 = (h.order() / derived_order) as u64 % p != 0;

    let coh = cohomology(h, &element_actions(h, None));
    let cond2 = coh.h0 == 0 && coh.h1 == 0;

    let mut split = Vec::new();
    let (mut repeated, mut outside) = (0, 0);
    for (x, g) in h.elements.iter().enumerate() {
        match spectrum(k, g) {
            Spectrum::Distinct(ev) => {
                let es: Vec<FMat> = ev.iter().map(|&a| projector(k, g, a, &ev)).collect();
                split.push((x, ev, es));
            }
            Spectrum::Repeated => repeated += 1,
            Spectrum::NotInField => outside += 1,
        }
    }

    let mut simples = Vec::new();
    for w in simple_submodules(&adjoint_module(h))? {
        let xs: Vec<FMat> = w.basis.iter().map(|b| ad_from_coords(k, n, b)).collect();
        let mut witness = None;
        'search: for (x, ev, es) in &split {
            for (&alpha, e) in ev.iter().zip(es) {
                for (j, m) in xs.iter().enumerate() {
                    let t = e.mul(k, m).trace(k);
                    if t != 0 {
                        let g = &h.elements[*x];
                        witness = Some(Witness {
                            element: *x,
                            h: g.clone(),
                            alpha,
                            trace: t,
                            vector: j,
                            projectors_ok: projectors_are_consistent(k, g, ev),
                        });
                        break 'search;
                    }
                }
            }
        }
        simples.push(SimpleReport { module: w, witness });
    }
    let cond3 = simples.iter().all(|s| s.witness.is_some());
    Ok(EnormousReport {
        order: h.order(),
        p,
        derived_order,
        cond1,
        cohomology: coh,
        cond2,
        simples,
        cond3,
        split_elements: split.len(),
        repeated_eigenvalues: repeated,
        eigenvalues_not_in_field: outside,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repimage::{diag, dihedral_example, enumerate_group, mat};
    use crate::rings::Gf;

    #[test]
    fn dihedral_witnesses() {
        let h = dihedral_example();
        let k = &h.k;
        let r = enormous_check(&h).unwrap();
        assert!(r.enormous());
        let got: Vec<(Vec<Vec<u32>>, FMat, u32, u32)> = r
            .simples
            .iter()
            .map(|s| {
                let w = s.witness.as_ref().unwrap();
                assert!(w.projectors_ok);
                (s.module.basis.clone(), w.h.clone(), w.alpha, w.trace)
            })
            .collect();
        assert_eq!(
            got,
            vec![
                (vec![vec![0, 0, 1]], mat(k, &[&[2, 0], &[0, 3]]), 2, 1),
                (vec![vec![1, 1, 0]], mat(k, &[&[0, 1], &[1, 0]]), 1, 1),
                (vec![vec![1, 4, 0]], mat(k, &[&[0, 2], &[3, 0]]), 1, 3),
            ]
        );
    }

    #[test]
    fn scalars_and_torus_fail_cond2() {
        let k = Gf::prime(5).unwrap();
        let scalars = enumerate_group(&k, 2, &[diag(2, &[2, 2])], 64).unwrap();
        let r = enormous_check(&scalars).unwrap();
        assert_eq!(r.cohomology.h0, 3);
        assert!(r.failed().contains(&"cond2"));
        let torus = enumerate_group(&k, 2, &[diag(2, &[2, 1]), diag(2, &[1, 2])], 64).unwrap();
        let r = enormous_check(&torus).unwrap();
        assert_eq!(r.order, 16);
        assert_eq!(r.cohomology.h0, 1);
        assert!(r.failed().contains(&"cond2"));
    }

    #[test]
    fn small_characteristic_is_rejected() {
        let k = Gf::prime(2).unwrap();
        let g = enumerate_group(&k, 2, &[mat(&k, &[&[0, 1], &[1, 0]])], 8).unwrap();
        assert!(enormous_check(&g).is_err());
    }
}
