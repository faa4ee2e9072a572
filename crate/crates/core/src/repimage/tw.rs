//! Search for Taylor–Wiles witnesses in a finite model: an extension Γ → H
//! (ρ = the top-left n×n block), a character ω of Γ and a 1-cocycle φ of Γ
//! valued in ad⁰ with the action g·X = ω(g) ρ(g) X ρ(g)⁻¹.

use std::collections::HashMap;

use serde_json::{json, Value};

use crate::error::{invalid, Error, Result};
use crate::linalg::{gf_row_reduce, FMat};
use crate::rings::{field_elt_from_json, field_elt_to_json};

use super::adjoint::{ad_action, ad_coords, ad_dim, ad_from_coords};
use super::eigen::{projector, spectrum, Spectrum};
use super::{enumerate_group, group_parts_from_json, MatGroup};

/// Γ, the degree n of ρ, and φ and ω on the generators of Γ.
#[derive(Clone, Debug)]
pub struct TwInput {
    pub gamma: MatGroup,
    pub n: usize,
    pub phi: Vec<FMat>,
    pub omega: Vec<u32>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TwOutcome {
    Found {
        sigma: usize,
        alpha: u32,
        trace: u32,
        /// (τ, σ0) when σ = τσ0 came from the kernel correction step.
        corrected: Option<(usize, usize)>,
    },
    NotFound {
        candidates: usize,
        kernel: usize,
    },
}

#[derive(Clone, Debug)]
pub struct TwReport {
    pub outcome: TwOutcome,
    pub gamma_order: usize,
    pub kernel_order: usize,
    pub candidates: usize,
    pub is_coboundary: bool,
}

impl TwReport {
    pub fn found(&self) -> bool {
        matches!(self.outcome, TwOutcome::Found { .. })
    }

    pub fn to_json(&self, input: &TwInput) -> Value {
        let k = &input.gamma.k;
        let outcome = match &self.outcome {
            TwOutcome::Found { sigma, alpha, trace, corrected } => json!({
                "found": true,
                "step": if corrected.is_some() { "kernel-correction" } else { "direct" },
                "sigma": sigma,
                "rho_sigma": input.rho(*sigma).to_field_json(k),
                "alpha": field_elt_to_json(k, *alpha),
                "trace": field_elt_to_json(k, *trace),
                "tau": corrected.map(|c| c.0),
                "sigma0": corrected.map(|c| c.1),
            }),
            TwOutcome::NotFound { candidates, kernel } => json!({
                "found": false,
                "searched_candidates": candidates,
                "searched_kernel": kernel,
            }),
        };
        json!({
            "gamma_order": self.gamma_order,
            "kernel_order": self.kernel_order,
            "candidates": self.candidates,
            "is_coboundary": self.is_coboundary,
            "outcome": outcome,
        })
    }
}

impl TwInput {
    pub fn rho(&self, x: usize) -> FMat {
        let g = &self.gamma.elements[x];
        FMat { rows: self.n, cols: self.n, a: g.a[..self.n].iter().map(|r| r[..self.n].to_vec()).collect() }
    }

    /// `{"gamma": group, "n", "phi": [matrix per generator], "omega"?}`.
    pub fn from_json(v: &Value) -> Result<TwInput> {
        let (k, big, gens, bound) =
            group_parts_from_json(v.get("gamma").ok_or_else(|| Error::InvalidInput("input needs \"gamma\"".into()))?)?;
        let gamma = enumerate_group(&k, big, &gens, bound)?;
        let n = v.get("n").and_then(Value::as_u64).ok_or_else(|| Error::InvalidInput("input needs \"n\"".into()))? as usize;
        let phi = v
            .get("phi")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::InvalidInput("input needs a \"phi\" list".into()))?
            .iter()
            .map(|m| FMat::from_json_square(&k, m, n))
            .collect::<Result<Vec<_>>>()?;
        let omega = match v.get("omega") {
            None => vec![1; gens.len()],
            Some(o) => o
                .as_array()
                .ok_or_else(|| Error::InvalidInput("omega must be a list".into()))?
                .iter()
                .map(|c| field_elt_from_json(&k, c))
                .collect::<Result<Vec<_>>>()?,
        };
        Ok(TwInput { gamma, n, phi, omega })
    }

    pub fn to_json(&self) -> Value {
        let k = &self.gamma.k;
        let mut g = self.gamma.to_json();
        g["bound"] = json!(self.gamma.order());
        json!({
            "gamma": g,
            "n": self.n,
            "phi": self.phi.iter().map(|m| m.to_field_json(k)).collect::<Vec<_>>(),
            "omega": self.omega.iter().map(|&c| field_elt_to_json(k, c)).collect::<Vec<_>>(),
        })
    }

    /// The same class shifted by the coboundary of X: φ(s) + s·X − X.
    pub fn add_coboundary(&self, x: &FMat) -> TwInput {
        let k = &self.gamma.k;
        let mut out = self.clone();
        for (s, p) in out.phi.iter_mut().enumerate() {
            let rho = self.rho(self.gamma.generator_index(s));
            let rinv = rho.inverse(k).expect("invertible");
            let moved = rho.mul(k, x).mul(k, &rinv).scale(k, self.omega[s]);
            *p = p.add(k, &moved).sub(k, x);
        }
        out
    }

    pub fn scale(&self, c: u32) -> TwInput {
        let k = &self.gamma.k;
        let mut out = self.clone();
        for p in out.phi.iter_mut() {
            *p = p.scale(k, c);
        }
        out
    }
}

/// Γ = H ⋉ W for an H-stable subspace W ⊂ ad⁰ (rows of ad⁰ coordinates),
/// with the action twisted by ω (values on the generators of H), together
/// with the tautological cocycle (h, w) ↦ w.
///
/// Elements are block matrices diag(h, [[A_h, w], [0, 1]]), where A_h is
/// the twisted action on W.
pub fn semidirect_extension(h: &MatGroup, w: &[Vec<u32>], omega: Option<&[u32]>, bound: usize) -> Result<TwInput> {
    let k = &h.k;
    let n = h.n;
    let d = ad_dim(n);
    let omega: Vec<u32> = omega.map_or_else(|| vec![1; h.generators.len()], <[u32]>::to_vec);
    if omega.len() != h.generators.len() {
        return Err(Error::DimensionMismatch("one ω value per generator".into()));
    }
    h.extend_character(&omega)?;
    if w.iter().any(|b| b.len() != d) {
        return Err(Error::DimensionMismatch(format!("W must be given in ad⁰ coordinates of length {d}")));
    }
    let mut basis = w.to_vec();
    gf_row_reduce(k, &mut basis);
    basis.retain(|r| r.iter().any(|&x| x != 0));
    if basis.is_empty() {
        return invalid("W must be nonzero");
    }
    let r = basis.len();
    let pivots: Vec<usize> = basis.iter().map(|b| b.iter().position(|&x| x != 0).unwrap()).collect();
    let big = n + r + 1;
    let mut gens = Vec::new();
    for (s, g) in h.generators.iter().enumerate() {
        let act = ad_action(k, g, omega[s]);
        let mut m = FMat::zeros(big, big);
        for i in 0..n {
            m.a[i][..n].copy_from_slice(&g.a[i]);
        }
        for (j, b) in basis.iter().enumerate() {
            let img = act.apply(k, b);
            let mut rest = img.clone();
            for (bb, &p) in basis.iter().zip(&pivots) {
                let c = rest[p];
                for (x, &y) in rest.iter_mut().zip(bb) {
                    *x = k.sub(*x, k.mul(c, y));
                }
            }
            if rest.iter().any(|&x| x != 0) {
                return invalid(format!("W is not stable under generator {s}"));
            }
            for (i, &p) in pivots.iter().enumerate() {
                m.a[n + i][n + j] = img[p];
            }
        }
        m.a[big - 1][big - 1] = 1;
        gens.push(m);
    }
    for j in 0..r {
        let mut m = FMat::identity(big);
        m.a[n + j][big - 1] = 1;
        gens.push(m);
    }
    let gamma = enumerate_group(k, big, &gens, bound)?;
    let mut phi = vec![FMat::zeros(n, n); h.generators.len()];
    phi.extend(basis.iter().map(|b| ad_from_coords(k, n, b)));
    let mut om = omega;
    om.extend(std::iter::repeat(1).take(r));
    Ok(TwInput { gamma, n, phi, omega: om })
}

/// One semidirect extension H ⋉ W with its tautological cocycle for each
/// simple submodule W ⊂ ad⁰ with |H|·|W| ≤ `bound`.
pub fn extensions_by_simples(h: &MatGroup, bound: usize) -> Result<Vec<TwInput>> {
    let mut out = Vec::new();
    for w in super::meataxe::simple_submodules(&super::enormous::adjoint_module(h))? {
        let size = (h.k.size() as u128).pow(w.dim() as u32) * h.order() as u128;
        if size <= bound as u128 {
            out.push(semidirect_extension(h, &w.basis, None, bound)?);
        }
    }
    Ok(out)
}

/// Looks for σ ∈ Γ with ω(σ) = 1, ρ(σ) having n distinct eigenvalues in k,
/// and tr e_{ρ(σ),α} φ(σ) ≠ 0 for some eigenvalue α.
///
/// First every candidate σ0 is tried directly; then each candidate is
/// corrected by τ in the kernel {ρ = 1, ω = 1}, where
/// φ(τσ0) = φ(τ) + φ(σ0).
pub fn tw_witness(input: &TwInput) -> Result<TwReport> {
    let g = &input.gamma;
    let k = &g.k;
    let n = input.n;
    if n == 0 || n > g.n {
        return Err(Error::DimensionMismatch(format!("ρ degree {n} exceeds the matrix size {}", g.n)));
    }
    if input.phi.len() != g.generators.len() || input.omega.len() != g.generators.len() {
        return Err(Error::DimensionMismatch("φ and ω need one value per generator".into()));
    }
    if input.phi.iter().any(|m| m.trace(k) != 0) {
        return invalid("φ must take trace-zero values");
    }
    let order = g.order();
    let rho: Vec<FMat> = (0..order).map(|x| input.rho(x)).collect();
    for x in 0..order {
        for (s, &y) in g.right[x].iter().enumerate() {
            if rho[y] != rho[x].mul(k, &rho[g.generator_index(s)]) {
                return invalid("the top-left block is not a homomorphism");
            }
        }
    }
    let omega = g.extend_character(&input.omega)?;
    if input.phi.iter().all(FMat::is_zero) {
        return Err(Error::ZeroCocycle);
    }

    let acts: Vec<FMat> = (0..order).map(|x| ad_action(k, &rho[x], omega[x])).collect();
    let on_gens: Vec<Vec<u32>> = input.phi.iter().map(|m| ad_coords(n, m)).collect();
    let mut phi = vec![Vec::new(); order];
    phi[0] = vec![0u32; ad_dim(n)];
    let step = |x: usize, s: usize, phi: &[Vec<u32>]| -> Vec<u32> {
        let moved = acts[x].apply(k, &on_gens[s]);
        phi[x].iter().zip(moved).map(|(&a, b)| k.add(a, b)).collect()
    };
    for x in 1..order {
        let (y, s) = g.parent[x].expect("tree parent");
        phi[x] = step(y, s, &phi);
    }
    for x in 0..order {
        for s in 0..g.generators.len() {
            if phi[g.right[x][s]] != step(x, s, &phi) {
                return Err(Error::NotACocycle(format!("φ(xs) ≠ φ(x) + x·φ(s) at element {x}, generator {s}")));
            }
        }
    }
    let is_coboundary = coboundary_solvable(input, &acts, &on_gens);

    let mut spectra: HashMap<&FMat, Option<(Vec<u32>, Vec<FMat>)>> = HashMap::new();
    let mut candidates = Vec::new();
    for x in 0..order {
        if omega[x] != 1 {
            continue;
        }
        let entry = spectra.entry(&rho[x]).or_insert_with(|| match spectrum(k, &rho[x]) {
            Spectrum::Distinct(ev) => {
                let es = ev.iter().map(|&a| projector(k, &rho[x], a, &ev)).collect();
                Some((ev, es))
            }
            _ => None,
        });
        if entry.is_some() {
            candidates.push(x);
        }
    }
    let trace_at = |x: usize, e: &FMat| e.mul(k, &ad_from_coords(k, n, &phi[x])).trace(k);
    let identity = FMat::identity(n);
    let kernel: Vec<usize> = (0..order).filter(|&x| omega[x] == 1 && rho[x] == identity).collect();

    let report = |outcome| TwReport {
        outcome,
        gamma_order: order,
        kernel_order: kernel.len(),
        candidates: candidates.len(),
        is_coboundary,
    };
    for &s0 in &candidates {
        let (ev, es) = spectra[&rho[s0]].as_ref().unwrap();
        for (&alpha, e) in ev.iter().zip(es) {
            let t = trace_at(s0, e);
            if t != 0 {
                return Ok(report(TwOutcome::Found { sigma: s0, alpha, trace: t, corrected: None }));
            }
        }
    }
    for &s0 in &candidates {
        let (ev, es) = spectra[&rho[s0]].as_ref().unwrap();
        for &tau in &kernel {
            for (&alpha, e) in ev.iter().zip(es) {
                if trace_at(tau, e) != 0 {
                    let sigma = g.mul(tau, s0);
                    let t = trace_at(sigma, e);
                    debug_assert_eq!(t, trace_at(tau, e));
                    return Ok(report(TwOutcome::Found { sigma, alpha, trace: t, corrected: Some((tau, s0)) }));
                }
            }
        }
    }
    Ok(report(TwOutcome::NotFound { candidates: candidates.len(), kernel: kernel.len() }))
}

/// Whether φ(s) = s·X − X is solvable for X ∈ ad⁰.
fn coboundary_solvable(input: &TwInput, acts: &[FMat], on_gens: &[Vec<u32>]) -> bool {
    let g = &input.gamma;
    let k = &g.k;
    let d = ad_dim(input.n);
    let id = FMat::identity(d);
    let mut plain = Vec::new();
    let mut augmented = Vec::new();
    for (s, v) in on_gens.iter().enumerate() {
        let a = acts[g.generator_index(s)].sub(k, &id);
        for (i, row) in a.a.into_iter().enumerate() {
            let mut aug = row.clone();
            aug.push(v[i]);
            plain.push(row);
            augmented.push(aug);
        }
    }
    let r1 = gf_row_reduce(k, &mut plain).len();
    let r2 = gf_row_reduce(k, &mut augmented).len();
    r1 == r2
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::repimage::{dihedral_example, mat};

    fn on_h(phi: Vec<FMat>) -> TwInput {
        let h = dihedral_example();
        TwInput { omega: vec![1; h.generators.len()], gamma: h, n: 2, phi }
    }

    #[test]
    fn zero_and_broken_cocycles_are_rejected() {
        let k = dihedral_example().k;
        let z = FMat::zeros(2, 2);
        assert_eq!(tw_witness(&on_h(vec![z.clone(), z.clone()])).unwrap_err(), Error::ZeroCocycle);
        let e12 = mat(&k, &[&[0, 1], &[0, 0]]);
        assert!(matches!(tw_witness(&on_h(vec![e12, z])), Err(Error::NotACocycle(_))));
    }

    #[test]
    fn coboundaries_on_h_have_no_witness() {
        let k = dihedral_example().k;
        let z = FMat::zeros(2, 2);
        let e12 = mat(&k, &[&[0, 1], &[0, 0]]);
        let input = on_h(vec![z.clone(), z]).add_coboundary(&e12);
        let r = tw_witness(&input).unwrap();
        assert!(r.is_coboundary);
        assert_eq!(r.outcome, TwOutcome::NotFound { candidates: 6, kernel: 1 });
    }

    #[test]
    fn tautological_cocycle_on_the_full_extension() {
        let h = dihedral_example();
        let all: Vec<Vec<u32>> = (0..3).map(|i| (0..3).map(|j| u32::from(i == j)).collect()).collect();
        let input = semidirect_extension(&h, &all, None, 2000).unwrap();
        assert_eq!(input.gamma.order(), 1000);
        let r = tw_witness(&input).unwrap();
        assert!(!r.is_coboundary);
        assert!(r.found());
        assert_eq!(r.kernel_order, 125);
    }
}
