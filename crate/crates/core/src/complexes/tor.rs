//! Base change along R -> R/(x) for R = F_p[S] and a single element x.
//!
//! The short exact sequence 0 -> C --x--> C -> C/x -> 0 gives, in every degree q,
//! 0 -> H^q(C) ⊗ R/x -> H^q(C/x) -> Tor_1(H^{q+1}(C), R/x) -> 0. We compute the
//! reduction map and the connecting map explicitly over F_p and compare both ends
//! with the Tor terms read off the invariant factors.

use serde::Serialize;

use super::homology::{homology, homology_at};
use super::FreeComplex;
use crate::error::{Error, Result};
use crate::linalg::euclid::{Euclid, PolyOps};
use crate::linalg::{kernel, rank_mod_m, Mat};
use crate::rings::{Elt, Ideal, Ring};

/// Which element to reduce by.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RegularElement {
    SPower { j: u32 },
    SMinus { u: u64 },
}

#[derive(Clone, Debug, Serialize)]
pub struct TorDegree {
    pub degree: i64,
    /// dim H^q(C/x)
    pub reduced_dim: usize,
    /// dim H^q(C) ⊗ R/x from the invariant factors
    pub tensor_dim: usize,
    /// dim Tor_1(H^{q+1}(C), R/x) from the invariant factors
    pub tor1_dim: usize,
    /// rank of H^q(C) -> H^q(C/x)
    pub reduction_rank: usize,
    /// rank of the connecting map H^q(C/x) -> H^{q+1}(C)
    pub connecting_rank: usize,
    pub exact: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct TorReport {
    pub element: RegularElement,
    pub degrees: Vec<TorDegree>,
    pub ses_holds: bool,
    /// H^i(C/x) = 0 for all i other than the top degree
    pub hypothesis: bool,
    /// under the hypothesis: checked conclusions (vanishing below the top,
    /// base change in the top degree, x regular on the top homology)
    pub conclusions: Option<bool>,
}

impl TorReport {
    pub fn passed(&self) -> bool {
        self.ses_holds && self.conclusions != Some(false)
    }
}

fn poly_of(x: RegularElement, p: u64) -> Vec<u64> {
    match x {
        RegularElement::SPower { j } => {
            let mut v = vec![0; j as usize + 1];
            v[j as usize] = 1;
            v
        }
        RegularElement::SMinus { u } => vec![(p - u % p) % p, 1],
    }
}

fn deg(a: &[u64]) -> usize {
    a.len().saturating_sub(1)
}

fn gcd_deg(ops: &PolyOps, a: &Vec<u64>, b: &Vec<u64>) -> usize {
    let (mut a, mut b) = (a.clone(), b.clone());
    while !ops.is_zero(&b) {
        let r = ops.divrem(&a, &b).1;
        a = b;
        b = r;
    }
    deg(&a)
}

pub fn tor_base_change_check(c: &FreeComplex, x: RegularElement) -> Result<TorReport> {
    if !c.ring.is_poly_pid() {
        return Err(Error::InvalidInput("the Tor check runs over F_p[S]".into()));
    }
    c.validate()?;
    let p = c.ring.p();
    if let RegularElement::SPower { j: 0 } = x {
        return Err(Error::NotRegularElement("S^0 is a unit".into()));
    }
    let ops = PolyOps { p };
    let xp = poly_of(x, p);
    let m = deg(&xp);
    let ideal = match x {
        RegularElement::SPower { j } => Ideal::SPower { j },
        RegularElement::SMinus { u } => Ideal::SMinus { u },
    };
    let red = c.ring.quotient(&ideal)?;
    let cx = c.base_change(&red);
    let fp = Ring::zpc(p, 1)?;
    let hc = homology(c);
    let hx = homology(&cx);

    let tensor_dim = |q: i64| -> usize {
        hc.get(q).map_or(0, |h| {
            h.factors.iter().map(|f| if f.is_empty() { m } else { gcd_deg(&ops, &f.to_vec(), &xp) }).sum()
        })
    };
    let tor1_dim = |q: i64| -> usize {
        hc.get(q).map_or(0, |h| {
            h.factors.iter().filter(|f| !f.is_empty()).map(|f| gcd_deg(&ops, &f.to_vec(), &xp)).sum()
        })
    };

    let mut degrees = Vec::new();
    for q in c.degrees() {
        let hq = hx.get(q).expect("degree in range");
        let n = hq.num_generators();
        // reduction map on cycles and their S-multiples
        let z = kernel(&c.diff(q));
        let mut iota_cols = Vec::new();
        for j in 0..z.cols {
            let mut v = z.col(j);
            for _ in 0..m.max(1) {
                let reduced: Vec<Elt> = v.iter().map(|e| red.apply(e)).collect();
                iota_cols.push(hq.coords(&hq.lift_vec(&reduced)));
                v = v.iter().map(|e| c.ring.mul(e, &shift_elt())).collect();
            }
        }
        let iota = Mat::from_cols(&fp, n, &iota_cols);
        // connecting map: lift, apply d, divide by x, take the class in H^{q+1}(C)
        let target = hc.get(q + 1);
        let tdims: Vec<usize> =
            target.map_or(Vec::new(), |h| h.factors.iter().map(|f| if f.is_empty() { 0 } else { deg(f) }).collect());
        let trows: usize = tdims.iter().sum();
        let mut ok = true;
        let mut delta_cols = Vec::new();
        for j in 0..n {
            let col = hq.reps.col(j);
            let lifted = lift(&cx.ring, &col, hq.is_expanded());
            let dz = c.diff(q).mul_vec(&lifted);
            let mut w = Vec::with_capacity(dz.len());
            for e in &dz {
                let (quo, rem) = ops.divrem(&e.to_vec(), &xp);
                if !rem.is_empty() {
                    ok = false;
                }
                w.push(Elt::from_vec(quo));
            }
            let mut out = vec![fp.zero(); trows];
            if let Some(h) = target {
                let co = h.coords(&w);
                let mut off = 0;
                for (k, f) in h.factors.iter().enumerate() {
                    if f.is_empty() {
                        ok &= co[k].is_empty();
                        continue;
                    }
                    // x kills the class
                    let xc = ops.divrem(&ops.mul(&co[k].to_vec(), &xp), &f.to_vec()).1;
                    ok &= xc.is_empty();
                    for (t, &a) in co[k].iter().enumerate() {
                        out[off + t] = smallvec::smallvec![a];
                    }
                    off += tdims[k];
                }
            }
            delta_cols.push(out);
        }
        let delta = Mat::from_cols(&fp, trows, &delta_cols);
        let reduction_rank = rank_mod_m(&iota);
        let connecting_rank = rank_mod_m(&delta);
        let composite_zero = delta.mul(&iota).is_zero();
        let td = tensor_dim(q);
        let t1 = tor1_dim(q + 1);
        let exact = ok
            && composite_zero
            && reduction_rank == td
            && connecting_rank == t1
            && n == reduction_rank + connecting_rank;
        degrees.push(TorDegree {
            degree: q,
            reduced_dim: n,
            tensor_dim: td,
            tor1_dim: t1,
            reduction_rank,
            connecting_rank,
            exact,
        });
    }
    let ses_holds = degrees.iter().all(|d| d.exact);
    let b = c.hi;
    let hypothesis = degrees.iter().all(|d| d.degree == b || d.reduced_dim == 0);
    let conclusions = hypothesis.then(|| {
        // F_p[S] is not local: vanishing is read at the maximal ideal containing
        // x, i.e. no free part and every torsion factor prime to x
        let vanish = c.degrees().filter(|&i| i != b).all(|i| {
            hc.get(i).is_none_or(|h| h.factors.iter().all(|f| !f.is_empty() && gcd_deg(&ops, &f.to_vec(), &xp) == 0))
        });
        let top = homology_at(c, b);
        let base = tensor_dim(b) == hx.get(b).map_or(0, |h| h.num_generators());
        let regular = top.factors.iter().all(|f| f.is_empty() || gcd_deg(&ops, &f.to_vec(), &xp) == 0);
        vanish && base && regular
    });
    Ok(TorReport { element: x, degrees, ses_holds, hypothesis, conclusions })
}

fn shift_elt() -> Elt {
    smallvec::smallvec![0, 1]
}

/// Lift a vector over R/x (possibly in base coordinates) to polynomials of
/// degree below deg x.
fn lift(quot: &Ring, v: &[Elt], expanded: bool) -> Vec<Elt> {
    let elts = if expanded { Mat::collapse_vec(quot, v) } else { v.to_vec() };
    elts.into_iter()
        .map(|mut e| {
            while e.last() == Some(&0) {
                e.pop();
            }
            e
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rings::RingSpec;

    fn r3() -> Ring {
        Ring::new(&RingSpec::PolyPID { p: 3 }).unwrap()
    }

    fn two_term(r: &Ring, a: &[i64]) -> FreeComplex {
        FreeComplex::two_term(0, Mat::from_fn(r, 1, 1, |_, _| r.canon(a).unwrap()))
    }

    #[test]
    fn s_minus_one_reduced_by_s() {
        let r = r3();
        let c = two_term(&r, &[-1, 1]);
        let rep = tor_base_change_check(&c, RegularElement::SPower { j: 1 }).unwrap();
        assert!(rep.ses_holds);
        assert!(rep.hypothesis);
        assert_eq!(rep.conclusions, Some(true));
        assert!(rep.degrees.iter().all(|d| d.reduced_dim == 0));
    }

    #[test]
    fn torsion_prime_to_x_below_the_top_is_allowed() {
        // R --(S-1)--> R -> 0: H^1 = R/(S-1) vanishes after localizing at (S)
        let v = serde_json::json!({
            "ring": {"kind": "PolyPID", "p": 3},
            "degrees": [0, 2],
            "ranks": {"0": 1, "1": 1, "2": 0},
            "differentials": {"0": [[[2, 1]]], "1": []},
        });
        let c = FreeComplex::from_json(&v).unwrap();
        let rep = tor_base_change_check(&c, RegularElement::SPower { j: 1 }).unwrap();
        assert!(rep.ses_holds && rep.hypothesis);
        assert_eq!(rep.conclusions, Some(true));
        assert!(!homology(&c).get(1).unwrap().is_zero());
    }

    #[test]
    fn s_reduced_by_s() {
        let r = r3();
        let c = two_term(&r, &[0, 1]);
        let rep = tor_base_change_check(&c, RegularElement::SPower { j: 1 }).unwrap();
        assert!(rep.ses_holds);
        assert!(!rep.hypothesis);
        assert_eq!(rep.conclusions, None);
        // H^0(C/S) = k comes entirely from Tor_1(R/(S), R/(S))
        assert_eq!(rep.degrees[0].reduced_dim, 1);
        assert_eq!(rep.degrees[0].tor1_dim, 1);
        assert_eq!(rep.degrees[0].connecting_rank, 1);
    }

    #[test]
    fn zero_complex_passes() {
        let r = r3();
        let c = FreeComplex::zero(&r, 0, 1);
        let rep = tor_base_change_check(&c, RegularElement::SMinus { u: 1 }).unwrap();
        assert!(rep.passed());
    }

    #[test]
    fn unit_rejected() {
        let r = r3();
        let c = FreeComplex::zero(&r, 0, 0);
        assert!(matches!(
            tor_base_change_check(&c, RegularElement::SPower { j: 0 }),
            Err(Error::NotRegularElement(_))
        ));
    }

    #[test]
    fn s_squared_on_mixed_torsion() {
        let r = r3();
        // d = diag(S^3, S - 1, 0): H^1 = R/S^3 ⊕ R/(S-1) ⊕ R
        let d = Mat::diag(&r, &[r.canon(&[0, 0, 0, 1]).unwrap(), r.canon(&[-1, 1]).unwrap(), r.zero()]);
        let c = FreeComplex::two_term(0, d);
        let rep = tor_base_change_check(&c, RegularElement::SPower { j: 2 }).unwrap();
        assert!(rep.ses_holds, "{rep:?}");
        assert_eq!(rep.degrees[1].reduced_dim, 4);
        assert_eq!(rep.degrees[0].reduced_dim, 4);
    }
}
