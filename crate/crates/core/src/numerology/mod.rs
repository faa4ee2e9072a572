//! Dimension bookkeeping: locally symmetric space dimensions and defect,
//! Euler characteristics and Selmer dimensions of adjoint Galois cohomology,
//! and the variable count of a Taylor–Wiles presentation.
//!
//! Everything here is exact integer arithmetic on user-supplied inputs; no
//! cohomology is computed.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Numbers of real and complex places of a number field, and the rank n.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldShape {
    pub r1: u64,
    pub r2: u64,
    pub n: u64,
}

impl FieldShape {
    pub fn degree(&self) -> u64 {
        self.r1 + 2 * self.r2
    }

    fn check(&self) -> Result<()> {
        if self.n < 2 {
            return invalid("rank n must be at least 2");
        }
        if self.degree() == 0 {
            return invalid("a number field has at least one archimedean place");
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceDims {
    pub d: i64,
    pub l0: i64,
    pub q0: i64,
}

pub fn space_dims(shape: FieldShape) -> Result<SpaceDims> {
    shape.check()?;
    let (r1, r2, n) = (shape.r1 as i64, shape.r2 as i64, shape.n as i64);
    let d = r1 * ((n - 1) * (n + 2) / 2) + r2 * (n * n - 1);
    let l0 = if n % 2 == 0 { r1 * (n - 2) / 2 } else { r1 * (n - 1) / 2 } + r2 * (n - 1);
    debug_assert_eq!((d - l0) % 2, 0);
    let q0 = (d - l0) / 2;
    assert_eq!(d, 2 * q0 + l0);
    Ok(SpaceDims { d, l0, q0 })
}

/// Σ_{v|∞} h⁰(F_v, ad⁰) for a totally odd representation: a complex place
/// contributes n² − 1, a real place a² + b² − 1 with complex conjugation
/// conjugate to diag(1^a, (−1)^b), |a − b| ≤ 1.
pub fn odd_archimedean_h0(shape: FieldShape) -> Result<i64> {
    shape.check()?;
    let n = shape.n as i64;
    let (a, b) = ((n + 1) / 2, n / 2);
    Ok(shape.r1 as i64 * (a * a + b * b - 1) + shape.r2 as i64 * (n * n - 1))
}

/// Local and global terms of the Selmer dimension formula.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerInput {
    /// h¹_{S,T}(ad⁰(1)), the dual Selmer dimension.
    pub h1_dual: u64,
    /// (ℓ_v, h⁰(F_v, ad⁰)) for each v ∈ S − T.
    #[serde(default)]
    pub s_minus_t: Vec<(u64, u64)>,
    /// h⁰(F, ad⁰(1)).
    #[serde(default)]
    pub h0_dual: u64,
    /// h⁰(F_v, ad⁰) for each archimedean v.
    #[serde(default)]
    pub h0_infinity: Vec<u64>,
    /// #T.
    pub t: u64,
}

impl SelmerInput {
    fn local_sum(&self) -> i64 {
        self.s_minus_t.iter().map(|&(l, h)| l as i64 - h as i64).sum()
    }

    fn infinity_sum(&self) -> i64 {
        self.h0_infinity.iter().map(|&h| h as i64).sum()
    }
}

/// Optional inputs for the unsubstituted Euler characteristic.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TateInputs {
    /// χ(F_S/F, ad⁰).
    pub chi_global: i64,
    /// Σ_{v∈S} χ(F_v, ad⁰).
    pub chi_local_sum: i64,
    pub n: u64,
    pub degree: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerReport {
    /// −Σ_∞ h⁰ + Σ_{S−T}(ℓ_v − h⁰) − 1 + #T.
    pub substituted: i64,
    /// χ_global − Σ χ_local + Σ_{S−T}(ℓ_v − h⁰) − 1 + #T, when Tate inputs
    /// are given.
    pub raw: Option<i64>,
}

/// Euler characteristic χ_{S,T}(ad⁰), in the sign convention
/// χ = −h⁰ + h¹ − h² + h³.
pub fn euler_characteristic(input: &SelmerInput, tate: Option<&TateInputs>) -> Result<EulerReport> {
    let tail = input.local_sum() - 1 + input.t as i64;
    let substituted = -input.infinity_sum() + tail;
    let raw = match tate {
        None => None,
        Some(ti) => {
            let top = (ti.n * ti.n * ti.degree) as i64;
            if ti.chi_local_sum != top {
                return Err(Error::InconsistentTateInputs(format!(
                    "sum of local characteristics {} ≠ n²[F:Q] = {top}",
                    ti.chi_local_sum
                )));
            }
            if ti.chi_global != top - input.infinity_sum() {
                return Err(Error::InconsistentTateInputs(format!(
                    "global characteristic {} ≠ n²[F:Q] − Σ_∞ h⁰ = {}",
                    ti.chi_global,
                    top - input.infinity_sum()
                )));
            }
            let raw = ti.chi_global - ti.chi_local_sum + tail;
            assert_eq!(raw, substituted, "Tate substitution is an identity");
            Some(raw)
        }
    };
    Ok(EulerReport { substituted, raw })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SelmerReport {
    pub h1: i64,
    /// h²_{S,T}(ad⁰) = h¹_{S,T}(ad⁰(1)).
    pub h2: i64,
    pub chi: i64,
}

/// h¹_{S,T}(ad⁰) = h¹_{S,T}(ad⁰(1)) + Σ_{S−T}(ℓ_v − h⁰) − h⁰(F, ad⁰(1))
/// − Σ_∞ h⁰ − 1 + #T.
pub fn selmer_dimension(input: &SelmerInput) -> Result<SelmerReport> {
    let h1 = input.h1_dual as i64 + input.local_sum() - input.h0_dual as i64 - input.infinity_sum() - 1 + input.t as i64;
    if h1 < 0 {
        return Err(Error::NegativeResult { what: "h1_S,T(ad0)".into(), value: h1 });
    }
    let chi = euler_characteristic(input, None)?.substituted;
    // χ = h¹ − h² + h³ with h⁰_{S,T} = 0 and h³ = h⁰(F, ad⁰(1))
    debug_assert_eq!(chi, h1 - input.h1_dual as i64 + input.h0_dual as i64);
    Ok(SelmerReport { h1, h2: input.h1_dual as i64, chi })
}

/// Itemized dimensions for dim R_∞ = dim S_∞ − l_0.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimLedger {
    /// dim Λ.
    pub dim_lambda: i64,
    /// dim of the framed local coefficient algebra A (R_∞ = A⟦X_1..X_g⟧).
    pub dim_a: i64,
    /// rank of Δ_∞, expected (n − 1)q.
    pub delta_rank: i64,
    /// framing variables, expected #T·n² − 1.
    pub framing: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Presentation {
    pub g: i64,
    /// dim A forced by the identity: dim Λ + (n² − 1)#T + n(n − 1)[F:Q]/2.
    pub dim_a_required: Option<i64>,
    pub dim_r_infinity: Option<i64>,
    pub dim_s_infinity: Option<i64>,
}

/// g = (n − 1)q − n(n − 1)[F:Q]/2 − l_0 − 1 + #T, and the dimension ledger
/// check dim A + g = dim S_∞ − l_0.
pub fn tw_presentation(q: u64, n: u64, degree: u64, l0: i64, t: u64, ledger: Option<&DimLedger>) -> Result<Presentation> {
    if n < 2 || degree == 0 {
        return invalid("need n ≥ 2 and a positive degree");
    }
    let (q, n, degree, t) = (q as i64, n as i64, degree as i64, t as i64);
    let g = (n - 1) * q - n * (n - 1) * degree / 2 - l0 - 1 + t;
    if g < 0 {
        return Err(Error::NegativeResult { what: "g".into(), value: g });
    }
    let Some(led) = ledger else {
        return Ok(Presentation { g, dim_a_required: None, dim_r_infinity: None, dim_s_infinity: None });
    };
    let required = led.dim_lambda + (n * n - 1) * t + n * (n - 1) * degree / 2;
    let mut diffs = Vec::new();
    if led.delta_rank != (n - 1) * q {
        diffs.push(format!("delta_rank: supplied {}, expected (n-1)q = {}", led.delta_rank, (n - 1) * q));
    }
    if led.framing != t * n * n - 1 {
        diffs.push(format!("framing: supplied {}, expected #T*n^2 - 1 = {}", led.framing, t * n * n - 1));
    }
    if led.dim_a != required {
        diffs.push(format!("dim_a: supplied {}, required {required}", led.dim_a));
    }
    let dim_r = led.dim_a + g;
    let dim_s = led.dim_lambda + led.delta_rank + led.framing;
    if dim_r != dim_s - l0 {
        diffs.push(format!("dim R_inf = {dim_r} but dim S_inf - l_0 = {}", dim_s - l0));
    }
    if !diffs.is_empty() {
        return Err(Error::LedgerMismatch(diffs.join("; ")));
    }
    Ok(Presentation { g, dim_a_required: Some(required), dim_r_infinity: Some(dim_r), dim_s_infinity: Some(dim_s) })
}

/// The ledger that balances for the given data.
pub fn balanced_ledger(q: u64, n: u64, degree: u64, t: u64, dim_lambda: i64) -> DimLedger {
    let (q, n, degree, t) = (q as i64, n as i64, degree as i64, t as i64);
    DimLedger {
        dim_lambda,
        dim_a: dim_lambda + (n * n - 1) * t + n * (n - 1) * degree / 2,
        delta_rank: (n - 1) * q,
        framing: t * n * n - 1,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(r1: u64, r2: u64, n: u64) -> FieldShape {
        FieldShape { r1, r2, n }
    }

    #[test]
    fn space_dims_examples() {
        assert_eq!(space_dims(shape(0, 1, 2)).unwrap(), SpaceDims { d: 3, l0: 1, q0: 1 });
        assert_eq!(space_dims(shape(1, 0, 2)).unwrap(), SpaceDims { d: 2, l0: 0, q0: 1 });
        assert_eq!(space_dims(shape(1, 0, 3)).unwrap(), SpaceDims { d: 5, l0: 1, q0: 2 });
        assert!(space_dims(shape(1, 0, 1)).is_err());
    }

    #[test]
    fn euler_examples() {
        let base = SelmerInput { t: 3, ..Default::default() };
        assert_eq!(euler_characteristic(&base, None).unwrap().substituted, 2);
        let mut one = base.clone();
        one.s_minus_t.push((4, 4));
        assert_eq!(euler_characteristic(&one, None).unwrap().substituted, 2);
        let tate = TateInputs { chi_global: 12, chi_local_sum: 12, n: 2, degree: 3 };
        assert_eq!(euler_characteristic(&base, Some(&tate)).unwrap().raw, Some(2));
        let bad = TateInputs { chi_global: 11, ..tate };
        assert!(matches!(euler_characteristic(&base, Some(&bad)), Err(Error::InconsistentTateInputs(_))));
    }

    #[test]
    fn selmer_examples() {
        let t1 = SelmerInput { t: 1, ..Default::default() };
        assert_eq!(selmer_dimension(&t1).unwrap().h1, 0);
        let t2 = SelmerInput { t: 2, ..Default::default() };
        assert_eq!(selmer_dimension(&t2).unwrap().h1, 1);
        let neg = SelmerInput { t: 1, h0_dual: 1, ..Default::default() };
        assert!(matches!(selmer_dimension(&neg), Err(Error::NegativeResult { value: -1, .. })));
    }

    #[test]
    fn presentation_examples() {
        // [F:Q] = 2 totally complex, n = 2, l_0 = 1, #T = 1: g = q − 3
        let l0 = space_dims(shape(0, 1, 2)).unwrap().l0;
        for q in 3..10 {
            let led = balanced_ledger(q, 2, 2, 1, 4);
            let p = tw_presentation(q, 2, 2, l0, 1, Some(&led)).unwrap();
            assert_eq!(p.g, q as i64 - 3);
            assert_eq!(p.dim_r_infinity.unwrap(), p.dim_s_infinity.unwrap() - l0);
        }
        let mut led = balanced_ledger(5, 2, 2, 1, 4);
        led.framing += 4;
        assert!(matches!(tw_presentation(5, 2, 2, 1, 1, Some(&led)), Err(Error::LedgerMismatch(m)) if m.contains("framing")));
    }
}
