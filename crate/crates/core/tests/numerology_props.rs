use ordkit::numerology::{
    balanced_ledger, euler_characteristic, odd_archimedean_h0, selmer_dimension, space_dims, tw_presentation, FieldShape,
    SelmerInput, TateInputs,
};
use ordkit::Error;
use proptest::prelude::*;

/// (dim G/K, rank G − rank K) per place, from SL_n(R)/SO(n) and SL_n(C)/SU(n).
fn oracle(r1: u64, r2: u64, n: u64) -> (i64, i64) {
    let (r1, r2, n) = (r1 as i64, r2 as i64, n as i64);
    let so_dim = n * (n - 1) / 2;
    let real = ((n * n - 1) - so_dim, (n - 1) - n / 2);
    let complex = (2 * (n * n - 1) - (n * n - 1), 2 * (n - 1) - (n - 1));
    (r1 * real.0 + r2 * complex.0, r1 * real.1 + r2 * complex.1)
}

/// Traceless matrices commuting with diag(1^a, (−1)^b): count the entries
/// whose row and column signs agree, minus the trace condition.
fn real_place_h0(n: u64) -> i64 {
    let a = (n + 1) / 2;
    let sign = |i: u64| i < a;
    let mut c = 0;
    for i in 0..n {
        for j in 0..n {
            if sign(i) == sign(j) {
                c += 1;
            }
        }
    }
    c - 1
}

#[test]
fn space_dims_match_group_dimensions_exhaustively() {
    let mut checked = 0;
    for n in 2..=6 {
        for deg in 1..=8u64 {
            for r2 in 0..=deg / 2 {
                let r1 = deg - 2 * r2;
                let s = space_dims(FieldShape { r1, r2, n }).unwrap();
                let (d, l0) = oracle(r1, r2, n);
                assert_eq!((s.d, s.l0), (d, l0), "r1={r1} r2={r2} n={n}");
                assert_eq!(s.d, 2 * s.q0 + s.l0);
                assert!(s.q0 >= 0 && s.l0 >= 0);
                let h0 = odd_archimedean_h0(FieldShape { r1, r2, n }).unwrap();
                let n_ = n as i64;
                assert_eq!(h0, r1 as i64 * real_place_h0(n) + r2 as i64 * (n_ * n_ - 1));
                assert_eq!(h0, n_ * (n_ - 1) * deg as i64 / 2 + s.l0);
                checked += 1;
            }
        }
    }
    assert!(checked > 100);
}

#[test]
fn totally_complex_specializations() {
    for n in 2..=8u64 {
        for t in 1..=6u64 {
            let s = space_dims(FieldShape { r1: 0, r2: t, n }).unwrap();
            let (n, t) = (n as i64, t as i64);
            assert_eq!(s.d, (n * n - 1) * t);
            assert_eq!(s.l0, (n - 1) * t);
            assert_eq!(s.q0, n * (n - 1) * t / 2);
        }
    }
}

fn selmer_input() -> impl Strategy<Value = SelmerInput> {
    (
        0u64..20,
        prop::collection::vec((0u64..30, 0u64..30), 0..6),
        0u64..3,
        prop::collection::vec(0u64..40, 1..8),
        0u64..8,
    )
        .prop_map(|(h1_dual, s_minus_t, h0_dual, h0_infinity, t)| SelmerInput { h1_dual, s_minus_t, h0_dual, h0_infinity, t })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn euler_forms_agree_on_tate_inputs(input in selmer_input(), n in 2u64..7, degree in 1u64..9) {
        let top = (n * n * degree) as i64;
        let inf: i64 = input.h0_infinity.iter().map(|&h| h as i64).sum();
        let tate = TateInputs { chi_global: top - inf, chi_local_sum: top, n, degree };
        let r = euler_characteristic(&input, Some(&tate)).unwrap();
        prop_assert_eq!(r.raw, Some(r.substituted));
        let off = TateInputs { chi_global: tate.chi_global + 1, ..tate };
        prop_assert!(matches!(euler_characteristic(&input, Some(&off)), Err(Error::InconsistentTateInputs(_))), "shifted global characteristic accepted");
    }

    #[test]
    fn selmer_is_euler_plus_dual_terms(input in selmer_input()) {
        let chi = euler_characteristic(&input, None).unwrap().substituted;
        let expected = chi + input.h1_dual as i64 - input.h0_dual as i64;
        match selmer_dimension(&input) {
            Ok(r) => {
                prop_assert_eq!(r.h1, expected);
                prop_assert_eq!(r.h2, input.h1_dual as i64);
                // χ = h¹ − h² + h³
                prop_assert_eq!(r.chi, r.h1 - r.h2 + input.h0_dual as i64);
            }
            Err(Error::NegativeResult { value, .. }) => prop_assert!(expected < 0 && value == expected),
            Err(e) => prop_assert!(false, "unexpected error {e}"),
        }
    }

    #[test]
    fn presentation_matches_selmer_with_tw_primes(r1 in 0u64..5, r2 in 0u64..4, n in 2u64..6, extra in 0u64..30, t in 1u64..5, dim_lambda in 0i64..40) {
        prop_assume!(r1 + r2 > 0);
        let shape = FieldShape { r1, r2, n };
        let degree = shape.degree();
        let l0 = space_dims(shape).unwrap().l0;
        let inf = odd_archimedean_h0(shape).unwrap() as u64;
        let n_ = n as i64;
        // smallest q with g ≥ 0, plus slack
        let need = n_ * (n_ - 1) * degree as i64 / 2 + l0 + 1 - t as i64;
        let q = (need.max(0) as u64).div_ceil(n - 1) + extra;
        // each Taylor–Wiles prime: ℓ_v = h¹(F_v) = 2(n − 1), h⁰(F_v) = n − 1
        let sel = SelmerInput {
            h1_dual: 0,
            s_minus_t: vec![(2 * (n - 1), n - 1); q as usize],
            h0_dual: 0,
            h0_infinity: vec![inf],
            t,
        };
        let h1 = selmer_dimension(&sel).unwrap().h1;
        let led = balanced_ledger(q, n, degree, t, dim_lambda);
        let p = tw_presentation(q, n, degree, l0, t, Some(&led)).unwrap();
        prop_assert_eq!(p.g, h1);
        prop_assert_eq!(p.dim_r_infinity.unwrap(), p.dim_s_infinity.unwrap() - l0);
        for field in 0..3 {
            let mut bad = led.clone();
            match field {
                0 => bad.framing += n_ * n_,
                1 => bad.delta_rank -= 1,
                _ => bad.dim_a += 1,
            }
            prop_assert!(matches!(tw_presentation(q, n, degree, l0, t, Some(&bad)), Err(Error::LedgerMismatch(_))), "perturbed ledger accepted");
        }
    }
}
