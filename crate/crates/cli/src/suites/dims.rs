use rand::Rng;
use serde_json::{json, Value};

use ordkit::numerology::{
    balanced_ledger, euler_characteristic, odd_archimedean_h0, selmer_dimension, space_dims, tw_presentation, FieldShape,
    SelmerInput, TateInputs,
};
use ordkit::Error;

use super::{fixed, seeded, Case, Item};

/// (dim G/K, rank G − rank K) summed over places, for SL_n(R)/SO(n) and
/// SL_n(C)/SU(n).
fn group_dims(r1: u64, r2: u64, n: u64) -> (i64, i64) {
    let (r1, r2, n) = (r1 as i64, r2 as i64, n as i64);
    let real = ((n * n - 1) - n * (n - 1) / 2, (n - 1) - n / 2);
    let complex = (n * n - 1, n - 1);
    (r1 * real.0 + r2 * complex.0, r1 * real.1 + r2 * complex.1)
}

pub fn numerology(seed: u64) -> (Vec<Item>, Value) {
    let mut shapes = Vec::new();
    for n in 2..=6u64 {
        for deg in 1..=8u64 {
            for r2 in 0..=deg / 2 {
                shapes.push(FieldShape { r1: deg - 2 * r2, r2, n });
            }
        }
    }
    let exhaustive = shapes.len();
    let mut items = fixed("numerology/shapes", shapes, |shape| {
        let mut case = Case::new(json!({"shape": shape}));
        let Some(s) = case.expect(space_dims(shape), "space dims") else { return case };
        let (d, l0) = group_dims(shape.r1, shape.r2, shape.n);
        case.check((s.d, s.l0) == (d, l0), format!("(d, l0) = ({}, {}), expected ({d}, {l0})", s.d, s.l0));
        case.check(s.d == 2 * s.q0 + s.l0, "d != 2 q0 + l0");
        if shape.r1 == 0 {
            let (n, t) = (shape.n as i64, shape.r2 as i64);
            case.check((s.d, s.l0, s.q0) == ((n * n - 1) * t, (n - 1) * t, n * (n - 1) * t / 2), "totally complex specialization");
        }
        if let Some(h0) = case.expect(odd_archimedean_h0(shape), "archimedean h0") {
            let n = shape.n as i64;
            case.check(h0 == n * (n - 1) * shape.degree() as i64 / 2 + s.l0, "archimedean invariants disagree with l0");
        }
        case
    });

    items.extend(seeded("numerology/random", seed, 1000, |_, rng| {
        let input = SelmerInput {
            h1_dual: rng.gen_range(0..20),
            s_minus_t: (0..rng.gen_range(0..6)).map(|_| (rng.gen_range(0..30), rng.gen_range(0..30))).collect(),
            h0_dual: rng.gen_range(0..3),
            h0_infinity: (0..rng.gen_range(1..8)).map(|_| rng.gen_range(0..40)).collect(),
            t: rng.gen_range(0..8),
        };
        let n = rng.gen_range(2..7u64);
        let degree = rng.gen_range(1..9u64);
        let top = (n * n * degree) as i64;
        let inf: i64 = input.h0_infinity.iter().map(|&h| h as i64).sum();
        let tate = TateInputs { chi_global: top - inf, chi_local_sum: top, n, degree };
        let mut case = Case::new(json!({"selmer": input, "tate": tate}));
        if let Some(r) = case.expect(euler_characteristic(&input, Some(&tate)), "euler characteristic") {
            case.check(r.raw == Some(r.substituted), "raw and substituted Euler characteristics differ");
            let expected = r.substituted + input.h1_dual as i64 - input.h0_dual as i64;
            match selmer_dimension(&input) {
                Ok(s) => {
                    case.check(s.h1 == expected, "h1 != chi + h1_dual - h0_dual");
                    case.check(s.chi == s.h1 - s.h2 + input.h0_dual as i64, "chi != h1 - h2 + h3");
                }
                Err(Error::NegativeResult { value, .. }) => case.check(expected < 0 && value == expected, "spurious negative result"),
                Err(e) => case.check(false, e),
            }
        }
        let off = TateInputs { chi_global: tate.chi_global + 1, ..tate };
        case.check(matches!(euler_characteristic(&input, Some(&off)), Err(Error::InconsistentTateInputs(_))), "inconsistent Tate inputs accepted");

        // presentation against the Selmer count with q Taylor–Wiles primes
        let (r1, r2) = loop {
            let (a, b) = (rng.gen_range(0..5u64), rng.gen_range(0..4u64));
            if a + b > 0 {
                break (a, b);
            }
        };
        let shape = FieldShape { r1, r2, n: rng.gen_range(2..6) };
        let (n, degree) = (shape.n, shape.degree());
        let l0 = space_dims(shape).expect("valid shape").l0;
        let t = rng.gen_range(1..5u64);
        let n_ = n as i64;
        let need = n_ * (n_ - 1) * degree as i64 / 2 + l0 + 1 - t as i64;
        let q = (need.max(0) as u64).div_ceil(n - 1) + rng.gen_range(0..30);
        let sel = SelmerInput {
            h1_dual: 0,
            s_minus_t: vec![(2 * (n - 1), n - 1); q as usize],
            h0_dual: 0,
            h0_infinity: vec![odd_archimedean_h0(shape).expect("valid shape") as u64],
            t,
        };
        let led = balanced_ledger(q, n, degree, t, rng.gen_range(0..40));
        if let (Some(h1), Some(p)) = (
            case.expect(selmer_dimension(&sel).map(|r| r.h1), "selmer with TW primes"),
            case.expect(tw_presentation(q, n, degree, l0, t, Some(&led)), "presentation"),
        ) {
            case.check(p.g == h1, format!("g = {} but h1 = {h1}", p.g));
            case.check(p.dim_r_infinity.zip(p.dim_s_infinity).is_some_and(|(r, s)| r == s - l0), "dim R_inf != dim S_inf - l0");
        }
        let mut bad = led.clone();
        bad.framing += n_ * n_;
        case.check(matches!(tw_presentation(q, n, degree, l0, t, Some(&bad)), Err(Error::LedgerMismatch(_))), "perturbed ledger accepted");
        case
    }));
    (items, json!({"shapes": exhaustive}))
}
