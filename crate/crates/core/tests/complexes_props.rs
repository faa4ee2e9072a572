use std::collections::BTreeMap;

use ordkit::complexes::homology::{homology, residue_dims};
use ordkit::complexes::random::{random_complex, random_elt};
use ordkit::complexes::truncate::truncate;
use ordkit::complexes::{
    homology_null_generators, homotopy_classes, minimalize, tor_base_change_check, ChainMap, FreeComplex, Homotopy,
    RegularElement,
};
use ordkit::linalg::Mat;
use ordkit::rings::{Ring, RingSpec};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn zpc_case(seed: u64) -> (Ring, FreeComplex) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = if rng.gen_bool(0.5) { 3 } else { 5 };
    let c = rng.gen_range(1..=3);
    let ring = Ring::zpc(p, c).unwrap();
    let len = rng.gen_range(1..=4);
    let cx = random_complex(&ring, 0, len - 1, 5, &mut rng);
    (ring, cx)
}

fn random_homotopy(c: &FreeComplex, rng: &mut ChaCha8Rng) -> Homotopy {
    let comps: BTreeMap<i64, Mat> = c
        .degrees()
        .map(|i| (i, Mat::from_fn(&c.ring, c.rank(i - 1), c.rank(i), |_, _| random_elt(&c.ring, rng))))
        .collect();
    Homotopy::from_comps(c, c, comps)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn minimal_model_matches_homology(seed in any::<u64>()) {
        let (_, c) = zpc_case(seed);
        let m = minimalize(&c);
        prop_assert!(m.complex.is_minimal());
        prop_assert!(m.certify());
        prop_assert_eq!(homology(&m.complex).signature(), homology(&c).signature());
        let dims = residue_dims(&c);
        for i in c.degrees() {
            prop_assert_eq!(m.complex.rank(i), dims[&i]);
        }
    }

    #[test]
    fn homology_witnesses_verify(seed in any::<u64>(), kind in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = match kind {
            0 => Ring::zpc(3, 2).unwrap(),
            1 => Ring::new(&RingSpec::GroupAlg { p: 3, c: 1, delta: vec![3] }).unwrap(),
            _ => Ring::trunc(3, 1, 2, 2).unwrap(),
        };
        let c = random_complex(&ring, 0, 2, 3, &mut rng);
        prop_assert!(homology(&c).verify(&c).is_ok());
    }

    #[test]
    fn null_maps_are_nilpotent_up_to_homotopy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::zpc(3, rng.gen_range(1..=2)).unwrap();
        let d = rng.gen_range(0..=2);
        let c = random_complex(&ring, 0, d, 3, &mut rng);
        let gens = homology_null_generators(&c);
        let mut f = ChainMap::zero(&c, &c);
        for g in &gens {
            f = f.add(&g.scale(&random_elt(&ring, &mut rng)));
        }
        let basis = homotopy_classes(&c, &c).unwrap();
        prop_assert!(basis.is_null(&f.pow(d as u32 + 1)));
    }

    #[test]
    fn tor_sequence_is_exact(seed in any::<u64>(), which in 0usize..3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::new(&RingSpec::PolyPID { p: 3 }).unwrap();
        let c = random_complex(&ring, 0, rng.gen_range(0..=2), 3, &mut rng);
        let x = [RegularElement::SPower { j: 1 }, RegularElement::SPower { j: 2 }, RegularElement::SMinus { u: 1 }][which];
        let rep = tor_base_change_check(&c, x).unwrap();
        prop_assert!(rep.passed(), "{:?}", rep);
    }

    #[test]
    fn truncation_triangle_is_exact(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::zpc(3, rng.gen_range(1..=2)).unwrap();
        let c = random_complex(&ring, 0, 2, 3, &mut rng);
        let n = rng.gen_range(-1..=2);
        let t = truncate(&c, n).unwrap();
        prop_assert!(t.les_verified);
        prop_assert!(t.quasi_iso_verified);
    }

    #[test]
    fn composition_respects_homotopy(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ring = Ring::zpc(3, 2).unwrap();
        let c = random_complex(&ring, 0, 1, 2, &mut rng);
        let basis = homotopy_classes(&c, &c).unwrap();
        let gens = ordkit::complexes::chain_map_generators(&c, &c);
        prop_assume!(!gens.is_empty());
        let f = &gens[rng.gen_range(0..gens.len())];
        let g = &gens[rng.gen_range(0..gens.len())];
        let f2 = f.add(&random_homotopy(&c, &mut rng).boundary());
        prop_assert_eq!(basis.class_of(&g.compose(f)), basis.class_of(&g.compose(&f2)));
        let h = basis.homotopy_between(f, &f2).unwrap();
        prop_assert!(f.sub(&f2).sub(&h.boundary()).is_zero());
    }
}
