use anneal_gates::evolution::{evolve_with, EvolveOptions};
use anneal_gates::families::{
    combined_family, combined_ground_states, entangled_ground_states, product_ground_states, two_state_entangled,
    two_state_product, verify_ground_space, PartitionSpec,
};
use anneal_gates::operators::PauliSum;
use anneal_gates::schedules::conventional;
use anneal_gates::state::StateVector;
use proptest::prelude::*;

fn signs(n: usize) -> impl Strategy<Value = Vec<i8>> {
    prop::collection::vec(prop_oneof![Just(1i8), Just(-1i8)], n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn entangled_family_ground_space(alphas in (2usize..=6).prop_flat_map(signs)) {
        let h = two_state_entangled(&alphas).unwrap();
        let r = verify_ground_space(&h, &entangled_ground_states(&alphas).unwrap(), 1e-10).unwrap();
        prop_assert!(r.matches, "{:?}", r);
        prop_assert_eq!(r.ground_degeneracy, 2);
    }

    #[test]
    fn product_family_ground_space(split in 1usize..4, extra in 0usize..3, seed in signs(6)) {
        let n = split + extra;
        prop_assume!(n >= 2);
        let spec = PartitionSpec::new(vec![(0..split).collect(), (split..n).collect()], seed[..n].to_vec()).unwrap();
        let h = two_state_product(&spec).unwrap();
        let r = verify_ground_space(&h, &product_ground_states(&spec).unwrap(), 1e-10).unwrap();
        prop_assert!(r.matches, "{:?}", r);
    }
}

#[test]
fn combined_family_has_two_to_the_k_ground_states() {
    let spec = PartitionSpec::new(vec![vec![0, 1], vec![2, 3, 4], vec![5, 6], vec![7]], vec![1, -1, 1, 1, -1, -1, 1, 1]).unwrap();
    let h = combined_family(&spec).unwrap();
    let r = verify_ground_space(&h, &combined_ground_states(&spec).unwrap(), 1e-10).unwrap();
    assert!(r.matches && r.ground_degeneracy == 8, "{r:?}");
}

#[test]
fn entangled_anneal_ends_in_the_ground_space() {
    for alphas in [[1, 1, 1], [1, -1, 1]] {
        let h = two_state_entangled(&alphas).unwrap();
        let driver = PauliSum::transverse_field(&[-1.0; 3]).unwrap();
        let sched = conventional(&driver, &h, 2000.0).unwrap();
        let out = evolve_with(&sched, &StateVector::all_plus(3).unwrap(), &EvolveOptions::default()).unwrap();
        let p: f64 = entangled_ground_states(&alphas)
            .unwrap()
            .iter()
            .map(|g| g.fidelity(&out.final_state).unwrap())
            .sum();
        assert!(p >= 0.98, "{alphas:?}: ground-space population {p}");
        assert!(out.norm_drift <= 1e-8);
    }
}
