use proptest::prelude::*;
use tqps_core::gluing::{
    atom_basis, chart_slot, cocycle_check, diagonal_coaction, diagonal_coaction_recursive, distinct_triples,
    kernel_case, kernel_image_check, phi, phi_of_representative, psi, psi_stepwise, quotient_class, transport,
};
use tqps_core::sampling::{random_tensor, random_tensor_with_compact, rng_for, DEFAULT_SEED};
use tqps_core::{SlotKind, TensorElement};

fn mixed_kinds(n: usize) -> Vec<SlotKind> {
    let mut k = vec![SlotKind::Toeplitz; n - 1];
    k.push(SlotKind::Circle);
    k
}

#[test]
fn closed_form_coaction_matches_recursion_on_atoms() {
    for n in 1..=4 {
        for x in atom_basis(&vec![SlotKind::Toeplitz; n]) {
            assert_eq!(diagonal_coaction(&x).unwrap(), diagonal_coaction_recursive(&x).unwrap(), "{x}");
        }
    }
}

#[test]
fn psi_is_an_involution_on_atoms() {
    for n in 1..=3 {
        for x in atom_basis(&mixed_kinds(n)) {
            let y = psi(&x).unwrap();
            assert_eq!(psi(&y).unwrap(), x);
            assert_eq!(psi_stepwise(&x).unwrap(), y);
        }
    }
}

proptest! {
    #[test]
    fn psi_is_multiplicative(n in 1usize..=3, a in any::<u64>(), b in any::<u64>()) {
        let kinds = mixed_kinds(n);
        let x = random_tensor(&mut rng_for(a, &[]), &kinds);
        let y = random_tensor(&mut rng_for(b, &[]), &kinds);
        prop_assert_eq!(psi(&(&x * &y)).unwrap(), &psi(&x).unwrap() * &psi(&y).unwrap());
    }

    #[test]
    fn psi_preserves_compact_slot_ideals(n in 2usize..=3, slot in 1usize..=2, a in any::<u64>()) {
        prop_assume!(slot < n);
        let x = random_tensor_with_compact(&mut rng_for(a, &[]), &mixed_kinds(n), &[slot]);
        prop_assert!(psi(&x).unwrap().compact_in_slot(slot).unwrap());
    }

    #[test]
    fn transport_roundtrips(n in 1usize..=3, from in 0usize..=3, to in 0usize..=3, a in any::<u64>()) {
        prop_assume!(from <= n && to <= n && from != to);
        let mut kinds = vec![SlotKind::Toeplitz; n];
        kinds[chart_slot(from, to) - 1] = SlotKind::Circle;
        let x = random_tensor(&mut rng_for(a, &[]), &kinds);
        let y = transport(&x, from, to).unwrap();
        prop_assert_eq!(y.circle_slots(), vec![chart_slot(to, from)]);
        prop_assert_eq!(transport(&y, to, from).unwrap(), x);
    }

    #[test]
    fn phi_ignores_kernel_terms(a in any::<u64>(), t in 0usize..24) {
        let [i, j, k] = distinct_triples(3)[t];
        let kinds = vec![SlotKind::Toeplitz; 3];
        let mut rng = rng_for(a, &[]);
        let x = random_tensor(&mut rng, &kinds);
        let g = random_tensor_with_compact(&mut rng, &kinds, &[chart_slot(j, i)]);
        let h = random_tensor_with_compact(&mut rng, &kinds, &[chart_slot(j, k)]);
        let base = phi_of_representative(&x, i, j, k).unwrap();
        prop_assert_eq!(phi_of_representative(&(&(&x + &g) - &h), i, j, k).unwrap(), base.clone());
        let class = quotient_class(&x, j, i, k).unwrap();
        prop_assert_eq!(phi(&class, i, j, k).unwrap(), base);
    }
}

#[test]
fn kernel_images_for_all_cases() {
    let mut cases = std::collections::BTreeSet::new();
    for [i, j, k] in distinct_triples(3) {
        let r = kernel_image_check(3, i, j, k, 30, DEFAULT_SEED).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
        cases.insert(kernel_case(i, j, k));
    }
    assert_eq!(cases.len(), 3);
}

#[test]
fn cocycle_for_n3() {
    for [i, j, k] in distinct_triples(3) {
        let r = cocycle_check(3, i, j, k, 30, 77).unwrap();
        assert!(r.passed(), "{:?}", r.failures);
    }
}

#[test]
fn sampled_quotient_classes_are_mostly_nonzero() {
    let kinds = vec![SlotKind::Toeplitz; 3];
    let nonzero = (0..200)
        .filter(|&s| {
            let x = random_tensor(&mut rng_for(DEFAULT_SEED, &[s]), &kinds);
            !quotient_class(&x, 2, 0, 1).unwrap().is_zero()
        })
        .count();
    assert!(nonzero > 50, "{nonzero}");
    assert!(TensorElement::unit_toeplitz(2).compact_in_slot(1).is_ok());
}
