mod common;

use std::collections::BTreeSet;

use proptest::prelude::*;
use tqps_core::order_lattice::{
    birkhoff_transform, check_freeness_criterion, fdl_enumerate, fdl_join, fdl_leq, fdl_meet, free_lattice,
    upper_set_lattice, upper_sets, AntichainForm, FreeLatticeOracle, Poset, Verdict,
};
use tqps_core::sampling::rng_for;

fn element(n: usize) -> impl Strategy<Value = AntichainForm> {
    let full = (1u32 << n) - 1;
    prop::collection::vec(1..=full, 1..5).prop_map(move |f| AntichainForm::from_family(n, &f).unwrap())
}

fn triple() -> impl Strategy<Value = (AntichainForm, AntichainForm, AntichainForm)> {
    (1usize..=5).prop_flat_map(|n| (element(n), element(n), element(n)))
}

proptest! {
    #[test]
    fn lattice_laws((x, y, z) in triple()) {
        let j = |a: &AntichainForm, b: &AntichainForm| fdl_join(a, b).unwrap();
        let m = |a: &AntichainForm, b: &AntichainForm| fdl_meet(a, b).unwrap();
        prop_assert_eq!(j(&x, &x), x.clone());
        prop_assert_eq!(m(&x, &x), x.clone());
        prop_assert_eq!(j(&x, &y), j(&y, &x));
        prop_assert_eq!(m(&x, &y), m(&y, &x));
        prop_assert_eq!(j(&j(&x, &y), &z), j(&x, &j(&y, &z)));
        prop_assert_eq!(m(&m(&x, &y), &z), m(&x, &m(&y, &z)));
        prop_assert_eq!(j(&x, &m(&x, &y)), x.clone());
        prop_assert_eq!(m(&x, &j(&x, &y)), x.clone());
        prop_assert_eq!(m(&x, &j(&y, &z)), j(&m(&x, &y), &m(&x, &z)));
        prop_assert_eq!(j(&x, &m(&y, &z)), m(&j(&x, &y), &j(&x, &z)));
        prop_assert_eq!(fdl_leq(&x, &y).unwrap(), j(&x, &y) == y);
    }

    #[test]
    fn operations_match_upper_set_families((x, y, _) in triple()) {
        let ux: BTreeSet<u32> = x.upper_set_family().into_iter().collect();
        let uy: BTreeSet<u32> = y.upper_set_family().into_iter().collect();
        let join: BTreeSet<u32> = fdl_join(&x, &y).unwrap().upper_set_family().into_iter().collect();
        let meet: BTreeSet<u32> = fdl_meet(&x, &y).unwrap().upper_set_family().into_iter().collect();
        prop_assert_eq!(join, &ux | &uy);
        prop_assert_eq!(meet, &ux & &uy);
    }

    #[test]
    fn birkhoff_roundtrip_up_to_eight(seed in any::<u64>(), n in 1usize..=8, p in 0.0f64..0.8) {
        let poset = Poset::random(&mut rng_for(seed, &[]), n, p).unwrap();
        let (_, lattice) = upper_set_lattice(&poset).unwrap();
        prop_assert!(lattice.is_distributive());
        let (recovered, image) = birkhoff_transform(&lattice).unwrap();
        prop_assert!(recovered.is_isomorphic(&poset));
        prop_assert_eq!(image.len(), lattice.len());
    }
}

#[test]
fn enumeration_matches_naive_filter() {
    for n in 1..=4u32 {
        let subsets = 1u32 << n;
        let mut naive = BTreeSet::new();
        for family in 0u64..1u64 << subsets {
            let members: Vec<u32> = (0..subsets).filter(|&s| family >> s & 1 == 1).collect();
            let antichain = members
                .iter()
                .all(|&a| members.iter().all(|&b| a == b || (a & !b != 0 && b & !a != 0)));
            if antichain && !members.is_empty() && !members.contains(&0) {
                naive.insert(members);
            }
        }
        let fast: BTreeSet<Vec<u32>> = fdl_enumerate(n as usize).unwrap().iter().map(|e| e.antichain().to_vec()).collect();
        assert_eq!(fast, naive);
        assert_eq!(naive.len() as u64 + 2, common::naive_dedekind(n));
    }
}

#[test]
fn meet_irreducibles_are_generator_joins() {
    for n in 1..=4 {
        let (elems, lattice) = free_lattice(n).unwrap();
        let got: BTreeSet<AntichainForm> = lattice.meet_irreducibles().into_iter().map(|i| elems[i].clone()).collect();
        let full = (1u32 << n) - 1;
        let expected: BTreeSet<AntichainForm> =
            (1..full).map(|m| AntichainForm::join_of_generators(n, m).unwrap()).collect();
        assert_eq!(got, expected);
        assert_eq!(lattice.join_irreducibles().len(), (1 << n) - 2);
    }
}

#[test]
fn free_oracle_is_free_up_to_four() {
    for n in 1..=4 {
        let check = check_freeness_criterion(&FreeLatticeOracle { n_generators: n }).unwrap();
        assert_eq!(check.verdict, Verdict::Free);
        assert_eq!(check.elements.len(), fdl_enumerate(n).unwrap().len());
    }
}

#[test]
fn hasse_export_uses_covers_only() {
    let p = Poset::chain(4).unwrap();
    assert_eq!(p.covers().len(), 3);
    let (_, l) = upper_set_lattice(&Poset::antichain(3).unwrap()).unwrap();
    assert_eq!(l.len(), 8);
    assert_eq!(l.covers().len(), 12);
    assert_eq!(l.to_dot("cube").matches("->").count(), 12);
    assert_eq!(upper_sets(&p).unwrap().len(), 5);
}
