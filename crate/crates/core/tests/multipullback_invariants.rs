use std::collections::BTreeMap;

use proptest::prelude::*;
use tqps_core::multipullback::{
    compact_probe, extend, is_member, random_kernel_member, random_member, verify_freeness, witness_t_m_i, witness_x_i,
};
use tqps_core::order_lattice::Verdict;
use tqps_core::sampling::{random_toeplitz_tensor, rng_for, DEFAULT_SEED};
use tqps_core::{Error, TensorElement};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn extension_keeps_prescribed_components(n in 1usize..=3, chart in 0usize..=3, a in any::<u64>()) {
        prop_assume!(chart <= n);
        let b = random_toeplitz_tensor(&mut rng_for(a, &[]), n);
        let p = extend(n, &BTreeMap::from([(chart, b.clone())])).unwrap();
        prop_assert_eq!(p.project(chart), &b);
        prop_assert!(is_member(p.components()).unwrap());
        let full: BTreeMap<_, _> = p.components().iter().cloned().enumerate().collect();
        prop_assert_eq!(extend(n, &full).unwrap(), p);
    }

    #[test]
    fn members_form_a_star_algebra(n in 1usize..=2, a in any::<u64>(), b in any::<u64>()) {
        let x = random_member(n, a, &[]).unwrap();
        let y = random_member(n, b, &[]).unwrap();
        prop_assert!(is_member((&x * &y).components()).unwrap());
        prop_assert!(is_member((&x - &y).components()).unwrap());
        prop_assert!(is_member(x.adjoint().components()).unwrap());
    }

    #[test]
    fn two_chart_extension(a in any::<u64>(), b in any::<u64>()) {
        let p = random_member(2, a, &[]).unwrap();
        let q = random_member(2, b, &[]).unwrap();
        let partial = BTreeMap::from([(0, p.project(0).clone()), (2, p.project(2).clone())]);
        let e = extend(2, &partial).unwrap();
        prop_assert_eq!(e.project(0), p.project(0));
        prop_assert_eq!(e.project(2), p.project(2));
        let bad = BTreeMap::from([(0, p.project(0).clone()), (1, q.project(1).clone())]);
        if !is_member(&[p.project(0).clone(), q.project(1).clone(), q.project(2).clone()]).unwrap() {
            let r = extend(2, &bad);
            prop_assert!(r.is_ok() || matches!(r, Err(Error::IncompatiblePartialFamily(0, 1))));
        }
    }
}

#[test]
fn witnesses_separate_kernels() {
    for n in 1..=3 {
        let x = compact_probe(n);
        for mask in 1u32..(1 << (n + 1)) {
            let idx: Vec<usize> = (0..=n).filter(|&i| mask >> i & 1 == 1).collect();
            let w = witness_x_i(n, &idx, &x).unwrap();
            for k in 0..=n {
                assert_eq!(w.project(k).is_zero(), idx.contains(&k));
            }
            if idx.len() <= n {
                for m in (0..=n).filter(|m| !idx.contains(m)) {
                    witness_t_m_i(n, m, &idx).unwrap();
                }
            }
        }
    }
}

#[test]
fn kernel_samples_are_nontrivial() {
    for n in 1..=3 {
        let nonzero = (0..40)
            .filter(|&s| {
                let x = random_kernel_member(n, &[0], DEFAULT_SEED, &[s]).unwrap();
                assert!(x.in_kernels(&[0]) && is_member(x.components()).unwrap());
                !x.is_zero()
            })
            .count();
        assert!(nonzero >= 35, "N={n}: {nonzero}");
    }
}

#[test]
fn freeness_report_is_deterministic() {
    let a = serde_json::to_string(&verify_freeness(1, 3, 30).unwrap()).unwrap();
    let b = serde_json::to_string(&verify_freeness(1, 3, 30).unwrap()).unwrap();
    assert_eq!(a, b);
}

#[test]
fn freeness_at_n3() {
    let r = verify_freeness(3, 0, 20).unwrap();
    assert_eq!(r.verdict, Verdict::Free);
    assert_eq!(r.lattice.size, 166);
    assert!(matches!(r.lattice.control, Verdict::NotFree { .. }));
}

#[test]
fn zero_partial_is_zero() {
    let p = extend(2, &BTreeMap::from([(1, TensorElement::zero_toeplitz(2))])).unwrap();
    assert!(p.is_zero());
}
