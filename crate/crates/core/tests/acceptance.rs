//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use rand::Rng;
use tqps_core::classical::{
    lattice_l, lattice_r, psi_overlap, random_overlap_point, transition, CoveringSet, TRANSITION_TOL,
};
use tqps_core::gluing::{cocycle_check, distinct_triples, kernel_image_check, ordered_cocycle_triples, psi_check};
use tqps_core::multipullback::{extend, is_member, random_member, verify_freeness, DEFAULT_SAMPLES};
use tqps_core::order_lattice::{
    birkhoff_transform, fdl_enumerate, fdl_leq, free_lattice, upper_set_lattice, AntichainForm, Poset,
};
use tqps_core::sampling::{random_toeplitz_element, random_toeplitz_tensor, rng_for, DEFAULT_SEED};
use tqps_core::{Factor, TensorElement, ToeplitzElement};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn birkhoff_roundtrip() -> Outcome {
    let mut rng = rng_for(DEFAULT_SEED, &[101]);
    for t in 0..500 {
        let n = rng.gen_range(1..=7);
        let p = rng.gen_range(0.1..0.7);
        let poset = Poset::random(&mut rng, n, p).map_err(|e| e.to_string())?;
        let (_, lattice) = upper_set_lattice(&poset).map_err(|e| e.to_string())?;
        let (recovered, _) = birkhoff_transform(&lattice).map_err(|e| e.to_string())?;
        ensure(recovered.is_isomorphic(&poset), || format!("trial {t}: poset on {n} elements not recovered"))?;
    }
    Ok("500 random posets on ≤ 7 elements recovered up to isomorphism".into())
}

fn enumeration_counts() -> Outcome {
    let counts: Vec<usize> = (1..=4).map(|n| fdl_enumerate(n).map(|v| v.len())).collect::<Result<_, _>>().map_err(|e| e.to_string())?;
    ensure(counts == [1, 4, 18, 166], || format!("fdl counts {counts:?}"))?;
    let naive: Vec<u64> = (1..=4).map(common::naive_dedekind).collect();
    ensure(naive == [3, 6, 20, 168], || format!("naive antichain counts {naive:?}"))?;
    for (c, m) in counts.iter().zip(&naive) {
        ensure(*c as u64 + 2 == *m, || format!("{c} + 2 ≠ {m}"))?;
    }
    let start = Instant::now();
    let five = fdl_enumerate(5).map_err(|e| e.to_string())?.len() as u64;
    let elapsed = start.elapsed().as_secs_f64();
    let oracle = common::dedekind_5_by_pairs();
    ensure(oracle == 7581 && five + 2 == oracle, || format!("n=5: enumerated {five}, oracle {oracle}"))?;
    ensure(elapsed <= 60.0, || format!("n=5 enumeration took {elapsed:.1}s"))?;
    Ok(format!("counts {counts:?}, M(n) = {naive:?}, n=5: {five} + 2 = {oracle} in {elapsed:.2}s"))
}

fn meet_irreducible_structure() -> Outcome {
    for n in 1..=4usize {
        let (elems, lattice) = free_lattice(n).map_err(|e| e.to_string())?;
        let irr = lattice.meet_irreducibles();
        ensure(irr.len() == (1 << n) - 2, || format!("n={n}: {} meet irreducibles", irr.len()))?;
        let full = (1u32 << n) - 1;
        let mut joins = BTreeMap::new();
        for mask in 1..full {
            let j = AntichainForm::join_of_generators(n, mask).map_err(|e| e.to_string())?;
            let idx = elems.iter().position(|e| *e == j).ok_or("join of generators missing")?;
            ensure(irr.contains(&idx), || format!("n={n}: {j} is not meet irreducible"))?;
            joins.insert(mask, j);
        }
        for (&i, a) in &joins {
            for (&j, b) in &joins {
                let leq = fdl_leq(a, b).map_err(|e| e.to_string())?;
                ensure(leq == (i & !j == 0), || format!("n={n}: order of {a} and {b} disagrees with inclusion"))?;
            }
        }
    }
    Ok("2^n − 2 meet irreducibles for n ≤ 4, ordered by inclusion".into())
}

fn psi_involution() -> Outcome {
    let mut checked = 0;
    for n in 1..=3 {
        let r = psi_check(n, 1000, DEFAULT_SEED).map_err(|e| e.to_string())?;
        ensure(r.passed(), || format!("N={n}: {}", r.failures[0]))?;
        checked += r.samples;
    }
    Ok(format!("Ψ∘Ψ = id on {checked} atom tensors and random elements, N ∈ {{1,2,3}}"))
}

fn kernel_images() -> Outcome {
    let mut triples = 0;
    for n in 2..=3 {
        for [i, j, k] in distinct_triples(n) {
            let r = kernel_image_check(n, i, j, k, 50, DEFAULT_SEED).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("N={n} ({i},{j},{k}) [{}]: {}", r.case, r.failures[0]))?;
            triples += 1;
        }
    }
    Ok(format!("{triples} triples × 50 kernel generators, both directions"))
}

fn cocycle() -> Outcome {
    let mut triples = 0;
    for n in 2..=3 {
        let ordered = ordered_cocycle_triples(n);
        for [i, j, k] in distinct_triples(n) {
            let r = cocycle_check(n, i, j, k, 100, DEFAULT_SEED).map_err(|e| e.to_string())?;
            ensure(r.passed(), || format!("N={n} ({i},{j},{k}): {}", r.failures[0]))?;
            triples += 1;
        }
        ensure(!ordered.is_empty(), || "no ordered triples".into())?;
    }
    Ok(format!("{triples} triples × 100 classes, incl. inverse and representative independence"))
}

fn freeness() -> Outcome {
    let mut notes = Vec::new();
    for (n, size) in [(1usize, 4usize), (2, 18)] {
        let r = verify_freeness(n, 0, DEFAULT_SAMPLES).map_err(|e| e.to_string())?;
        ensure(r.is_free(), || format!("N={n}: {}", r.verdict))?;
        let subsets = (1usize << (n + 1)) - 1;
        let mut pairs = 0;
        for i in 1..=subsets as u32 {
            for j in 1..=subsets as u32 {
                if i & !j != 0 {
                    pairs += 1;
                }
            }
        }
        ensure(r.lemma34.len() == pairs, || format!("N={n}: {} of {pairs} separations", r.lemma34.len()))?;
        let expected35: usize = (1..subsets as u32).map(|i| n + 1 - i.count_ones() as usize).sum();
        ensure(r.lemma35.len() == expected35, || format!("N={n}: {} irreducibility cases", r.lemma35.len()))?;
        ensure(
            r.lemma35.iter().all(|e| e.passed() && e.annihilation.iter().all(|a| a.samples == DEFAULT_SAMPLES)),
            || format!("N={n}: irreducibility evidence incomplete"),
        )?;
        ensure(r.lattice.size == size, || format!("N={n}: lattice of size {}", r.lattice.size))?;
        ensure(r.lattice.birkhoff_isomorphic_to_free, || format!("N={n}: not Birkhoff-isomorphic to the free lattice"))?;
        ensure(!r.lattice.control.is_free(), || format!("N={n}: duplicated-generator control came out free"))?;
        notes.push(format!("N={n}: {size} elements, {pairs} separations, {expected35} irreducibility cases"));
    }
    Ok(notes.join("; "))
}

fn mirror_sphere_relation(p: &[TensorElement]) -> Result<bool, String> {
    let s0 = p[0].slot_symbol(1).map_err(|e| e.to_string())?;
    let s1 = p[1].slot_symbol(1).map_err(|e| e.to_string())?.antipode_slot(1).map_err(|e| e.to_string())?;
    Ok(s0 == s1)
}

fn mirror_sphere() -> Outcome {
    for s in 0..500u64 {
        let mut rng = rng_for(DEFAULT_SEED, &[108, s]);
        let b = random_toeplitz_tensor(&mut rng, 1);
        let chart = (s % 2) as usize;
        let p = extend(1, &BTreeMap::from([(chart, b.clone())])).map_err(|e| e.to_string())?;
        ensure(p.project(chart) == &b, || format!("extension {s} changed the prescribed component"))?;
        ensure(mirror_sphere_relation(p.components())?, || format!("extension {s}: {p}"))?;
        let m = random_member(1, DEFAULT_SEED, &[109, s]).map_err(|e| e.to_string())?;
        ensure(mirror_sphere_relation(m.components())?, || format!("member {s}: {m}"))?;
    }
    let z = TensorElement::tensor(&[Factor::from(ToeplitzElement::z())]);
    ensure(!is_member(&[z.clone(), z]).map_err(|e| e.to_string())?, || "(z, z) accepted".into())?;
    Ok("500 extensions and 500 members satisfy σ(t0) = S(σ(t1)); (z, z) rejected".into())
}

fn random_antichain<R: Rng>(rng: &mut R, n: usize) -> AntichainForm {
    let full = (1u32 << (n + 1)) - 1;
    let k = rng.gen_range(1..=4);
    let family: Vec<u32> = (0..k).map(|_| rng.gen_range(1..=full)).collect();
    AntichainForm::from_family(n + 1, &family).expect("non-empty family")
}

fn classical_model() -> Outcome {
    for n in 0..=2 {
        for x in fdl_enumerate(n + 1).map_err(|e| e.to_string())? {
            ensure(lattice_l(&lattice_r(&x)).map_err(|e| e.to_string())? == x, || format!("L(R({x})) ≠ {x}"))?;
        }
    }
    let mut rng = rng_for(DEFAULT_SEED, &[109]);
    for _ in 0..10_000 {
        let x = random_antichain(&mut rng, 3);
        ensure(lattice_l(&lattice_r(&x)).map_err(|e| e.to_string())? == x, || format!("L(R({x})) ≠ {x}"))?;
    }
    for n in 0..=3 {
        for _ in 0..200 {
            let k = rng.gen_range(1..=3);
            let v = (0..k)
                .map(|_| lattice_r(&random_antichain(&mut rng, n)))
                .reduce(|a: CoveringSet, b| a.union(&b))
                .expect("k ≥ 1");
            let back = lattice_r(&lattice_l(&v).map_err(|e| e.to_string())?);
            ensure(v.same_points(&back, &mut rng, 50), || format!("R(L(V)) ≠ V for {v:?}"))?;
        }
    }
    let mut worst: f64 = 0.0;
    for n in 1..=3 {
        for i in 0..=n {
            for j in i + 1..=n {
                for _ in 0..1000 {
                    let x = random_overlap_point(&mut rng, n, i, j);
                    let p = psi_overlap(i, j, &x).map_err(|e| e.to_string())?;
                    let q = transition(&p, i, j).map_err(|e| e.to_string())?;
                    let d = q.distance(&psi_overlap(j, i, &x).map_err(|e| e.to_string())?);
                    worst = worst.max(d);
                }
            }
        }
    }
    ensure(worst <= TRANSITION_TOL, || format!("transition error {worst:e}"))?;
    Ok(format!("L∘R = id, R∘L = id; max transition error {worst:.1e}"))
}

fn toeplitz_oracle() -> Outcome {
    let mut rng = rng_for(DEFAULT_SEED, &[110]);
    let (d, band) = (16, 4);
    for t in 0..1000 {
        let x = random_toeplitz_element(&mut rng, 4, 6);
        let y = random_toeplitz_element(&mut rng, 4, 6);
        if let Some((j, k)) = common::truncated_product_mismatch(&x, &y, d, band) {
            return Err(format!("pair {t}: ({x})·({y}) differs at ({j},{k})"));
        }
    }
    Ok(format!("1000 products agree with {d}×{d} truncations on the top-left {}² block", d - band))
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("1 Birkhoff duality roundtrip", birkhoff_roundtrip),
        ("2 free-lattice enumeration", enumeration_counts),
        ("3 meet-irreducible structure", meet_irreducible_structure),
        ("4 Ψ∘Ψ = id", psi_involution),
        ("5 kernel-image identities", kernel_images),
        ("6 cocycle condition", cocycle),
        ("7 freeness of the kernel lattice", freeness),
        ("8 mirror quantum sphere", mirror_sphere),
        ("9 classical covering model", classical_model),
        ("10 Toeplitz truncated-matrix oracle", toeplitz_oracle),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name} ({secs:.1}s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name} ({secs:.1}s): {detail}");
            }
        }
    }
    println!("acceptance: {} of 10 criteria passed", 10 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
