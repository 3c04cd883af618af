//! Seeded random generators for the verification harnesses.
//!
//! Atoms are drawn with degrees uniform in `[−3, 3]` and matrix-unit indices
//! in `[0, 3]²`; elements have between one and three terms. Every sample gets
//! its own ChaCha stream derived from `(seed, labels…)`, so results do not
//! depend on how samples are scheduled across threads.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::circle_hopf::CirclePoly;
use crate::scalar::Scalar;
use crate::tensor::{Atom, SlotKind, TensorElement};
use crate::toeplitz::{CompactPart, ToeplitzAtom, ToeplitzElement};

pub const DEFAULT_SEED: u64 = 0x5EED;

pub const DEGREE_RANGE: std::ops::RangeInclusive<i64> = -3..=3;
pub const INDEX_RANGE: std::ops::RangeInclusive<u64> = 0..=3;

/// Mixes labels into a seed (splitmix64 finaliser per label).
pub fn derive_seed(seed: u64, labels: &[u64]) -> u64 {
    let mut h = seed ^ 0x9E37_79B9_7F4A_7C15;
    for &l in labels {
        h ^= l.wrapping_add(0x9E37_79B9_7F4A_7C15).wrapping_add(h << 6).wrapping_add(h >> 2);
        h = (h ^ (h >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        h = (h ^ (h >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        h ^= h >> 31;
    }
    h
}

pub fn rng_for(seed: u64, labels: &[u64]) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(derive_seed(seed, labels))
}

/// Non-zero Gaussian rational, mostly small integers.
pub fn random_scalar<R: Rng>(rng: &mut R) -> Scalar {
    loop {
        let re = rng.gen_range(-3..=3);
        let im = if rng.gen_bool(0.25) { rng.gen_range(-2..=2) } else { 0 };
        let den = if rng.gen_bool(0.15) { 2 } else { 1 };
        let s = Scalar::from_parts(re, den, im, 1);
        if !num_traits::Zero::is_zero(&s) {
            return s;
        }
    }
}

pub fn random_toeplitz_atom<R: Rng>(rng: &mut R) -> ToeplitzAtom {
    if rng.gen_bool(0.5) {
        ToeplitzAtom::Shift(rng.gen_range(DEGREE_RANGE))
    } else {
        random_compact_atom(rng)
    }
}

pub fn random_compact_atom<R: Rng>(rng: &mut R) -> ToeplitzAtom {
    ToeplitzAtom::Unit(rng.gen_range(INDEX_RANGE), rng.gen_range(INDEX_RANGE))
}

pub fn random_atom<R: Rng>(rng: &mut R, kind: SlotKind) -> Atom {
    match kind {
        SlotKind::Toeplitz => Atom::Toeplitz(random_toeplitz_atom(rng)),
        SlotKind::Circle => Atom::Circle(rng.gen_range(DEGREE_RANGE)),
    }
}

/// Random pure tensor of atoms with the given slot kinds; slots listed in
/// `compact_slots` (1-based) always receive a matrix unit.
pub fn random_pure_atoms<R: Rng>(rng: &mut R, kinds: &[SlotKind], compact_slots: &[usize]) -> Vec<Atom> {
    kinds
        .iter()
        .enumerate()
        .map(|(idx, &kind)| {
            if compact_slots.contains(&(idx + 1)) {
                Atom::Toeplitz(random_compact_atom(rng))
            } else {
                random_atom(rng, kind)
            }
        })
        .collect()
}

/// Random element with 1–3 terms.
pub fn random_tensor<R: Rng>(rng: &mut R, kinds: &[SlotKind]) -> TensorElement {
    random_tensor_with_compact(rng, kinds, &[])
}

/// Random element all of whose terms carry a compact atom in each slot of
/// `compact_slots`: a random element of `⋂ ker σ_slot`.
pub fn random_tensor_with_compact<R: Rng>(
    rng: &mut R,
    kinds: &[SlotKind],
    compact_slots: &[usize],
) -> TensorElement {
    let mut t = TensorElement::zero(kinds.to_vec());
    let n_terms = rng.gen_range(1..=3);
    for _ in 0..n_terms {
        let atoms = random_pure_atoms(rng, kinds, compact_slots);
        t.add_term(atoms, &random_scalar(rng));
    }
    t
}

/// Random element of `T^{⊗n}`.
pub fn random_toeplitz_tensor<R: Rng>(rng: &mut R, n: usize) -> TensorElement {
    random_tensor(rng, &vec![SlotKind::Toeplitz; n])
}

/// Random single-factor Toeplitz element with symbol degrees in
/// `[−max_degree, max_degree]` and compact support in `[0, compact_size)²`.
pub fn random_toeplitz_element<R: Rng>(rng: &mut R, max_degree: i64, compact_size: u64) -> ToeplitzElement {
    let n_sym = rng.gen_range(0..=3);
    let n_cpt = rng.gen_range(0..=3);
    let symbol = CirclePoly::from_terms((0..n_sym).map(|_| (rng.gen_range(-max_degree..=max_degree), random_scalar(rng))));
    let compact = CompactPart::from_entries((0..n_cpt).map(|_| {
        (
            (rng.gen_range(0..compact_size), rng.gen_range(0..compact_size)),
            random_scalar(rng),
        )
    }));
    ToeplitzElement::new(symbol, compact)
}
