//! Gluing maps between tensor powers of the Toeplitz algebra.
//!
//! Chart `i ∈ {0..N}` is a copy of `T^{⊗N}` whose slots are labelled by the
//! other indices in increasing order, exactly like the affine coordinates
//! `x_l / x_i`: index `l < i` sits in slot `l + 1`, index `l > i` in slot `l`.
//! With that bookkeeping every map of the construction becomes "apply `σ` in
//! the slot of index `l`, then transport the circle leg from one chart to the
//! other through `Ψ`".

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use num_traits::One;

use crate::sampling::{random_tensor, random_tensor_with_compact, rng_for, DEGREE_RANGE, INDEX_RANGE};
use crate::scalar::Scalar;
use crate::tensor::{Atom, SlotKind, TensorElement};

/// 1-based slot of chart `chart` carrying index `index` (`index ≠ chart`).
pub fn chart_slot(chart: usize, index: usize) -> usize {
    debug_assert_ne!(chart, index);
    if index < chart {
        index + 1
    } else {
        index
    }
}

/// Inverse of [`chart_slot`].
pub fn chart_index(chart: usize, slot: usize) -> usize {
    if slot <= chart {
        slot - 1
    } else {
        slot
    }
}

/// Position `k ∈ {1..N}` of the circle leg in `T^{⊗k−1} ⊗ C(S¹) ⊗ T^{⊗N−k}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SlotPosition(usize);

impl SlotPosition {
    pub fn new(k: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::SlotMismatch(format!("slot position {k} outside 1..={n}")));
        }
        Ok(SlotPosition(k))
    }

    pub fn get(self) -> usize {
        self.0
    }
}

fn circle_at(x: &TensorElement, pos: usize) -> Result<()> {
    let circles = x.circle_slots();
    if circles != [pos] {
        return Err(Error::SlotMismatch(format!(
            "expected a single circle slot at {pos}, found {circles:?}"
        )));
    }
    Ok(())
}

/// `ρ_n`: appends the circle leg `u^{d₁+⋯+dₙ}` to every pure tensor.
pub fn diagonal_coaction(x: &TensorElement) -> Result<TensorElement> {
    if !x.is_pure_toeplitz() {
        return Err(Error::SlotMismatch("ρ_n acts on T^{⊗n}".into()));
    }
    let mut kinds = x.kinds().to_vec();
    kinds.push(SlotKind::Circle);
    let mut out = TensorElement::zero(kinds);
    for (atoms, c) in x.terms() {
        let mut k = atoms.to_vec();
        k.push(Atom::Circle(TensorElement::toeplitz_degree(atoms)));
        out.add_term(k, c);
    }
    Ok(out)
}

/// `ρ_n` through its inductive definition
/// `ρ_{n+1} = (id ⊗ m) ∘ (id ⊗ τ_n ⊗ id) ∘ (ρ ⊗ ρ_n)`.
pub fn diagonal_coaction_recursive(x: &TensorElement) -> Result<TensorElement> {
    if !x.is_pure_toeplitz() || x.n_slots() == 0 {
        return Err(Error::SlotMismatch("ρ_n acts on T^{⊗n}, n ≥ 1".into()));
    }
    rho_block(x, 1, x.n_slots())
}

// Applies ρ_count to the Toeplitz slots start..start+count, leaving the new
// circle leg immediately after them.
fn rho_block(x: &TensorElement, start: usize, count: usize) -> Result<TensorElement> {
    if count == 1 {
        return x.coact_slot(start);
    }
    let y = x.coact_slot(start)?;
    let y = rho_block(&y, start + 2, count - 1)?;
    let y = y.move_slot(start + 1, start + count)?;
    y.multiply_circle_slots(start + count, start + count + 1)
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Flip {
    /// `τ_n: C(S¹) ⊗ T^{⊗n} → T^{⊗n} ⊗ C(S¹)`.
    Forward,
    /// `τ_n⁻¹`.
    Inverse,
}

pub fn flip(x: &TensorElement, direction: Flip) -> Result<TensorElement> {
    let n = x.n_slots();
    match direction {
        Flip::Forward => {
            circle_at(x, 1)?;
            x.move_slot(1, n)
        }
        Flip::Inverse => {
            circle_at(x, n)?;
            x.move_slot(n, 1)
        }
    }
}

/// `χ_j = id_{T^{⊗j−1}} ⊗ τ_{N−j}⁻¹`: moves the trailing circle leg to slot `j`.
pub fn chi(x: &TensorElement, j: SlotPosition) -> Result<TensorElement> {
    let n = x.n_slots();
    circle_at(x, n)?;
    SlotPosition::new(j.get(), n)?;
    x.move_slot(n, j.get())
}

/// `χ_j⁻¹`: moves the circle leg at slot `j` to the end.
pub fn chi_inverse(x: &TensorElement, j: SlotPosition) -> Result<TensorElement> {
    circle_at(x, j.get())?;
    x.move_slot(j.get(), x.n_slots())
}

/// `Ψ = (id ⊗ (S ∘ m)) ∘ (ρ_{N−1} ⊗ id)` on `T^{⊗N−1} ⊗ C(S¹)`, in closed form:
/// a pure tensor of Toeplitz degree `D` with circle leg `uʰ` keeps its
/// Toeplitz atoms and gets circle leg `u^{−(D+h)}`.
pub fn psi(x: &TensorElement) -> Result<TensorElement> {
    let n = x.n_slots();
    circle_at(x, n)?;
    let mut out = TensorElement::zero(x.kinds().to_vec());
    for (atoms, c) in x.terms() {
        let mut k = atoms.to_vec();
        let h = k[n - 1].degree();
        k[n - 1] = Atom::Circle(-(TensorElement::toeplitz_degree(atoms) + h));
        out.add_term(k, c);
    }
    Ok(out)
}

/// `Ψ` evaluated leg by leg: recursive `ρ_{N−1}`, then `m`, then `S`.
pub fn psi_stepwise(x: &TensorElement) -> Result<TensorElement> {
    let n = x.n_slots();
    circle_at(x, n)?;
    if n == 1 {
        return x.antipode_slot(1);
    }
    let y = rho_block(x, 1, n - 1)?;
    let y = y.multiply_circle_slots(n, n + 1)?;
    y.antipode_slot(n)
}

fn check_pair(i: usize, j: usize, n: usize) -> Result<()> {
    if i >= j || j > n {
        return Err(Error::InvalidIndices(format!("need 0 ≤ i < j ≤ N, got i={i}, j={j}, N={n}")));
    }
    Ok(())
}

/// `Ψ_{ij} = χ_j ∘ Ψ ∘ χ_{i+1}⁻¹` for `i < j`; the circle leg moves from slot
/// `i + 1` to slot `j`.
pub fn psi_ij(x: &TensorElement, i: usize, j: usize) -> Result<TensorElement> {
    let n = x.n_slots();
    check_pair(i, j, n)?;
    let y = chi_inverse(x, SlotPosition::new(i + 1, n)?)?;
    chi(&psi(&y)?, SlotPosition::new(j, n)?)
}

/// `Ψ_{ij}⁻¹ = χ_{i+1} ∘ Ψ ∘ χ_j⁻¹`.
pub fn psi_ij_inverse(x: &TensorElement, i: usize, j: usize) -> Result<TensorElement> {
    let n = x.n_slots();
    check_pair(i, j, n)?;
    let y = chi_inverse(x, SlotPosition::new(j, n)?)?;
    chi(&psi(&y)?, SlotPosition::new(i + 1, n)?)
}

fn check_charts(from: usize, to: usize, n: usize) -> Result<()> {
    if from == to || from > n || to > n {
        return Err(Error::InvalidIndices(format!("charts {from}, {to} invalid for N={n}")));
    }
    Ok(())
}

/// Re-expresses an element of the overlap algebra from chart-`from`
/// coordinates (circle leg in the slot of index `to`) in chart-`to`
/// coordinates (circle leg in the slot of index `from`). For `from > to` this
/// is `Ψ_{to,from}`, otherwise its inverse.
pub fn transport(x: &TensorElement, from: usize, to: usize) -> Result<TensorElement> {
    let n = x.n_slots();
    check_charts(from, to, n)?;
    let y = chi_inverse(x, SlotPosition::new(chart_slot(from, to), n)?)?;
    chi(&psi(&y)?, SlotPosition::new(chart_slot(to, from), n)?)
}

/// `σ_k = id ⊗ σ ⊗ id` in slot `k`.
pub fn slot_symbol(x: &TensorElement, k: usize) -> Result<TensorElement> {
    x.slot_symbol(k)
}

/// The edge map `π^{from}_{to}: B_from → B_{from,to}`. The overlap algebra
/// is written in the coordinates of chart `min(from, to)`:
/// `π^i_j = σ_j` for `i < j` and `π^i_j = Ψ_{ji} ∘ σ_{j+1}` for `i > j`.
pub fn edge_projection(x: &TensorElement, from: usize, to: usize) -> Result<TensorElement> {
    let n = x.n_slots();
    check_charts(from, to, n)?;
    if !x.is_pure_toeplitz() {
        return Err(Error::SlotMismatch("edge maps act on T^{⊗N}".into()));
    }
    let s = x.slot_symbol(chart_slot(from, to))?;
    if from < to {
        Ok(s)
    } else {
        transport(&s, from, to)
    }
}

/// Class of an element of chart `chart` modulo `ker π^chart_a + ker π^chart_b`.
///
/// `ker σ_s` is spanned by the pure tensors with a compact atom in slot `s`,
/// so the quotient is computed by applying `σ` in both killed slots; the
/// result is the canonical representative.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct QuotientClass {
    chart: usize,
    killed: [usize; 2],
    representative: TensorElement,
}

impl QuotientClass {
    pub fn chart(&self) -> usize {
        self.chart
    }

    /// Killed indices, sorted.
    pub fn killed(&self) -> [usize; 2] {
        self.killed
    }

    pub fn killed_slots(&self) -> [usize; 2] {
        [chart_slot(self.chart, self.killed[0]), chart_slot(self.chart, self.killed[1])]
    }

    pub fn representative(&self) -> &TensorElement {
        &self.representative
    }

    pub fn is_zero(&self) -> bool {
        self.representative.is_zero()
    }

    /// An element of `T^{⊗N}` in the class (circle legs lifted by `T(·)`).
    pub fn lift(&self) -> TensorElement {
        let [a, b] = self.killed_slots();
        self.representative
            .lift_slot(a)
            .and_then(|y| y.lift_slot(b))
            .expect("representative has circle legs at the killed slots")
    }
}

pub fn quotient_class(x: &TensorElement, chart: usize, a: usize, b: usize) -> Result<QuotientClass> {
    let n = x.n_slots();
    if !x.is_pure_toeplitz() {
        return Err(Error::SlotMismatch("quotient classes are taken in T^{⊗N}".into()));
    }
    if a == b || a == chart || b == chart || a > n || b > n || chart > n {
        return Err(Error::InvalidIndices(format!(
            "cannot kill indices {a}, {b} in chart {chart} with N={n}"
        )));
    }
    let killed = [a.min(b), a.max(b)];
    let representative = x
        .slot_symbol(chart_slot(chart, killed[0]))?
        .slot_symbol(chart_slot(chart, killed[1]))?;
    Ok(QuotientClass { chart, killed, representative })
}

fn check_triple(i: usize, j: usize, k: usize, n: usize) -> Result<()> {
    if i == j || j == k || i == k || i > n || j > n || k > n {
        return Err(Error::InvalidIndices(format!("need distinct indices ≤ {n}, got ({i},{j},{k})")));
    }
    Ok(())
}

/// `φ^{ij}_k` applied to an arbitrary representative `b` of a class in chart
/// `j`: `σ` in the slot of `i`, transport to chart `i`, lift the circle leg
/// (the `σ⁻¹` leg), then reduce modulo the kernels of `j` and `k`.
pub fn phi_of_representative(b: &TensorElement, i: usize, j: usize, k: usize) -> Result<QuotientClass> {
    check_triple(i, j, k, b.n_slots())?;
    let s = b.slot_symbol(chart_slot(j, i))?;
    let t = transport(&s, j, i)?;
    let lifted = t.lift_slot(chart_slot(i, j))?;
    quotient_class(&lifted, i, j, k)
}

/// `φ^{ij}_k: B_j/(ker π^j_i + ker π^j_k) → B_i/(ker π^i_j + ker π^i_k)`.
pub fn phi(x: &QuotientClass, i: usize, j: usize, k: usize) -> Result<QuotientClass> {
    if x.chart != j || x.killed != [i.min(k), i.max(k)] {
        return Err(Error::InvalidIndices(format!(
            "φ^{{{i}{j}}}_{k} needs a class of chart {j} modulo indices {{{i},{k}}}, got chart {} modulo {:?}",
            x.chart, x.killed
        )));
    }
    phi_of_representative(&x.lift(), i, j, k)
}

/// Which of the three relative positions of `k` a triple falls into, written
/// with `lo < hi` standing for `min(i,j) < max(i,j)`.
pub fn kernel_case(i: usize, j: usize, k: usize) -> &'static str {
    let (lo, hi) = (i.min(j), i.max(j));
    if lo < k && k < hi {
        "lo<k<hi"
    } else if k > hi {
        "lo<hi<k"
    } else {
        "k<lo<hi"
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub case: String,
    pub triple: [usize; 3],
    pub n: usize,
    pub samples: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

fn toeplitz_kinds(n: usize) -> Vec<SlotKind> {
    vec![SlotKind::Toeplitz; n]
}

/// Shape of the overlap algebra `B_{ij}` in chart `min(i,j)` coordinates.
fn overlap_kinds(n: usize, i: usize, j: usize) -> (usize, usize, Vec<SlotKind>) {
    let (c, other) = (i.min(j), i.max(j));
    let mut kinds = toeplitz_kinds(n);
    kinds[chart_slot(c, other) - 1] = SlotKind::Circle;
    (c, other, kinds)
}

/// Preimage of an overlap element under `π^{from}_{to}` in chart `from`,
/// using `T(·)` to lift the circle leg.
fn edge_preimage(y: &TensorElement, from: usize, to: usize) -> Result<TensorElement> {
    let in_from = if from < to { y.clone() } else { transport(y, to, from)? };
    in_from.lift_slot(chart_slot(from, to))
}

/// Checks `π^j_i(ker π^j_k) = π^i_j(ker π^i_k)` on seeded kernel
/// generators: both images must lie in the overlap ideal with a compact atom
/// in the slot of `k`, and random elements of that ideal must have preimages
/// in both kernels.
pub fn kernel_image_check(n: usize, i: usize, j: usize, k: usize, samples: usize, seed: u64) -> Result<CheckReport> {
    check_triple(i, j, k, n)?;
    let (c, other, target_kinds) = overlap_kinds(n, i, j);
    let target_slot = chart_slot(c, k);
    let failures: Vec<String> = (0..samples)
        .into_par_iter()
        .flat_map_iter(|s| {
            let mut rng = rng_for(seed, &[1, n as u64, i as u64, j as u64, k as u64, s as u64]);
            let mut fails = Vec::new();
            for (from, to) in [(j, i), (i, j)] {
                let g = random_tensor_with_compact(&mut rng, &toeplitz_kinds(n), &[chart_slot(from, k)]);
                match edge_projection(&g, from, to) {
                    Ok(img) => {
                        if img.kinds() != target_kinds.as_slice() || !img.compact_in_slot(target_slot).unwrap_or(false) {
                            fails.push(format!(
                                "sample {s}: π^{from}_{to}({g}) = {img} leaves the ideal with compact slot {target_slot}"
                            ));
                        }
                    }
                    Err(e) => fails.push(format!("sample {s}: {e}")),
                }
                let y = random_tensor_with_compact(&mut rng, &target_kinds, &[target_slot]);
                let check = edge_preimage(&y, from, to).and_then(|pre| {
                    let in_kernel = pre.compact_in_slot(chart_slot(from, k))?;
                    let back = edge_projection(&pre, from, to)?;
                    Ok((in_kernel, back == y, pre))
                });
                match check {
                    Ok((true, true, _)) => {}
                    Ok((_, _, pre)) => fails.push(format!(
                        "sample {s}: target element {y} has no preimage in ker π^{from}_{k} (tried {pre})"
                    )),
                    Err(e) => fails.push(format!("sample {s}: {e}")),
                }
            }
            fails
        })
        .collect();
    let _ = other;
    Ok(CheckReport {
        case: kernel_case(i, j, k).to_string(),
        triple: [i, j, k],
        n,
        samples,
        failures,
    })
}

/// Checks `φ^{ij}_k = φ^{ik}_j ∘ φ^{kj}_i` on seeded random classes, plus
/// `φ^{ji}_k ∘ φ^{ij}_k = id` and independence of the representative.
pub fn cocycle_check(n: usize, i: usize, j: usize, k: usize, samples: usize, seed: u64) -> Result<CheckReport> {
    check_triple(i, j, k, n)?;
    let kinds = toeplitz_kinds(n);
    let failures: Vec<String> = (0..samples)
        .into_par_iter()
        .flat_map_iter(|s| {
            let mut rng = rng_for(seed, &[2, n as u64, i as u64, j as u64, k as u64, s as u64]);
            let x = random_tensor(&mut rng, &kinds);
            let kernel_i = random_tensor_with_compact(&mut rng, &kinds, &[chart_slot(j, i)]);
            let kernel_k = random_tensor_with_compact(&mut rng, &kinds, &[chart_slot(j, k)]);
            let run = || -> Result<Vec<String>> {
                let mut fails = Vec::new();
                let class = quotient_class(&x, j, i, k)?;
                let direct = phi(&class, i, j, k)?;
                let via_k = phi(&phi(&class, k, j, i)?, i, k, j)?;
                if direct != via_k {
                    fails.push(format!(
                        "sample {s}: cocycle fails on {x}: direct {} vs composite {}",
                        direct.representative(),
                        via_k.representative()
                    ));
                }
                if phi(&direct, j, i, k)? != class {
                    fails.push(format!("sample {s}: φ^{{{j}{i}}}_{k} is not inverse to φ^{{{i}{j}}}_{k} on {x}"));
                }
                let perturbed = &(&x + &kernel_i) + &kernel_k;
                if phi_of_representative(&perturbed, i, j, k)? != direct {
                    fails.push(format!("sample {s}: φ depends on the representative of {x}"));
                }
                Ok(fails)
            };
            run().unwrap_or_else(|e| vec![format!("sample {s}: {e}")])
        })
        .collect();
    Ok(CheckReport {
        case: "cocycle".into(),
        triple: [i, j, k],
        n,
        samples,
        failures,
    })
}

/// Distinct ordered triples `(i, j, k)` of `{0..N}` with `i < k < j`: the
/// representative case of the cocycle condition.
pub fn ordered_cocycle_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..=n {
        for k in i + 1..=n {
            for j in k + 1..=n {
                out.push([i, j, k]);
            }
        }
    }
    out
}

/// Every pure tensor of atoms of the given slot kinds with degrees in
/// [`DEGREE_RANGE`] and matrix-unit indices in [`INDEX_RANGE`].
pub fn atom_basis(kinds: &[SlotKind]) -> Vec<TensorElement> {
    let choices = |kind: SlotKind| -> Vec<Atom> {
        match kind {
            SlotKind::Circle => DEGREE_RANGE.map(Atom::Circle).collect(),
            SlotKind::Toeplitz => DEGREE_RANGE
                .map(Atom::shift)
                .chain(INDEX_RANGE.flat_map(|j| INDEX_RANGE.map(move |k| Atom::matrix_unit(j, k))))
                .collect(),
        }
    };
    let mut out: Vec<Vec<Atom>> = vec![Vec::new()];
    for &kind in kinds {
        let options = choices(kind);
        out = out
            .into_iter()
            .flat_map(|prefix| {
                options.iter().map(move |a| {
                    let mut p = prefix.clone();
                    p.push(*a);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(|atoms| TensorElement::pure(atoms, Scalar::one())).collect()
}

/// Checks `Ψ ∘ Ψ = id` on [`atom_basis`] and on seeded random elements of
/// `T^{⊗N−1} ⊗ C(S¹)`, the closed form of `Ψ` against its stepwise
/// evaluation, and `Ψ_{ij}⁻¹ ∘ Ψ_{ij} = id` for all `i < j`.
pub fn psi_check(n: usize, samples: usize, seed: u64) -> Result<CheckReport> {
    if n == 0 {
        return Err(Error::InvalidIndices("N must be at least 1".into()));
    }
    let mut kinds = toeplitz_kinds(n - 1);
    kinds.push(SlotKind::Circle);
    let basis = atom_basis(&kinds);
    let randoms: Vec<TensorElement> = (0..samples)
        .map(|s| random_tensor(&mut rng_for(seed, &[0, n as u64, s as u64]), &kinds))
        .collect();
    let check_one = |label: String, x: &TensorElement| -> Vec<String> {
        let run = || -> Result<Vec<String>> {
            let mut fails = Vec::new();
            let y = psi(x)?;
            if psi(&y)? != *x {
                fails.push(format!("{label}: Ψ(Ψ({x})) = {}", psi(&y)?));
            }
            let stepwise = psi_stepwise(x)?;
            if stepwise != y {
                fails.push(format!("{label}: closed form Ψ({x}) = {y}, stepwise {stepwise}"));
            }
            for i in 0..n {
                for j in i + 1..=n {
                    let placed = chi(x, SlotPosition::new(i + 1, n)?)?;
                    if psi_ij_inverse(&psi_ij(&placed, i, j)?, i, j)? != placed {
                        fails.push(format!("{label}: Ψ_{i}{j} not inverted on {placed}"));
                    }
                }
            }
            Ok(fails)
        };
        run().unwrap_or_else(|e| vec![format!("{label}: {e}")])
    };
    let mut failures: Vec<String> = basis
        .par_iter()
        .enumerate()
        .flat_map_iter(|(k, x)| check_one(format!("atom {k}"), x))
        .collect();
    let random_failures: Vec<String> = randoms
        .par_iter()
        .enumerate()
        .flat_map_iter(|(s, x)| check_one(format!("sample {s}"), x))
        .collect();
    failures.extend(random_failures);
    Ok(CheckReport { case: "psi".into(), triple: [0, 0, 0], n, samples: basis.len() + samples, failures })
}

/// All triples of distinct indices of `{0..N}`.
pub fn distinct_triples(n: usize) -> Vec<[usize; 3]> {
    let mut out = Vec::new();
    for i in 0..=n {
        for j in 0..=n {
            for k in 0..=n {
                if i != j && j != k && i != k {
                    out.push([i, j, k]);
                }
            }
        }
    }
    out
}
