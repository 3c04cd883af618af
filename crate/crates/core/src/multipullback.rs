//! `C(P^N(T))` as compatible `(N+1)`-tuples in `T^{⊗N}`, and the witness
//! machinery certifying that the kernels of the canonical projections
//! generate a free distributive lattice.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gluing::{chart_index, chart_slot, edge_projection, transport};
use crate::order_lattice::{
    birkhoff_transform, check_freeness_criterion, free_lattice, minimal_sets, LatticeOracle, Verdict,
};
use crate::sampling::{random_tensor, random_tensor_with_compact, rng_for};
use crate::tensor::{Atom, SlotKind, TensorElement};
use crate::toeplitz::ToeplitzAtom;

pub const MAX_N: usize = 3;

/// An element of `C(P^N(T))`: one component in `T^{⊗N}` per chart.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct PullbackElement {
    components: Vec<TensorElement>,
}

fn check_component(x: &TensorElement, n: usize) -> Result<()> {
    if x.n_slots() != n || !x.is_pure_toeplitz() {
        return Err(Error::ShapeMismatch(format!("component {x} is not in T^{{⊗{n}}}")));
    }
    Ok(())
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ShapeMismatch("N must be at least 1".into()));
    }
    Ok(())
}

/// First pair `i < j` whose edge images differ, checking all of them.
pub fn first_incompatible_pair(components: &[TensorElement]) -> Result<Option<(usize, usize)>> {
    let n = components.len().saturating_sub(1);
    check_n(n)?;
    for c in components {
        check_component(c, n)?;
    }
    for i in 0..=n {
        for j in i + 1..=n {
            if edge_projection(&components[i], i, j)? != edge_projection(&components[j], j, i)? {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

pub fn is_member(components: &[TensorElement]) -> Result<bool> {
    Ok(first_incompatible_pair(components)?.is_none())
}

impl PullbackElement {
    pub fn new(components: Vec<TensorElement>) -> Result<Self> {
        if let Some((i, j)) = first_incompatible_pair(&components)? {
            return Err(Error::IncompatiblePartialFamily(i, j));
        }
        Ok(PullbackElement { components })
    }

    pub fn zero(n: usize) -> Self {
        PullbackElement { components: vec![TensorElement::zero_toeplitz(n); n + 1] }
    }

    pub fn unit(n: usize) -> Self {
        PullbackElement { components: vec![TensorElement::unit_toeplitz(n); n + 1] }
    }

    pub fn n(&self) -> usize {
        self.components.len() - 1
    }

    pub fn components(&self) -> &[TensorElement] {
        &self.components
    }

    /// `π_i`.
    pub fn project(&self, i: usize) -> &TensorElement {
        &self.components[i]
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(TensorElement::is_zero)
    }

    /// Lies in `⋂_{i∈I} ker π_i`.
    pub fn in_kernels(&self, indices: &[usize]) -> bool {
        indices.iter().all(|&i| self.components[i].is_zero())
    }

    pub fn adjoint(&self) -> Self {
        PullbackElement { components: self.components.iter().map(TensorElement::adjoint).collect() }
    }

    fn zip(&self, other: &Self, f: impl Fn(&TensorElement, &TensorElement) -> TensorElement) -> Self {
        assert_eq!(self.n(), other.n(), "pullback elements over different N");
        let components = self.components.iter().zip(&other.components).map(|(a, b)| f(a, b)).collect();
        PullbackElement { components }
    }
}

impl Add<&PullbackElement> for &PullbackElement {
    type Output = PullbackElement;
    fn add(self, rhs: &PullbackElement) -> PullbackElement {
        self.zip(rhs, |a, b| a + b)
    }
}

impl Sub<&PullbackElement> for &PullbackElement {
    type Output = PullbackElement;
    fn sub(self, rhs: &PullbackElement) -> PullbackElement {
        self.zip(rhs, |a, b| a - b)
    }
}

impl Mul<&PullbackElement> for &PullbackElement {
    type Output = PullbackElement;
    fn mul(self, rhs: &PullbackElement) -> PullbackElement {
        self.zip(rhs, |a, b| a * b)
    }
}

impl Neg for &PullbackElement {
    type Output = PullbackElement;
    fn neg(self) -> PullbackElement {
        PullbackElement { components: self.components.iter().map(|a| -a).collect() }
    }
}

impl fmt::Display for PullbackElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.components.iter().map(|c| c.to_string()).collect();
        write!(f, "({})", parts.join(", "))
    }
}

/// The constraint `σ_{slot of l}(b_m) = y` imposed on a new chart `m` by a
/// determined component `b_l`, with `y` in chart-`m` coordinates.
fn constraint_from(b_l: &TensorElement, l: usize, m: usize) -> Result<TensorElement> {
    let edge = edge_projection(b_l, l, m)?;
    if m < l {
        Ok(edge)
    } else {
        transport(&edge, l, m)
    }
}

/// Completes a pairwise compatible partial family to an element of
/// `C(P^N(T))` with the prescribed components.
///
/// Missing charts are added in increasing order. For a new chart `m`, each
/// determined chart `l` prescribes `σ` in the slot of `l`; the first
/// constraint is lifted by `T(·)` and every later one is imposed by replacing
/// the current `lift ∘ σ` part in its slot. No compact correction is added
/// where nothing constrains it.
pub fn extend(n: usize, partial: &BTreeMap<usize, TensorElement>) -> Result<PullbackElement> {
    check_n(n)?;
    for (&i, x) in partial {
        if i > n {
            return Err(Error::InvalidIndices(format!("chart {i} outside 0..={n}")));
        }
        check_component(x, n)?;
    }
    let idx: Vec<usize> = partial.keys().copied().collect();
    for (a, &i) in idx.iter().enumerate() {
        for &j in &idx[a + 1..] {
            if edge_projection(&partial[&i], i, j)? != edge_projection(&partial[&j], j, i)? {
                return Err(Error::IncompatiblePartialFamily(i, j));
            }
        }
    }
    if partial.is_empty() {
        return Ok(PullbackElement::zero(n));
    }
    let mut known = partial.clone();
    for m in 0..=n {
        if known.contains_key(&m) {
            continue;
        }
        let mut candidate: Option<TensorElement> = None;
        for (&l, b_l) in &known {
            let slot = chart_slot(m, l);
            let lifted = constraint_from(b_l, l, m)?.lift_slot(slot)?;
            candidate = Some(match candidate {
                None => lifted,
                Some(c) => &(&c - &c.drop_compact_in(slot)?) + &lifted,
            });
        }
        known.insert(m, candidate.expect("partial family is non-empty"));
    }
    let components: Vec<TensorElement> = known.into_values().collect();
    if let Some((i, j)) = first_incompatible_pair(&components)? {
        return Err(Error::ExtensionFailed(format!("charts {i} and {j} still disagree after extension")));
    }
    Ok(PullbackElement { components })
}

fn index_list(mask: u32, n: usize) -> Vec<usize> {
    (0..=n).filter(|&i| mask >> i & 1 == 1).collect()
}

fn mask_of(indices: &[usize]) -> u32 {
    indices.iter().fold(0, |m, &i| m | 1 << i)
}

fn check_index_set(n: usize, indices: &[usize]) -> Result<()> {
    if indices.is_empty() || indices.iter().any(|&i| i > n) {
        return Err(Error::InvalidIndices(format!("{indices:?} is not a non-empty subset of 0..={n}")));
    }
    Ok(())
}

/// `x_I`: `x` in the charts outside `I`, zero on `I`. `x` must be a non-zero
/// element of `K^{⊗N}`.
pub fn witness_x_i(n: usize, indices: &[usize], x: &TensorElement) -> Result<PullbackElement> {
    check_n(n)?;
    check_component(x, n)?;
    check_index_set(n, indices)?;
    let fully_compact = (1..=n).all(|s| x.compact_in_slot(s).unwrap_or(false));
    if x.is_zero() || !fully_compact {
        return Err(Error::WitnessFailed(format!("{x} is not a non-zero element of K^{{⊗{n}}}")));
    }
    let components: Vec<TensorElement> = (0..=n)
        .map(|i| if indices.contains(&i) { TensorElement::zero_toeplitz(n) } else { x.clone() })
        .collect();
    PullbackElement::new(components)
}

/// `E_{00}^{⊗N}`.
pub fn compact_probe(n: usize) -> TensorElement {
    TensorElement::pure(vec![Atom::matrix_unit(0, 0); n], num_traits::One::one())
}

/// `σ^m_I`: `σ` in the slots of chart `m` whose index is outside `I`.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SigmaMI {
    pub chart: usize,
    pub indices: Vec<usize>,
    pub symbol_slots: Vec<usize>,
}

impl SigmaMI {
    pub fn new(n: usize, m: usize, indices: &[usize]) -> Self {
        let symbol_slots = (1..=n).filter(|&s| !indices.contains(&chart_index(m, s))).collect();
        SigmaMI { chart: m, indices: indices.to_vec(), symbol_slots }
    }

    pub fn apply(&self, x: &TensorElement) -> Result<TensorElement> {
        self.symbol_slots.iter().try_fold(x.clone(), |acc, &s| acc.slot_symbol(s))
    }
}

/// `T^I_m`: `E_{00}` in the slots of chart `m` carrying an index of `I`, `z`
/// in the others, together with `σ^m_I`. Checks `π^m_k(T) = 0 ⇔ k ∈ I` and
/// `σ^m_I(T) ≠ 0`.
pub fn witness_t_m_i(n: usize, m: usize, indices: &[usize]) -> Result<(TensorElement, SigmaMI)> {
    check_n(n)?;
    check_index_set(n, indices)?;
    if m > n || indices.contains(&m) || indices.len() > n {
        return Err(Error::InvalidIndices(format!("need m ∉ I ⊊ 0..={n}, got m={m}, I={indices:?}")));
    }
    let atoms = (1..=n)
        .map(|s| {
            if indices.contains(&chart_index(m, s)) {
                Atom::matrix_unit(0, 0)
            } else {
                Atom::Toeplitz(ToeplitzAtom::Shift(1))
            }
        })
        .collect();
    let t = TensorElement::pure(atoms, num_traits::One::one());
    let sigma = SigmaMI::new(n, m, indices);
    for k in (0..=n).filter(|&k| k != m) {
        let vanishes = edge_projection(&t, m, k)?.is_zero();
        if vanishes != indices.contains(&k) {
            return Err(Error::WitnessFailed(format!("π^{m}_{k}(T) vanishing is {vanishes} for I = {indices:?}")));
        }
    }
    if sigma.apply(&t)?.is_zero() {
        return Err(Error::WitnessFailed(format!("σ^{m}_I(T) = 0 for I = {indices:?}")));
    }
    Ok((t, sigma))
}

/// Seeded random element of `⋂_{j∈J} ker π_j`, built as a sum of extensions
/// of families vanishing on `J` and carrying a random kernel generator in
/// one chart `r ∉ J`.
pub fn random_kernel_member(n: usize, indices: &[usize], seed: u64, labels: &[u64]) -> Result<PullbackElement> {
    check_index_set(n, indices)?;
    let mut rng = rng_for(seed, labels);
    let kinds = vec![SlotKind::Toeplitz; n];
    let mut total = PullbackElement::zero(n);
    for r in (0..=n).filter(|r| !indices.contains(r)) {
        let slots: Vec<usize> = indices.iter().map(|&j| chart_slot(r, j)).collect();
        let b_r = random_tensor_with_compact(&mut rng, &kinds, &slots);
        let mut partial: BTreeMap<usize, TensorElement> =
            indices.iter().map(|&j| (j, TensorElement::zero_toeplitz(n))).collect();
        partial.insert(r, b_r);
        total = &total + &extend(n, &partial)?;
    }
    Ok(total)
}

/// Seeded random member: a random component in chart `0`, extended.
pub fn random_member(n: usize, seed: u64, labels: &[u64]) -> Result<PullbackElement> {
    let mut rng = rng_for(seed, labels);
    let b0 = random_tensor(&mut rng, &vec![SlotKind::Toeplitz; n]);
    extend(n, &BTreeMap::from([(0, b0)]))
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SeparationEntry {
    /// `I` with `⋂_I ker π ⊉ ⋂_J ker π`.
    pub i: Vec<usize>,
    pub j: Vec<usize>,
    /// Index `k ∈ I ∖ J` with `π_k(x_J) ≠ 0`.
    pub separating_index: usize,
    pub witness: PullbackElement,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct AnnihilationEvidence {
    pub j: Vec<usize>,
    pub samples: usize,
    pub failures: Vec<String>,
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IrreducibilityEntry {
    pub i: Vec<usize>,
    pub m: usize,
    pub t: TensorElement,
    pub sigma: SigmaMI,
    pub p_m: PullbackElement,
    pub sigma_of_witness: TensorElement,
    pub annihilation: Vec<AnnihilationEvidence>,
}

impl IrreducibilityEntry {
    pub fn passed(&self) -> bool {
        !self.sigma_of_witness.is_zero() && self.annihilation.iter().all(|a| a.failures.is_empty())
    }
}

#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct LatticeSummary {
    pub size: usize,
    pub elements: Vec<String>,
    pub meet_irreducibles: Vec<String>,
    pub birkhoff_isomorphic_to_free: bool,
    pub lattice: serde_json::Value,
    pub control: Verdict,
}

/// Evidence bundle of [`verify_freeness`]. The irreducibility annihilation
/// checks are sampled, so the bundle is evidence rather than proof.
#[derive(Clone, PartialEq, Debug, Serialize, Deserialize)]
pub struct FreenessReport {
    pub schema: u32,
    pub label: String,
    #[serde(rename = "N")]
    pub n: usize,
    pub seed: u64,
    pub samples: usize,
    pub verdict: Verdict,
    pub lemma34: Vec<SeparationEntry>,
    pub lemma35: Vec<IrreducibilityEntry>,
    pub lattice: LatticeSummary,
}

impl FreenessReport {
    pub fn is_free(&self) -> bool {
        self.verdict.is_free()
    }
}

/// Precomputed witness data for the kernel ideals: for every proper
/// non-empty `K`, the functional `σ^m_K ∘ π_m` (`m = min ∉ K`), the element
/// `p_m ∈ ⋂_K ker π` it does not kill, and which `⋂_J ker π` it was seen to
/// annihilate on all samples.
struct KernelWitnesses {
    n: usize,
    separates: BTreeMap<(u32, u32), bool>,
}

impl KernelWitnesses {
    fn build(n: usize, samples: usize, seed: u64) -> Result<Self> {
        let full = (1u32 << (n + 1)) - 1;
        let masks: Vec<u32> = (1..=full).collect();
        let kernel_samples: BTreeMap<u32, Vec<PullbackElement>> = masks
            .par_iter()
            .map(|&j| {
                let js = index_list(j, n);
                let v = (0..samples)
                    .map(|s| random_kernel_member(n, &js, seed, &[3, n as u64, j as u64, s as u64]))
                    .collect::<Result<Vec<_>>>()?;
                Ok((j, v))
            })
            .collect::<Result<_>>()?;
        let pairs: Vec<(u32, u32)> = masks
            .iter()
            .filter(|&&k| k != full)
            .flat_map(|&k| masks.iter().filter(move |&&j| j & !k != 0).map(move |&j| (k, j)))
            .collect();
        let separates = pairs
            .par_iter()
            .map(|&(k, j)| {
                let ks = index_list(k, n);
                let m = (0..=n).find(|i| !ks.contains(i)).expect("K is proper");
                let (t, sigma) = witness_t_m_i(n, m, &ks)?;
                let mut partial: BTreeMap<usize, TensorElement> =
                    ks.iter().map(|&i| (i, TensorElement::zero_toeplitz(n))).collect();
                partial.insert(m, t);
                let p = extend(n, &partial)?;
                let detects = !sigma.apply(p.project(m))?.is_zero();
                let kills = kernel_samples[&j]
                    .iter()
                    .map(|x| sigma.apply(x.project(m)).map(|y| y.is_zero()))
                    .collect::<Result<Vec<_>>>()?
                    .into_iter()
                    .all(|b| b);
                Ok(((k, j), detects && kills))
            })
            .collect::<Result<_>>()?;
        Ok(KernelWitnesses { n, separates })
    }
}

/// Ideals `Σ_{J∈F} ⋂_{j∈J} ker π_j`, encoded by the minimal index sets `F`.
/// The lattice order is reverse inclusion of ideals, so join is `∩` and
/// meet is `+`. Containment of `⋂_K ker π` in such a sum is decided by
/// `J ⊆ K` for some `J ∈ F`, and its failure is certified by the witness
/// functional of `K`; a missing certificate is an error.
pub struct KernelLattice {
    witnesses: KernelWitnesses,
    generators: Vec<u32>,
}

impl KernelLattice {
    fn contained(&self, k: u32, family: &[u32]) -> Result<bool> {
        let full = (1u32 << (self.witnesses.n + 1)) - 1;
        if k == full || family.iter().any(|&j| j & !k == 0) {
            return Ok(true);
        }
        for &j in family {
            if !self.witnesses.separates.get(&(k, j)).copied().unwrap_or(false) {
                return Err(Error::WitnessFailed(format!(
                    "no certificate that ⋂ ker π over {:?} avoids ⋂ ker π over {:?}",
                    index_list(k, self.witnesses.n),
                    index_list(j, self.witnesses.n)
                )));
            }
        }
        Ok(false)
    }
}

impl LatticeOracle for KernelLattice {
    type Elem = Vec<u32>;

    fn generators(&self) -> Vec<Vec<u32>> {
        self.generators.iter().map(|&g| vec![g]).collect()
    }

    fn join(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        minimal_sets(a.iter().flat_map(|&x| b.iter().map(move |&y| x | y)).collect())
    }

    fn meet(&self, a: &Vec<u32>, b: &Vec<u32>) -> Vec<u32> {
        minimal_sets(a.iter().chain(b).copied().collect())
    }

    fn leq(&self, a: &Vec<u32>, b: &Vec<u32>) -> Result<bool> {
        for &k in b {
            if !self.contained(k, a)? {
                return Ok(false);
            }
        }
        Ok(true)
    }

    fn describe(&self, a: &Vec<u32>) -> String {
        let n = self.witnesses.n;
        let parts: Vec<String> = a
            .iter()
            .map(|&m| {
                let idx: Vec<String> = index_list(m, n).iter().map(|i| format!("ker π{i}")).collect();
                idx.join("∩")
            })
            .collect();
        parts.join(" + ")
    }
}

fn separation_table(n: usize) -> Result<Vec<SeparationEntry>> {
    let full = (1u32 << (n + 1)) - 1;
    let x = compact_probe(n);
    let mut out = Vec::new();
    for i in 1..=full {
        for j in 1..=full {
            if i & !j == 0 {
                continue;
            }
            let (is, js) = (index_list(i, n), index_list(j, n));
            let witness = witness_x_i(n, &js, &x)?;
            if !witness.in_kernels(&js) {
                return Err(Error::WitnessFailed(format!("x_J ∉ ⋂ ker π for J = {js:?}")));
            }
            let separating_index = is
                .iter()
                .copied()
                .find(|&k| !js.contains(&k) && !witness.project(k).is_zero())
                .ok_or_else(|| Error::WitnessFailed(format!("x_J ∈ ⋂ ker π over I = {is:?}, J = {js:?}")))?;
            out.push(SeparationEntry { i: is, j: js, separating_index, witness });
        }
    }
    Ok(out)
}

fn irreducibility_table(n: usize, samples: usize, seed: u64) -> Result<Vec<IrreducibilityEntry>> {
    let full = (1u32 << (n + 1)) - 1;
    let cases: Vec<(u32, usize)> = (1..full)
        .flat_map(|i| (0..=n).filter(move |&m| i >> m & 1 == 0).map(move |m| (i, m)))
        .collect();
    cases
        .par_iter()
        .map(|&(i, m)| {
            let is = index_list(i, n);
            let (t, sigma) = witness_t_m_i(n, m, &is)?;
            let mut partial: BTreeMap<usize, TensorElement> =
                is.iter().map(|&k| (k, TensorElement::zero_toeplitz(n))).collect();
            partial.insert(m, t.clone());
            let p_m = extend(n, &partial)?;
            if p_m.project(m) != &t || !p_m.in_kernels(&is) {
                return Err(Error::WitnessFailed(format!("p_m misses its prescription for I = {is:?}, m = {m}")));
            }
            let sigma_of_witness = sigma.apply(p_m.project(m))?;
            let annihilation = (1..=full)
                .filter(|&j| j != i && j & i == i)
                .map(|j| {
                    let js = index_list(j, n);
                    let mut failures = Vec::new();
                    for s in 0..samples {
                        let x = random_kernel_member(n, &js, seed, &[4, n as u64, i as u64, m as u64, j as u64, s as u64])?;
                        let y = sigma.apply(x.project(m))?;
                        if !y.is_zero() {
                            failures.push(format!("sample {s}: σ^{m}_I(π_{m}({x})) = {y}"));
                        }
                    }
                    Ok(AnnihilationEvidence { j: js, samples, failures })
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(IrreducibilityEntry { i: is, m, t, sigma, p_m, sigma_of_witness, annihilation })
        })
        .collect()
}

/// Samples per `(I, J, m)` in the irreducibility evidence.
pub const DEFAULT_SAMPLES: usize = 200;

/// Runs the freeness criterion on the lattice generated by `ker π_0, …,
/// ker π_N`, with witness tables for strict order and irreducibility, and
/// compares the result with the free lattice. A control run replacing
/// `ker π_1` by `ker π_0` is included and must come out not free.
pub fn verify_freeness(n: usize, seed: u64, samples: usize) -> Result<FreenessReport> {
    check_n(n)?;
    if n > MAX_N {
        return Err(Error::SizeLimit { what: "N for freeness verification", value: n, limit: MAX_N });
    }
    let lemma34 = separation_table(n)?;
    let lemma35 = irreducibility_table(n, samples, seed)?;
    let witnesses = KernelWitnesses::build(n, samples, seed)?;
    let oracle = KernelLattice { witnesses, generators: (0..=n).map(|i| 1 << i).collect() };
    let check = check_freeness_criterion(&oracle)?;
    let lattice = check
        .lattice
        .clone()
        .ok_or_else(|| Error::WitnessFailed(format!("kernel lattice inconsistent: {}", check.verdict)))?;
    let birkhoff_isomorphic_to_free = if n < crate::order_lattice::MAX_TABLE_GENERATORS {
        let (_, free) = free_lattice(n + 1)?;
        let (p, _) = birkhoff_transform(&lattice)?;
        let (q, _) = birkhoff_transform(&free)?;
        p.is_isomorphic(&q)
    } else {
        false
    };
    let control_generators = (0..=n).map(|i| if i == 1 { 1 } else { 1 << i }).collect();
    let control = KernelLattice { witnesses: oracle.witnesses, generators: control_generators };
    let control_verdict = check_freeness_criterion(&control)?.verdict;
    let mut verdict = check.verdict.clone();
    let lemma35_failures: Vec<String> = lemma35
        .iter()
        .filter(|e| !e.passed())
        .map(|e| format!("irreducibility evidence fails for I = {:?}, m = {}", e.i, e.m))
        .collect();
    if verdict.is_free() && !lemma35_failures.is_empty() {
        verdict = Verdict::NotFree { witnesses: lemma35_failures };
    }
    let irr = lattice.meet_irreducibles();
    let labels = lattice.labels().to_vec();
    Ok(FreenessReport {
        schema: 1,
        label: "evidence".into(),
        n,
        seed,
        samples,
        verdict,
        lemma34,
        lemma35,
        lattice: LatticeSummary {
            size: lattice.len(),
            elements: labels.clone(),
            meet_irreducibles: irr.iter().map(|&a| labels[a].clone()).collect(),
            birkhoff_isomorphic_to_free,
            lattice: lattice.to_json(),
            control: control_verdict,
        },
    })
}

/// Generated kernel lattice alone, for export.
pub fn kernel_lattice(n: usize, seed: u64, samples: usize) -> Result<crate::order_lattice::FiniteLattice> {
    check_n(n)?;
    if n > MAX_N {
        return Err(Error::SizeLimit { what: "N for the kernel lattice", value: n, limit: MAX_N });
    }
    let oracle = KernelLattice {
        witnesses: KernelWitnesses::build(n, samples, seed)?,
        generators: (0..=n).map(|i| 1 << i).collect(),
    };
    let check = check_freeness_criterion(&oracle)?;
    check.lattice.ok_or_else(|| Error::WitnessFailed(format!("kernel lattice inconsistent: {}", check.verdict)))
}

pub fn mask_indices(mask: u32, n: usize) -> Vec<usize> {
    index_list(mask, n)
}

pub fn indices_mask(indices: &[usize]) -> u32 {
    mask_of(indices)
}
