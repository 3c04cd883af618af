//! The classical covering `V_i = {[x] : |x_i| = max_k |x_k|}` of `CP^N`.
//!
//! Unions of intersections `V_a = ⋂_{i∈a} V_i` are compared through the test
//! points `z_a` (`x_i = 1` for `i ∈ a`, `x_i = 1/2` otherwise), which
//! satisfy `z_a ∈ V_b ⇔ b ⊆ a`. Chart maps and transition maps are computed
//! in double precision; this is the only floating-point part of the crate.

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gluing::chart_slot;
use crate::order_lattice::{check_freeness_criterion, minimal_sets, AntichainForm, FreenessCheck, LatticeOracle};

pub const DOMAIN_TOL: f64 = 1e-12;
pub const TRANSITION_TOL: f64 = 1e-10;

/// `V = ⋃_{a∈A} V_a`, with `A` stored as its minimal sets.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub struct CoveringSet {
    n: usize,
    family: Vec<u32>,
}

fn full_mask(n: usize) -> u32 {
    (1u32 << (n + 1)) - 1
}

impl CoveringSet {
    pub fn new(n: usize, family: &[u32]) -> Result<Self> {
        if family.iter().any(|&a| a == 0 || a & !full_mask(n) != 0) {
            return Err(Error::InvalidIndices(format!("family {family:?} has empty or out-of-range members")));
        }
        Ok(CoveringSet { n, family: minimal_sets(family.to_vec()) })
    }

    /// `V_i`.
    pub fn chart(n: usize, i: usize) -> Result<Self> {
        CoveringSet::new(n, &[1 << i])
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn family(&self) -> &[u32] {
        &self.family
    }

    pub fn contains(&self, x: &[Complex64]) -> bool {
        let top = maximal_indices(x);
        self.family.iter().any(|&a| a & !top == 0)
    }

    pub fn union(&self, other: &CoveringSet) -> CoveringSet {
        let family = self.family.iter().chain(&other.family).copied().collect();
        CoveringSet { n: self.n, family: minimal_sets(family) }
    }

    /// `V_a ∩ V_b = V_{a∪b}`.
    pub fn intersection(&self, other: &CoveringSet) -> CoveringSet {
        let family = self.family.iter().flat_map(|&a| other.family.iter().map(move |&b| a | b)).collect();
        CoveringSet { n: self.n, family: minimal_sets(family) }
    }

    /// `self ⊆ other`, decided on the test points.
    pub fn is_subset(&self, other: &CoveringSet) -> bool {
        (1..=full_mask(self.n)).all(|a| {
            let z = test_point(self.n, a);
            !self.contains(&z) || other.contains(&z)
        })
    }

    /// Equality on the test points and on `extra` random points.
    pub fn same_points<R: Rng>(&self, other: &CoveringSet, rng: &mut R, extra: usize) -> bool {
        let tests = (1..=full_mask(self.n)).all(|a| {
            let z = test_point(self.n, a);
            self.contains(&z) == other.contains(&z)
        });
        tests && (0..extra).all(|_| {
            let x = random_tied_point(rng, self.n);
            self.contains(&x) == other.contains(&x)
        })
    }
}

/// Indices whose coordinate has maximal modulus, within [`DOMAIN_TOL`].
pub fn maximal_indices(x: &[Complex64]) -> u32 {
    let max = x.iter().map(|c| c.norm()).fold(0.0, f64::max);
    x.iter()
        .enumerate()
        .filter(|(_, c)| (max - c.norm()) <= DOMAIN_TOL * max.max(1.0))
        .fold(0, |m, (i, _)| m | 1 << i)
}

/// `z_a`.
pub fn test_point(n: usize, a: u32) -> Vec<Complex64> {
    (0..=n).map(|i| Complex64::new(if a >> i & 1 == 1 { 1.0 } else { 0.5 }, 0.0)).collect()
}

/// Random point whose maximal-modulus set is a random non-empty subset.
pub fn random_tied_point<R: Rng>(rng: &mut R, n: usize) -> Vec<Complex64> {
    let a = rng.gen_range(1..=full_mask(n));
    (0..=n)
        .map(|i| {
            let r: f64 = if a >> i & 1 == 1 { 1.0 } else { rng.gen_range(0.0..0.9) };
            Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

/// `R(X) = ⋃_{a∈X} V_a`.
pub fn lattice_r(x: &AntichainForm) -> CoveringSet {
    CoveringSet { n: x.n_generators() - 1, family: x.antichain().to_vec() }
}

/// `L(V) = {a : V_a ⊆ V}`, read off the test points.
pub fn lattice_l(v: &CoveringSet) -> Result<AntichainForm> {
    let members: Vec<u32> = (1..=full_mask(v.n)).filter(|&a| v.contains(&test_point(v.n, a))).collect();
    AntichainForm::from_family(v.n + 1, &members)
}

/// Affine chart coordinates in the closed polydisc; `circle_slot` (1-based)
/// marks a coordinate on the unit circle.
#[derive(Clone, PartialEq, Debug)]
pub struct ChartPoint {
    coords: Vec<Complex64>,
    circle_slot: Option<usize>,
}

impl ChartPoint {
    pub fn new(coords: Vec<Complex64>, circle_slot: Option<usize>) -> Result<Self> {
        for c in &coords {
            if c.norm() > 1.0 + DOMAIN_TOL {
                return Err(Error::OutsideDisc(c.norm()));
            }
        }
        if let Some(s) = circle_slot {
            let c = coords
                .get(s.wrapping_sub(1))
                .ok_or_else(|| Error::SlotMismatch(format!("circle slot {s} outside 1..={}", coords.len())))?;
            if (c.norm() - 1.0).abs() > DOMAIN_TOL {
                return Err(Error::NotOnCircle(c.norm()));
            }
        }
        Ok(ChartPoint { coords, circle_slot })
    }

    pub fn coords(&self) -> &[Complex64] {
        &self.coords
    }

    pub fn circle_slot(&self) -> Option<usize> {
        self.circle_slot
    }

    pub fn distance(&self, other: &ChartPoint) -> f64 {
        self.coords.iter().zip(&other.coords).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// `ψ_i([x]) = (x_0/x_i, …, x̂_i, …, x_N/x_i)` on `V_i`.
pub fn psi_chart(i: usize, x: &[Complex64]) -> Result<ChartPoint> {
    if i >= x.len() || maximal_indices(x) >> i & 1 == 0 {
        return Err(Error::InvalidIndices(format!("point is not in V_{i}")));
    }
    let xi = x[i];
    let coords = x.iter().enumerate().filter(|&(l, _)| l != i).map(|(_, &c)| c / xi).collect();
    ChartPoint::new(coords, None)
}

/// `ψ_i` on `V_i ∩ V_j`, marking the slot of `j` as the circle slot.
pub fn psi_overlap(i: usize, j: usize, x: &[Complex64]) -> Result<ChartPoint> {
    let p = psi_chart(i, x)?;
    ChartPoint::new(p.coords, Some(chart_slot(i, j)))
}

/// `ψ_i⁻¹`: homogeneous coordinates with `x_i = 1`.
pub fn psi_chart_inverse(i: usize, p: &ChartPoint) -> Vec<Complex64> {
    let mut x = p.coords.clone();
    x.insert(i, Complex64::new(1.0, 0.0));
    x
}

/// `Υ_{ij}` for `i < j`: from chart `i` with the circle at slot `j` to chart
/// `j` with the circle at slot `i + 1`.
pub fn transition(p: &ChartPoint, i: usize, j: usize) -> Result<ChartPoint> {
    let n = p.coords.len();
    if i >= j || j > n {
        return Err(Error::InvalidIndices(format!("need 0 ≤ i < j ≤ {n}, got i={i}, j={j}")));
    }
    if p.circle_slot != Some(j) {
        return Err(Error::SlotMismatch(format!("Υ_{i}{j} needs the circle at slot {j}, got {:?}", p.circle_slot)));
    }
    let s = p.coords[j - 1];
    if (s.norm() - 1.0).abs() > DOMAIN_TOL {
        return Err(Error::NotOnCircle(s.norm()));
    }
    let inv = s.inv();
    let d = |k: usize| p.coords[k - 1] * inv;
    let mut out = Vec::with_capacity(n);
    out.extend((1..=i).map(d));
    out.push(inv);
    out.extend((i + 1..j).map(d));
    out.extend((j + 1..=n).map(d));
    ChartPoint::new(out, Some(i + 1))
}

/// `ψ_i ∘ ψ_j⁻¹`, the inverse of [`transition`].
pub fn transition_inverse(p: &ChartPoint, i: usize, j: usize) -> Result<ChartPoint> {
    if p.circle_slot != Some(i + 1) {
        return Err(Error::SlotMismatch(format!("inverse of Υ_{i}{j} needs the circle at slot {}", i + 1)));
    }
    psi_overlap(i, j, &psi_chart_inverse(j, p))
}

/// Random point of `V_i ∩ V_j` in homogeneous coordinates.
pub fn random_overlap_point<R: Rng>(rng: &mut R, n: usize, i: usize, j: usize) -> Vec<Complex64> {
    (0..=n)
        .map(|k| {
            let r: f64 = if k == i || k == j { 1.0 } else { rng.gen_range(0.0..1.0) };
            Complex64::from_polar(r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}

/// The lattice `Λ` generated by `V_0, …, V_N` under `∪` and `∩`.
#[derive(Clone, Copy, Debug)]
pub struct ClassicalOracle {
    pub n: usize,
}

impl LatticeOracle for ClassicalOracle {
    type Elem = CoveringSet;

    fn generators(&self) -> Vec<CoveringSet> {
        (0..=self.n).map(|i| CoveringSet::chart(self.n, i).expect("in range")).collect()
    }

    fn join(&self, a: &CoveringSet, b: &CoveringSet) -> CoveringSet {
        a.union(b)
    }

    fn meet(&self, a: &CoveringSet, b: &CoveringSet) -> CoveringSet {
        a.intersection(b)
    }

    fn leq(&self, a: &CoveringSet, b: &CoveringSet) -> Result<bool> {
        Ok(a.is_subset(b))
    }

    fn describe(&self, a: &CoveringSet) -> String {
        let parts: Vec<String> = a
            .family
            .iter()
            .map(|&m| {
                let idx: Vec<String> = (0..=self.n).filter(|&i| m >> i & 1 == 1).map(|i| format!("V{i}")).collect();
                idx.join("∩")
            })
            .collect();
        parts.join(" ∪ ")
    }
}

pub fn classical_freeness(n: usize) -> Result<FreenessCheck<CoveringSet>> {
    check_freeness_criterion(&ClassicalOracle { n })
}
