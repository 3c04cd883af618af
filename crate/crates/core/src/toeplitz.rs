//! The dense *-subalgebra of the Toeplitz algebra.
//!
//! An element is stored as `T(f) + K`: a Toeplitz operator with Laurent
//! polynomial symbol `f` plus a finitely supported matrix `K` on `ℓ²(ℕ)`.
//! The split is unique because `K` cannot change the constant diagonals of
//! `T(f)` far from the corner, so equality is structural.
//!
//! Conventions: `z = T(u)` is the unilateral shift `e_k ↦ e_{k+1}`, so the
//! matrix of `T(f)` is `T(f)_{jk} = f_{j-k}` and `E_{jk}` is the matrix unit
//! `e_k ↦ e_j`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::circle_hopf::{monomial_name, render_term, write_signed_sum, CirclePoly};
use crate::scalar::Scalar;

/// Finitely supported matrix `Σ c_{jk} E_{jk}`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct CompactPart {
    entries: BTreeMap<(u64, u64), Scalar>,
}

impl CompactPart {
    pub fn zero() -> Self {
        CompactPart::default()
    }

    pub fn unit(j: u64, k: u64) -> Self {
        let mut c = CompactPart::zero();
        c.add_entry(j, k, &Scalar::one());
        c
    }

    pub fn from_entries<I: IntoIterator<Item = ((u64, u64), Scalar)>>(entries: I) -> Self {
        let mut c = CompactPart::zero();
        for ((j, k), v) in entries {
            c.add_entry(j, k, &v);
        }
        c
    }

    pub fn add_entry(&mut self, j: u64, k: u64, v: &Scalar) {
        if v.is_zero() {
            return;
        }
        let e = self.entries.entry((j, k)).or_insert_with(Scalar::zero);
        *e += v;
        if e.is_zero() {
            self.entries.remove(&(j, k));
        }
    }

    pub fn entry(&self, j: u64, k: u64) -> Scalar {
        self.entries.get(&(j, k)).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = ((u64, u64), &Scalar)> {
        self.entries.iter().map(|(&jk, v)| (jk, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Smallest `s` with all entries inside `[0, s)²`.
    pub fn support_size(&self) -> u64 {
        self.entries.keys().map(|&(j, k)| j.max(k) + 1).max().unwrap_or(0)
    }
}

/// Basis atom of the dense Toeplitz algebra.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum ToeplitzAtom {
    /// `T(uᵃ)`: `zᵃ` for `a ≥ 0`, `(z*)^{-a}` for `a < 0`.
    Shift(i64),
    /// Matrix unit `E_{jk}`.
    Unit(u64, u64),
}

impl ToeplitzAtom {
    /// Gauge degree: `deg T(uᵃ) = a`, `deg E_{jk} = j − k`.
    pub fn degree(&self) -> i64 {
        match *self {
            ToeplitzAtom::Shift(a) => a,
            ToeplitzAtom::Unit(j, k) => j as i64 - k as i64,
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, ToeplitzAtom::Unit(..))
    }

    pub fn to_element(self) -> ToeplitzElement {
        match self {
            ToeplitzAtom::Shift(a) => ToeplitzElement::shift(a),
            ToeplitzAtom::Unit(j, k) => ToeplitzElement::unit(j, k),
        }
    }

    pub fn adjoint(self) -> ToeplitzAtom {
        match self {
            ToeplitzAtom::Shift(a) => ToeplitzAtom::Shift(-a),
            ToeplitzAtom::Unit(j, k) => ToeplitzAtom::Unit(k, j),
        }
    }
}

impl fmt::Display for ToeplitzAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ToeplitzAtom::Shift(0) => write!(f, "1"),
            ToeplitzAtom::Shift(a) => write!(f, "T({})", monomial_name(a)),
            ToeplitzAtom::Unit(j, k) => write!(f, "E[{j},{k}]"),
        }
    }
}

/// `T(symbol) + compact`.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct ToeplitzElement {
    symbol: CirclePoly,
    compact: CompactPart,
}

impl ToeplitzElement {
    pub fn new(symbol: CirclePoly, compact: CompactPart) -> Self {
        ToeplitzElement { symbol, compact }
    }

    pub fn zero() -> Self {
        ToeplitzElement::default()
    }

    pub fn one() -> Self {
        ToeplitzElement::shift(0)
    }

    /// The isometry `z`.
    pub fn z() -> Self {
        ToeplitzElement::shift(1)
    }

    /// `z*`.
    pub fn z_star() -> Self {
        ToeplitzElement::shift(-1)
    }

    /// `T(uᵃ)`.
    pub fn shift(a: i64) -> Self {
        ToeplitzElement::new(CirclePoly::power(a), CompactPart::zero())
    }

    pub fn unit(j: u64, k: u64) -> Self {
        ToeplitzElement::new(CirclePoly::zero(), CompactPart::unit(j, k))
    }

    pub fn from_atoms<I: IntoIterator<Item = (ToeplitzAtom, Scalar)>>(atoms: I) -> Self {
        let mut sym = CirclePoly::zero();
        let mut k = CompactPart::zero();
        for (atom, c) in atoms {
            match atom {
                ToeplitzAtom::Shift(a) => sym.add_term(a, &c),
                ToeplitzAtom::Unit(r, s) => k.add_entry(r, s, &c),
            }
        }
        ToeplitzElement::new(sym, k)
    }

    pub fn symbol(&self) -> &CirclePoly {
        &self.symbol
    }

    pub fn compact(&self) -> &CompactPart {
        &self.compact
    }

    pub fn is_zero(&self) -> bool {
        self.symbol.is_zero() && self.compact.is_zero()
    }

    /// Unique expansion in the atom basis, symbol atoms first.
    pub fn atoms(&self) -> Vec<(ToeplitzAtom, Scalar)> {
        self.symbol
            .terms()
            .map(|(a, c)| (ToeplitzAtom::Shift(a), c.clone()))
            .chain(
                self.compact
                    .entries()
                    .map(|((j, k), c)| (ToeplitzAtom::Unit(j, k), c.clone())),
            )
            .collect()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        ToeplitzElement::from_atoms(self.atoms().into_iter().map(|(a, v)| (a, &v * c)))
    }

    /// Matrix entry `⟨e_j, x e_k⟩`.
    pub fn entry(&self, j: u64, k: u64) -> Scalar {
        self.symbol.coeff(j as i64 - k as i64) + self.compact.entry(j, k)
    }

    /// Adjoint: conjugate-reflect the symbol, conjugate-transpose the matrix.
    pub fn adjoint(&self) -> Self {
        ToeplitzElement::new(
            self.symbol.star(),
            CompactPart::from_entries(self.compact.entries().map(|((j, k), v)| ((k, j), v.conj()))),
        )
    }

    /// Width of the band `max |deg|` over the symbol support.
    pub fn band(&self) -> u64 {
        self.symbol
            .terms()
            .map(|(a, _)| a.unsigned_abs())
            .max()
            .unwrap_or(0)
    }

    /// Homogeneous components under the gauge grading.
    pub fn graded_components(&self) -> BTreeMap<i64, ToeplitzElement> {
        let mut out: BTreeMap<i64, Vec<(ToeplitzAtom, Scalar)>> = BTreeMap::new();
        for (atom, c) in self.atoms() {
            out.entry(atom.degree()).or_default().push((atom, c));
        }
        out.into_iter()
            .map(|(d, atoms)| (d, ToeplitzElement::from_atoms(atoms)))
            .collect()
    }
}

/// Hankel-type correction `T(f)T(g) − T(fg)`, with entries
/// `H_{jk} = −Σ_{l≤−1} f_{j−l} g_{l−k}`.
pub fn hankel_correction(f: &CirclePoly, g: &CirclePoly) -> CompactPart {
    let mut h = CompactPart::zero();
    for (a, x) in f.terms().filter(|&(a, _)| a >= 1) {
        for (b, y) in g.terms().filter(|&(b, _)| b <= -1) {
            let prod = -(x * y);
            // l = j − a ≤ −1 and k = j − a − b ≥ 0.
            for j in (a + b).max(0)..a {
                h.add_entry(j as u64, (j - a - b) as u64, &prod);
            }
        }
    }
    h
}

fn toeplitz_times_compact(f: &CirclePoly, k: &CompactPart) -> CompactPart {
    let mut out = CompactPart::zero();
    for ((l, col), v) in k.entries() {
        for (a, c) in f.terms() {
            let row = l as i64 + a;
            if row >= 0 {
                out.add_entry(row as u64, col, &(c * v));
            }
        }
    }
    out
}

fn compact_times_toeplitz(k: &CompactPart, g: &CirclePoly) -> CompactPart {
    let mut out = CompactPart::zero();
    for ((row, l), v) in k.entries() {
        for (b, c) in g.terms() {
            let col = l as i64 - b;
            if col >= 0 {
                out.add_entry(row, col as u64, &(v * c));
            }
        }
    }
    out
}

fn compact_times_compact(x: &CompactPart, y: &CompactPart) -> CompactPart {
    let mut by_row: BTreeMap<u64, Vec<(u64, &Scalar)>> = BTreeMap::new();
    for ((l, k), v) in y.entries() {
        by_row.entry(l).or_default().push((k, v));
    }
    let mut out = CompactPart::zero();
    for ((j, l), v) in x.entries() {
        if let Some(row) = by_row.get(&l) {
            for &(k, w) in row {
                out.add_entry(j, k, &(v * w));
            }
        }
    }
    out
}

impl Add<&CompactPart> for &CompactPart {
    type Output = CompactPart;
    fn add(self, rhs: &CompactPart) -> CompactPart {
        let mut out = self.clone();
        for ((j, k), v) in rhs.entries() {
            out.add_entry(j, k, v);
        }
        out
    }
}

impl Add<&ToeplitzElement> for &ToeplitzElement {
    type Output = ToeplitzElement;
    fn add(self, rhs: &ToeplitzElement) -> ToeplitzElement {
        ToeplitzElement::new(&self.symbol + &rhs.symbol, &self.compact + &rhs.compact)
    }
}

impl Sub<&ToeplitzElement> for &ToeplitzElement {
    type Output = ToeplitzElement;
    fn sub(self, rhs: &ToeplitzElement) -> ToeplitzElement {
        self + &(-rhs)
    }
}

impl Neg for &ToeplitzElement {
    type Output = ToeplitzElement;
    fn neg(self) -> ToeplitzElement {
        self.scale(&-Scalar::one())
    }
}

impl Mul<&ToeplitzElement> for &ToeplitzElement {
    type Output = ToeplitzElement;
    fn mul(self, rhs: &ToeplitzElement) -> ToeplitzElement {
        let (f, g) = (&self.symbol, &rhs.symbol);
        let mut compact = hankel_correction(f, g);
        compact = &compact + &toeplitz_times_compact(f, &rhs.compact);
        compact = &compact + &compact_times_toeplitz(&self.compact, g);
        compact = &compact + &compact_times_compact(&self.compact, &rhs.compact);
        ToeplitzElement::new(f * g, compact)
    }
}

/// `σ`: the symbol of `T(f) + K` is `f`.
pub fn symbol_map(x: &ToeplitzElement) -> CirclePoly {
    x.symbol.clone()
}

/// Linear splitting of `σ`: `f ↦ T(f)`. Not multiplicative.
pub fn toeplitz_lift(f: &CirclePoly) -> ToeplitzElement {
    ToeplitzElement::new(f.clone(), CompactPart::zero())
}

/// Element `Σₙ xₙ ⊗ uⁿ` of `T ⊗ C(S¹)`, stored by circle degree.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct GaugeExpansion {
    components: BTreeMap<i64, ToeplitzElement>,
}

impl GaugeExpansion {
    pub fn from_components<I: IntoIterator<Item = (i64, ToeplitzElement)>>(it: I) -> Self {
        let mut out = GaugeExpansion::default();
        for (n, x) in it {
            out.add(n, &x);
        }
        out
    }

    pub fn pure(x: &ToeplitzElement, n: i64) -> Self {
        GaugeExpansion::from_components([(n, x.clone())])
    }

    fn add(&mut self, n: i64, x: &ToeplitzElement) {
        if x.is_zero() {
            return;
        }
        let e = self.components.entry(n).or_default();
        *e = &*e + x;
        if e.is_zero() {
            self.components.remove(&n);
        }
    }

    pub fn components(&self) -> impl Iterator<Item = (i64, &ToeplitzElement)> {
        self.components.iter().map(|(&n, x)| (n, x))
    }

    /// `(id ⊗ ε)`.
    pub fn counit_leg(&self) -> ToeplitzElement {
        self.components
            .values()
            .fold(ToeplitzElement::zero(), |acc, x| &acc + x)
    }

    /// `(ρ ⊗ id)`, giving `Σ (xₙ)ₘ ⊗ uᵐ ⊗ uⁿ` keyed by `(m, n)`.
    pub fn coact_left(&self) -> BTreeMap<(i64, i64), ToeplitzElement> {
        let mut out: BTreeMap<(i64, i64), ToeplitzElement> = BTreeMap::new();
        for (&n, x) in &self.components {
            for (m, y) in gauge_coaction(x).components {
                out.insert((m, n), y);
            }
        }
        out
    }

    /// `(id ⊗ Δ)`, keyed by `(n, n)`.
    pub fn comul_right(&self) -> BTreeMap<(i64, i64), ToeplitzElement> {
        self.components.iter().map(|(&n, x)| ((n, n), x.clone())).collect()
    }

    /// Product in `T ⊗ C(S¹)`.
    pub fn mul(&self, rhs: &GaugeExpansion) -> GaugeExpansion {
        let mut out = GaugeExpansion::default();
        for (&n, x) in &self.components {
            for (&m, y) in &rhs.components {
                out.add(n + m, &(x * y));
            }
        }
        out
    }

    /// `(t ⊗ uⁿ)* = t* ⊗ u⁻ⁿ`.
    pub fn adjoint(&self) -> GaugeExpansion {
        GaugeExpansion::from_components(self.components.iter().map(|(&n, x)| (-n, x.adjoint())))
    }
}

/// Gauge coaction `ρ(z) = z ⊗ u`. Atoms are homogeneous, so
/// `T(uᵃ) ↦ T(uᵃ) ⊗ uᵃ` and `E_{jk} ↦ E_{jk} ⊗ u^{j−k}`.
pub fn gauge_coaction(x: &ToeplitzElement) -> GaugeExpansion {
    GaugeExpansion::from_components(x.graded_components())
}

impl fmt::Display for ToeplitzElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let rendered: Vec<(bool, String)> = self
            .atoms()
            .iter()
            .map(|(atom, c)| render_term(c, &atom.to_string(), *atom == ToeplitzAtom::Shift(0)))
            .collect();
        write_signed_sum(f, &rendered)
    }
}

impl fmt::Debug for ToeplitzElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct CompactEntry {
    row: u64,
    col: u64,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct ToeplitzJson {
    symbol: CirclePoly,
    compact: Vec<CompactEntry>,
}

impl Serialize for ToeplitzElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ToeplitzJson {
            symbol: self.symbol.clone(),
            compact: self
                .compact
                .entries()
                .map(|((row, col), c)| CompactEntry { row, col, coeff: c.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for ToeplitzElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw = ToeplitzJson::deserialize(deserializer)?;
        Ok(ToeplitzElement::new(
            raw.symbol,
            CompactPart::from_entries(raw.compact.into_iter().map(|e| ((e.row, e.col), e.coeff))),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> ToeplitzElement {
        ToeplitzElement::z()
    }

    fn zs() -> ToeplitzElement {
        ToeplitzElement::z_star()
    }

    #[test]
    fn isometry_relation() {
        assert_eq!(&zs() * &z(), ToeplitzElement::one());
    }

    #[test]
    fn range_projection_of_shift() {
        let expected = &ToeplitzElement::one() - &ToeplitzElement::unit(0, 0);
        assert_eq!(&z() * &zs(), expected);
        let h = hankel_correction(&CirclePoly::u(), &CirclePoly::power(-1));
        assert_eq!(h.entry(0, 0), -Scalar::one());
    }

    #[test]
    fn matrix_unit_calculus() {
        assert_eq!(&ToeplitzElement::unit(0, 1) * &ToeplitzElement::unit(1, 2), ToeplitzElement::unit(0, 2));
        assert!((&ToeplitzElement::unit(0, 1) * &ToeplitzElement::unit(2, 2)).is_zero());
        // z E_{00} = E_{10}; E_{00} z = 0; E_{01} z = E_{00}.
        assert_eq!(&z() * &ToeplitzElement::unit(0, 0), ToeplitzElement::unit(1, 0));
        assert!((&ToeplitzElement::unit(0, 0) * &z()).is_zero());
        assert_eq!(&ToeplitzElement::unit(0, 1) * &z(), ToeplitzElement::unit(0, 0));
    }

    #[test]
    fn adjoint_examples() {
        assert_eq!(z().adjoint(), zs());
        assert_eq!(ToeplitzElement::unit(0, 1).adjoint(), ToeplitzElement::unit(1, 0));
        let x = &z().scale(&Scalar::i()) + &ToeplitzElement::unit(0, 0);
        let expected = &zs().scale(&-Scalar::i()) + &ToeplitzElement::unit(0, 0);
        assert_eq!(x.adjoint(), expected);
    }

    #[test]
    fn symbol_examples() {
        assert_eq!(symbol_map(&z()), CirclePoly::u());
        assert!(symbol_map(&ToeplitzElement::unit(5, 7)).is_zero());
        let x = &ToeplitzElement::shift(3).scale(&Scalar::from_int(2)) + &ToeplitzElement::unit(0, 0);
        assert_eq!(symbol_map(&x), CirclePoly::monomial(3, Scalar::from_int(2)));
    }

    #[test]
    fn lift_is_a_section_but_not_multiplicative() {
        assert_eq!(toeplitz_lift(&CirclePoly::u()), z());
        assert_eq!(toeplitz_lift(&CirclePoly::one()), ToeplitzElement::one());
        let lifted_product = toeplitz_lift(&(&CirclePoly::u() * &CirclePoly::power(-1)));
        let product_of_lifts = &toeplitz_lift(&CirclePoly::u()) * &toeplitz_lift(&CirclePoly::power(-1));
        assert_eq!(&lifted_product - &product_of_lifts, ToeplitzElement::unit(0, 0));
    }

    #[test]
    fn coaction_examples() {
        assert_eq!(gauge_coaction(&z()), GaugeExpansion::pure(&z(), 1));
        assert_eq!(gauge_coaction(&ToeplitzElement::one()), GaugeExpansion::pure(&ToeplitzElement::one(), 0));
        assert_eq!(
            gauge_coaction(&ToeplitzElement::unit(3, 0)),
            GaugeExpansion::pure(&ToeplitzElement::unit(3, 0), 3)
        );
    }

    #[test]
    fn matrix_unit_degree_from_polynomial_in_generators() {
        // E_{jk} = z^j (1 − z z*) z*^k; apply ρ multiplicatively.
        let rho_z = GaugeExpansion::pure(&z(), 1);
        let rho_zs = GaugeExpansion::pure(&zs(), -1);
        let rho_one = GaugeExpansion::pure(&ToeplitzElement::one(), 0);
        let corner = {
            let zzs = rho_z.mul(&rho_zs);
            let diff: Vec<(i64, ToeplitzElement)> = rho_one
                .components()
                .map(|(n, x)| (n, x.clone()))
                .chain(zzs.components().map(|(n, x)| (n, -x)))
                .collect();
            GaugeExpansion::from_components(diff)
        };
        for (j, k) in [(3u64, 0u64), (1, 2), (0, 0), (2, 2)] {
            let mut acc = rho_one.clone();
            for _ in 0..j {
                acc = acc.mul(&rho_z);
            }
            acc = acc.mul(&corner);
            for _ in 0..k {
                acc = acc.mul(&rho_zs);
            }
            let e = ToeplitzElement::unit(j, k);
            assert_eq!(acc, GaugeExpansion::pure(&e, j as i64 - k as i64));
            assert_eq!(acc, gauge_coaction(&e));
        }
    }

    #[test]
    fn rendering() {
        let x = &ToeplitzElement::shift(2) + &ToeplitzElement::unit(0, 1).scale(&Scalar::from_int(3));
        assert_eq!(x.to_string(), "T(u^2) + 3*E[0,1]");
        let back: ToeplitzElement = serde_json::from_str(&serde_json::to_string(&x).unwrap()).unwrap();
        assert_eq!(back, x);
    }
}
