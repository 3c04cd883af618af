//! Mixed tensor products of Toeplitz and circle factors in the atom basis.
//!
//! A [`TensorElement`] lives in `F₁ ⊗ ⋯ ⊗ Fₙ` where each factor is either the
//! dense Toeplitz algebra or `C(S¹)`. Pure tensors of atoms are linearly
//! independent, so the term map is a canonical form. Slot arguments in the
//! public API are 1-based, matching `σ_k` and `χ_j`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::circle_hopf::{monomial_name, render_term, write_signed_sum, CirclePoly};
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::toeplitz::{ToeplitzAtom, ToeplitzElement};

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum SlotKind {
    Toeplitz,
    Circle,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum Atom {
    Toeplitz(ToeplitzAtom),
    /// `uᵐ` in a circle slot.
    Circle(i64),
}

impl Atom {
    pub fn kind(&self) -> SlotKind {
        match self {
            Atom::Toeplitz(_) => SlotKind::Toeplitz,
            Atom::Circle(_) => SlotKind::Circle,
        }
    }

    pub fn degree(&self) -> i64 {
        match self {
            Atom::Toeplitz(t) => t.degree(),
            Atom::Circle(m) => *m,
        }
    }

    pub fn is_compact(&self) -> bool {
        matches!(self, Atom::Toeplitz(t) if t.is_compact())
    }

    pub fn unit(kind: SlotKind) -> Atom {
        match kind {
            SlotKind::Toeplitz => Atom::Toeplitz(ToeplitzAtom::Shift(0)),
            SlotKind::Circle => Atom::Circle(0),
        }
    }

    pub fn shift(a: i64) -> Atom {
        Atom::Toeplitz(ToeplitzAtom::Shift(a))
    }

    pub fn matrix_unit(j: u64, k: u64) -> Atom {
        Atom::Toeplitz(ToeplitzAtom::Unit(j, k))
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Atom::Toeplitz(t) => write!(f, "{t}"),
            Atom::Circle(m) => write!(f, "{}", monomial_name(*m)),
        }
    }
}

/// A full tensor factor, used to build elements as `f₁ ⊗ ⋯ ⊗ fₙ`.
#[derive(Clone, Debug)]
pub enum Factor {
    Toeplitz(ToeplitzElement),
    Circle(CirclePoly),
}

impl Factor {
    fn kind(&self) -> SlotKind {
        match self {
            Factor::Toeplitz(_) => SlotKind::Toeplitz,
            Factor::Circle(_) => SlotKind::Circle,
        }
    }

    fn atoms(&self) -> Vec<(Atom, Scalar)> {
        match self {
            Factor::Toeplitz(t) => t.atoms().into_iter().map(|(a, c)| (Atom::Toeplitz(a), c)).collect(),
            Factor::Circle(p) => p.terms().map(|(m, c)| (Atom::Circle(m), c.clone())).collect(),
        }
    }
}

impl From<ToeplitzElement> for Factor {
    fn from(t: ToeplitzElement) -> Self {
        Factor::Toeplitz(t)
    }
}

impl From<CirclePoly> for Factor {
    fn from(p: CirclePoly) -> Self {
        Factor::Circle(p)
    }
}

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct TensorElement {
    kinds: Vec<SlotKind>,
    terms: BTreeMap<Vec<Atom>, Scalar>,
}

impl TensorElement {
    pub fn zero(kinds: Vec<SlotKind>) -> Self {
        TensorElement { kinds, terms: BTreeMap::new() }
    }

    /// Zero of `T^{⊗n}`.
    pub fn zero_toeplitz(n: usize) -> Self {
        TensorElement::zero(vec![SlotKind::Toeplitz; n])
    }

    pub fn unit(kinds: Vec<SlotKind>) -> Self {
        let atoms = kinds.iter().map(|&k| Atom::unit(k)).collect();
        let mut t = TensorElement::zero(kinds);
        t.add_term(atoms, &Scalar::one());
        t
    }

    /// Unit of `T^{⊗n}`.
    pub fn unit_toeplitz(n: usize) -> Self {
        TensorElement::unit(vec![SlotKind::Toeplitz; n])
    }

    /// `c · a₁ ⊗ ⋯ ⊗ aₙ`.
    pub fn pure(atoms: Vec<Atom>, c: Scalar) -> Self {
        let kinds = atoms.iter().map(Atom::kind).collect();
        let mut t = TensorElement::zero(kinds);
        t.add_term(atoms, &c);
        t
    }

    /// Expands `f₁ ⊗ ⋯ ⊗ fₙ` in the atom basis.
    pub fn tensor(factors: &[Factor]) -> Self {
        let kinds: Vec<SlotKind> = factors.iter().map(Factor::kind).collect();
        let mut partial: Vec<(Vec<Atom>, Scalar)> = vec![(Vec::new(), Scalar::one())];
        for f in factors {
            let atoms = f.atoms();
            let mut next = Vec::with_capacity(partial.len() * atoms.len());
            for (key, c) in &partial {
                for (a, x) in &atoms {
                    let mut k = key.clone();
                    k.push(*a);
                    next.push((k, c * x));
                }
            }
            partial = next;
        }
        let mut t = TensorElement::zero(kinds);
        for (k, c) in partial {
            t.add_term(k, &c);
        }
        t
    }

    pub fn add_term(&mut self, atoms: Vec<Atom>, c: &Scalar) {
        debug_assert_eq!(atoms.len(), self.kinds.len());
        debug_assert!(atoms.iter().zip(&self.kinds).all(|(a, &k)| a.kind() == k));
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&atoms) {
            Some(e) => {
                *e += c;
                if e.is_zero() {
                    self.terms.remove(&atoms);
                }
            }
            None => {
                self.terms.insert(atoms, c.clone());
            }
        }
    }

    pub fn kinds(&self) -> &[SlotKind] {
        &self.kinds
    }

    pub fn n_slots(&self) -> usize {
        self.kinds.len()
    }

    /// 1-based positions of the circle slots.
    pub fn circle_slots(&self) -> Vec<usize> {
        self.kinds
            .iter()
            .enumerate()
            .filter(|(_, &k)| k == SlotKind::Circle)
            .map(|(i, _)| i + 1)
            .collect()
    }

    pub fn is_pure_toeplitz(&self) -> bool {
        self.kinds.iter().all(|&k| k == SlotKind::Toeplitz)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Atom], &Scalar)> {
        self.terms.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn n_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        let mut out = TensorElement::zero(self.kinds.clone());
        for (k, v) in &self.terms {
            out.add_term(k.clone(), &(v * c));
        }
        out
    }

    fn check_slot(&self, slot: usize, kind: SlotKind) -> Result<usize> {
        if slot == 0 || slot > self.kinds.len() {
            return Err(Error::SlotMismatch(format!(
                "slot {slot} out of range 1..={}",
                self.kinds.len()
            )));
        }
        if self.kinds[slot - 1] != kind {
            return Err(Error::SlotMismatch(format!(
                "slot {slot} is {:?}, expected {kind:?}",
                self.kinds[slot - 1]
            )));
        }
        Ok(slot - 1)
    }

    /// Rewrites every term through `f`, which returns the new atoms (or
    /// `None` to drop the term) and a coefficient factor.
    fn map_terms<F>(&self, kinds: Vec<SlotKind>, mut f: F) -> Self
    where
        F: FnMut(&[Atom]) -> Option<Vec<Atom>>,
    {
        let mut out = TensorElement::zero(kinds);
        for (k, c) in &self.terms {
            if let Some(nk) = f(k) {
                out.add_term(nk, c);
            }
        }
        out
    }

    /// `σ` in a Toeplitz slot: `T(uᵃ) ↦ uᵃ`, `E_{jk} ↦ 0`.
    pub fn slot_symbol(&self, slot: usize) -> Result<Self> {
        let idx = self.check_slot(slot, SlotKind::Toeplitz)?;
        let mut kinds = self.kinds.clone();
        kinds[idx] = SlotKind::Circle;
        Ok(self.map_terms(kinds, |k| match k[idx] {
            Atom::Toeplitz(ToeplitzAtom::Shift(a)) => {
                let mut nk = k.to_vec();
                nk[idx] = Atom::Circle(a);
                Some(nk)
            }
            _ => None,
        }))
    }

    /// Linear lift `uᵃ ↦ T(uᵃ)` in a circle slot.
    pub fn lift_slot(&self, slot: usize) -> Result<Self> {
        let idx = self.check_slot(slot, SlotKind::Circle)?;
        let mut kinds = self.kinds.clone();
        kinds[idx] = SlotKind::Toeplitz;
        Ok(self.map_terms(kinds, |k| {
            let mut nk = k.to_vec();
            nk[idx] = Atom::shift(k[idx].degree());
            Some(nk)
        }))
    }

    /// `lift ∘ σ` in a Toeplitz slot: drops terms with a compact atom there.
    pub fn drop_compact_in(&self, slot: usize) -> Result<Self> {
        let idx = self.check_slot(slot, SlotKind::Toeplitz)?;
        Ok(self.map_terms(self.kinds.clone(), |k| (!k[idx].is_compact()).then(|| k.to_vec())))
    }

    /// True when every term has a compact atom in `slot`, i.e. the element
    /// lies in `T^{⊗slot−1} ⊗ K ⊗ ⋯`.
    pub fn compact_in_slot(&self, slot: usize) -> Result<bool> {
        let idx = self.check_slot(slot, SlotKind::Toeplitz)?;
        Ok(self.terms.keys().all(|k| k[idx].is_compact()))
    }

    /// Removes slot `from` and reinserts it at position `to` (both 1-based).
    pub fn move_slot(&self, from: usize, to: usize) -> Result<Self> {
        let n = self.kinds.len();
        if from == 0 || from > n || to == 0 || to > n {
            return Err(Error::SlotMismatch(format!("cannot move slot {from} to {to} in {n} slots")));
        }
        let permute = |v: &[Atom]| {
            let mut nv = v.to_vec();
            let a = nv.remove(from - 1);
            nv.insert(to - 1, a);
            nv
        };
        let mut kinds = self.kinds.clone();
        let k = kinds.remove(from - 1);
        kinds.insert(to - 1, k);
        Ok(self.map_terms(kinds, |key| Some(permute(key))))
    }

    /// `ρ` in a Toeplitz slot, inserting the new circle leg right after it.
    pub fn coact_slot(&self, slot: usize) -> Result<Self> {
        let idx = self.check_slot(slot, SlotKind::Toeplitz)?;
        let mut kinds = self.kinds.clone();
        kinds.insert(idx + 1, SlotKind::Circle);
        Ok(self.map_terms(kinds, |k| {
            let mut nk = k.to_vec();
            nk.insert(idx + 1, Atom::Circle(k[idx].degree()));
            Some(nk)
        }))
    }

    /// `m` on two circle slots: the product lands in `into`, `from` is removed.
    pub fn multiply_circle_slots(&self, into: usize, from: usize) -> Result<Self> {
        let a = self.check_slot(into, SlotKind::Circle)?;
        let b = self.check_slot(from, SlotKind::Circle)?;
        if a == b {
            return Err(Error::SlotMismatch("cannot multiply a slot with itself".into()));
        }
        let mut kinds = self.kinds.clone();
        kinds.remove(b);
        Ok(self.map_terms(kinds, |k| {
            let mut nk = k.to_vec();
            nk[a] = Atom::Circle(k[a].degree() + k[b].degree());
            nk.remove(b);
            Some(nk)
        }))
    }

    /// `S` in a circle slot.
    pub fn antipode_slot(&self, slot: usize) -> Result<Self> {
        let idx = self.check_slot(slot, SlotKind::Circle)?;
        Ok(self.map_terms(self.kinds.clone(), |k| {
            let mut nk = k.to_vec();
            nk[idx] = Atom::Circle(-k[idx].degree());
            Some(nk)
        }))
    }

    /// Sum of the gauge degrees of all Toeplitz atoms of a pure tensor.
    pub fn toeplitz_degree(atoms: &[Atom]) -> i64 {
        atoms
            .iter()
            .filter(|a| a.kind() == SlotKind::Toeplitz)
            .map(Atom::degree)
            .sum()
    }

    pub fn adjoint(&self) -> Self {
        let mut out = TensorElement::zero(self.kinds.clone());
        for (k, c) in &self.terms {
            let nk = k
                .iter()
                .map(|a| match a {
                    Atom::Toeplitz(t) => Atom::Toeplitz(t.adjoint()),
                    Atom::Circle(m) => Atom::Circle(-m),
                })
                .collect();
            out.add_term(nk, &c.conj());
        }
        out
    }

    fn same_shape(&self, other: &TensorElement) {
        assert_eq!(self.kinds, other.kinds, "tensor shape mismatch");
    }
}

fn atom_product(a: &Atom, b: &Atom) -> Vec<(Atom, Scalar)> {
    match (a, b) {
        (Atom::Circle(m), Atom::Circle(n)) => vec![(Atom::Circle(m + n), Scalar::one())],
        (Atom::Toeplitz(x), Atom::Toeplitz(y)) => (&x.to_element() * &y.to_element())
            .atoms()
            .into_iter()
            .map(|(t, c)| (Atom::Toeplitz(t), c))
            .collect(),
        _ => panic!("slot kind mismatch in tensor product"),
    }
}

impl Add<&TensorElement> for &TensorElement {
    type Output = TensorElement;
    fn add(self, rhs: &TensorElement) -> TensorElement {
        self.same_shape(rhs);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c);
        }
        out
    }
}

impl Sub<&TensorElement> for &TensorElement {
    type Output = TensorElement;
    fn sub(self, rhs: &TensorElement) -> TensorElement {
        self.same_shape(rhs);
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), &-c);
        }
        out
    }
}

impl Neg for &TensorElement {
    type Output = TensorElement;
    fn neg(self) -> TensorElement {
        self.scale(&-Scalar::one())
    }
}

/// Slotwise product.
impl Mul<&TensorElement> for &TensorElement {
    type Output = TensorElement;
    fn mul(self, rhs: &TensorElement) -> TensorElement {
        self.same_shape(rhs);
        let mut out = TensorElement::zero(self.kinds.clone());
        for (ka, ca) in &self.terms {
            for (kb, cb) in &rhs.terms {
                let mut partial: Vec<(Vec<Atom>, Scalar)> = vec![(Vec::new(), ca * cb)];
                for (x, y) in ka.iter().zip(kb) {
                    let prods = atom_product(x, y);
                    let mut next = Vec::with_capacity(partial.len() * prods.len());
                    for (key, c) in &partial {
                        for (a, v) in &prods {
                            let mut nk = key.clone();
                            nk.push(*a);
                            next.push((nk, c * v));
                        }
                    }
                    partial = next;
                }
                for (k, c) in partial {
                    out.add_term(k, &c);
                }
            }
        }
        out
    }
}

impl fmt::Display for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let rendered: Vec<(bool, String)> = self
            .terms
            .iter()
            .map(|(k, c)| {
                let name: Vec<String> = k.iter().map(Atom::to_string).collect();
                render_term(c, &name.join("⊗"), k.is_empty())
            })
            .collect();
        write_signed_sum(f, &rendered)
    }
}

impl fmt::Debug for TensorElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    atoms: Vec<Atom>,
    coeff: Scalar,
}

#[derive(Serialize, Deserialize)]
struct TensorJson {
    slots: Vec<SlotKind>,
    terms: Vec<TermJson>,
}

impl Serialize for TensorElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        TensorJson {
            slots: self.kinds.clone(),
            terms: self
                .terms
                .iter()
                .map(|(k, c)| TermJson { atoms: k.clone(), coeff: c.clone() })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for TensorElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = TensorJson::deserialize(deserializer)?;
        let mut t = TensorElement::zero(raw.slots);
        for term in raw.terms {
            let shape_ok = term.atoms.len() == t.kinds.len()
                && term.atoms.iter().zip(&t.kinds).all(|(a, &k)| a.kind() == k);
            if !shape_ok {
                return Err(serde::de::Error::custom("term does not match slot kinds"));
            }
            t.add_term(term.atoms, &term.coeff);
        }
        Ok(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> Factor {
        ToeplitzElement::z().into()
    }

    fn e(j: u64, k: u64) -> Factor {
        ToeplitzElement::unit(j, k).into()
    }

    #[test]
    fn symbol_and_lift_in_slots() {
        let x = TensorElement::tensor(&[z(), z()]);
        let s = x.slot_symbol(1).unwrap();
        assert_eq!(s, TensorElement::tensor(&[CirclePoly::u().into(), z()]));
        assert_eq!(s.lift_slot(1).unwrap(), x);
        let killed = TensorElement::tensor(&[e(0, 0), z()]).slot_symbol(1).unwrap();
        assert!(killed.is_zero());
        assert!(x.slot_symbol(3).is_err());
        assert!(s.slot_symbol(1).is_err());
    }

    #[test]
    fn product_is_slotwise() {
        let zs: Factor = ToeplitzElement::z_star().into();
        let a = TensorElement::tensor(&[z(), zs.clone()]);
        let b = TensorElement::tensor(&[zs, z()]);
        let expected = TensorElement::tensor(&[
            (&ToeplitzElement::one() - &ToeplitzElement::unit(0, 0)).into(),
            ToeplitzElement::one().into(),
        ]);
        assert_eq!(&a * &b, expected);
    }

    #[test]
    fn move_slot_is_a_permutation() {
        let x = TensorElement::tensor(&[z(), e(0, 2), CirclePoly::power(3).into()]);
        let moved = x.move_slot(3, 1).unwrap();
        assert_eq!(moved, TensorElement::tensor(&[CirclePoly::power(3).into(), z(), e(0, 2)]));
        assert_eq!(moved.move_slot(1, 3).unwrap(), x);
    }

    #[test]
    fn json_roundtrip() {
        let x = &TensorElement::tensor(&[z(), CirclePoly::power(-2).into()])
            + &TensorElement::tensor(&[e(1, 0), CirclePoly::one().into()]).scale(&Scalar::gaussian(1, 1));
        let s = serde_json::to_string(&x).unwrap();
        let back: TensorElement = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
        assert!(serde_json::from_str::<TensorElement>(
            r#"{"slots":["Toeplitz"],"terms":[{"atoms":[{"Circle":1}],"coeff":[1,1,0,1]}]}"#
        )
        .is_err());
    }

    #[test]
    fn rendering() {
        let x = TensorElement::tensor(&[z(), CirclePoly::power(-2).into()]);
        assert_eq!(x.to_string(), "T(u)⊗u^-2");
    }
}
