//! Laurent polynomials in the unitary generator `u`, i.e. the group algebra
//! of ℤ, carrying the Hopf structure of the circle:
//! `Δ(u) = u⊗u`, `S(u) = u⁻¹`, `ε(u) = 1`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::Scalar;

/// Finite Laurent polynomial `Σ cₙ uⁿ`. Zero coefficients are never stored.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct CirclePoly {
    coeffs: BTreeMap<i64, Scalar>,
}

impl CirclePoly {
    pub fn zero() -> Self {
        CirclePoly::default()
    }

    pub fn one() -> Self {
        CirclePoly::monomial(0, Scalar::one())
    }

    /// The unitary generator `u`.
    pub fn u() -> Self {
        CirclePoly::monomial(1, Scalar::one())
    }

    /// `c·uⁿ`.
    pub fn monomial(n: i64, c: Scalar) -> Self {
        let mut p = CirclePoly::zero();
        p.add_term(n, &c);
        p
    }

    /// `uⁿ` with unit coefficient.
    pub fn power(n: i64) -> Self {
        CirclePoly::monomial(n, Scalar::one())
    }

    pub fn from_terms<I: IntoIterator<Item = (i64, Scalar)>>(terms: I) -> Self {
        let mut p = CirclePoly::zero();
        for (n, c) in terms {
            p.add_term(n, &c);
        }
        p
    }

    pub fn add_term(&mut self, n: i64, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(n).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&n);
        }
    }

    pub fn coeff(&self, n: i64) -> Scalar {
        self.coeffs.get(&n).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Scalar)> {
        self.coeffs.iter().map(|(&n, c)| (n, c))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_degree(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        CirclePoly::from_terms(self.terms().map(|(n, a)| (n, a * c)))
    }

    /// Antipode: `uⁿ ↦ u⁻ⁿ`, linear.
    pub fn antipode(&self) -> Self {
        CirclePoly {
            coeffs: self.coeffs.iter().map(|(&n, c)| (-n, c.clone())).collect(),
        }
    }

    /// Counit: evaluation at `u = 1`.
    pub fn counit(&self) -> Scalar {
        self.coeffs.values().cloned().sum()
    }

    /// Comultiplication `uⁿ ↦ uⁿ⊗uⁿ`.
    pub fn comul(&self) -> CircleTensor {
        CircleTensor::from_terms(2, self.terms().map(|(n, c)| (vec![n, n], c.clone())))
    }

    /// Involution of C(S¹): `c·uⁿ ↦ c̄·u⁻ⁿ`.
    pub fn star(&self) -> Self {
        CirclePoly {
            coeffs: self.coeffs.iter().map(|(&n, c)| (-n, c.conj())).collect(),
        }
    }
}

impl Add<&CirclePoly> for &CirclePoly {
    type Output = CirclePoly;
    fn add(self, rhs: &CirclePoly) -> CirclePoly {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            out.add_term(n, c);
        }
        out
    }
}

impl Sub<&CirclePoly> for &CirclePoly {
    type Output = CirclePoly;
    fn sub(self, rhs: &CirclePoly) -> CirclePoly {
        let mut out = self.clone();
        for (n, c) in rhs.terms() {
            out.add_term(n, &-c);
        }
        out
    }
}

impl Neg for &CirclePoly {
    type Output = CirclePoly;
    fn neg(self) -> CirclePoly {
        self.scale(&-Scalar::one())
    }
}

/// Laurent convolution.
impl Mul<&CirclePoly> for &CirclePoly {
    type Output = CirclePoly;
    fn mul(self, rhs: &CirclePoly) -> CirclePoly {
        let mut out = CirclePoly::zero();
        for (a, x) in self.terms() {
            for (b, y) in rhs.terms() {
                out.add_term(a + b, &(x * y));
            }
        }
        out
    }
}

impl fmt::Display for CirclePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let rendered: Vec<(bool, String)> = self
            .terms()
            .map(|(n, c)| render_term(c, &monomial_name(n), n == 0))
            .collect();
        write_signed_sum(f, &rendered)
    }
}

impl fmt::Debug for CirclePoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

pub(crate) fn monomial_name(n: i64) -> String {
    match n {
        0 => "1".to_string(),
        1 => "u".to_string(),
        _ => format!("u^{n}"),
    }
}

/// Renders `c*name`, returning whether the term is "negative" (so that the
/// sum printer can use ` - `) and the body without the leading minus.
pub(crate) fn render_term(c: &Scalar, name: &str, is_unit: bool) -> (bool, String) {
    let negative = c.is_real() && c.re() < &num_rational::BigRational::zero();
    let mag = if negative { -c } else { c.clone() };
    let body = if is_unit {
        mag.fmt_coefficient()
    } else if mag.is_one() {
        name.to_string()
    } else {
        format!("{}*{}", mag.fmt_coefficient(), name)
    };
    (negative, body)
}

pub(crate) fn write_signed_sum(f: &mut fmt::Formatter<'_>, terms: &[(bool, String)]) -> fmt::Result {
    for (idx, (neg, body)) in terms.iter().enumerate() {
        match (idx, neg) {
            (0, true) => write!(f, "-{body}")?,
            (0, false) => write!(f, "{body}")?,
            (_, true) => write!(f, " - {body}")?,
            (_, false) => write!(f, " + {body}")?,
        }
    }
    Ok(())
}

// JSON: {"<degree>": [re_num, re_den, im_num, im_den], ...}
impl Serialize for CirclePoly {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeMap;
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (n, c) in &self.coeffs {
            map.serialize_entry(&n.to_string(), c)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for CirclePoly {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let raw: BTreeMap<String, Scalar> = BTreeMap::deserialize(deserializer)?;
        let mut p = CirclePoly::zero();
        for (k, c) in raw {
            let n: i64 = k.parse().map_err(serde::de::Error::custom)?;
            p.add_term(n, &c);
        }
        Ok(p)
    }
}

/// Formal linear combination of pure tensors `u^{n₁}⊗⋯⊗u^{n_k}` in
/// `C(S¹)^{⊗k}`. Used to state the Hopf axioms on the nose.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct CircleTensor {
    arity: usize,
    terms: BTreeMap<Vec<i64>, Scalar>,
}

impl CircleTensor {
    pub fn zero(arity: usize) -> Self {
        CircleTensor { arity, terms: BTreeMap::new() }
    }

    pub fn from_terms<I: IntoIterator<Item = (Vec<i64>, Scalar)>>(arity: usize, terms: I) -> Self {
        let mut t = CircleTensor::zero(arity);
        for (k, c) in terms {
            t.add_term(k, &c);
        }
        t
    }

    /// `f ⊗ g`.
    pub fn pure(factors: &[CirclePoly]) -> Self {
        let mut acc = CircleTensor::from_terms(0, [(Vec::new(), Scalar::one())]);
        for f in factors {
            let mut next = CircleTensor::zero(acc.arity + 1);
            for (k, c) in &acc.terms {
                for (n, a) in f.terms() {
                    let mut key = k.clone();
                    key.push(n);
                    next.add_term(key, &(c * a));
                }
            }
            acc = next;
        }
        acc
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn add_term(&mut self, key: Vec<i64>, c: &Scalar) {
        assert_eq!(key.len(), self.arity, "tensor arity mismatch");
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(key.clone()).or_insert_with(Scalar::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&key);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[i64], &Scalar)> {
        self.terms.iter().map(|(k, c)| (k.as_slice(), c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn map_keys<F: Fn(&[i64]) -> Vec<(Vec<i64>, Scalar)>>(&self, arity: usize, f: F) -> Self {
        let mut out = CircleTensor::zero(arity);
        for (k, c) in &self.terms {
            for (nk, a) in f(k) {
                out.add_term(nk, &(c * &a));
            }
        }
        out
    }

    /// Applies `Δ` in leg `slot`, raising the arity by one.
    pub fn comul_at(&self, slot: usize) -> Self {
        self.map_keys(self.arity + 1, |k| {
            let mut nk = k.to_vec();
            nk.insert(slot, k[slot]);
            vec![(nk, Scalar::one())]
        })
    }

    /// Applies `S` in leg `slot`.
    pub fn antipode_at(&self, slot: usize) -> Self {
        self.map_keys(self.arity, |k| {
            let mut nk = k.to_vec();
            nk[slot] = -nk[slot];
            vec![(nk, Scalar::one())]
        })
    }

    /// Applies `ε` in leg `slot`, lowering the arity by one.
    pub fn counit_at(&self, slot: usize) -> Self {
        self.map_keys(self.arity - 1, |k| {
            let mut nk = k.to_vec();
            nk.remove(slot);
            vec![(nk, Scalar::one())]
        })
    }

    /// Multiplies legs `slot` and `slot + 1` together.
    pub fn multiply_at(&self, slot: usize) -> Self {
        self.map_keys(self.arity - 1, |k| {
            let mut nk = k.to_vec();
            let b = nk.remove(slot + 1);
            nk[slot] += b;
            vec![(nk, Scalar::one())]
        })
    }

    /// Legwise product in `C(S¹)^{⊗k}`.
    pub fn mul(&self, rhs: &CircleTensor) -> Self {
        assert_eq!(self.arity, rhs.arity);
        let mut out = CircleTensor::zero(self.arity);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let key = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(key, &(x * y));
            }
        }
        out
    }

    /// Collapses an arity-1 tensor to a polynomial.
    pub fn into_poly(self) -> CirclePoly {
        assert_eq!(self.arity, 1);
        CirclePoly::from_terms(self.terms.into_iter().map(|(k, c)| (k[0], c)))
    }
}
