//! Gaussian rationals `a + bi` with `a, b ∈ ℚ`.
//!
//! Every coefficient in the library lives here. Arithmetic is exact; there is
//! no rounding anywhere outside the classical floating-point model.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Scalar {
    re: BigRational,
    im: BigRational,
}

impl Scalar {
    pub fn new(re: BigRational, im: BigRational) -> Self {
        Scalar { re, im }
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    /// `re_num/re_den + (im_num/im_den) i`. Panics on a zero denominator.
    pub fn from_parts(re_num: i64, re_den: i64, im_num: i64, im_den: i64) -> Self {
        Scalar::new(
            BigRational::new(re_num.into(), re_den.into()),
            BigRational::new(im_num.into(), im_den.into()),
        )
    }

    pub fn gaussian(re: i64, im: i64) -> Self {
        Scalar::new(
            BigRational::from_integer(re.into()),
            BigRational::from_integer(im.into()),
        )
    }

    pub fn i() -> Self {
        Scalar::gaussian(0, 1)
    }

    pub fn re(&self) -> &BigRational {
        &self.re
    }

    pub fn im(&self) -> &BigRational {
        &self.im
    }

    pub fn conj(&self) -> Self {
        Scalar::new(self.re.clone(), -self.im.clone())
    }

    /// Squared modulus `a² + b²`.
    pub fn norm_sqr(&self) -> BigRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm_sqr();
        Some(Scalar::new(&self.re / &n, -(&self.im / &n)))
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn to_complex_f64(&self) -> num_complex::Complex64 {
        num_complex::Complex64::new(
            self.re.to_f64().unwrap_or(f64::NAN),
            self.im.to_f64().unwrap_or(f64::NAN),
        )
    }

    fn needs_parens(&self) -> bool {
        !self.re.is_zero() && !self.im.is_zero()
    }

    /// Formats as a multiplicative coefficient: `3`, `-1/2`, `2i`, `(1+2i)`.
    pub(crate) fn fmt_coefficient(&self) -> String {
        if self.needs_parens() {
            format!("({self})")
        } else {
            format!("{self}")
        }
    }
}

impl Zero for Scalar {
    fn zero() -> Self {
        Scalar::new(BigRational::zero(), BigRational::zero())
    }

    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }
}

impl One for Scalar {
    fn one() -> Self {
        Scalar::from_int(1)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<BigRational> for Scalar {
    fn from(r: BigRational) -> Self {
        Scalar::new(r, BigRational::zero())
    }
}

impl Add<&Scalar> for &Scalar {
    type Output = Scalar;
    fn add(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub<&Scalar> for &Scalar {
    type Output = Scalar;
    fn sub(self, rhs: &Scalar) -> Scalar {
        Scalar::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul<&Scalar> for &Scalar {
    type Output = Scalar;
    fn mul(self, rhs: &Scalar) -> Scalar {
        if self.im.is_zero() && rhs.im.is_zero() {
            return Scalar::new(&self.re * &rhs.re, BigRational::zero());
        }
        Scalar::new(
            &self.re * &rhs.re - &self.im * &rhs.im,
            &self.re * &rhs.im + &self.im * &rhs.re,
        )
    }
}

impl Div<&Scalar> for &Scalar {
    type Output = Scalar;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &Scalar) -> Scalar {
        self * &rhs.inv().expect("division by zero scalar")
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re.clone(), -self.im.clone())
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                (&self).$m(rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar::new(-self.re, -self.im)
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        *self = &*self * rhs;
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::zero(), |acc, x| acc + x)
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "{}i", fmt_imag(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { "-" } else { "+" };
                write!(
                    f,
                    "{}{}{}i",
                    fmt_rational(&self.re),
                    sign,
                    fmt_imag(&self.im.abs())
                )
            }
        }
    }
}

fn fmt_imag(r: &BigRational) -> String {
    if r.is_one() {
        String::new()
    } else if *r == -BigRational::one() {
        "-".to_string()
    } else {
        fmt_rational(r)
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

// JSON form: [re_num, re_den, im_num, im_den]. Integers that do not fit an
// i64 are emitted as decimal strings.

fn ser_bigint<S: SerializeTuple>(t: &mut S, n: &BigInt) -> Result<(), S::Error> {
    match n.to_i64() {
        Some(v) => t.serialize_element(&v),
        None => t.serialize_element(&n.to_string()),
    }
}

impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut t = serializer.serialize_tuple(4)?;
        ser_bigint(&mut t, self.re.numer())?;
        ser_bigint(&mut t, self.re.denom())?;
        ser_bigint(&mut t, self.im.numer())?;
        ser_bigint(&mut t, self.im.denom())?;
        t.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum IntRepr {
    Small(i64),
    Big(String),
}

impl IntRepr {
    fn into_bigint<E: de::Error>(self) -> Result<BigInt, E> {
        match self {
            IntRepr::Small(v) => Ok(v.into()),
            IntRepr::Big(s) => s.parse().map_err(E::custom),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;
        impl<'de> Visitor<'de> for ScalarVisitor {
            type Value = Scalar;
            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("[re_num, re_den, im_num, im_den]")
            }
            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Scalar, A::Error> {
                let mut parts = Vec::with_capacity(4);
                for idx in 0..4 {
                    let v: IntRepr = seq
                        .next_element()?
                        .ok_or_else(|| de::Error::invalid_length(idx, &self))?;
                    parts.push(v.into_bigint::<A::Error>()?);
                }
                if parts[1].is_zero() || parts[3].is_zero() {
                    return Err(de::Error::custom("zero denominator"));
                }
                let im_den = parts.pop().unwrap();
                let im_num = parts.pop().unwrap();
                let re_den = parts.pop().unwrap();
                let re_num = parts.pop().unwrap();
                Ok(Scalar::new(
                    BigRational::new(re_num, re_den),
                    BigRational::new(im_num, im_den),
                ))
            }
        }
        deserializer.deserialize_tuple(4, ScalarVisitor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let a = Scalar::gaussian(1, 2);
        let b = Scalar::gaussian(3, -1);
        assert_eq!(&a * &b, Scalar::gaussian(5, 5));
        assert_eq!(&(&a / &b) * &b, a);
        assert_eq!(Scalar::i() * Scalar::i(), Scalar::from_int(-1));
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn display_forms() {
        assert_eq!(Scalar::from_int(3).to_string(), "3");
        assert_eq!(Scalar::from_parts(-1, 2, 0, 1).to_string(), "-1/2");
        assert_eq!(Scalar::gaussian(0, 2).to_string(), "2i");
        assert_eq!(Scalar::gaussian(0, -1).to_string(), "-i");
        assert_eq!(Scalar::gaussian(1, 2).fmt_coefficient(), "(1+2i)");
        assert_eq!(Scalar::gaussian(1, -2).to_string(), "1-2i");
    }

    #[test]
    fn json_shape() {
        let s = Scalar::from_parts(3, 4, -1, 2);
        let v = serde_json::to_string(&s).unwrap();
        assert_eq!(v, "[3,4,-1,2]");
        let back: Scalar = serde_json::from_str(&v).unwrap();
        assert_eq!(back, s);
        let big: Scalar = serde_json::from_str(r#"["123456789012345678901234567890",1,0,1]"#).unwrap();
        assert_eq!(big.re().numer().to_string(), "123456789012345678901234567890");
        assert!(serde_json::from_str::<Scalar>("[1,0,0,1]").is_err());
    }
}
