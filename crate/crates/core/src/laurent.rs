//! Sparse Laurent polynomials in `t^{1/2}` with arbitrary-precision integer coefficients.
//!
//! The exponent key `k` stands for the monomial `t^{k/2}`.

use std::collections::BTreeMap;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Element of `Z[t^{1/2}, t^{-1/2}]` in canonical sparse form (no zero coefficients).
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i32, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Self::monomial(0, c)
    }

    /// `c * t^{k/2}`.
    pub fn monomial(k: i32, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(k, c);
        }
        Self { coeffs }
    }

    /// `t^{k/2}`.
    pub fn t_half(k: i32) -> Self {
        Self::monomial(k, 1)
    }

    /// `t^{1/2} - t^{-1/2}`.
    pub fn delta() -> Self {
        Self::from_terms([(1, BigInt::one()), (-1, -BigInt::one())])
    }

    /// `(sign * t^{step/2})^n`, the shape of every projector weight.
    pub fn signed_power(negative: bool, step: i32, n: u32) -> Self {
        let c = if negative && n % 2 == 1 { -1 } else { 1 };
        Self::monomial(step * n as i32, c)
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (i32, BigInt)>) -> Self {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, &c);
        }
        out
    }

    /// Build from `(k, c)` pairs with machine-size coefficients.
    pub fn from_i64(terms: &[(i32, i64)]) -> Self {
        Self::from_terms(terms.iter().map(|&(k, c)| (k, BigInt::from(c))))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn coeff(&self, k: i32) -> BigInt {
        self.coeffs.get(&k).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &BigInt)> {
        self.coeffs.iter().map(|(k, c)| (*k, c))
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn min_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exponent(&self) -> Option<i32> {
        self.coeffs.keys().next_back().copied()
    }

    fn add_term(&mut self, k: i32, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k).or_default();
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    /// The ring involution `t^{1/2} -> t^{-1/2}`.
    pub fn bar(&self) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(k, c)| (-k, c.clone())).collect(),
        }
    }

    /// Multiply by `t^{k/2}`.
    pub fn shift(&self, k: i32) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(|(e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            coeffs: self.coeffs.iter().map(|(k, v)| (*k, v * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    pub fn is_antisymmetric(&self) -> bool {
        (self + &self.bar()).is_zero()
    }

    pub fn is_symmetric(&self) -> bool {
        *self == self.bar()
    }

    /// True when every exponent key is strictly positive.
    pub fn in_positive_half(&self) -> bool {
        self.min_exponent().is_none_or(|k| k > 0)
    }

    fn check_antisymmetric(&self) -> Result<()> {
        if self.is_antisymmetric() {
            Ok(())
        } else {
            Err(Error::AntisymmetryViolation(format!("{self} + bar({self}) != 0")))
        }
    }

    /// For antisymmetric `f`, the terms with negative exponent key.
    ///
    /// The result `p` satisfies `p - bar(p) = f`.
    pub fn negative_part(&self) -> Result<Self> {
        self.check_antisymmetric()?;
        Ok(Self {
            coeffs: self.coeffs.range(..0).map(|(k, c)| (*k, c.clone())).collect(),
        })
    }

    /// For antisymmetric `f`, the terms with positive exponent key.
    ///
    /// The result `p` lies in `t^{1/2}Z[t^{1/2}]` and satisfies `p - bar(p) = f`.
    pub fn positive_part(&self) -> Result<Self> {
        self.check_antisymmetric()?;
        Ok(Self {
            coeffs: self.coeffs.range(1..).map(|(k, c)| (*k, c.clone())).collect(),
        })
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (i, (k, c)) in self.coeffs.iter().rev().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if neg {
                write!(f, "-")?;
            } else if i > 0 {
                write!(f, "+")?;
            }
            if *k == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match k {
                2 => write!(f, "t")?,
                k if k % 2 == 0 => write!(f, "t^{{{}}}", k / 2)?,
                k => write!(f, "t^{{{k}/2}}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        Self::constant(c)
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.coeffs.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        for (k, c) in &rhs.coeffs {
            self.add_term(*k, c);
        }
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        for (k, c) in &rhs.coeffs {
            self.add_term(*k, &-c);
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = LaurentPoly::zero();
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &rhs.coeffs {
                out.add_term(ka + kb, &(ca * cb));
            }
        }
        out
    }
}

impl MulAssign<&LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: &LaurentPoly) {
        *self = &*self * rhs;
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$m(&rhs)
            }
        }
        impl $tr<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$m(rhs)
            }
        }
        impl $tr<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $m(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

impl AddAssign<LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        *self += &rhs;
    }
}

impl SubAssign<LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: LaurentPoly) {
        *self -= &rhs;
    }
}

impl Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        let mut out = LaurentPoly::zero();
        for p in iter {
            out += &p;
        }
        out
    }
}

impl<'a> Sum<&'a LaurentPoly> for LaurentPoly {
    fn sum<I: Iterator<Item = &'a LaurentPoly>>(iter: I) -> Self {
        let mut out = LaurentPoly::zero();
        for p in iter {
            out += p;
        }
        out
    }
}

impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut map = s.serialize_map(Some(self.coeffs.len()))?;
        for (k, c) in &self.coeffs {
            match c.to_i64() {
                Some(v) => map.serialize_entry(&k.to_string(), &v)?,
                None => map.serialize_entry(&k.to_string(), &c.to_string())?,
            }
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        struct PolyVisitor;

        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                write!(f, "a map from half-step exponents to integers")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> std::result::Result<Self::Value, A::Error> {
                let mut out = LaurentPoly::zero();
                while let Some((k, v)) = access.next_entry::<String, serde_json::Value>()? {
                    let k: i32 = k.parse().map_err(|_| de::Error::custom(format!("bad exponent key {k:?}")))?;
                    let c: BigInt = match &v {
                        serde_json::Value::Number(n) => n
                            .to_string()
                            .parse()
                            .map_err(|_| de::Error::custom(format!("bad coefficient {n}")))?,
                        serde_json::Value::String(s) => {
                            s.parse().map_err(|_| de::Error::custom(format!("bad coefficient {s:?}")))?
                        }
                        other => return Err(de::Error::custom(format!("bad coefficient {other}"))),
                    };
                    out.add_term(k, &c);
                }
                Ok(out)
            }
        }

        d.deserialize_map(PolyVisitor)
    }
}
