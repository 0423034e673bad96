use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

/// Arbitrary-precision rational kept in lowest terms with a positive denominator.
///
/// Serialized as the string `"p/q"`; integers still carry the explicit `/1`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ExactRational(BigRational);

impl ExactRational {
    pub fn new(numer: impl Into<BigInt>, denom: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::new(numer.into(), denom.into()))
    }

    pub fn from_integer(n: impl Into<BigInt>) -> Self {
        ExactRational(BigRational::from_integer(n.into()))
    }

    pub fn zero() -> Self {
        ExactRational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactRational(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn recip(&self) -> Self {
        ExactRational(self.0.recip())
    }

    pub fn abs(&self) -> Self {
        ExactRational(self.0.abs())
    }

    pub fn pow(&self, exp: u32) -> Self {
        ExactRational(num_traits::Pow::pow(&self.0, exp))
    }

    /// Nearest binary64 value. Handles numerators and denominators far outside the f64 range.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    pub fn as_big_rational(&self) -> &BigRational {
        &self.0
    }
}

impl From<BigRational> for ExactRational {
    fn from(value: BigRational) -> Self {
        ExactRational(value)
    }
}

impl From<i64> for ExactRational {
    fn from(value: i64) -> Self {
        ExactRational::from_integer(value)
    }
}

impl fmt::Display for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.0.numer(), self.0.denom())
    }
}

impl fmt::Debug for ExactRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for ExactRational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || Error::ParseRational(s.to_string());
        let (p, q) = match s.split_once('/') {
            Some((p, q)) => (p.trim(), q.trim()),
            None => (s.trim(), "1"),
        };
        let p: BigInt = p.parse().map_err(|_| err())?;
        let q: BigInt = q.parse().map_err(|_| err())?;
        if q.is_zero() {
            return Err(err());
        }
        Ok(ExactRational::new(p, q))
    }
}

impl Serialize for ExactRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExactRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($ty:ident, $trait:ident, $method:ident) => {
        impl $trait<&$ty> for &$ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                $ty((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                $ty(self.0.$method(rhs.0))
            }
        }
        impl $trait<&$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &$ty) -> $ty {
                $ty(self.0.$method(&rhs.0))
            }
        }
    };
}

forward_binop!(ExactRational, Add, add);
forward_binop!(ExactRational, Sub, sub);
forward_binop!(ExactRational, Mul, mul);
forward_binop!(ExactRational, Div, div);

impl AddAssign<&ExactRational> for ExactRational {
    fn add_assign(&mut self, rhs: &ExactRational) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&ExactRational> for ExactRational {
    fn sub_assign(&mut self, rhs: &ExactRational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&ExactRational> for ExactRational {
    fn mul_assign(&mut self, rhs: &ExactRational) {
        self.0 *= &rhs.0;
    }
}

impl Neg for ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-self.0)
    }
}

impl Neg for &ExactRational {
    type Output = ExactRational;
    fn neg(self) -> ExactRational {
        ExactRational(-&self.0)
    }
}

impl std::iter::Sum for ExactRational {
    fn sum<I: Iterator<Item = ExactRational>>(iter: I) -> Self {
        iter.fold(ExactRational::zero(), |acc, x| acc + x)
    }
}

/// Gaussian rational `re + i·im` with exact field operations.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct ExactComplex {
    pub re: ExactRational,
    pub im: ExactRational,
}

impl ExactComplex {
    pub fn new(re: ExactRational, im: ExactRational) -> Self {
        ExactComplex { re, im }
    }

    pub fn real(re: ExactRational) -> Self {
        ExactComplex { re, im: ExactRational::zero() }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::real(ExactRational::one())
    }

    pub fn i() -> Self {
        ExactComplex { re: ExactRational::zero(), im: ExactRational::one() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        ExactComplex { re: self.re.clone(), im: -&self.im }
    }

    /// `|z|²`, which stays rational.
    pub fn norm_sq(&self) -> ExactRational {
        &self.re * &self.re + &self.im * &self.im
    }

    pub fn scale(&self, k: &ExactRational) -> Self {
        ExactComplex { re: &self.re * k, im: &self.im * k }
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = ExactComplex::one();
        let mut base = self.clone();
        let mut e = exp;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex64(&self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }
}

impl From<ExactRational> for ExactComplex {
    fn from(re: ExactRational) -> Self {
        ExactComplex::real(re)
    }
}

impl fmt::Debug for ExactComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?} + {:?}i)", self.re, self.im)
    }
}

impl Add<&ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl Add for ExactComplex {
    type Output = ExactComplex;
    fn add(self, rhs: ExactComplex) -> ExactComplex {
        &self + &rhs
    }
}

impl Sub<&ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl Sub for ExactComplex {
    type Output = ExactComplex;
    fn sub(self, rhs: ExactComplex) -> ExactComplex {
        &self - &rhs
    }
}

impl Mul<&ExactComplex> for &ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: &ExactComplex) -> ExactComplex {
        ExactComplex {
            re: &self.re * &rhs.re - &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Mul for ExactComplex {
    type Output = ExactComplex;
    fn mul(self, rhs: ExactComplex) -> ExactComplex {
        &self * &rhs
    }
}

impl AddAssign<&ExactComplex> for ExactComplex {
    fn add_assign(&mut self, rhs: &ExactComplex) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl Neg for &ExactComplex {
    type Output = ExactComplex;
    fn neg(self) -> ExactComplex {
        ExactComplex { re: -&self.re, im: -&self.im }
    }
}

impl std::iter::Sum for ExactComplex {
    fn sum<I: Iterator<Item = ExactComplex>>(iter: I) -> Self {
        iter.fold(ExactComplex::zero(), |mut acc, x| {
            acc += &x;
            acc
        })
    }
}
