//! Exact scalars: rationals and Gaussian rationals.
//!
//! Every coordinate in this crate is a rational or Gaussian rational number
//! and every predicate is decided exactly. Comparisons against irrational
//! thresholds of the form sqrt(p/q) (the constants 2/sqrt(3) and sqrt(3)/2)
//! are carried out by sign analysis plus squared comparison; floats appear
//! only in convenience accessors that never feed back into a decision.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An arbitrary-precision rational, always reduced with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Rational(BigRational);

impl Rational {
    /// Builds `n/d`. Panics if `d == 0`.
    pub fn new(n: i64, d: i64) -> Self {
        Rational(BigRational::new(BigInt::from(n), BigInt::from(d)))
    }

    pub fn from_int(n: i64) -> Self {
        Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_bigint(n: BigInt) -> Self {
        Rational(BigRational::from_integer(n))
    }

    pub fn from_big(n: BigInt, d: BigInt) -> Self {
        Rational(BigRational::new(n, d))
    }

    pub fn zero() -> Self {
        Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        Rational(BigRational::one())
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

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    /// Sign as an ordering against zero.
    pub fn sign(&self) -> Ordering {
        self.0.cmp(&BigRational::zero())
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    pub fn square(&self) -> Self {
        Rational(&self.0 * &self.0)
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "division by zero rational");
        Rational(self.0.recip())
    }

    pub fn floor(&self) -> BigInt {
        self.0.floor().to_integer()
    }

    /// Nearest integer, ties rounded up: floor(x + 1/2).
    pub fn round_nearest(&self) -> BigInt {
        let half = BigRational::new(BigInt::one(), BigInt::from(2));
        (&self.0 + half).floor().to_integer()
    }

    /// Exact integer value, if the denominator is 1.
    pub fn to_integer(&self) -> Option<BigInt> {
        self.0.is_integer().then(|| self.0.to_integer())
    }

    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }

    /// Ordering of `self` against `sqrt(rad)` for a rational `rad >= 0`,
    /// decided exactly: a negative value is below any square root, otherwise
    /// compare squares.
    pub fn cmp_sqrt(&self, rad: &Rational) -> Ordering {
        debug_assert!(!rad.is_negative(), "cmp_sqrt radicand must be >= 0");
        if self.is_negative() {
            return if rad.is_zero() && self.is_zero() {
                Ordering::Equal
            } else {
                Ordering::Less
            };
        }
        self.square().cmp(rad)
    }
}

/// Ordering of a rational `x` against the threshold `sqrt(p/q)`.
///
/// Decided by the sign of `x` and the exact comparison of `q * x^2` with `p`;
/// no approximation is involved. Errors if `q = 0` or `p < 0`.
pub fn cmp_sq_threshold(x: &Rational, p: i64, q: i64) -> Result<Ordering> {
    if q <= 0 || p < 0 {
        return Err(Error::InvalidThreshold { p, q });
    }
    Ok(x.cmp_sqrt(&Rational::new(p, q)))
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl<'a, 'b> $trait<&'b Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: &'b Rational) -> Rational {
                Rational(&self.0 $op &rhs.0)
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(self.0 $op rhs.0)
            }
        }
        impl<'a> $trait<&'a Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &'a Rational) -> Rational {
                Rational(self.0 $op &rhs.0)
            }
        }
        impl<'a> $trait<Rational> for &'a Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational(&self.0 $op rhs.0)
            }
        }
    };
}

forward_binop!(Add, add, +);
forward_binop!(Sub, sub, -);
forward_binop!(Mul, mul, *);

impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        assert!(!rhs.is_zero(), "division by zero rational");
        Rational(&self.0 / &rhs.0)
    }
}
impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        (&self).div(&rhs)
    }
}
impl Div<&Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        (&self).div(rhs)
    }
}
impl Div<Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self.div(&rhs)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}
impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl From<i64> for Rational {
    fn from(n: i64) -> Self {
        Rational::from_int(n)
    }
}

impl fmt::Display for Rational {
    /// Canonical text form: `p` when the denominator is 1, else `p/q` with
    /// `q > 0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for Rational {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let parse_int = |t: &str| -> Result<BigInt> {
            t.parse::<BigInt>().map_err(|_| Error::InvalidInput {
                detail: format!("cannot parse integer `{t}`"),
            })
        };
        match s.split_once('/') {
            None => Ok(Rational(BigRational::from_integer(parse_int(s)?))),
            Some((n, d)) => {
                let den = parse_int(d)?;
                if den.is_zero() {
                    return Err(Error::InvalidInput {
                        detail: format!("zero denominator in `{s}`"),
                    });
                }
                Ok(Rational(BigRational::new(parse_int(n)?, den)))
            }
        }
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Str(String),
            Int(i64),
        }
        match Repr::deserialize(deserializer)? {
            Repr::Str(s) => s.parse().map_err(|e| D::Error::custom(format!("{e}"))),
            Repr::Int(n) => Ok(Rational::from_int(n)),
        }
    }
}

/// An element of Q(i): exact complex scalar with rational real and imaginary
/// parts.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        GaussianRational { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        GaussianRational {
            re,
            im: Rational::zero(),
        }
    }

    pub fn from_int(n: i64) -> Self {
        Self::from_rational(Rational::from_int(n))
    }

    pub fn zero() -> Self {
        Self::from_int(0)
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    /// The imaginary unit.
    pub fn i() -> Self {
        GaussianRational {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        GaussianRational {
            re: self.re.clone(),
            im: -&self.im,
        }
    }

    /// The squared modulus re^2 + im^2, an exact rational. Multiplicative:
    /// `abs_sq(x * y) = abs_sq(x) * abs_sq(y)`.
    pub fn abs_sq(&self) -> Rational {
        &self.re.square() + &self.im.square()
    }

    pub fn scale(&self, r: &Rational) -> Self {
        GaussianRational {
            re: &self.re * r,
            im: &self.im * r,
        }
    }

    /// Multiplicative inverse. Panics on zero.
    pub fn recip(&self) -> Self {
        let n = self.abs_sq();
        assert!(!n.is_zero(), "division by zero Gaussian rational");
        self.conj().scale(&n.recip())
    }

    pub fn to_f64s(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl Add<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn add(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn sub(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    fn mul(self, rhs: &GaussianRational) -> GaussianRational {
        GaussianRational {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Div<&GaussianRational> for &GaussianRational {
    type Output = GaussianRational;
    #[allow(clippy::suspicious_arithmetic_impl)]
    fn div(self, rhs: &GaussianRational) -> GaussianRational {
        self * &rhs.recip()
    }
}

impl Neg for &GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        GaussianRational {
            re: -&self.re,
            im: -&self.im,
        }
    }
}

macro_rules! forward_owned {
    ($trait:ident, $method:ident) => {
        impl $trait<GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                (&self).$method(&rhs)
            }
        }
        impl<'a> $trait<&'a GaussianRational> for GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: &'a GaussianRational) -> GaussianRational {
                (&self).$method(rhs)
            }
        }
        impl<'a> $trait<GaussianRational> for &'a GaussianRational {
            type Output = GaussianRational;
            fn $method(self, rhs: GaussianRational) -> GaussianRational {
                self.$method(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);
forward_owned!(Div, div);

impl Neg for GaussianRational {
    type Output = GaussianRational;
    fn neg(self) -> GaussianRational {
        -&self
    }
}

impl From<i64> for GaussianRational {
    fn from(n: i64) -> Self {
        GaussianRational::from_int(n)
    }
}

impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.im.is_zero() {
            return write!(f, "{}", self.re);
        }
        if self.re.is_zero() {
            return write!(f, "{}i", self.im);
        }
        if self.im.is_negative() {
            write!(f, "{}{}i", self.re, self.im)
        } else {
            write!(f, "{}+{}i", self.re, self.im)
        }
    }
}

impl fmt::Debug for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for GaussianRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut s = serializer.serialize_struct("GaussianRational", 2)?;
        s.serialize_field("re", &self.re)?;
        s.serialize_field("im", &self.im)?;
        s.end()
    }
}

impl<'de> Deserialize<'de> for GaussianRational {
    /// Accepts the canonical `{"re": "p/q", "im": "p/q"}` form, plus a bare
    /// string or integer for purely real values.
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Parts {
                re: Rational,
                #[serde(default)]
                im: Option<Rational>,
            },
            Real(Rational),
        }
        Ok(match Repr::deserialize(deserializer)? {
            Repr::Parts { re, im } => GaussianRational {
                re,
                im: im.unwrap_or_else(Rational::zero),
            },
            Repr::Real(re) => GaussianRational::from_rational(re),
        })
    }
}
