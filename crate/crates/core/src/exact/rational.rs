use std::cmp::Ordering;
use std::fmt;
use std::iter::{Product, Sum};
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::ExactError;

/// An exact fraction of arbitrary-precision integers.
///
/// Always stored in lowest terms with a positive denominator; zero is `0/1`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Rational(BigRational);

/// Binary operations accepted by [`rat_arith`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
    /// Negates the first operand; the second is ignored.
    Neg,
}

impl Rational {
    /// Builds `numerator / denominator` in canonical form.
    pub fn new(
        numerator: impl Into<BigInt>,
        denominator: impl Into<BigInt>,
    ) -> Result<Self, ExactError> {
        let denominator = denominator.into();
        if denominator.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(BigRational::new(numerator.into(), denominator)))
    }

    pub fn from_integer(value: impl Into<BigInt>) -> Self {
        Rational(BigRational::from_integer(value.into()))
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

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn abs(&self) -> Self {
        Rational(self.0.abs())
    }

    /// `true` when the stored pair is in lowest terms with a positive denominator.
    pub fn is_canonical(&self) -> bool {
        let (n, d) = (self.0.numer(), self.0.denom());
        d.is_positive() && n.gcd(d).is_one() && (!n.is_zero() || d.is_one())
    }

    pub fn recip(&self) -> Result<Self, ExactError> {
        if self.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(self.0.recip()))
    }

    pub fn checked_div(&self, rhs: &Rational) -> Result<Self, ExactError> {
        if rhs.is_zero() {
            return Err(ExactError::DivisionByZero);
        }
        Ok(Rational(&self.0 / &rhs.0))
    }

    /// Exact non-negative integer power. `pow(0) == 1` for every base, zero included.
    pub fn pow(&self, exponent: u64) -> Self {
        let mut result = BigRational::one();
        let mut base = self.0.clone();
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                result = &result * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        Rational(result)
    }

    /// Exact square root when `self` is the square of a rational.
    pub fn sqrt_exact(&self) -> Option<Self> {
        if self.is_negative() {
            return None;
        }
        let n = self.numer().sqrt();
        let d = self.denom().sqrt();
        if &(&n * &n) == self.numer() && &(&d * &d) == self.denom() {
            Some(Rational(BigRational::new(n, d)))
        } else {
            None
        }
    }

    /// Decimal rendering with `digits` fractional digits, rounded half away from zero.
    pub fn to_decimal_string(&self, digits: usize) -> String {
        let scale = BigInt::from(10u32).pow(digits as u32);
        let scaled = &self.0 * BigRational::from_integer(scale.clone());
        let rounded = scaled.round().to_integer();
        let negative = rounded.is_negative();
        let magnitude = rounded.abs();
        let (int_part, frac_part) = magnitude.div_rem(&scale);
        let mut out = String::new();
        if negative {
            out.push('-');
        }
        out.push_str(&int_part.to_string());
        if digits > 0 {
            let frac = frac_part.to_string();
            out.push('.');
            out.push_str(&"0".repeat(digits - frac.len()));
            out.push_str(&frac);
        }
        out
    }

    pub fn to_f64(&self) -> Option<f64> {
        self.0.to_f64()
    }
}

/// Applies one of the basic operations; division by zero is reported, never panics.
pub fn rat_arith(op: ArithOp, a: &Rational, b: &Rational) -> Result<Rational, ExactError> {
    match op {
        ArithOp::Add => Ok(a + b),
        ArithOp::Sub => Ok(a - b),
        ArithOp::Mul => Ok(a * b),
        ArithOp::Div => a.checked_div(b),
        ArithOp::Neg => Ok(-a),
    }
}

/// `base^exponent`, with `rat_pow(0, 0) == 1`.
pub fn rat_pow(base: &Rational, exponent: u64) -> Rational {
    base.pow(exponent)
}

impl From<i64> for Rational {
    fn from(v: i64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<i32> for Rational {
    fn from(v: i32) -> Self {
        Rational::from_integer(v)
    }
}

impl From<u64> for Rational {
    fn from(v: u64) -> Self {
        Rational::from_integer(v)
    }
}

impl From<BigInt> for Rational {
    fn from(v: BigInt) -> Self {
        Rational::from_integer(v)
    }
}

impl fmt::Display for Rational {
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
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Rational {
    type Err = ExactError;

    /// Accepts `["-"] digits ["/" digits]` with a nonzero denominator.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let malformed = || ExactError::MalformedRational(s.to_string());
        let (num, den) = match s.split_once('/') {
            Some((n, d)) => (n, Some(d)),
            None => (s, None),
        };
        let digits = num.strip_prefix('-').unwrap_or(num);
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(malformed());
        }
        let numerator: BigInt = num.parse().map_err(|_| malformed())?;
        let denominator: BigInt = match den {
            None => BigInt::one(),
            Some(d) => {
                if d.is_empty() || !d.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(malformed());
                }
                d.parse().map_err(|_| malformed())?
            }
        };
        if denominator.is_zero() {
            return Err(malformed());
        }
        Rational::new(numerator, denominator)
    }
}

impl Serialize for Rational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Rational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait<&Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(&self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(self.0, rhs.0))
            }
        }
        impl $trait<&Rational> for Rational {
            type Output = Rational;
            fn $method(self, rhs: &Rational) -> Rational {
                Rational($trait::$method(self.0, &rhs.0))
            }
        }
        impl $trait<Rational> for &Rational {
            type Output = Rational;
            fn $method(self, rhs: Rational) -> Rational {
                Rational($trait::$method(&self.0, rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

// Panics on a zero divisor. Library code only divides by values already
// checked nonzero; use `checked_div` for untrusted operands.
impl Div<&Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        self.checked_div(rhs)
            .expect("division of a rational by zero")
    }
}

impl Div<Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        &self / &rhs
    }
}

impl Div<&Rational> for Rational {
    type Output = Rational;
    fn div(self, rhs: &Rational) -> Rational {
        &self / rhs
    }
}

impl Div<Rational> for &Rational {
    type Output = Rational;
    fn div(self, rhs: Rational) -> Rational {
        self / &rhs
    }
}

impl Neg for Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-self.0)
    }
}

impl Neg for &Rational {
    type Output = Rational;
    fn neg(self) -> Rational {
        Rational(-&self.0)
    }
}

impl AddAssign<&Rational> for Rational {
    fn add_assign(&mut self, rhs: &Rational) {
        self.0 += &rhs.0;
    }
}

impl AddAssign for Rational {
    fn add_assign(&mut self, rhs: Rational) {
        self.0 += rhs.0;
    }
}

impl SubAssign<&Rational> for Rational {
    fn sub_assign(&mut self, rhs: &Rational) {
        self.0 -= &rhs.0;
    }
}

impl MulAssign<&Rational> for Rational {
    fn mul_assign(&mut self, rhs: &Rational) {
        self.0 *= &rhs.0;
    }
}

impl Sum for Rational {
    fn sum<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl<'a> Sum<&'a Rational> for Rational {
    fn sum<I: Iterator<Item = &'a Rational>>(iter: I) -> Self {
        iter.fold(Rational::zero(), |acc, x| acc + x)
    }
}

impl Product for Rational {
    fn product<I: Iterator<Item = Rational>>(iter: I) -> Self {
        iter.fold(Rational::one(), |acc, x| acc * x)
    }
}

impl PartialEq<i64> for Rational {
    fn eq(&self, other: &i64) -> bool {
        self.0.is_integer() && self.0.numer() == &BigInt::from(*other)
    }
}

impl PartialOrd<i64> for Rational {
    fn partial_cmp(&self, other: &i64) -> Option<Ordering> {
        self.0
            .partial_cmp(&BigRational::from_integer(BigInt::from(*other)))
    }
}

/// Shorthand for `Rational::new(n, d).unwrap()` with small integer literals.
///
/// Panics when `d == 0`.
pub fn q(n: i64, d: i64) -> Rational {
    Rational::new(n, d).expect("nonzero denominator")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn add_small_fractions() {
        assert_eq!(
            rat_arith(ArithOp::Add, &q(1, 2), &q(1, 3)).unwrap(),
            q(5, 6)
        );
    }

    #[test]
    fn construction_canonicalizes_signs() {
        let r = Rational::new(-2, -4).unwrap();
        assert_eq!(r, q(1, 2));
        assert_eq!(r.numer(), &BigInt::from(1));
        assert_eq!(r.denom(), &BigInt::from(2));
        let neg = Rational::new(3, -6).unwrap();
        assert_eq!(neg.numer(), &BigInt::from(-1));
        assert_eq!(neg.denom(), &BigInt::from(2));
    }

    #[test]
    fn zero_is_zero_over_one() {
        let z = Rational::new(0, -17).unwrap();
        assert_eq!(z.denom(), &BigInt::from(1));
        assert!(z.is_canonical());
    }

    #[test]
    fn division_by_zero_is_an_error() {
        assert_eq!(
            rat_arith(ArithOp::Div, &Rational::one(), &Rational::zero()),
            Err(ExactError::DivisionByZero)
        );
        assert_eq!(Rational::new(1, 0), Err(ExactError::DivisionByZero));
        assert!(Rational::zero().recip().is_err());
    }

    #[test]
    fn neg_ignores_second_operand() {
        assert_eq!(
            rat_arith(ArithOp::Neg, &q(3, 4), &Rational::zero()).unwrap(),
            q(-3, 4)
        );
    }

    #[test]
    fn powers() {
        assert_eq!(rat_pow(&Rational::zero(), 0), Rational::one());
        assert_eq!(rat_pow(&Rational::from(-1), 5), Rational::from(-1));
        assert_eq!(rat_pow(&q(2, 3), 3), q(8, 27));
        assert_eq!(rat_pow(&Rational::zero(), 3), Rational::zero());
    }

    #[test]
    fn text_form() {
        assert_eq!("-7/3".parse::<Rational>().unwrap(), q(-7, 3));
        assert_eq!("4".parse::<Rational>().unwrap(), Rational::from(4));
        assert_eq!("6/4".parse::<Rational>().unwrap(), q(3, 2));
        for bad in ["", "-", "1/", "/2", "1/0", "1.5", "--1", "1/-2", "+3", "a"] {
            assert!(
                matches!(
                    bad.parse::<Rational>(),
                    Err(ExactError::MalformedRational(_))
                ),
                "{bad:?} should be rejected"
            );
        }
        assert_eq!(q(37, 6).to_string(), "37/6");
        assert_eq!(q(-8, 4).to_string(), "-2");
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(q(1, 3).to_decimal_string(4), "0.3333");
        assert_eq!(q(2, 3).to_decimal_string(2), "0.67");
        assert_eq!(q(-37, 6).to_decimal_string(3), "-6.167");
        assert_eq!(Rational::from(5).to_decimal_string(0), "5");
        assert_eq!(q(1, 100).to_decimal_string(3), "0.010");
    }

    #[test]
    fn exact_square_roots() {
        assert_eq!(q(9, 4).sqrt_exact(), Some(q(3, 2)));
        assert_eq!(q(2, 1).sqrt_exact(), None);
        assert_eq!(q(-1, 1).sqrt_exact(), None);
    }

    fn small() -> impl Strategy<Value = Rational> {
        (-9i64..=9, 1i64..=9).prop_map(|(n, d)| q(n, d))
    }

    proptest! {
        #[test]
        fn results_are_canonical(a in small(), b in small()) {
            for op in [ArithOp::Add, ArithOp::Sub, ArithOp::Mul, ArithOp::Neg] {
                prop_assert!(rat_arith(op, &a, &b).unwrap().is_canonical());
            }
            if !b.is_zero() {
                prop_assert!(rat_arith(ArithOp::Div, &a, &b).unwrap().is_canonical());
            }
        }

        #[test]
        fn ring_laws(a in small(), b in small(), c in small()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn text_round_trip(a in small()) {
            prop_assert_eq!(a.to_string().parse::<Rational>().unwrap(), a);
        }
    }
}
