use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::Rational;

/// Dense univariate polynomial in `λ` with rational coefficients.
///
/// `coefficients[k]` holds the coefficient of `λ^k`. The highest stored
/// coefficient is nonzero; the zero polynomial has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct Polynomial {
    coefficients: Vec<Rational>,
}

/// Operations accepted by [`poly_arith`].
#[derive(Clone, Debug)]
pub enum PolyOperand {
    Poly(Polynomial),
    Scalar(Rational),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Mul,
    /// Multiply by a scalar operand (a polynomial operand is rejected).
    Scale,
}

impl Polynomial {
    /// Builds from ascending coefficients, trimming trailing zeros.
    pub fn new(mut coefficients: Vec<Rational>) -> Self {
        while coefficients.last().is_some_and(Rational::is_zero) {
            coefficients.pop();
        }
        Polynomial { coefficients }
    }

    pub fn from_ints(coefficients: &[i64]) -> Self {
        Self::new(coefficients.iter().map(|&c| Rational::from(c)).collect())
    }

    pub fn zero() -> Self {
        Polynomial::default()
    }

    pub fn constant(c: Rational) -> Self {
        Self::new(vec![c])
    }

    /// `c0 + c1·λ`.
    pub fn linear(c0: Rational, c1: Rational) -> Self {
        Self::new(vec![c0, c1])
    }

    pub fn coefficients(&self) -> &[Rational] {
        &self.coefficients
    }

    pub fn is_zero(&self) -> bool {
        self.coefficients.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coefficients.len().checked_sub(1)
    }

    /// Coefficient of `λ^k` (zero past the degree).
    pub fn coeff(&self, k: usize) -> Rational {
        self.coefficients
            .get(k)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn leading(&self) -> Option<&Rational> {
        self.coefficients.last()
    }

    pub fn eval(&self, at: &Rational) -> Rational {
        self.coefficients
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| &(&acc * at) + c)
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        Self::new(self.coefficients.iter().map(|c| c * factor).collect())
    }
}

pub fn poly_arith(op: PolyOp, p: &Polynomial, q: &PolyOperand) -> Option<Polynomial> {
    match (op, q) {
        (PolyOp::Add, PolyOperand::Poly(q)) => Some(p + q),
        (PolyOp::Add, PolyOperand::Scalar(c)) => Some(p + &Polynomial::constant(c.clone())),
        (PolyOp::Mul, PolyOperand::Poly(q)) => Some(p * q),
        (PolyOp::Mul | PolyOp::Scale, PolyOperand::Scalar(c)) => Some(p.scale(c)),
        (PolyOp::Scale, PolyOperand::Poly(_)) => None,
    }
}

pub fn poly_eval(p: &Polynomial, at: &Rational) -> Rational {
    p.eval(at)
}

impl Add<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let len = self.coefficients.len().max(rhs.coefficients.len());
        Polynomial::new((0..len).map(|k| &self.coeff(k) + &rhs.coeff(k)).collect())
    }
}

impl Sub<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;
    fn neg(self) -> Polynomial {
        Polynomial::new(self.coefficients.iter().map(|c| -c).collect())
    }
}

impl Mul<&Polynomial> for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let mut out = vec![Rational::zero(); self.coefficients.len() + rhs.coefficients.len() - 1];
        for (i, a) in self.coefficients.iter().enumerate() {
            for (j, b) in rhs.coefficients.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Polynomial::new(out)
    }
}

impl fmt::Display for Polynomial {
    /// Descending powers, e.g. `-λ^3 + 9λ^2 - 18λ`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coefficients.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let magnitude = c.abs();
            match (first, c.is_negative()) {
                (true, true) => write!(f, "-")?,
                (true, false) => {}
                (false, true) => write!(f, " - ")?,
                (false, false) => write!(f, " + ")?,
            }
            first = false;
            if k == 0 || !magnitude.is_one() {
                write!(f, "{magnitude}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "λ")?,
                _ => write!(f, "λ^{k}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use proptest::prelude::*;

    #[test]
    fn one_minus_lambda_times_char_poly() {
        let one_minus = Polynomial::from_ints(&[1, -1]);
        let phi = Polynomial::from_ints(&[0, -18, 9, -1]);
        let product = &one_minus * &phi;
        assert_eq!(product, Polynomial::from_ints(&[0, -18, 27, -10, 1]));
        // evaluate both sides at a few points
        for t in [0, 1, 2, -1, 3] {
            let t = Rational::from(t);
            assert_eq!(product.eval(&t), &one_minus.eval(&t) * &phi.eval(&t));
        }
    }

    #[test]
    fn zero_annihilates() {
        let p = Polynomial::from_ints(&[1, 2, 3]);
        assert!((&p * &Polynomial::zero()).is_zero());
        assert!((&Polynomial::zero() * &p).is_zero());
    }

    #[test]
    fn cancellation_restores_canonical_zero() {
        let sq = Polynomial::from_ints(&[0, 0, 1]);
        let neg = Polynomial::from_ints(&[0, 0, -1]);
        let sum = &sq + &neg;
        assert!(sum.is_zero());
        assert!(sum.coefficients().is_empty());
        assert_eq!(sum.degree(), None);
    }

    #[test]
    fn evaluation() {
        assert_eq!(
            Polynomial::zero().eval(&Rational::from(7)),
            Rational::zero()
        );
        assert_eq!(
            Polynomial::from_ints(&[6, -5, 1]).eval(&Rational::from(2)),
            Rational::zero()
        );
        assert_eq!(
            Polynomial::from_ints(&[0, -18, 27, -10, 1]).eval(&Rational::one()),
            Rational::zero()
        );
    }

    #[test]
    fn operand_dispatch() {
        let p = Polynomial::from_ints(&[1, 1]);
        let scaled = poly_arith(PolyOp::Scale, &p, &PolyOperand::Scalar(q(1, 2))).unwrap();
        assert_eq!(scaled, Polynomial::new(vec![q(1, 2), q(1, 2)]));
        assert!(poly_arith(PolyOp::Scale, &p, &PolyOperand::Poly(p.clone())).is_none());
        let shifted =
            poly_arith(PolyOp::Add, &p, &PolyOperand::Scalar(Rational::from(-1))).unwrap();
        assert_eq!(shifted, Polynomial::from_ints(&[0, 1]));
    }

    #[test]
    fn display() {
        assert_eq!(
            Polynomial::from_ints(&[0, -18, 9, -1]).to_string(),
            "-λ^3 + 9λ^2 - 18λ"
        );
        assert_eq!(
            Polynomial::from_ints(&[1, -2, 1]).to_string(),
            "λ^2 - 2λ + 1"
        );
        assert_eq!(Polynomial::zero().to_string(), "0");
    }

    fn small_poly() -> impl Strategy<Value = Polynomial> {
        prop::collection::vec((-9i64..=9, 1i64..=9), 0..5)
            .prop_map(|cs| Polynomial::new(cs.into_iter().map(|(n, d)| q(n, d)).collect()))
    }

    proptest! {
        #[test]
        fn eval_is_multiplicative(p in small_poly(), r in small_poly(), n in -9i64..=9, d in 1i64..=9) {
            let t = q(n, d);
            prop_assert_eq!((&p * &r).eval(&t), &p.eval(&t) * &r.eval(&t));
        }

        #[test]
        fn leading_coefficient_nonzero(p in small_poly(), r in small_poly()) {
            for out in [&p + &r, &p * &r, &p - &r] {
                prop_assert!(out.leading().is_none_or(|c| !c.is_zero()));
            }
        }
    }
}
