use std::fmt;
use std::ops::{Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::ArithError;

/// Arbitrary precision rationals; canonical form is maintained by `num-rational`.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q`, with `/q` omitted when the denominator is one.
pub fn format_rational(q: &Rational) -> String {
    if q.denom().is_one() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<Rational, ArithError> {
    let s = s.trim();
    let bad = || ArithError::Parse(format!("invalid rational `{s}`"));
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(p, q))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Coefficient ring of polynomials and series.
///
/// Implementors are commutative Q-algebras except [`crate::ExtVec`], whose
/// product is the (graded-commutative) wedge; polynomial products always keep
/// the left operand on the left, so the wedge order is respected.
///
/// `zero()` and `one()` carry no ambient context (ring, dimension); binary
/// operations adopt the context of whichever operand has one.
pub trait Coeff:
    Clone
    + PartialEq
    + fmt::Debug
    + fmt::Display
    + Send
    + Sync
    + Zero
    + One
    + Neg<Output = Self>
    + Sub<Output = Self>
{
    fn from_rational(q: Rational) -> Self;

    fn scale(&self, q: &Rational) -> Self;

    /// `Some(q)` when the value is the scalar `q`.
    fn as_rational(&self) -> Option<Rational>;

    fn mul_ref(&self, other: &Self) -> Self;

    fn add_assign_ref(&mut self, other: &Self);
}

impl Coeff for Rational {
    fn from_rational(q: Rational) -> Self {
        q
    }

    fn scale(&self, q: &Rational) -> Self {
        self * q
    }

    fn as_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }

    fn add_assign_ref(&mut self, other: &Self) {
        *self += other;
    }
}
