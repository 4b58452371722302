use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::{Field, FieldDescriptor};
use crate::error::ParseScalarError;

/// Arbitrary-precision rational, always in lowest terms with a positive
/// denominator.
pub type Rational = BigRational;

fn is_digits(s: &str) -> bool {
    !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit())
}

/// Parses `a` or `a/b` with an optional leading sign. Decimal points and
/// exponents are rejected.
pub fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let err = |reason: &str| ParseScalarError::new(s, reason);
    let t = s.trim();
    let (negative, body) = match t.as_bytes().first() {
        Some(b'-') => (true, &t[1..]),
        Some(b'+') => (false, &t[1..]),
        _ => (false, t),
    };
    let (num, den) = match body.split_once('/') {
        Some((n, d)) => (n, Some(d)),
        None => (body, None),
    };
    if body.contains(['.', 'e', 'E']) {
        return Err(err("floating-point notation is not exact; use a or a/b"));
    }
    if !is_digits(num) {
        return Err(err("expected an integer numerator"));
    }
    let mut n: BigInt = num.parse().map_err(|_| err("bad numerator"))?;
    if negative {
        n = -n;
    }
    let d: BigInt = match den {
        None => BigInt::one(),
        Some(d) if is_digits(d) => d.parse().map_err(|_| err("bad denominator"))?,
        Some(_) => return Err(err("expected an integer denominator")),
    };
    if d.is_zero() {
        return Err(err("zero denominator"));
    }
    Ok(BigRational::new(n, d))
}

impl Field for BigRational {
    type Ctx = ();

    fn context(&self) {}

    fn descriptor(_: &()) -> FieldDescriptor {
        FieldDescriptor::Rational
    }

    fn zero_in(_: &()) -> Self {
        BigRational::zero()
    }

    fn one_in(_: &()) -> Self {
        BigRational::one()
    }

    fn from_int(n: i64, _: &()) -> Self {
        BigRational::from_integer(BigInt::from(n))
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }

    fn is_one(&self) -> bool {
        One::is_one(self)
    }

    fn inverse(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }

    fn parse_in(s: &str, _: &()) -> Result<Self, ParseScalarError> {
        parse_rational(s)
    }
}
