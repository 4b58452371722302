use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_traits::{One, Signed, Zero};

use super::{parse_rational, Field, FieldDescriptor, Rational};
use crate::error::ParseScalarError;

/// An element `re + im·i` of `Q(i)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GaussianRational {
    pub re: Rational,
    pub im: Rational,
}

impl GaussianRational {
    pub fn new(re: Rational, im: Rational) -> Self {
        Self { re, im }
    }

    pub fn conj(&self) -> Self {
        Self { re: self.re.clone(), im: -self.im.clone() }
    }

    fn norm(&self) -> Rational {
        &self.re * &self.re + &self.im * &self.im
    }

    fn mul_ref(&self, rhs: &Self) -> Self {
        Self { re: &self.re * &rhs.re - &self.im * &rhs.im, im: &self.re * &rhs.im + &self.im * &rhs.re }
    }
}

/// Canonical form: `a`, `bi`, `a+bi` or `a-bi`, each part as `n` or `n/d`.
impl fmt::Display for GaussianRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (Zero::is_zero(&self.re), Zero::is_zero(&self.im)) {
            (_, true) => write!(f, "{}", self.re),
            (true, false) => write!(f, "{}i", self.im),
            (false, false) if self.im.is_negative() => write!(f, "{}-{}i", self.re, -self.im.clone()),
            (false, false) => write!(f, "{}+{}i", self.re, self.im),
        }
    }
}

impl Add for GaussianRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        Self { re: self.re + rhs.re, im: self.im + rhs.im }
    }
}

impl Sub for GaussianRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        Self { re: self.re - rhs.re, im: self.im - rhs.im }
    }
}

impl Mul for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.mul_ref(&rhs)
    }
}

impl<'a> Mul<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn mul(self, rhs: &'a Self) -> Self {
        self.mul_ref(rhs)
    }
}

impl Div for GaussianRational {
    type Output = Self;
    fn div(self, rhs: Self) -> Self {
        self / &rhs
    }
}

impl<'a> Div<&'a GaussianRational> for GaussianRational {
    type Output = Self;
    fn div(self, rhs: &'a Self) -> Self {
        let inv = rhs.inverse().expect("division by zero in Q(i)");
        self.mul_ref(&inv)
    }
}

impl Neg for GaussianRational {
    type Output = Self;
    fn neg(self) -> Self {
        Self { re: -self.re, im: -self.im }
    }
}

impl<'a> AddAssign<&'a GaussianRational> for GaussianRational {
    fn add_assign(&mut self, rhs: &'a Self) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl<'a> SubAssign<&'a GaussianRational> for GaussianRational {
    fn sub_assign(&mut self, rhs: &'a Self) {
        self.re -= &rhs.re;
        self.im -= &rhs.im;
    }
}

impl Field for GaussianRational {
    type Ctx = ();

    fn context(&self) {}

    fn descriptor(_: &()) -> FieldDescriptor {
        FieldDescriptor::GaussianRational
    }

    fn zero_in(_: &()) -> Self {
        Self { re: Rational::zero(), im: Rational::zero() }
    }

    fn one_in(_: &()) -> Self {
        Self { re: Rational::one(), im: Rational::zero() }
    }

    fn from_int(n: i64, _: &()) -> Self {
        Self { re: Rational::from_integer(n.into()), im: Rational::zero() }
    }

    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }

    fn inverse(&self) -> Option<Self> {
        if Field::is_zero(self) {
            return None;
        }
        let n = self.norm();
        Some(Self { re: &self.re / &n, im: -(&self.im / &n) })
    }

    fn parse_in(s: &str, _: &()) -> Result<Self, ParseScalarError> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let Some(body) = compact.strip_suffix('i') else {
            return Ok(Self { re: parse_rational(&compact)?, im: Rational::zero() });
        };
        // Split at the last sign that is not leading: that sign starts the
        // imaginary part.
        let split = body.char_indices().skip(1).filter(|(_, c)| *c == '+' || *c == '-').map(|(i, _)| i).last();
        let (re_part, im_part) = match split {
            Some(i) => (&body[..i], &body[i..]),
            None => ("", body),
        };
        let im = match im_part {
            "" | "+" => Rational::one(),
            "-" => -Rational::one(),
            p => parse_rational(p).map_err(|e| ParseScalarError::new(s, e.reason()))?,
        };
        let re = if re_part.is_empty() {
            Rational::zero()
        } else {
            parse_rational(re_part).map_err(|e| ParseScalarError::new(s, e.reason()))?
        };
        Ok(Self { re, im })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(a: i64, b: i64) -> GaussianRational {
        GaussianRational::new(Rational::from_integer(a.into()), Rational::from_integer(b.into()))
    }

    #[test]
    fn parse_forms() {
        let half = Rational::new(1.into(), 2.into());
        let p = |s| GaussianRational::parse_in(s, &()).unwrap();
        assert_eq!(p("3"), g(3, 0));
        assert_eq!(p("i"), g(0, 1));
        assert_eq!(p("-i"), g(0, -1));
        assert_eq!(p("2+i"), g(2, 1));
        assert_eq!(p("1/2-3/4 i"), GaussianRational::new(half, Rational::new((-3).into(), 4.into())));
        assert_eq!(p("-2-5i"), g(-2, -5));
        assert!(GaussianRational::parse_in("1.5i", &()).is_err());
        assert!(GaussianRational::parse_in("1+2j", &()).is_err());
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(g(0, 0).to_string(), "0");
        assert_eq!(g(0, -2).to_string(), "-2i");
        assert_eq!(g(3, -2).to_string(), "3-2i");
        assert_eq!(g(3, 1).to_string(), "3+1i");
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(g(0, 1) * g(0, 1), g(-1, 0));
    }

    proptest! {
        #[test]
        fn inverse_and_roundtrip(a in -20i64..20, b in -20i64..20, c in 1i64..9) {
            let x = GaussianRational::new(Rational::new(a.into(), c.into()), Rational::from_integer(b.into()));
            prop_assert!(Field::is_zero(&(x.clone() + -x.clone())));
            if !Field::is_zero(&x) {
                prop_assert!(Field::is_one(&(x.clone() * x.inverse().unwrap())));
            }
            prop_assert_eq!(GaussianRational::parse_in(&x.to_string(), &()).unwrap(), x);
        }
    }
}
