//! Exact scalar fields.
//!
//! Every invariant in this crate is a kernel dimension, so all arithmetic is
//! exact. Three fields are provided: the rationals, prime fields `GF(p)` with
//! a runtime modulus, and the Gaussian rationals `Q(i)`.
//!
//! A field may carry a runtime *context* (the modulus for `GF(p)`); the
//! rationals and Gaussian rationals use `()`. Containers store the context so
//! they can produce zeros and ones without a sample element.

mod gaussian;
mod prime;
mod rational;

use std::fmt::{self, Debug, Display};
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

pub use gaussian::GaussianRational;
pub use prime::{Fp, Modulus};
pub use rational::{parse_rational, Rational};

use crate::error::ParseScalarError;

/// Which field a value lives in, as named in tensor documents and on the
/// command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FieldDescriptor {
    Rational,
    Prime(u64),
    GaussianRational,
}

impl FieldDescriptor {
    /// Accepts `rational`, `gaussian-rational`, `gf:P` and `gf(P)`.
    pub fn parse(s: &str) -> Result<Self, crate::Error> {
        let t = s.trim();
        match t {
            "rational" | "q" | "Q" => return Ok(Self::Rational),
            "gaussian-rational" | "gaussian" => return Ok(Self::GaussianRational),
            _ => {}
        }
        let digits = t
            .strip_prefix("gf:")
            .or_else(|| t.strip_prefix("gf(").and_then(|r| r.strip_suffix(')')))
            .or_else(|| t.strip_prefix("gf"));
        match digits.map(|d| d.trim().parse::<u64>()) {
            Some(Ok(p)) => {
                Modulus::new(p)?;
                Ok(Self::Prime(p))
            }
            _ => Err(crate::Error::InvalidField(format!(
                "unknown field `{s}` (expected rational, gaussian-rational or gf:P)"
            ))),
        }
    }

    /// True when results over this field may differ from the classification
    /// over the reals.
    pub fn is_field_dependent(&self) -> bool {
        matches!(self, Self::Prime(_))
    }
}

impl Display for FieldDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Rational => f.write_str("rational"),
            Self::Prime(p) => write!(f, "gf:{p}"),
            Self::GaussianRational => f.write_str("gaussian-rational"),
        }
    }
}

/// An exact field with a possibly runtime-valued context.
///
/// Equality is exact; `is_zero` never involves a tolerance.
pub trait Field:
    Sized
    + Clone
    + PartialEq
    + Eq
    + Debug
    + Display
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
    + for<'a> Mul<&'a Self, Output = Self>
    + for<'a> Div<&'a Self, Output = Self>
    + for<'a> AddAssign<&'a Self>
    + for<'a> SubAssign<&'a Self>
{
    type Ctx: Clone + PartialEq + Eq + Debug + Send + Sync + 'static;

    fn context(&self) -> Self::Ctx;
    fn descriptor(ctx: &Self::Ctx) -> FieldDescriptor;

    fn zero_in(ctx: &Self::Ctx) -> Self;
    fn one_in(ctx: &Self::Ctx) -> Self;
    fn from_int(n: i64, ctx: &Self::Ctx) -> Self;

    fn is_zero(&self) -> bool;

    fn is_one(&self) -> bool {
        *self == Self::one_in(&self.context())
    }

    /// Multiplicative inverse, `None` for zero.
    fn inverse(&self) -> Option<Self>;

    /// Parses the exact scalar grammar used by tensor documents.
    fn parse_in(s: &str, ctx: &Self::Ctx) -> Result<Self, ParseScalarError>;
}
