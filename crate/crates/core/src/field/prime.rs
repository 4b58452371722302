use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};

use super::{parse_rational, Field, FieldDescriptor};
use crate::error::ParseScalarError;
use crate::Error;

/// A validated prime modulus below 2^31.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Modulus(u64);

impl Modulus {
    pub const MAX: u64 = 1 << 31;

    pub fn new(p: u64) -> Result<Self, Error> {
        if p >= Self::MAX {
            return Err(Error::InvalidField(format!("modulus {p} is not below 2^31")));
        }
        if !is_prime(p) {
            return Err(Error::InvalidField(format!("modulus {p} is not prime")));
        }
        Ok(Self(p))
    }

    pub fn get(self) -> u64 {
        self.0
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut f = 2;
    while f * f <= p {
        if p.is_multiple_of(f) {
            return false;
        }
        f += 1;
    }
    true
}

/// Residue class modulo a prime, stored in `[0, p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: Modulus,
}

impl Fp {
    pub fn new(n: i64, modulus: Modulus) -> Self {
        let p = modulus.0 as i64;
        Self { value: n.rem_euclid(p) as u64, modulus }
    }

    pub fn value(self) -> u64 {
        self.value
    }

    pub fn modulus(self) -> Modulus {
        self.modulus
    }

    fn check(self, other: Self) -> u64 {
        assert_eq!(self.modulus, other.modulus, "GF(p) operands from different fields");
        self.modulus.0
    }

    fn pow(self, mut e: u64) -> Self {
        let p = self.modulus.0;
        let mut base = self.value;
        let mut acc = 1 % p;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        Self { value: acc, modulus: self.modulus }
    }

    fn from_bigint(n: &BigInt, modulus: Modulus) -> Self {
        let r = n.mod_floor(&BigInt::from(modulus.0));
        Self { value: r.to_u64().expect("residue fits in u64"), modulus }
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        let p = self.check(rhs);
        Fp { value: (self.value + rhs.value) % p, modulus: self.modulus }
    }
}

impl Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        let p = self.check(rhs);
        Fp { value: (self.value + p - rhs.value) % p, modulus: self.modulus }
    }
}

impl Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        let p = self.check(rhs);
        Fp { value: self.value * rhs.value % p, modulus: self.modulus }
    }
}

impl Div for Fp {
    type Output = Fp;
    fn div(self, rhs: Fp) -> Fp {
        let inv = rhs.inverse().expect("division by zero in GF(p)");
        self.mul(inv)
    }
}

impl Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        let p = self.modulus.0;
        Fp { value: (p - self.value) % p, modulus: self.modulus }
    }
}

impl<'a> Mul<&'a Fp> for Fp {
    type Output = Fp;
    fn mul(self, rhs: &'a Fp) -> Fp {
        self * *rhs
    }
}

impl<'a> Div<&'a Fp> for Fp {
    type Output = Fp;
    fn div(self, rhs: &'a Fp) -> Fp {
        self / *rhs
    }
}

impl<'a> AddAssign<&'a Fp> for Fp {
    fn add_assign(&mut self, rhs: &'a Fp) {
        *self = *self + *rhs;
    }
}

impl<'a> SubAssign<&'a Fp> for Fp {
    fn sub_assign(&mut self, rhs: &'a Fp) {
        *self = *self - *rhs;
    }
}

impl Field for Fp {
    type Ctx = Modulus;

    fn context(&self) -> Modulus {
        self.modulus
    }

    fn descriptor(ctx: &Modulus) -> FieldDescriptor {
        FieldDescriptor::Prime(ctx.0)
    }

    fn zero_in(ctx: &Modulus) -> Self {
        Fp { value: 0, modulus: *ctx }
    }

    fn one_in(ctx: &Modulus) -> Self {
        Fp::new(1, *ctx)
    }

    fn from_int(n: i64, ctx: &Modulus) -> Self {
        Fp::new(n, *ctx)
    }

    fn is_zero(&self) -> bool {
        self.value == 0
    }

    fn inverse(&self) -> Option<Self> {
        // Fermat: a^(p-2) = a^-1 for prime p.
        (self.value != 0).then(|| self.pow(self.modulus.0 - 2))
    }

    /// Integers reduce mod p; `a/b` means `a * b^-1`.
    fn parse_in(s: &str, ctx: &Modulus) -> Result<Self, ParseScalarError> {
        let q = parse_rational(s)?;
        let num = Fp::from_bigint(q.numer(), *ctx);
        let den = Fp::from_bigint(q.denom(), *ctx);
        match den.inverse() {
            Some(inv) => Ok(num * inv),
            None => {
                Err(ParseScalarError::new(s, &format!("denominator {} is divisible by p = {}", q.denom().abs(), ctx.0)))
            }
        }
    }
}
