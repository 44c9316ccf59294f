//! Arithmetic in prime fields `F_q`.
//!
//! Scalars are plain `u8` values kept reduced modulo `q`, so the supported
//! orders are the primes below 256.

use std::fmt;

use thiserror::Error;

/// A field element. Always reduced: `0 <= value < q`.
pub type Scalar = u8;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GfError {
    #[error("field order {0} is not a prime below 256")]
    NotPrime(u32),
    #[error("zero has no multiplicative inverse")]
    ZeroInverse,
    #[error("scalar {value} is out of range for q={q}")]
    OutOfRange { value: u32, q: u8 },
}

/// Order of a prime field.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldOrder(u8);

impl FieldOrder {
    pub fn new(q: u32) -> Result<Self, GfError> {
        if !(2..=255).contains(&q) || !is_prime(q) {
            return Err(GfError::NotPrime(q));
        }
        Ok(FieldOrder(q as u8))
    }

    #[inline]
    pub fn get(self) -> u8 {
        self.0
    }

    /// Checks that `value` is a reduced residue and converts it.
    pub fn scalar(self, value: u32) -> Result<Scalar, GfError> {
        if value < self.0 as u32 {
            Ok(value as Scalar)
        } else {
            Err(GfError::OutOfRange { value, q: self.0 })
        }
    }

    #[inline]
    pub fn add(self, a: Scalar, b: Scalar) -> Scalar {
        ((a as u16 + b as u16) % self.0 as u16) as Scalar
    }

    #[inline]
    pub fn neg(self, a: Scalar) -> Scalar {
        if a == 0 {
            0
        } else {
            self.0 - a
        }
    }

    #[inline]
    pub fn sub(self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    #[inline]
    pub fn mul(self, a: Scalar, b: Scalar) -> Scalar {
        ((a as u16 * b as u16) % self.0 as u16) as Scalar
    }

    /// Multiplicative inverse via Fermat: `a^(q-2)`.
    pub fn inv(self, a: Scalar) -> Result<Scalar, GfError> {
        if a == 0 {
            return Err(GfError::ZeroInverse);
        }
        let mut result: Scalar = 1;
        let mut base = a;
        let mut exp = self.0 as u32 - 2;
        while exp > 0 {
            if exp & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        Ok(result)
    }

    /// All field elements in increasing order.
    pub fn elements(self) -> impl Iterator<Item = Scalar> {
        0..self.0
    }
}

impl fmt::Display for FieldOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn is_prime(q: u32) -> bool {
    if q < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= q {
        if q.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}
