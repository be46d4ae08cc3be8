//! Prime field GF(p), the quadratic extension GF(p^2) and the sextic
//! extension GF(p^6) = GF(p^2)[θ]/F(c,θ).
//!
//! Elements carry their modulus (or extension context) so that mixing
//! elements of different fields is reported instead of silently producing
//! garbage. The `try_*` methods return [`Error::ModulusMismatch`]; the
//! operator impls panic on mismatch and are meant for code that already
//! knows both operands came from the same context.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

mod fp2;
mod fp6;
mod poly;

pub use fp2::Gfp2;
pub use fp6::{Gfp6, SexticField};
pub use poly::cubic_irreducible;

/// A shared prime modulus.
#[derive(Clone)]
pub struct Modulus(Arc<BigUint>);

impl Modulus {
    pub fn new(n: BigUint) -> Self {
        Modulus(Arc::new(n))
    }

    pub fn value(&self) -> &BigUint {
        &self.0
    }

    pub fn bits(&self) -> u64 {
        self.0.bits()
    }
}

impl PartialEq for Modulus {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}

impl Eq for Modulus {}

impl fmt::Debug for Modulus {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Modulus({})", self.0)
    }
}

impl From<u64> for Modulus {
    fn from(n: u64) -> Self {
        Modulus::new(BigUint::from(n))
    }
}

pub(crate) fn check_same(a: &Modulus, b: &Modulus) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::ModulusMismatch("prime moduli differ"))
    }
}

/// Implements the std binary operators in terms of a fallible method.
macro_rules! forward_binop {
    ($ty:ty, $tr:ident, $method:ident, $checked:ident) => {
        impl<'a, 'b> std::ops::$tr<&'b $ty> for &'a $ty {
            type Output = $ty;
            fn $method(self, rhs: &'b $ty) -> $ty {
                match self.$checked(rhs) {
                    Ok(v) => v,
                    Err(e) => panic!("{}: {e}", stringify!($method)),
                }
            }
        }
        impl std::ops::$tr<$ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: $ty) -> $ty {
                std::ops::$tr::$method(&self, &rhs)
            }
        }
        impl<'b> std::ops::$tr<&'b $ty> for $ty {
            type Output = $ty;
            fn $method(self, rhs: &'b $ty) -> $ty {
                std::ops::$tr::$method(&self, rhs)
            }
        }
    };
}
pub(crate) use forward_binop;

/// An element of the prime field GF(n) for the carried modulus n.
///
/// The crate uses this type both for GF(p) coordinates and for the scalar
/// field GF(q) that holds subshadows, masks and secrets.
#[derive(Clone, PartialEq, Eq)]
pub struct Gfp {
    value: BigUint,
    modulus: Modulus,
}

impl Gfp {
    /// Reduces `value` into [0, n).
    pub fn new(value: BigUint, modulus: &Modulus) -> Self {
        Gfp {
            value: value % modulus.value(),
            modulus: modulus.clone(),
        }
    }

    pub fn from_u64(value: u64, modulus: &Modulus) -> Self {
        Gfp::new(BigUint::from(value), modulus)
    }

    /// Signed integers map to their residue.
    pub fn from_i64(value: i64, modulus: &Modulus) -> Self {
        let r = Gfp::from_u64(value.unsigned_abs(), modulus);
        if value < 0 {
            -r
        } else {
            r
        }
    }

    pub fn zero(modulus: &Modulus) -> Self {
        Gfp {
            value: BigUint::zero(),
            modulus: modulus.clone(),
        }
    }

    pub fn one(modulus: &Modulus) -> Self {
        Gfp::new(BigUint::one(), modulus)
    }

    pub fn value(&self) -> &BigUint {
        &self.value
    }

    pub fn into_value(self) -> BigUint {
        self.value
    }

    pub fn modulus(&self) -> &Modulus {
        &self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn try_add(&self, rhs: &Gfp) -> Result<Gfp> {
        check_same(&self.modulus, &rhs.modulus)?;
        Ok(Gfp::new(&self.value + &rhs.value, &self.modulus))
    }

    pub fn try_sub(&self, rhs: &Gfp) -> Result<Gfp> {
        check_same(&self.modulus, &rhs.modulus)?;
        let n = self.modulus.value();
        Ok(Gfp::new(&self.value + n - &rhs.value, &self.modulus))
    }

    pub fn try_mul(&self, rhs: &Gfp) -> Result<Gfp> {
        check_same(&self.modulus, &rhs.modulus)?;
        Ok(Gfp::new(&self.value * &rhs.value, &self.modulus))
    }

    pub fn pow(&self, exp: &BigUint) -> Gfp {
        Gfp {
            value: self.value.modpow(exp, self.modulus.value()),
            modulus: self.modulus.clone(),
        }
    }

    /// Inverse by Fermat's little theorem; the modulus must be prime.
    /// Reduced decimal.
    pub fn parse_canonical(s: &str, modulus: &Modulus, line: usize) -> Result<Gfp> {
        Ok(Gfp {
            value: fp2::parse_coord(s, modulus, line)?,
            modulus: modulus.clone(),
        })
    }

    pub fn inv(&self) -> Result<Gfp> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let n = self.modulus.value();
        Ok(self.pow(&(n - 2u32)))
    }
}

impl std::ops::Neg for &Gfp {
    type Output = Gfp;
    fn neg(self) -> Gfp {
        if self.is_zero() {
            return self.clone();
        }
        Gfp {
            value: self.modulus.value() - &self.value,
            modulus: self.modulus.clone(),
        }
    }
}

impl std::ops::Neg for Gfp {
    type Output = Gfp;
    fn neg(self) -> Gfp {
        -&self
    }
}

forward_binop!(Gfp, Add, add, try_add);
forward_binop!(Gfp, Sub, sub, try_sub);
forward_binop!(Gfp, Mul, mul, try_mul);

impl fmt::Display for Gfp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

impl fmt::Debug for Gfp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus.value())
    }
}
