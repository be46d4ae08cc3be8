use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;

use super::{check_same, forward_binop, Gfp, Modulus};
use crate::codec;
use crate::error::{Error, Result};

/// An element z1·α + z2·α² of GF(p^2), where α is a primitive cube root of
/// unity (α² + α + 1 = 0) and p ≡ 2 (mod 3).
///
/// In this basis 1 = −α − α², and the Frobenius map x ↦ x^p swaps the two
/// coordinates because α^p = α².
#[derive(Clone, PartialEq, Eq)]
pub struct Gfp2 {
    z1: BigUint,
    z2: BigUint,
    p: Modulus,
}

impl Gfp2 {
    pub fn new(z1: BigUint, z2: BigUint, p: &Modulus) -> Self {
        Gfp2 {
            z1: z1 % p.value(),
            z2: z2 % p.value(),
            p: p.clone(),
        }
    }

    pub fn zero(p: &Modulus) -> Self {
        Gfp2 {
            z1: BigUint::zero(),
            z2: BigUint::zero(),
            p: p.clone(),
        }
    }

    /// The unit element, (−1, −1).
    pub fn one(p: &Modulus) -> Self {
        Gfp2::from_u64(1, p)
    }

    /// Embeds the integer n as n·1 = (−n, −n).
    pub fn from_u64(n: u64, p: &Modulus) -> Self {
        Gfp2::from_base(&Gfp::from_u64(n, p))
    }

    /// Embeds an element of GF(p).
    pub fn from_base(a: &Gfp) -> Self {
        let neg = -a;
        Gfp2 {
            z1: neg.value().clone(),
            z2: neg.into_value(),
            p: a.modulus().clone(),
        }
    }

    /// The basis element α = (1, 0).
    pub fn alpha(p: &Modulus) -> Self {
        Gfp2::new(BigUint::from(1u8), BigUint::zero(), p)
    }

    pub fn z1(&self) -> Gfp {
        Gfp::new(self.z1.clone(), &self.p)
    }

    pub fn z2(&self) -> Gfp {
        Gfp::new(self.z2.clone(), &self.p)
    }

    pub fn coords(&self) -> (&BigUint, &BigUint) {
        (&self.z1, &self.z2)
    }

    pub fn modulus(&self) -> &Modulus {
        &self.p
    }

    pub fn is_zero(&self) -> bool {
        self.z1.is_zero() && self.z2.is_zero()
    }

    pub fn is_one(&self) -> bool {
        let pm1 = self.p.value() - 1u32;
        self.z1 == pm1 && self.z2 == pm1
    }

    /// If the element lies in GF(p), returns it.
    pub fn to_base(&self) -> Option<Gfp> {
        (self.z1 == self.z2).then(|| -Gfp::new(self.z1.clone(), &self.p))
    }

    pub fn try_add(&self, rhs: &Gfp2) -> Result<Gfp2> {
        check_same(&self.p, &rhs.p)?;
        Ok(Gfp2::new(&self.z1 + &rhs.z1, &self.z2 + &rhs.z2, &self.p))
    }

    pub fn try_sub(&self, rhs: &Gfp2) -> Result<Gfp2> {
        check_same(&self.p, &rhs.p)?;
        let p = self.p.value();
        Ok(Gfp2::new(
            &self.z1 + p - &rhs.z1,
            &self.z2 + p - &rhs.z2,
            &self.p,
        ))
    }

    /// With t1 = x1·y1, t2 = x2·y2 and s = x1·y2 + x2·y1 the product is
    /// (t2 − s)·α + (t1 − s)·α², using α² · α² = α and α · α² = −α − α².
    pub fn try_mul(&self, rhs: &Gfp2) -> Result<Gfp2> {
        check_same(&self.p, &rhs.p)?;
        let p = self.p.value();
        let t1 = &self.z1 * &rhs.z1;
        let t2 = &self.z2 * &rhs.z2;
        let s = ((&self.z1 + &self.z2) * (&rhs.z1 + &rhs.z2) - &t1 - &t2) % p;
        Ok(Gfp2 {
            z1: (t2 % p + p - &s) % p,
            z2: (t1 % p + p - &s) % p,
            p: self.p.clone(),
        })
    }

    pub fn square(&self) -> Gfp2 {
        let p = self.p.value();
        let cross = (&self.z1 * &self.z2 * 2u32) % p;
        Gfp2 {
            z1: ((&self.z2 * &self.z2) % p + p - &cross) % p,
            z2: ((&self.z1 * &self.z1) % p + p - &cross) % p,
            p: self.p.clone(),
        }
    }

    /// Multiplies by an integer (an element of GF(p) given by its value).
    pub fn scale(&self, k: &BigUint) -> Gfp2 {
        Gfp2::new(&self.z1 * k, &self.z2 * k, &self.p)
    }

    /// x ↦ x^p, the coordinate swap.
    pub fn frobenius(&self) -> Gfp2 {
        Gfp2 {
            z1: self.z2.clone(),
            z2: self.z1.clone(),
            p: self.p.clone(),
        }
    }

    /// Inverse via the norm: x^{-1} = x^p / (x · x^p), where the norm is
    /// z1² + z2² − z1·z2 ∈ GF(p).
    pub fn inv(&self) -> Result<Gfp2> {
        let p = self.p.value();
        let norm = (&self.z1 * &self.z1 + &self.z2 * &self.z2 + p * p - &self.z1 * &self.z2) % p;
        if norm.is_zero() {
            return Err(Error::DivisionByZero);
        }
        let r = norm.modpow(&(p - 2u32), p);
        Ok(Gfp2::new(&self.z2 * &r, &self.z1 * &r, &self.p))
    }

    pub fn pow(&self, exp: &BigUint) -> Gfp2 {
        let mut acc = Gfp2::one(&self.p);
        for i in (0..exp.bits()).rev() {
            acc = acc.square();
            if exp.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    /// Canonical text form `z1,z2`.
    pub fn to_canonical(&self) -> String {
        format!("{},{}", self.z1, self.z2)
    }

    /// Parses `z1,z2`; both coordinates must already be reduced.
    pub fn parse_canonical(s: &str, p: &Modulus, line: usize) -> Result<Gfp2> {
        let (a, b) = s
            .split_once(',')
            .ok_or_else(|| Error::parse(line, "expected z1,z2"))?;
        let z1 = parse_coord(a, p, line)?;
        let z2 = parse_coord(b, p, line)?;
        Ok(Gfp2 {
            z1,
            z2,
            p: p.clone(),
        })
    }
}

pub(crate) fn parse_coord(s: &str, p: &Modulus, line: usize) -> Result<BigUint> {
    let v = codec::parse_uint(s, line)?;
    if &v >= p.value() {
        return Err(Error::parse(line, "coordinate not reduced"));
    }
    Ok(v)
}

forward_binop!(Gfp2, Add, add, try_add);
forward_binop!(Gfp2, Sub, sub, try_sub);
forward_binop!(Gfp2, Mul, mul, try_mul);

impl std::ops::Neg for &Gfp2 {
    type Output = Gfp2;
    fn neg(self) -> Gfp2 {
        &Gfp2::zero(&self.p) - self
    }
}

impl fmt::Debug for Gfp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gfp2({},{})", self.z1, self.z2)
    }
}

impl fmt::Display for Gfp2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical())
    }
}
