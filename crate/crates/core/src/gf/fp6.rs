use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;

use super::{forward_binop, poly, Gfp2, Modulus};
use crate::error::{Error, Result};

/// The images of θ and θ² under one power of x ↦ x^{p²}.
#[derive(Clone)]
struct Conjugate {
    theta: [Gfp2; 3],
    theta_sq: [Gfp2; 3],
}

struct SexticInner {
    p: Modulus,
    c: Gfp2,
    c_p: Gfp2,
    /// θ^{p²} and θ^{p⁴}; absent for the bare ring used while testing
    /// irreducibility.
    conjugates: Option<[Conjugate; 2]>,
}

/// GF(p^6) modelled as GF(p²)[θ]/F(c,θ) with F(c,X) = X³ − cX² + c^p X − 1.
///
/// The context is built once per parameter set; θ^{p²} is cached so traces
/// and conjugates cost a handful of multiplications.
#[derive(Clone)]
pub struct SexticField(Arc<SexticInner>);

impl SexticField {
    /// Builds the field for `c`, failing if F(c,X) is reducible over GF(p²).
    pub fn new(c: Gfp2) -> Result<SexticField> {
        let ring = SexticField::ring(c);
        let p = ring.modulus().value();
        let theta_p2 = Gfp6::theta(&ring).pow(&(p * p));
        if !poly::frobenius_image_is_irreducible(&ring, &theta_p2) {
            return Err(Error::param("F(c,X) is reducible over GF(p^2)"));
        }
        let first = conjugate_of(&ring, theta_p2.c);
        // θ^{p⁴} = σ(θ^{p²}) where σ acts through the cached image of θ.
        let theta_p4 = apply_frobenius(&ring, &first, &first.theta);
        let second = conjugate_of(&ring, theta_p4);
        let inner = SexticInner {
            p: ring.0.p.clone(),
            c: ring.0.c.clone(),
            c_p: ring.0.c_p.clone(),
            conjugates: Some([first, second]),
        };
        Ok(SexticField(Arc::new(inner)))
    }

    /// The quotient ring without any irreducibility check or cached maps.
    pub(crate) fn ring(c: Gfp2) -> SexticField {
        SexticField(Arc::new(SexticInner {
            p: c.modulus().clone(),
            c_p: c.frobenius(),
            c,
            conjugates: None,
        }))
    }

    pub fn c(&self) -> &Gfp2 {
        &self.0.c
    }

    pub fn modulus(&self) -> &Modulus {
        &self.0.p
    }

    fn same(&self, other: &SexticField) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0.c == other.0.c
    }

    fn conjugates(&self) -> Result<&[Conjugate; 2]> {
        self.0
            .conjugates
            .as_ref()
            .ok_or_else(|| Error::CorruptField("ring context has no Frobenius cache".into()))
    }

    /// Schoolbook product followed by reduction with θ³ = cθ² − c^pθ + 1.
    fn mul_coeffs(&self, a: &[Gfp2; 3], b: &[Gfp2; 3]) -> [Gfp2; 3] {
        let mut d: Vec<Gfp2> = (0..5).map(|_| Gfp2::zero(&self.0.p)).collect();
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                d[i + j] = &d[i + j] + &(x * y);
            }
        }
        self.reduce(d)
    }

    fn reduce(&self, mut d: Vec<Gfp2>) -> [Gfp2; 3] {
        let (c, c_p) = (&self.0.c, &self.0.c_p);
        for top in (3..d.len()).rev() {
            let t = std::mem::replace(&mut d[top], Gfp2::zero(&self.0.p));
            if t.is_zero() {
                continue;
            }
            d[top - 1] = &d[top - 1] + &(&t * c);
            d[top - 2] = &d[top - 2] - &(&t * c_p);
            d[top - 3] = &d[top - 3] + &t;
        }
        d.truncate(3);
        let mut it = d.into_iter();
        [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()]
    }
}

impl fmt::Debug for SexticField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "SexticField(p={}, c={:?})", self.0.p.value(), self.0.c)
    }
}

fn conjugate_of(ring: &SexticField, theta: [Gfp2; 3]) -> Conjugate {
    let theta_sq = ring.mul_coeffs(&theta, &theta);
    Conjugate { theta, theta_sq }
}

/// a0 + a1·θ' + a2·θ'² for the conjugate θ' described by `conj`.
fn apply_frobenius(field: &SexticField, conj: &Conjugate, a: &[Gfp2; 3]) -> [Gfp2; 3] {
    let mut out = [a[0].clone(), Gfp2::zero(&field.0.p), Gfp2::zero(&field.0.p)];
    for (i, o) in out.iter_mut().enumerate() {
        *o = &(&*o + &(&a[1] * &conj.theta[i])) + &(&a[2] * &conj.theta_sq[i]);
    }
    out
}

/// An element a0 + a1·θ + a2·θ² of GF(p^6).
#[derive(Clone)]
pub struct Gfp6 {
    c: [Gfp2; 3],
    field: SexticField,
}

impl Gfp6 {
    pub fn from_coeffs(coeffs: [Gfp2; 3], field: &SexticField) -> Result<Gfp6> {
        if coeffs.iter().any(|x| x.modulus() != field.modulus()) {
            return Err(Error::ModulusMismatch("coefficient outside GF(p^2)"));
        }
        Ok(Gfp6 {
            c: coeffs,
            field: field.clone(),
        })
    }

    pub fn zero(field: &SexticField) -> Gfp6 {
        Gfp6::from_base(&Gfp2::zero(field.modulus()), field)
    }

    pub fn one(field: &SexticField) -> Gfp6 {
        Gfp6::from_base(&Gfp2::one(field.modulus()), field)
    }

    pub fn from_base(a: &Gfp2, field: &SexticField) -> Gfp6 {
        let z = Gfp2::zero(field.modulus());
        Gfp6 {
            c: [a.clone(), z.clone(), z],
            field: field.clone(),
        }
    }

    /// The class of θ, which is the group generator once F(c,X) is its
    /// minimal polynomial.
    pub fn theta(field: &SexticField) -> Gfp6 {
        let z = Gfp2::zero(field.modulus());
        Gfp6 {
            c: [z.clone(), Gfp2::one(field.modulus()), z],
            field: field.clone(),
        }
    }

    pub fn coeffs(&self) -> &[Gfp2; 3] {
        &self.c
    }

    pub fn field(&self) -> &SexticField {
        &self.field
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Gfp2::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.c[0].is_one() && self.c[1].is_zero() && self.c[2].is_zero()
    }

    fn check(&self, rhs: &Gfp6) -> Result<()> {
        if self.field.same(&rhs.field) {
            Ok(())
        } else {
            Err(Error::ModulusMismatch("extension contexts differ"))
        }
    }

    fn zip(&self, rhs: &Gfp6, f: impl Fn(&Gfp2, &Gfp2) -> Gfp2) -> Result<Gfp6> {
        self.check(rhs)?;
        Ok(Gfp6 {
            c: [
                f(&self.c[0], &rhs.c[0]),
                f(&self.c[1], &rhs.c[1]),
                f(&self.c[2], &rhs.c[2]),
            ],
            field: self.field.clone(),
        })
    }

    pub fn try_add(&self, rhs: &Gfp6) -> Result<Gfp6> {
        self.zip(rhs, |a, b| a + b)
    }

    pub fn try_sub(&self, rhs: &Gfp6) -> Result<Gfp6> {
        self.zip(rhs, |a, b| a - b)
    }

    pub fn try_mul(&self, rhs: &Gfp6) -> Result<Gfp6> {
        self.check(rhs)?;
        Ok(Gfp6 {
            c: self.field.mul_coeffs(&self.c, &rhs.c),
            field: self.field.clone(),
        })
    }

    pub fn scale(&self, k: &Gfp2) -> Gfp6 {
        Gfp6 {
            c: [&self.c[0] * k, &self.c[1] * k, &self.c[2] * k],
            field: self.field.clone(),
        }
    }

    pub fn square(&self) -> Gfp6 {
        Gfp6 {
            c: self.field.mul_coeffs(&self.c, &self.c),
            field: self.field.clone(),
        }
    }

    /// Left-to-right square-and-multiply; `pow(0)` is the unit.
    pub fn pow(&self, exp: &BigUint) -> Gfp6 {
        let mut acc = Gfp6::one(&self.field);
        for i in (0..exp.bits()).rev() {
            acc = acc.square();
            if exp.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    /// x ↦ x^{p²}.
    pub fn frobenius_p2(&self) -> Result<Gfp6> {
        let [first, _] = self.field.conjugates()?;
        Ok(Gfp6 {
            c: apply_frobenius(&self.field, first, &self.c),
            field: self.field.clone(),
        })
    }

    /// The three conjugates x, x^{p²}, x^{p⁴}.
    pub fn conjugates(&self) -> Result<[Gfp6; 3]> {
        let [first, second] = self.field.conjugates()?;
        let wrap = |c| Gfp6 {
            c,
            field: self.field.clone(),
        };
        Ok([
            self.clone(),
            wrap(apply_frobenius(&self.field, first, &self.c)),
            wrap(apply_frobenius(&self.field, second, &self.c)),
        ])
    }

    /// Tr(x) = x + x^{p²} + x^{p⁴}, which must land in GF(p²).
    pub fn trace(&self) -> Result<Gfp2> {
        let [a, b, c] = self.conjugates()?;
        let sum = &(&a + &b) + &c;
        if !sum.c[1].is_zero() || !sum.c[2].is_zero() {
            return Err(Error::CorruptField(
                "trace has a nonzero θ component".into(),
            ));
        }
        let [t, _, _] = sum.c;
        Ok(t)
    }

    /// Canonical text form: six comma-separated coordinates.
    pub fn to_canonical(&self) -> String {
        self.c
            .iter()
            .map(Gfp2::to_canonical)
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_canonical(s: &str, field: &SexticField, line: usize) -> Result<Gfp6> {
        let parts: Vec<&str> = s.split(',').collect();
        if parts.len() != 6 {
            return Err(Error::parse(line, "expected six coordinates"));
        }
        let p = field.modulus();
        let mut coords = Vec::with_capacity(3);
        for pair in parts.chunks(2) {
            let z1 = super::fp2::parse_coord(pair[0], p, line)?;
            let z2 = super::fp2::parse_coord(pair[1], p, line)?;
            coords.push(Gfp2::new(z1, z2, p));
        }
        let mut it = coords.into_iter();
        Gfp6::from_coeffs(
            [it.next().unwrap(), it.next().unwrap(), it.next().unwrap()],
            field,
        )
    }
}

impl PartialEq for Gfp6 {
    fn eq(&self, other: &Self) -> bool {
        self.field.same(&other.field) && self.c == other.c
    }
}

impl Eq for Gfp6 {}

forward_binop!(Gfp6, Add, add, try_add);
forward_binop!(Gfp6, Sub, sub, try_sub);
forward_binop!(Gfp6, Mul, mul, try_mul);

impl fmt::Debug for Gfp6 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Gfp6({})", self.to_canonical())
    }
}
