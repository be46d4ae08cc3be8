//! Irreducibility of F(c,X) = X³ − cX² + c^pX − 1 over GF(p²).
//!
//! A cubic is irreducible iff it has no root in the base field, and the
//! roots of F in GF(p²) are exactly the roots of gcd(X^{p²} − X, F).

use super::{Gfp2, Gfp6, SexticField};

/// Little-endian coefficient vector with no trailing zeros.
type Poly = Vec<Gfp2>;

fn trim(mut a: Poly) -> Poly {
    while a.last().is_some_and(Gfp2::is_zero) {
        a.pop();
    }
    a
}

/// None when the leading coefficient of `b` has no inverse, which only
/// happens over a composite modulus.
fn rem(mut a: Poly, b: &Poly) -> Option<Poly> {
    let lead_inv = b.last()?.inv().ok()?;
    while a.len() >= b.len() {
        let shift = a.len() - b.len();
        let factor = a.last().unwrap() * &lead_inv;
        for (i, bi) in b.iter().enumerate().take(b.len() - 1) {
            a[shift + i] = &a[shift + i] - &(bi * &factor);
        }
        a.pop();
        a = trim(a);
    }
    Some(a)
}

fn gcd_degree(mut a: Poly, mut b: Poly) -> Option<usize> {
    a = trim(a);
    b = trim(b);
    while !b.is_empty() {
        let r = rem(a, &b)?;
        a = b;
        b = r;
    }
    Some(a.len().saturating_sub(1))
}

/// True iff F(c,X) has no root in GF(p²).
pub fn cubic_irreducible(c: &Gfp2) -> bool {
    SexticField::new(c.clone()).is_ok()
}

/// `theta_p2` is X^{p²} reduced modulo F in the bare quotient ring.
pub(super) fn frobenius_image_is_irreducible(ring: &SexticField, theta_p2: &Gfp6) -> bool {
    let p = ring.modulus();
    let c = ring.c();
    let f: Poly = vec![-&Gfp2::one(p), c.frobenius(), -c, Gfp2::one(p)];
    let [h0, h1, h2] = theta_p2.coeffs().clone();
    let h: Poly = vec![h0, &h1 - &Gfp2::one(p), h2];
    let h = trim(h);
    if h.is_empty() {
        // X^{p²} ≡ X: every root of F lies in GF(p²).
        return false;
    }
    gcd_degree(f, h) == Some(0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gf::Modulus;

    /// Exhaustive root search over all of GF(p²).
    fn has_root_brute_force(c: &Gfp2, all: &[Gfp2]) -> bool {
        let p = c.modulus();
        let c_p = c.frobenius();
        all.iter().any(|x| {
            let x2 = x.square();
            let val = &(&(&(&x2 * x) - &(&x2 * c)) + &(&c_p * x)) - &Gfp2::one(p);
            val.is_zero()
        })
    }

    #[test]
    fn agrees_with_exhaustive_root_search_at_p23() {
        let p = Modulus::from(23);
        let all: Vec<Gfp2> = (0..23u64)
            .flat_map(|a| (0..23u64).map(move |b| (a, b)))
            .map(|(a, b)| Gfp2::new(a.into(), b.into(), &p))
            .collect();
        let mut irreducible = 0;
        for c in &all {
            let fast = cubic_irreducible(c);
            assert_eq!(fast, !has_root_brute_force(c, &all), "c = {c:?}");
            irreducible += fast as usize;
        }
        // Frozen from the brute-force oracle above.
        assert_eq!(irreducible, IRREDUCIBLE_AT_23);
    }

    // Number of c ∈ GF(23²) with F(c,X) irreducible, as counted by the
    // brute-force root search.
    const IRREDUCIBLE_AT_23: usize = 168;

    #[test]
    fn base_field_c_is_reducible() {
        let p = Modulus::from(23);
        for n in 0..23 {
            assert!(!cubic_irreducible(&Gfp2::from_u64(n, &p)));
        }
    }
}
