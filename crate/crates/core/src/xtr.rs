//! XTR parameters, the trace ladder c_n = Tr(g^n), key pairs and the
//! trace-blinded encryption of scalar subshadows.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rand::RngCore;

use crate::arith;
use crate::codec::{self, KvReader};
use crate::error::{Error, Result};
use crate::gf::{Gfp, Gfp2, Gfp6, Modulus, SexticField};

pub const MIN_LAMBDA: u32 = 5;
pub const MAX_LAMBDA: u32 = 1024;

/// Up to this size p² − p + 1 is factored directly.
const SMALL_LAMBDA: u32 = 16;

const PRIME_SEARCH_ATTEMPTS: usize = 200_000;
const GENERATOR_ATTEMPTS: usize = 1_000;

/// Public system parameters: primes p ≡ 2 (mod 3) and q | p² − p + 1, the
/// field GF(p⁶) = GF(p²)[θ]/F(c,θ) and the order-q generator g with
/// Tr(g) = c.
#[derive(Clone)]
pub struct XtrParams {
    lambda: u32,
    p: Modulus,
    q: Modulus,
    field: SexticField,
    g: Gfp6,
    /// g^(2^i) for fixed-base exponentiation.
    g_table: Arc<Vec<Gfp6>>,
}

impl XtrParams {
    /// Assembles parameters from their public description, checking every
    /// invariant.
    pub fn from_public(lambda: u32, p: BigUint, q: BigUint, c: Gfp2, g: Gfp6) -> Result<XtrParams> {
        check_primes(lambda, &p, &q)?;
        let p = c.modulus().clone();
        let field = g.field().clone();
        if field.c() != &c {
            return Err(Error::param("generator is not expressed over F(c,X)"));
        }
        XtrParams::assemble(lambda, p, Modulus::new(q), field, g)
    }

    /// Parameters for given primes; only c and g are drawn at random.
    pub fn from_primes<R: RngCore + ?Sized>(
        lambda: u32,
        p: BigUint,
        q: BigUint,
        rng: &mut R,
    ) -> Result<XtrParams> {
        check_primes(lambda, &p, &q)?;
        find_generator(lambda, Modulus::new(p), Modulus::new(q), rng)
    }

    fn assemble(lambda: u32, p: Modulus, q: Modulus, field: SexticField, g: Gfp6) -> Result<XtrParams> {
        if g.field().c() != field.c() || g.field().modulus() != &p {
            return Err(Error::param("generator lives in a different field"));
        }
        if g.is_one() || !g.pow(q.value()).is_one() {
            return Err(Error::param("g does not have order q"));
        }
        if &g.trace()? != field.c() {
            return Err(Error::param("Tr(g) differs from c"));
        }
        let mut table = Vec::with_capacity(q.bits() as usize);
        let mut acc = g.clone();
        for _ in 0..q.bits() {
            let next = acc.square();
            table.push(acc);
            acc = next;
        }
        Ok(XtrParams {
            lambda,
            p,
            q,
            field,
            g,
            g_table: Arc::new(table),
        })
    }

    pub fn lambda(&self) -> u32 {
        self.lambda
    }

    pub fn p(&self) -> &Modulus {
        &self.p
    }

    pub fn q(&self) -> &Modulus {
        &self.q
    }

    /// Tr(g).
    pub fn c(&self) -> &Gfp2 {
        self.field.c()
    }

    pub fn g(&self) -> &Gfp6 {
        &self.g
    }

    pub fn field(&self) -> &SexticField {
        &self.field
    }

    /// g^e for any e ≥ 0, reduced mod q first.
    pub fn g_pow(&self, e: &BigUint) -> Gfp6 {
        let e = e % self.q.value();
        let mut acc = Gfp6::one(&self.field);
        for (i, t) in self.g_table.iter().enumerate() {
            if e.bit(i as u64) {
                acc = &acc * t;
            }
        }
        acc
    }

    /// g^u for a scalar u ∈ GF(q).
    pub fn commit(&self, u: &Gfp) -> Gfp6 {
        self.g_pow(u.value())
    }

    pub fn scalar(&self, v: u64) -> Gfp {
        Gfp::from_u64(v, &self.q)
    }

    /// Parameter file: `key=value` lines with decimal bignums.
    pub fn to_params_file(&self) -> String {
        let c = self.c();
        let g = self.g.coeffs();
        let mut s = format!(
            "lambda={}\np={}\nq={}\nc.z1={}\nc.z2={}\n",
            self.lambda,
            self.p.value(),
            self.q.value(),
            c.coords().0,
            c.coords().1
        );
        for (i, a) in g.iter().enumerate() {
            s.push_str(&format!("g.a{i}.z1={}\ng.a{i}.z2={}\n", a.coords().0, a.coords().1));
        }
        s
    }

    pub fn parse_params_file(text: &str) -> Result<XtrParams> {
        let mut r = KvReader::new(codec::lines(text)?);
        let (n, lambda) = r.expect("lambda")?;
        let lambda = parse_lambda(lambda, n)?;
        let (n, p) = r.expect("p")?;
        let p = codec::parse_uint(p, n)?;
        let (n, q) = r.expect("q")?;
        let q = codec::parse_uint(q, n)?;
        check_primes(lambda, &p, &q).map_err(|e| Error::parse(n, e.to_string()))?;
        let pm = Modulus::new(p.clone());
        let (n, z1) = r.expect("c.z1")?;
        let (_, z2) = r.expect("c.z2")?;
        let c = Gfp2::parse_canonical(&format!("{z1},{z2}"), &pm, n)?;
        let field = SexticField::new(c.clone()).map_err(|e| Error::parse(n, e.to_string()))?;
        let mut coords = Vec::new();
        for i in 0..3 {
            let (_, z1) = r.expect(&format!("g.a{i}.z1"))?;
            let (_, z2) = r.expect(&format!("g.a{i}.z2"))?;
            coords.push(format!("{z1},{z2}"));
        }
        let line = r.line();
        let g = Gfp6::parse_canonical(&coords.join(","), &field, line)?;
        r.finish()?;
        XtrParams::from_public(lambda, p, q, c, g).map_err(|e| Error::parse(line, e.to_string()))
    }
}

impl fmt::Debug for XtrParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "XtrParams(lambda={}, p={}, q={}, c={})",
            self.lambda,
            self.p.value(),
            self.q.value(),
            self.c()
        )
    }
}

impl Eq for XtrParams {}

impl PartialEq for XtrParams {
    fn eq(&self, other: &Self) -> bool {
        self.lambda == other.lambda && self.p == other.p && self.q == other.q && self.g == other.g
    }
}

pub(crate) fn parse_lambda(s: &str, line: usize) -> Result<u32> {
    let v = codec::parse_u64(s, line)?;
    if !(u64::from(MIN_LAMBDA)..=u64::from(MAX_LAMBDA)).contains(&v) {
        return Err(Error::parse(line, format!("lambda {v} out of range")));
    }
    Ok(v as u32)
}

/// p prime, p > 3, p ≡ 2 (mod 3), q prime, q > 3, q | p² − p + 1, and the
/// bit lengths fit λ.
pub(crate) fn check_primes(lambda: u32, p: &BigUint, q: &BigUint) -> Result<()> {
    if !(MIN_LAMBDA..=MAX_LAMBDA).contains(&lambda) {
        return Err(Error::param(format!(
            "lambda must lie in [{MIN_LAMBDA}, {MAX_LAMBDA}]"
        )));
    }
    if p.bits() != u64::from(lambda) || q.bits() > u64::from(lambda) {
        return Err(Error::param("p must have exactly lambda bits and q at most lambda"));
    }
    if *p <= BigUint::from(3u8) || (p % 3u32) != BigUint::from(2u8) || !arith::is_prime(p) {
        return Err(Error::param("p must be a prime > 3 with p = 2 mod 3"));
    }
    if *q <= BigUint::from(3u8) || !arith::is_prime(q) {
        return Err(Error::param("q must be a prime > 3"));
    }
    if !arith::divides(q, &(p * p - p + 1u32)) {
        return Err(Error::param("q does not divide p^2 - p + 1"));
    }
    Ok(())
}

/// Random parameters with λ-bit p.
///
/// Small λ factors p² − p + 1 directly; larger λ starts from a prime
/// q ≡ 1 (mod 3), solves r² − r + 1 ≡ 0 (mod q) and searches p ≡ r (mod q).
pub fn generate_params<R: RngCore + ?Sized>(lambda: u32, rng: &mut R) -> Result<XtrParams> {
    if lambda < MIN_LAMBDA {
        return Err(Error::param(format!("lambda must be at least {MIN_LAMBDA}")));
    }
    if lambda > MAX_LAMBDA {
        return Err(Error::param(format!("lambda must be at most {MAX_LAMBDA}")));
    }
    let (p, q) = if lambda <= SMALL_LAMBDA {
        small_primes(lambda, rng)?
    } else {
        large_primes(lambda, rng)?
    };
    XtrParams::from_primes(lambda, p, q, rng)
}

fn small_primes<R: RngCore + ?Sized>(lambda: u32, rng: &mut R) -> Result<(BigUint, BigUint)> {
    for _ in 0..PRIME_SEARCH_ATTEMPTS {
        let p = arith::random_bits(rng, u64::from(lambda)).to_u64().expect("small lambda");
        if p % 3 != 2 || !arith::is_prime_trial(p) {
            continue;
        }
        let n = p * p - p + 1;
        if let Some(&q) = arith::prime_factors(n)
            .iter()
            .filter(|&&f| f > 3 && 64 - f.leading_zeros() <= lambda)
            .max() {
            return Ok((BigUint::from(p), BigUint::from(q)));
        }
    }
    Err(Error::GenerationFailed("no suitable small prime p".into()))
}

fn large_primes<R: RngCore + ?Sized>(lambda: u32, rng: &mut R) -> Result<(BigUint, BigUint)> {
    let bits = u64::from(lambda);
    let minus_three = |q: &BigUint| q - 3u32;
    for _ in 0..PRIME_SEARCH_ATTEMPTS {
        let mut q = arith::random_bits(rng, bits);
        q.set_bit(0, true);
        if (&q % 3u32) != BigUint::one() || !arith::is_prime(&q) {
            continue;
        }
        let Some(s) = arith::sqrt_mod(&minus_three(&q), &q) else {
            continue;
        };
        let inv2 = (&q + 1u32) >> 1;
        let r1 = ((BigUint::one() + &s) * &inv2) % &q;
        let r2 = ((BigUint::one() + &q - &s) * &inv2) % &q;
        for r in [r1, r2] {
            for t in 0u32..4 {
                let p: BigUint = &r + &q * BigUint::from(t);
                if p.bits() != bits || (&p % 3u32) != BigUint::from(2u8) {
                    continue;
                }
                if arith::is_prime(&p) {
                    return Ok((p, q));
                }
            }
        }
    }
    Err(Error::GenerationFailed("prime search exhausted".into()))
}

/// Samples c until F(c,X) is irreducible, projects θ into the order-q
/// subgroup and re-expresses the result over its own minimal polynomial.
fn find_generator<R: RngCore + ?Sized>(
    lambda: u32,
    p: Modulus,
    q: Modulus,
    rng: &mut R,
) -> Result<XtrParams> {
    let order = p.value() * p.value() - p.value() + 1u32;
    let cofactor = &order / q.value();
    for _ in 0..GENERATOR_ATTEMPTS {
        let c = random_gfp2(&p, rng);
        let Ok(field) = SexticField::new(c) else {
            continue;
        };
        let h = Gfp6::theta(&field).pow(&cofactor);
        if h.is_one() || !h.pow(q.value()).is_one() {
            continue;
        }
        let c = h.trace()?;
        let field = SexticField::new(c)?;
        let g = Gfp6::theta(&field);
        return XtrParams::assemble(lambda, p, q, field, g);
    }
    Err(Error::GenerationFailed("no generator found".into()))
}

pub(crate) fn random_gfp2<R: RngCore + ?Sized>(p: &Modulus, rng: &mut R) -> Gfp2 {
    let zero = BigUint::zero();
    let z1 = arith::random_range(rng, &zero, p.value());
    let z2 = arith::random_range(rng, &zero, p.value());
    Gfp2::new(z1, z2, p)
}

/// Uniform element of GF(q)*.
pub fn random_nonzero<R: RngCore + ?Sized>(q: &Modulus, rng: &mut R) -> Gfp {
    Gfp::new(
        arith::random_range(rng, &BigUint::one(), q.value()),
        q,
    )
}

/// c_n = Tr(g^n) from c = Tr(g) alone.
///
/// Double-and-add over the triple (c_{k−1}, c_k, c_{k+1}) with
///   c_{2k}   = c_k² − 2c_k^p
///   c_{2k−1} = c_{k−1}c_k − c^p c_k^p + c_{k+1}^p
///   c_{2k+1} = c_k c_{k+1} − c c_k^p + c_{k−1}^p
pub fn trace_ladder(c: &Gfp2, n: &BigUint) -> Gfp2 {
    let p = c.modulus();
    if n.is_zero() {
        return Gfp2::from_u64(3, p);
    }
    let c_p = c.frobenius();
    let mut prev = Gfp2::from_u64(3, p);
    let mut cur = c.clone();
    let mut next = double(c);
    for i in (0..n.bits() - 1).rev() {
        let cur_p = cur.frobenius();
        let odd_hi = &(&cur * &next) - &(c * &cur_p) + prev.frobenius();
        if n.bit(i) {
            let even_lo = double(&cur);
            let even_hi = double(&next);
            (prev, cur, next) = (even_lo, odd_hi, even_hi);
        } else {
            let odd_lo = &(&prev * &cur) - &(&c_p * &cur_p) + next.frobenius();
            let even = double(&cur);
            (prev, cur, next) = (odd_lo, even, odd_hi);
        }
    }
    cur
}

/// c_{2k} from c_k.
fn double(x: &Gfp2) -> Gfp2 {
    let xp = x.frobenius();
    &(&x.square() - &xp) - &xp
}

/// A participant's long-term key: private x ∈ (1, q), public y = Tr(g^x).
#[derive(Clone, PartialEq, Eq)]
pub struct XtrKeypair {
    x: BigUint,
    y: Gfp2,
}

impl XtrKeypair {
    pub fn from_private(params: &XtrParams, x: BigUint) -> Result<XtrKeypair> {
        if x <= BigUint::one() || &x >= params.q().value() {
            return Err(Error::param("private key must satisfy 1 < x < q"));
        }
        let y = trace_ladder(params.c(), &x);
        Ok(XtrKeypair { x, y })
    }

    pub fn private(&self) -> &BigUint {
        &self.x
    }

    pub fn public(&self) -> &Gfp2 {
        &self.y
    }
}

impl fmt::Debug for XtrKeypair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XtrKeypair(y={})", self.y)
    }
}

pub fn keygen<R: RngCore + ?Sized>(params: &XtrParams, rng: &mut R) -> XtrKeypair {
    let x = arith::random_range(rng, &BigUint::from(2u8), params.q().value());
    XtrKeypair::from_private(params, x).expect("sampled inside (1, q)")
}

/// (z1 + z2·p) mod q: injective on GF(p²) before the reduction.
pub fn encode_to_zq(t: &Gfp2, q: &Modulus) -> Gfp {
    let (z1, z2) = t.coords();
    Gfp::new(z1 + z2 * t.modulus().value(), q)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScalarCiphertext {
    /// Tr(g^b).
    pub header: Gfp2,
    /// κ·u mod q with κ = encode(Tr(g^{bx})).
    pub body: Gfp,
}

/// κ = encode(Tr(g^{b·x})) computed from either Tr(g^x) and b or
/// Tr(g^b) and x.
pub(crate) fn blinding(params: &XtrParams, trace: &Gfp2, exponent: &BigUint) -> Gfp {
    encode_to_zq(&trace_ladder(trace, exponent), params.q())
}

pub(crate) fn check_blinding_exponent(params: &XtrParams, b: &BigUint) -> Result<()> {
    let q = params.q().value();
    if *b <= BigUint::one() || b + 2u32 >= *q {
        return Err(Error::param("blinding exponent must satisfy 1 < b < q - 2"));
    }
    Ok(())
}

pub fn encrypt_scalar(
    params: &XtrParams,
    y: &Gfp2,
    b: &BigUint,
    u: &Gfp,
) -> Result<ScalarCiphertext> {
    check_blinding_exponent(params, b)?;
    let kappa = blinding(params, y, b);
    if kappa.is_zero() {
        return Err(Error::BlindingDegenerate);
    }
    Ok(ScalarCiphertext {
        header: trace_ladder(params.c(), b),
        body: kappa.try_mul(u)?,
    })
}

pub fn decrypt_scalar(params: &XtrParams, ct: &ScalarCiphertext, x: &BigUint) -> Result<Gfp> {
    if *x <= BigUint::one() || x >= params.q().value() {
        return Err(Error::param("private key must satisfy 1 < x < q"));
    }
    let kappa = blinding(params, &ct.header, x);
    let inv = kappa.inv().map_err(|_| Error::CorruptCiphertext)?;
    ct.body.try_mul(&inv)
}

/// t ≠ 0 and t^q = 1.
pub fn subgroup_check(params: &XtrParams, t: &Gfp6) -> bool {
    t.field().c() == params.c() && !t.is_zero() && t.pow(params.q().value()).is_one()
}

/// y is the trace of a nonidentity element of the order-q subgroup:
/// y lies outside GF(p) and S_q(y) = 3.
pub fn public_shadow_check(params: &XtrParams, y: &Gfp2) -> bool {
    y.modulus() == params.p()
        && y.to_base().is_none()
        && trace_ladder(y, params.q().value()) == Gfp2::from_u64(3, params.p())
}

pub(crate) fn require_public_shadow(params: &XtrParams, y: &Gfp2) -> Result<()> {
    if public_shadow_check(params, y) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "public shadow {} is not the trace of an order-q element",
            y.to_canonical()
        )))
    }
}
