//! Integer helpers: primality, modular square roots, uniform sampling.

use num_bigint::{BigUint, RandBigInt};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Numbers of at most this many bits are tested by trial division.
const TRIAL_DIVISION_BITS: u64 = 24;

/// Miller-Rabin rounds for larger inputs; error below 4^-64 = 2^-128.
const MILLER_RABIN_ROUNDS: usize = 64;

const SMALL_PRIMES: [u32; 24] = [
    2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89,
];

/// Deterministic for n < 2^24, probabilistic (error < 2^-128) above.
pub fn is_prime(n: &BigUint) -> bool {
    if n.bits() <= TRIAL_DIVISION_BITS {
        return is_prime_trial(n.to_u64().expect("fits in 24 bits"));
    }
    for sp in SMALL_PRIMES {
        if (n % sp).is_zero() {
            return false;
        }
    }
    miller_rabin(n, MILLER_RABIN_ROUNDS)
}

pub(crate) fn is_prime_trial(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n < 4 {
        return true;
    }
    if n.is_multiple_of(2) {
        return false;
    }
    let mut d = 3;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

fn miller_rabin(n: &BigUint, rounds: usize) -> bool {
    let one = BigUint::one();
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    // Witnesses come from a fixed stream so verdicts are reproducible.
    let mut rng = ChaCha20Rng::seed_from_u64(0x6d69_6c6c_6572);
    let two = BigUint::from(2u8);
    'witness: for _ in 0..rounds {
        let a = rng.gen_biguint_range(&two, &n_minus_1);
        let mut x = a.modpow(&d, n);
        if x == one || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Uniform integer in [lo, hi).
pub fn random_range<R: RngCore + ?Sized>(rng: &mut R, lo: &BigUint, hi: &BigUint) -> BigUint {
    let mut rng = RngAdapter(rng);
    rng.gen_biguint_range(lo, hi)
}

/// Uniform integer with exactly `bits` bits.
pub(crate) fn random_bits<R: RngCore + ?Sized>(rng: &mut R, bits: u64) -> BigUint {
    let mut rng = RngAdapter(rng);
    let mut n = rng.gen_biguint(bits);
    n.set_bit(bits - 1, true);
    n
}

/// Lets `?Sized` rngs (e.g. `&mut dyn RngCore`) use `RandBigInt`.
struct RngAdapter<'a, R: RngCore + ?Sized>(&'a mut R);

impl<R: RngCore + ?Sized> RngCore for RngAdapter<'_, R> {
    fn next_u32(&mut self) -> u32 {
        self.0.next_u32()
    }
    fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }
    fn fill_bytes(&mut self, dest: &mut [u8]) {
        self.0.fill_bytes(dest)
    }
    fn try_fill_bytes(&mut self, dest: &mut [u8]) -> Result<(), rand::Error> {
        self.0.try_fill_bytes(dest)
    }
}

/// Square root of `a` modulo an odd prime `q` (Tonelli-Shanks).
pub fn sqrt_mod(a: &BigUint, q: &BigUint) -> Option<BigUint> {
    let a = a % q;
    if a.is_zero() {
        return Some(a);
    }
    let one = BigUint::one();
    let q_minus_1 = q - 1u32;
    let half = &q_minus_1 >> 1;
    if a.modpow(&half, q) != one {
        return None;
    }
    let s = q_minus_1.trailing_zeros().unwrap_or(0);
    let odd = &q_minus_1 >> s;
    let mut z = BigUint::from(2u8);
    while z.modpow(&half, q) != q_minus_1 {
        z += 1u32;
    }
    let mut m = s;
    let mut c = z.modpow(&odd, q);
    let mut t = a.modpow(&odd, q);
    let mut r = a.modpow(&((&odd + 1u32) >> 1), q);
    while t != one {
        let mut i = 0;
        let mut t2 = t.clone();
        while t2 != one {
            t2 = (&t2 * &t2) % q;
            i += 1;
        }
        let b = c.modpow(&(BigUint::one() << (m - i - 1)), q);
        m = i;
        c = (&b * &b) % q;
        t = (&t * &c) % q;
        r = (&r * &b) % q;
    }
    Some(r)
}

/// Prime factors of `n` by trial division, ascending, without multiplicity.
pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// gcd helper for callers holding `BigUint`s.
pub(crate) fn divides(d: &BigUint, n: &BigUint) -> bool {
    !d.is_zero() && n.is_multiple_of(d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primality_matches_trial_division() {
        for n in 0u64..5000 {
            assert_eq!(is_prime(&BigUint::from(n)), is_prime_trial(n), "n = {n}");
        }
        // Above the trial-division cutoff.
        for n in (1u64 << 25)..(1u64 << 25) + 2000 {
            assert_eq!(is_prime(&BigUint::from(n)), is_prime_trial(n), "n = {n}");
        }
    }

    #[test]
    fn known_large_primes() {
        let m127 = (BigUint::one() << 127) - 1u32;
        assert!(is_prime(&m127));
        assert!(!is_prime(&(&m127 * &m127)));
        // Carmichael number.
        assert!(!is_prime(&BigUint::from(3_215_031_751u64)));
    }

    #[test]
    fn square_roots() {
        for q in [13u64, 17, 10007, 65537] {
            let qb = BigUint::from(q);
            for a in 1..200u64 {
                let ab = BigUint::from(a % q);
                match sqrt_mod(&ab, &qb) {
                    Some(r) => assert_eq!((&r * &r) % &qb, ab),
                    None => assert!((1..q).all(|x| (x * x) % q != a % q)),
                }
            }
        }
    }

    #[test]
    fn factoring() {
        assert_eq!(prime_factors(507), vec![3, 13]);
        assert_eq!(prime_factors(273), vec![3, 7, 13]);
        assert_eq!(prime_factors(97), vec![97]);
    }

    #[test]
    fn sampling_ranges() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let lo = BigUint::from(2u8);
        let hi = BigUint::from(5u8);
        for _ in 0..100 {
            let v = random_range(&mut rng, &lo, &hi);
            assert!(v >= lo && v < hi);
            assert_eq!(random_bits(&mut rng, 17).bits(), 17);
        }
    }
}
