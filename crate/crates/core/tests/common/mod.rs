#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use xtr_vmss::xtr::{generate_params, XtrParams};

pub fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

/// p = 23, q = 13.
pub fn toy() -> XtrParams {
    XtrParams::from_primes(5, 23u32.into(), 13u32.into(), &mut rng(23)).unwrap()
}

pub fn lambda32() -> XtrParams {
    generate_params(32, &mut rng(32)).unwrap()
}
