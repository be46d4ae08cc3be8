//! Verifiable multi-secret sharing over XTR commitments.
//!
//! Participant `i` holds subshadow u_{i−1} of a binomial recursion, published
//! encrypted (E_i) and committed (T_i = g^{u_{i−1}}). Secret `j` is masked as
//! z_j = S_j − u_{m+j−1}; the two terms after the masks are public.

mod bulletin;
mod deal;
mod dynamic;
mod files;
mod recover;
mod registry;
mod verify;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::nlr::{self, Variant};
use crate::xtr::XtrParams;

pub use bulletin::{Bulletin, Mask, PublishedShare, BULLETIN_HEADER};
pub use deal::{change_threshold, deal, redeal, DealerState};
pub use dynamic::{add_participant, add_secret, remove_participant, remove_secret};
pub use files::{KeyFile, RecoveryShare};
pub use recover::{recover, Secret, Way};
pub use registry::{register, Registry, RegistryEntry};
pub use verify::{
    extract_subshadow, verify_consistency, verify_own, verify_participant, Check, CheckKind,
};

/// Scheme 1 runs on NLR1, Scheme 2 on NLR2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Scheme {
    Scheme1,
    Scheme2,
}

impl Scheme {
    pub fn variant(self) -> Variant {
        match self {
            Scheme::Scheme1 => Variant::Nlr1,
            Scheme::Scheme2 => Variant::Nlr2,
        }
    }

    pub fn number(self) -> u8 {
        match self {
            Scheme::Scheme1 => 1,
            Scheme::Scheme2 => 2,
        }
    }

    pub const ALL: [Scheme; 2] = [Scheme::Scheme1, Scheme::Scheme2];
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Scheme> {
        match s {
            "1" => Ok(Scheme::Scheme1),
            "2" => Ok(Scheme::Scheme2),
            _ => Err(Error::param(format!("scheme must be 1 or 2, got {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SchemeConfig {
    pub scheme: Scheme,
    pub k: usize,
    pub m: usize,
    pub l: usize,
}

impl SchemeConfig {
    pub fn new(scheme: Scheme, k: usize, m: usize, l: usize) -> Result<SchemeConfig> {
        if k == 0 || k > m {
            return Err(Error::param(format!("threshold must satisfy 1 <= k <= m, got k={k}, m={m}")));
        }
        if l == 0 {
            return Err(Error::param("at least one secret is required"));
        }
        Ok(SchemeConfig { scheme, k, m, l })
    }

    /// Checks the constraints that depend on q.
    pub fn check_params(&self, params: &XtrParams) -> Result<()> {
        nlr::check_binomial_bound(self.k, params.q())?;
        check_index_fits(params, (self.m + self.l + 1) as u64)
    }

    /// 3m + l + 9.
    pub fn public_item_count(&self) -> usize {
        3 * self.m + self.l + 9
    }
}

/// Largest sequence index any bulletin or dealer state may use. Keeps
/// regenerating the sequence from a parsed file cheap.
pub const MAX_SEQUENCE_INDEX: u64 = 1 << 16;

/// Sequence indices must stay distinct modulo q for interpolation.
pub(crate) fn check_index_fits(params: &XtrParams, index: u64) -> Result<()> {
    if index > MAX_SEQUENCE_INDEX {
        return Err(Error::ConstraintViolation(format!(
            "sequence index {index} exceeds {MAX_SEQUENCE_INDEX}"
        )));
    }
    if num_bigint::BigUint::from(index) >= *params.q().value() {
        return Err(Error::ConstraintViolation(format!(
            "sequence index {index} is not below q = {}",
            params.q().value()
        )));
    }
    Ok(())
}
