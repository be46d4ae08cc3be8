use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;

use crate::error::{Error, Result};
use crate::gf::{Gfp, Gfp6};
use crate::nlr;
use crate::xtr::{self, ScalarCiphertext};

use super::bulletin::Bulletin;

/// u_{i−1} = E_i · κ⁻¹ with κ recomputed from Tr(g^b) and x.
pub fn extract_subshadow(bulletin: &Bulletin, index: u64, x: &BigUint) -> Result<Gfp> {
    let share = bulletin
        .share(index)
        .ok_or_else(|| Error::param(format!("no participant at index {index}")))?;
    let ct = ScalarCiphertext {
        header: bulletin.header.clone(),
        body: share.e.clone(),
    };
    xtr::decrypt_scalar(&bulletin.params, &ct, x)
}

/// T_index = g^u.
pub fn verify_own(bulletin: &Bulletin, index: u64, u: &Gfp) -> bool {
    bulletin
        .share(index)
        .is_some_and(|s| u.modulus() == bulletin.params.q() && bulletin.params.commit(u) == s.t)
}

/// Every recurrence instance i whose commitments T_{i+1}..T_{i+k+1} are all
/// published, checked in the exponent:
///   Π_j T_{i+1+k−j}^{w_j} = g^{rhs(i)}
/// Each T must lie in the order-q subgroup before exponents are reduced.
pub fn verify_consistency(bulletin: &Bulletin) -> Result<Vec<(u64, bool)>> {
    let params = &bulletin.params;
    for s in &bulletin.shares {
        if !xtr::subgroup_check(params, &s.t) {
            return Err(Error::MalformedBulletin {
                index: s.index,
                reason: "commitment outside the order-q subgroup".into(),
            });
        }
    }
    let k = bulletin.k;
    let variant = bulletin.scheme.variant();
    let weights: Vec<BigUint> = nlr::recurrence_weights(variant, k, params.q())?
        .into_iter()
        .map(Gfp::into_value)
        .collect();
    // sequence index → commitment
    let by_seq: BTreeMap<u64, &Gfp6> = bulletin.shares.iter().map(|s| (s.index - 1, &s.t)).collect();
    let mut out = Vec::new();
    let Some(&last) = by_seq.keys().next_back() else {
        return Ok(out);
    };
    for i in 0..=last.saturating_sub(k as u64) {
        let terms: Option<Vec<&Gfp6>> = (i..=i + k as u64).map(|n| by_seq.get(&n).copied()).collect();
        let Some(terms) = terms else {
            continue;
        };
        let mut lhs = Gfp6::one(params.field());
        for (j, w) in weights.iter().enumerate() {
            lhs = &lhs * &terms[k - j].pow(w);
        }
        let rhs = params.commit(&nlr::rhs(variant, &bulletin.c, i));
        out.push((i, lhs == rhs));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum CheckKind {
    /// T_i against the participant's decrypted subshadow.
    Own,
    /// A recurrence instance over the commitments.
    Instance,
    /// Subgroup membership of a commitment.
    Subgroup,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub kind: CheckKind,
    pub index: u64,
    pub passed: bool,
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            CheckKind::Own => "own",
            CheckKind::Instance => "instance",
            CheckKind::Subgroup => "subgroup",
        };
        let verdict = if self.passed { "ok" } else { "FAIL" };
        write!(f, "{kind} {} {verdict}", self.index)
    }
}

/// Everything participant `index` can check with private key `x`.
pub fn verify_participant(bulletin: &Bulletin, index: u64, x: &BigUint) -> Result<Vec<Check>> {
    if bulletin.share(index).is_none() {
        return Err(Error::param(format!("no participant at index {index}")));
    }
    let own = match extract_subshadow(bulletin, index, x) {
        Ok(u) => verify_own(bulletin, index, &u),
        Err(Error::CorruptCiphertext) => false,
        Err(e) => return Err(e),
    };
    let mut checks = vec![Check {
        kind: CheckKind::Own,
        index,
        passed: own,
    }];
    match verify_consistency(bulletin) {
        Ok(instances) => checks.extend(instances.into_iter().map(|(i, passed)| Check {
            kind: CheckKind::Instance,
            index: i,
            passed,
        })),
        Err(Error::MalformedBulletin { .. }) => {
            for s in &bulletin.shares {
                if !xtr::subgroup_check(&bulletin.params, &s.t) {
                    checks.push(Check {
                        kind: CheckKind::Subgroup,
                        index: s.index,
                        passed: false,
                    });
                }
            }
        }
        Err(e) => return Err(e),
    }
    Ok(checks)
}
