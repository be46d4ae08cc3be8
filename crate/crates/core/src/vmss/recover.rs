use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gf::Gfp;
use crate::nlr;

use super::bulletin::Bulletin;
use super::files::RecoveryShare;
use super::verify::verify_own;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Way {
    /// k shares plus the two public tail terms, interpolated.
    Interpolation,
    /// k shares at consecutive indices, run forward through the recursion.
    Consecutive,
}

impl fmt::Display for Way {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Way::Interpolation => "lagrange",
            Way::Consecutive => "consecutive",
        })
    }
}

impl FromStr for Way {
    type Err = Error;

    fn from_str(s: &str) -> Result<Way> {
        match s {
            "lagrange" | "interpolation" => Ok(Way::Interpolation),
            "consecutive" => Ok(Way::Consecutive),
            _ => Err(Error::param(format!("unknown recovery way {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Secret {
    pub slot: usize,
    pub value: Gfp,
}

/// Shares whose id is not registered at the claimed index, or whose value
/// does not open T_index. Returns the deduplicated valid shares sorted by
/// index, or every offending id.
fn cross_verify<'a>(bulletin: &Bulletin, shares: &'a [RecoveryShare]) -> Result<Vec<&'a RecoveryShare>> {
    let mut offenders: Vec<String> = Vec::new();
    let mut good: Vec<&RecoveryShare> = Vec::new();
    for s in shares {
        let placed = bulletin
            .registry
            .by_index(s.index)
            .is_some_and(|e| e.id == s.id);
        if !placed || !verify_own(bulletin, s.index, &s.u) {
            if !offenders.contains(&s.id) {
                offenders.push(s.id.clone());
            }
            continue;
        }
        if !good.iter().any(|g| g.index == s.index) {
            good.push(s);
        }
    }
    if !offenders.is_empty() {
        return Err(Error::CheaterIdentified { ids: offenders });
    }
    good.sort_by_key(|s| s.index);
    Ok(good)
}

/// Recovers every published secret from a coalition's shares.
pub fn recover(bulletin: &Bulletin, shares: &[RecoveryShare], way: Way) -> Result<Vec<Secret>> {
    let good = cross_verify(bulletin, shares)?;
    if bulletin.masks.is_empty() {
        return Ok(Vec::new());
    }
    let k = bulletin.k;
    let q = bulletin.params.q();
    let variant = bulletin.scheme.variant();
    let terms: Vec<(u64, Gfp)> = match way {
        Way::Interpolation => {
            if good.len() < k {
                return Err(Error::InsufficientShares {
                    needed: k,
                    got: good.len(),
                });
            }
            let mut points: Vec<(u64, Gfp)> = good[..k]
                .iter()
                .map(|s| (s.index - 1, s.u.clone()))
                .collect();
            points.extend(bulletin.tail.iter().cloned());
            let poly = nlr::recover_polynomial(variant, &points, k, q)?;
            bulletin
                .masks
                .iter()
                .map(|mk| (mk.index, nlr::eval_closed_form(variant, &poly, mk.index, q)))
                .collect()
        }
        Way::Consecutive => {
            let start = consecutive_run(&good, k)?;
            let s = good[start].index - 1;
            let window: Vec<Gfp> = good[start..start + k].iter().map(|s| s.u.clone()).collect();
            if bulletin.masks.iter().any(|mk| mk.index < s) {
                return Err(Error::param(
                    "consecutive window starts after a masked term; use interpolation",
                ));
            }
            let upto = bulletin
                .masks
                .iter()
                .map(|mk| mk.index)
                .max()
                .unwrap()
                .max(s + k as u64 - 1);
            let run = nlr::extend_consecutive(variant, &window, s, &bulletin.c, k, upto)?;
            bulletin
                .masks
                .iter()
                .map(|mk| (mk.index, run[(mk.index - s) as usize].clone()))
                .collect()
        }
    };
    Ok(bulletin
        .masks
        .iter()
        .zip(terms)
        .map(|(mk, (_, u))| Secret {
            slot: mk.slot,
            value: &mk.z + &u,
        })
        .collect())
}

/// Position in `sorted` of the first run of k consecutive indices.
fn consecutive_run(sorted: &[&RecoveryShare], k: usize) -> Result<usize> {
    let mut best = 0;
    let mut run = 0;
    for (pos, s) in sorted.iter().enumerate() {
        run = if pos > 0 && sorted[pos - 1].index + 1 == s.index {
            run + 1
        } else {
            1
        };
        best = best.max(run);
        if run == k {
            return Ok(pos + 1 - k);
        }
    }
    Err(Error::InsufficientShares {
        needed: k,
        got: best,
    })
}
