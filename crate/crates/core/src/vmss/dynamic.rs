//! Membership and secret changes after the initial deal.
//!
//! New participants and new secrets take sequence indices beyond every index
//! handed out so far. Reusing u_m (the first masked term) or a published tail
//! term would give away a secret.

use crate::error::{Error, Result};
use crate::gf::{Gfp, Gfp2};
use crate::xtr;

use super::bulletin::{Bulletin, Mask, PublishedShare};
use super::deal::{check_fresh_index, DealerState, HeldSecret};

fn check_state(bulletin: &Bulletin, state: &DealerState) -> Result<()> {
    let spec = state.spec();
    if spec.k() != bulletin.k
        || spec.variant() != bulletin.scheme.variant()
        || spec.c() != &bulletin.c
        || spec.modulus() != bulletin.params.q()
    {
        return Err(Error::param("dealer state does not match the bulletin"));
    }
    Ok(())
}

/// Enrolls (id, y) at sequence index `next_index`, participant index one
/// above it. Existing E, T and z values are untouched.
pub fn add_participant(
    bulletin: &Bulletin,
    state: &DealerState,
    id: &str,
    y: &Gfp2,
) -> Result<(Bulletin, DealerState)> {
    check_state(bulletin, state)?;
    let params = &bulletin.params;
    if y.modulus() != params.p() {
        return Err(Error::ModulusMismatch("public shadow"));
    }
    xtr::require_public_shadow(params, y)?;
    let seq = check_fresh_index(params, state)?;
    let registry = bulletin.registry.insert_at(seq + 1, id, y.clone())?;
    let kappa = xtr::blinding(params, y, &state.b);
    if kappa.is_zero() {
        return Err(Error::BlindingDegenerate);
    }
    let mut state = state.clone();
    let u = state.term(seq);
    state.next_index += 1;
    let mut next = bulletin.clone();
    next.registry = registry;
    next.shares.push(PublishedShare {
        index: seq + 1,
        e: &kappa * &u,
        t: params.commit(&u),
    });
    Ok((next, state))
}

/// Drops the registry entry together with its E and T.
pub fn remove_participant(bulletin: &Bulletin, id: &str) -> Result<Bulletin> {
    let index = bulletin
        .registry
        .by_id(id)
        .ok_or_else(|| Error::Identity(format!("participant {id:?} is not registered")))?
        .index;
    let mut next = bulletin.clone();
    next.registry = bulletin.registry.remove(id)?;
    next.shares.retain(|s| s.index != index);
    Ok(next)
}

/// Masks `secret` with a fresh sequence term; the public tail stays put.
pub fn add_secret(
    bulletin: &Bulletin,
    state: &DealerState,
    secret: &Gfp,
) -> Result<(Bulletin, DealerState)> {
    check_state(bulletin, state)?;
    if secret.modulus() != bulletin.params.q() {
        return Err(Error::ModulusMismatch("secret"));
    }
    if secret.is_zero() {
        return Err(Error::Domain("secrets must be nonzero".into()));
    }
    let index = check_fresh_index(&bulletin.params, state)?;
    let mut state = state.clone();
    let u = state.term(index);
    let slot = state.next_slot;
    state.next_index += 1;
    state.next_slot += 1;
    state.secrets.push(HeldSecret {
        slot,
        index,
        value: secret.clone(),
    });
    let mut next = bulletin.clone();
    next.masks.push(Mask {
        slot,
        index,
        z: secret - &u,
    });
    Ok((next, state))
}

/// Erases z for `slot`; other slots keep their numbers.
pub fn remove_secret(bulletin: &Bulletin, slot: usize) -> Result<Bulletin> {
    let pos = bulletin
        .masks
        .iter()
        .position(|mk| mk.slot == slot)
        .ok_or_else(|| Error::param(format!("no published secret in slot {slot}")))?;
    let mut next = bulletin.clone();
    next.masks.remove(pos);
    Ok(next)
}
