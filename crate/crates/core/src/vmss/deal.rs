use num_bigint::BigUint;
use rand::RngCore;

use crate::arith;
use crate::codec::{self, KvReader};
use crate::error::{Error, Result};
use crate::gf::Gfp;
use crate::nlr::{self, NlrSpec, SubshadowSequence};
use crate::xtr::{self, XtrParams};

use super::bulletin::{Bulletin, Mask, PublishedShare};
use super::registry::Registry;
use super::{check_index_fits, Scheme, SchemeConfig, Secret, MAX_SEQUENCE_INDEX};

/// Fresh draws of b before giving up on a key set whose blinding factor
/// keeps vanishing.
const BLINDING_ATTEMPTS: usize = 64;

pub const DEALER_STATE_HEADER: &str = "xtr-vmss dealer-state v1";

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct HeldSecret {
    pub slot: usize,
    pub index: u64,
    pub value: Gfp,
}

/// The dealer's private bookkeeping, needed for later dynamic operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DealerState {
    pub(crate) b: BigUint,
    pub(crate) sequence: SubshadowSequence,
    pub(crate) secrets: Vec<HeldSecret>,
    /// First sequence index not yet handed out.
    pub(crate) next_index: u64,
    pub(crate) next_slot: usize,
}

impl DealerState {
    pub fn b(&self) -> &BigUint {
        &self.b
    }

    pub fn sequence(&self) -> &SubshadowSequence {
        &self.sequence
    }

    pub fn spec(&self) -> &NlrSpec {
        self.sequence.spec()
    }

    pub fn secrets(&self) -> Vec<Secret> {
        self.secrets
            .iter()
            .map(|s| Secret {
                slot: s.slot,
                value: s.value.clone(),
            })
            .collect()
    }

    pub fn next_index(&self) -> u64 {
        self.next_index
    }

    pub(crate) fn term(&mut self, index: u64) -> Gfp {
        self.sequence.extend_to(index);
        self.sequence.get(index).expect("extended").clone()
    }

    pub fn to_text(&self) -> String {
        let spec = self.spec();
        let scheme = match spec.variant() {
            nlr::Variant::Nlr1 => Scheme::Scheme1,
            nlr::Variant::Nlr2 => Scheme::Scheme2,
        };
        let init: Vec<String> = spec.init().iter().map(|v| v.value().to_string()).collect();
        let mut s = format!(
            "{DEALER_STATE_HEADER}\nq={}\nscheme={scheme}\nthreshold={}\nb={}\nc={}\ninit={}\n",
            spec.modulus().value(),
            spec.k(),
            self.b,
            spec.c().value(),
            init.join(" ")
        );
        for h in &self.secrets {
            s.push_str(&format!("secret={} {} {}\n", h.slot, h.index, h.value.value()));
        }
        s.push_str(&format!(
            "next_index={}\nnext_slot={}\n",
            self.next_index, self.next_slot
        ));
        s
    }

    pub fn parse(text: &str, params: &XtrParams) -> Result<DealerState> {
        let q = params.q();
        let mut r = KvReader::new(codec::lines(text)?);
        r.expect_line(DEALER_STATE_HEADER)?;
        let (n, v) = r.expect("q")?;
        if &codec::parse_uint(v, n)? != q.value() {
            return Err(Error::parse(n, "dealer state belongs to a different q"));
        }
        let (n, v) = r.expect("scheme")?;
        let scheme: Scheme = v.parse().map_err(|e: Error| Error::parse(n, e.to_string()))?;
        let (n, v) = r.expect("threshold")?;
        let k = codec::parse_u64(v, n)? as usize;
        let (n, v) = r.expect("b")?;
        let b = codec::parse_uint(v, n)?;
        xtr::check_blinding_exponent(params, &b).map_err(|e| Error::parse(n, e.to_string()))?;
        let (cn, v) = r.expect("c")?;
        let c = Gfp::parse_canonical(v, q, cn)?;
        let (n, v) = r.expect("init")?;
        if k == 0 || k > codec::MAX_LINES {
            return Err(Error::parse(n, "threshold out of range"));
        }
        let init = codec::fields(n, v, k)?
            .into_iter()
            .map(|s| Gfp::parse_canonical(s, q, n))
            .collect::<Result<Vec<_>>>()?;
        if init.iter().any(Gfp::is_zero) {
            return Err(Error::parse(n, "initial values must be nonzero"));
        }
        let spec = NlrSpec::new(scheme.variant(), k, c, init)
            .map_err(|e| Error::parse(cn, e.to_string()))?;
        let mut secrets: Vec<HeldSecret> = Vec::new();
        while r.peek_key() == Some("secret") {
            let (n, v) = r.expect("secret")?;
            let f = codec::fields(n, v, 3)?;
            let slot = codec::parse_u64(f[0], n)? as usize;
            let index = codec::parse_u64(f[1], n)?;
            let value = Gfp::parse_canonical(f[2], q, n)?;
            if slot == 0 || secrets.last().is_some_and(|h| h.slot >= slot) {
                return Err(Error::parse(n, "secret slots must be positive and increasing"));
            }
            if value.is_zero() {
                return Err(Error::parse(n, "secrets must be nonzero"));
            }
            secrets.push(HeldSecret { slot, index, value });
        }
        let (n, v) = r.expect("next_index")?;
        let next_index = codec::parse_u64(v, n)?;
        if next_index < k as u64 || next_index > MAX_SEQUENCE_INDEX || BigUint::from(next_index) > *q.value() {
            return Err(Error::parse(n, "next_index out of range"));
        }
        if secrets.iter().any(|h| h.index >= next_index) {
            return Err(Error::parse(n, "secret index beyond next_index"));
        }
        let (n, v) = r.expect("next_slot")?;
        let next_slot = codec::parse_u64(v, n)? as usize;
        if secrets.last().is_some_and(|h| h.slot >= next_slot) || next_slot == 0 {
            return Err(Error::parse(n, "next_slot out of range"));
        }
        r.finish()?;
        let sequence = nlr::generate(&spec, next_index - 1)?;
        Ok(DealerState {
            b,
            sequence,
            secrets,
            next_index,
            next_slot,
        })
    }
}

/// Splits `secrets` among the registered participants.
pub fn deal<R: RngCore + ?Sized>(
    params: &XtrParams,
    config: &SchemeConfig,
    registry: &Registry,
    secrets: &[Gfp],
    rng: &mut R,
) -> Result<(Bulletin, DealerState)> {
    config.check_params(params)?;
    let (m, l, k) = (config.m, config.l, config.k);
    if registry.len() != m {
        return Err(Error::param(format!(
            "registry holds {} participants, expected {m}",
            registry.len()
        )));
    }
    if registry
        .entries()
        .iter()
        .enumerate()
        .any(|(i, e)| e.index != i as u64 + 1)
    {
        return Err(Error::param("registry must be indexed 1..m before dealing"));
    }
    for e in registry.entries() {
        xtr::require_public_shadow(params, &e.y)?;
    }
    if secrets.len() != l {
        return Err(Error::param(format!("expected {l} secrets, got {}", secrets.len())));
    }
    let q = params.q();
    for s in secrets {
        if s.modulus() != q {
            return Err(Error::ModulusMismatch("secret"));
        }
        if s.is_zero() {
            return Err(Error::Domain("secrets must be nonzero".into()));
        }
    }

    let c = xtr::random_nonzero(q, rng);
    let init = (0..k).map(|_| xtr::random_nonzero(q, rng)).collect();
    let spec = NlrSpec::new(config.scheme.variant(), k, c.clone(), init)?;
    let last = (m + l + 1) as u64;
    let sequence = nlr::generate(&spec, last)?;

    let (b, kappas) = draw_blinding(params, registry, rng)?;
    let shares = registry
        .entries()
        .iter()
        .zip(kappas)
        .map(|(e, kappa)| {
            let u = sequence.get(e.index - 1).expect("generated");
            PublishedShare {
                index: e.index,
                e: &kappa * u,
                t: params.commit(u),
            }
        })
        .collect();
    let mut held = Vec::with_capacity(l);
    let mut masks = Vec::with_capacity(l);
    for (j, s) in secrets.iter().enumerate() {
        let index = (m + j) as u64;
        let u = sequence.get(index).expect("generated");
        masks.push(Mask {
            slot: j + 1,
            index,
            z: s - u,
        });
        held.push(HeldSecret {
            slot: j + 1,
            index,
            value: s.clone(),
        });
    }
    let tail = [
        (last - 1, sequence.get(last - 1).unwrap().clone()),
        (last, sequence.get(last).unwrap().clone()),
    ];
    let bulletin = Bulletin {
        params: params.clone(),
        header: xtr::trace_ladder(params.c(), &b),
        scheme: config.scheme,
        k,
        registry: registry.clone(),
        shares,
        masks,
        c,
        tail,
    };
    let state = DealerState {
        b,
        sequence,
        secrets: held,
        next_index: last + 1,
        next_slot: l + 1,
    };
    Ok((bulletin, state))
}

/// One b with κ_i ≠ 0 for every registered shadow.
fn draw_blinding<R: RngCore + ?Sized>(
    params: &XtrParams,
    registry: &Registry,
    rng: &mut R,
) -> Result<(BigUint, Vec<Gfp>)> {
    let q = params.q().value();
    let lo = BigUint::from(2u8);
    let hi = q - 2u32;
    if hi <= lo {
        return Err(Error::ConstraintViolation("q leaves no blinding exponent".into()));
    }
    'draw: for _ in 0..BLINDING_ATTEMPTS {
        let b = arith::random_range(rng, &lo, &hi);
        let mut kappas = Vec::with_capacity(registry.len());
        for e in registry.entries() {
            let kappa = xtr::blinding(params, &e.y, &b);
            if kappa.is_zero() {
                continue 'draw;
            }
            kappas.push(kappa);
        }
        return Ok((b, kappas));
    }
    Err(Error::BlindingDegenerate)
}

/// Deals the same secrets afresh with threshold `new_k`.
pub fn change_threshold<R: RngCore + ?Sized>(
    params: &XtrParams,
    config: &SchemeConfig,
    registry: &Registry,
    secrets: &[Gfp],
    new_k: usize,
    rng: &mut R,
) -> Result<(Bulletin, DealerState)> {
    let config = SchemeConfig::new(config.scheme, new_k, registry.len(), secrets.len())?;
    deal(params, &config, &registry.reindexed(), secrets, rng)
}

/// [`change_threshold`] driven by a live bulletin and the dealer state: the
/// current registry and the secrets still published.
pub fn redeal<R: RngCore + ?Sized>(
    bulletin: &Bulletin,
    state: &DealerState,
    new_k: usize,
    rng: &mut R,
) -> Result<(Bulletin, DealerState)> {
    let secrets: Vec<Gfp> = state
        .secrets
        .iter()
        .filter(|h| bulletin.masks.iter().any(|mk| mk.slot == h.slot))
        .map(|h| h.value.clone())
        .collect();
    let config = SchemeConfig::new(bulletin.scheme, new_k, bulletin.m(), secrets.len())?;
    change_threshold(
        &bulletin.params,
        &config,
        &bulletin.registry,
        &secrets,
        new_k,
        rng,
    )
}

pub(crate) fn check_fresh_index(params: &XtrParams, state: &DealerState) -> Result<u64> {
    check_index_fits(params, state.next_index)?;
    Ok(state.next_index)
}
