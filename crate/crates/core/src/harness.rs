//! Scenario driver: honest sessions, dishonest dealers, cheating
//! participants and colluding pairs, each summarised as a [`ScenarioReport`].

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::RngCore;

use crate::error::{Error, Result};
use crate::gf::{Gfp, Gfp6};
use crate::nlr::{self, NlrSpec};
use crate::vmss::{self, Bulletin, DealerState, RecoveryShare, Registry, SchemeConfig, Way};
use crate::xtr::{self, XtrKeypair, XtrParams};

/// Key pairs drawn per participant before a shadow collision is reported.
pub const ENROLL_ATTEMPTS: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Participant {
    pub id: String,
    pub index: u64,
    pub keys: XtrKeypair,
}

/// Registers `P1`..`Pm`, redrawing a key pair whenever its public shadow is
/// already taken.
pub fn enroll<R: RngCore + ?Sized>(
    params: &XtrParams,
    m: usize,
    rng: &mut R,
) -> Result<(Registry, Vec<Participant>)> {
    let mut registry = Registry::new();
    let mut people = Vec::with_capacity(m);
    for i in 1..=m {
        let id = format!("P{i}");
        let (next, keys) = enroll_one(params, &registry, &id, rng)?;
        registry = next;
        people.push(Participant {
            index: registry.by_id(&id).unwrap().index,
            id,
            keys,
        });
    }
    Ok((registry, people))
}

fn enroll_one<R: RngCore + ?Sized>(
    params: &XtrParams,
    registry: &Registry,
    id: &str,
    rng: &mut R,
) -> Result<(Registry, XtrKeypair)> {
    for _ in 0..ENROLL_ATTEMPTS {
        let keys = xtr::keygen(params, rng);
        match vmss::register(params, registry, id, keys.public()) {
            Ok(r) => return Ok((r, keys)),
            Err(Error::ShadowCollision) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(Error::ShadowCollision)
}

/// A key pair whose shadow is free in `registry`.
pub fn fresh_keys<R: RngCore + ?Sized>(
    params: &XtrParams,
    registry: &Registry,
    rng: &mut R,
) -> Result<XtrKeypair> {
    for _ in 0..ENROLL_ATTEMPTS {
        let keys = xtr::keygen(params, rng);
        if registry.entries().iter().all(|e| &e.y != keys.public()) {
            return Ok(keys);
        }
    }
    Err(Error::ShadowCollision)
}

pub fn random_secrets<R: RngCore + ?Sized>(params: &XtrParams, l: usize, rng: &mut R) -> Vec<Gfp> {
    (0..l).map(|_| xtr::random_nonzero(params.q(), rng)).collect()
}

/// An honest deal together with everyone's keys.
#[derive(Clone, Debug)]
pub struct Session {
    pub bulletin: Bulletin,
    pub state: DealerState,
    pub participants: Vec<Participant>,
    pub secrets: Vec<Gfp>,
}

impl Session {
    pub fn new<R: RngCore + ?Sized>(params: &XtrParams, config: &SchemeConfig, rng: &mut R) -> Result<Session> {
        let (registry, participants) = enroll(params, config.m, rng)?;
        let secrets = random_secrets(params, config.l, rng);
        let (bulletin, state) = vmss::deal(params, config, &registry, &secrets, rng)?;
        Ok(Session {
            bulletin,
            state,
            participants,
            secrets,
        })
    }

    pub fn participant(&self, index: u64) -> Option<&Participant> {
        self.participants.iter().find(|p| p.index == index)
    }

    /// The share participant `index` extracts from the current bulletin.
    pub fn share(&self, index: u64) -> Result<RecoveryShare> {
        let p = self
            .participant(index)
            .ok_or_else(|| Error::param(format!("no participant at index {index}")))?;
        share_for(&self.bulletin, p)
    }
}

pub fn share_for(bulletin: &Bulletin, p: &Participant) -> Result<RecoveryShare> {
    Ok(RecoveryShare {
        id: p.id.clone(),
        index: p.index,
        u: vmss::extract_subshadow(bulletin, p.index, p.keys.private())?,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    E,
    T,
    Z,
    C,
    Tail,
    /// One of the k initial terms, substituted before the sequence is run.
    InitSubshadow,
    /// A participant's term beyond the initial window, substituted after.
    MaskSubshadow,
}

impl Target {
    pub const ALL: [Target; 7] = [
        Target::E,
        Target::T,
        Target::Z,
        Target::C,
        Target::Tail,
        Target::InitSubshadow,
        Target::MaskSubshadow,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Target::E => "E",
            Target::T => "T",
            Target::Z => "z",
            Target::C => "c",
            Target::Tail => "tail",
            Target::InitSubshadow => "init-subshadow",
            Target::MaskSubshadow => "mask-subshadow",
        }
    }

    pub fn parse(s: &str) -> Result<Target> {
        Target::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::param(format!("unknown tamper target {s:?}")))
    }

    /// Valid positions for this target under `config`.
    pub fn positions(self, config: &SchemeConfig) -> Vec<u64> {
        let (k, m, l) = (config.k as u64, config.m as u64, config.l as u64);
        match self {
            Target::E | Target::T => (1..=m).collect(),
            Target::Z => (1..=l).collect(),
            Target::C => vec![1],
            Target::Tail => vec![1, 2],
            Target::InitSubshadow => (1..=k).collect(),
            Target::MaskSubshadow => (k + 1..=m).collect(),
        }
    }
}

impl fmt::Display for Target {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Leaves the value as is; a control.
    Identity,
    Increment,
    /// A uniformly drawn value different from the original.
    Randomize,
    SwapWith(u64),
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Mode::Identity => f.write_str("identity"),
            Mode::Increment => f.write_str("increment"),
            Mode::Randomize => f.write_str("randomize"),
            Mode::SwapWith(j) => write!(f, "swap-{j}"),
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Mode> {
        match s {
            "identity" => Ok(Mode::Identity),
            "increment" => Ok(Mode::Increment),
            "randomize" => Ok(Mode::Randomize),
            _ => s
                .strip_prefix("swap-")
                .and_then(|j| j.parse().ok())
                .map(Mode::SwapWith)
                .ok_or_else(|| Error::param(format!("unknown tamper mode {s:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TamperSpec {
    pub target: Target,
    pub index: u64,
    pub mode: Mode,
}

impl TamperSpec {
    pub fn validate(&self, config: &SchemeConfig) -> Result<()> {
        let positions = self.target.positions(config);
        if !positions.contains(&self.index) {
            return Err(Error::param(format!(
                "{} has no position {}",
                self.target, self.index
            )));
        }
        if let Mode::SwapWith(j) = self.mode {
            if j == self.index || !positions.contains(&j) {
                return Err(Error::param(format!("cannot swap {} with {j}", self.target)));
            }
        }
        Ok(())
    }

    pub fn name(&self) -> String {
        format!("dealer/{}/{}/{}", self.target, self.index, self.mode)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Detector {
    Participant(u64),
    /// A public check anyone holding the bulletin can run.
    Public,
    /// The participants pooling shares for recovery.
    Coalition,
}

impl fmt::Display for Detector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Detector::Participant(i) => write!(f, "participant:{i}"),
            Detector::Public => f.write_str("public"),
            Detector::Coalition => f.write_str("coalition"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioReport {
    pub name: String,
    pub tampered: Vec<String>,
    pub checks_run: Vec<String>,
    pub checks_failed: Vec<String>,
    pub detected: bool,
    pub detected_by: Vec<Detector>,
    /// Whether some check can see the tampered position at all.
    pub covered: Option<bool>,
    /// Whether the tamper changed anything.
    pub effective: bool,
    pub named: Vec<String>,
    /// Whether a coalition still recovers the dealt secrets.
    pub secrets_intact: Option<bool>,
}

impl ScenarioReport {
    fn new(name: String) -> ScenarioReport {
        ScenarioReport {
            name,
            tampered: Vec::new(),
            checks_run: Vec::new(),
            checks_failed: Vec::new(),
            detected: false,
            detected_by: Vec::new(),
            covered: None,
            effective: false,
            named: Vec::new(),
            secrets_intact: None,
        }
    }

    fn record(&mut self, name: String, passed: bool, by: Detector) {
        if !passed {
            self.checks_failed.push(name.clone());
            if !self.detected_by.contains(&by) {
                self.detected_by.push(by);
            }
        }
        self.checks_run.push(name);
        self.detected = !self.checks_failed.is_empty();
    }

    /// One `key=value` line per field in a fixed order.
    pub fn to_text(&self) -> String {
        fn list<T: fmt::Display>(v: &[T]) -> String {
            if v.is_empty() {
                "-".into()
            } else {
                v.iter().map(T::to_string).collect::<Vec<_>>().join(",")
            }
        }
        fn opt(v: Option<bool>) -> String {
            v.map_or("-".into(), |b| b.to_string())
        }
        format!(
            "scenario={}\ntampered={}\nchecks_run={}\nchecks_failed={}\ndetected={}\ndetected_by={}\ncovered={}\neffective={}\nnamed={}\nsecrets_intact={}\n",
            self.name,
            list(&self.tampered),
            list(&self.checks_run),
            list(&self.checks_failed),
            self.detected,
            list(&self.detected_by),
            opt(self.covered),
            self.effective,
            list(&self.named),
            opt(self.secrets_intact),
        )
    }
}

/// Sequence indices i whose instance uses only published commitments.
fn computable_instances(bulletin_indices: &BTreeSet<u64>, k: usize) -> Vec<u64> {
    let Some(&last) = bulletin_indices.last() else {
        return Vec::new();
    };
    (0..=last.saturating_sub(k as u64))
        .filter(|&i| (i..=i + k as u64).all(|n| bulletin_indices.contains(&n)))
        .collect()
}

/// Whether any check can see a tamper of `target` at `index`, for a fresh
/// deal with participants 1..m.
pub fn coverage(config: &SchemeConfig, q: &BigUint, target: Target, index: u64) -> bool {
    let seq: BTreeSet<u64> = (0..config.m as u64).collect();
    let instances = computable_instances(&seq, config.k);
    let k = config.k as u64;
    match target {
        Target::E | Target::T => true,
        Target::Z | Target::Tail => false,
        Target::C => instances.iter().any(|&i| !(BigUint::from(i) % q).is_zero()),
        Target::InitSubshadow | Target::MaskSubshadow => {
            let n = index - 1;
            instances.iter().any(|&i| i <= n && n <= i + k)
        }
    }
}

fn substitute<R: RngCore + ?Sized>(v: &Gfp, mode: Mode, swap: Option<&Gfp>, rng: &mut R) -> Gfp {
    let q = v.modulus();
    match mode {
        Mode::Identity => v.clone(),
        Mode::Increment => v + &Gfp::one(q),
        Mode::Randomize => {
            let delta = xtr::random_nonzero(q, rng);
            v + &delta
        }
        Mode::SwapWith(_) => swap.expect("swap partner").clone(),
    }
}

fn substitute_commitment<R: RngCore + ?Sized>(
    params: &XtrParams,
    t: &Gfp6,
    mode: Mode,
    swap: Option<&Gfp6>,
    rng: &mut R,
) -> Gfp6 {
    match mode {
        Mode::Identity => t.clone(),
        Mode::Increment => t * params.g(),
        Mode::Randomize => {
            let r = xtr::random_nonzero(params.q(), rng);
            t * &params.commit(&r)
        }
        Mode::SwapWith(_) => swap.expect("swap partner").clone(),
    }
}

/// Applies `spec` to a copy of `bulletin` as its dealer would. Returns the
/// tampered bulletin and the labels of the changed values.
pub fn tamper<R: RngCore + ?Sized>(
    bulletin: &Bulletin,
    state: &DealerState,
    spec: &TamperSpec,
    rng: &mut R,
) -> Result<(Bulletin, Vec<String>)> {
    let params = bulletin.params.clone();
    let mut b = bulletin.clone();
    let share_pos = |b: &Bulletin, i: u64| {
        b.shares
            .iter()
            .position(|s| s.index == i)
            .ok_or_else(|| Error::param(format!("no participant at index {i}")))
    };
    let mask_pos = |b: &Bulletin, slot: u64| {
        b.masks
            .iter()
            .position(|mk| mk.slot as u64 == slot)
            .ok_or_else(|| Error::param(format!("no secret in slot {slot}")))
    };
    let tail_pos = |t: u64| match t {
        1 | 2 => Ok(t as usize - 1),
        _ => Err(Error::param(format!("tail has no position {t}"))),
    };
    let i = spec.index;
    let swap_idx = match spec.mode {
        Mode::SwapWith(j) if j == i => return Err(Error::param(format!("cannot swap {i} with itself"))),
        Mode::SwapWith(j) => Some(j),
        _ => None,
    };
    let label;
    match spec.target {
        Target::E => {
            let (pi, pj) = (share_pos(&b, i)?, swap_idx.map(|j| share_pos(&b, j)).transpose()?);
            let partner = pj.map(|pj| b.shares[pj].e.clone());
            let e = b.shares[pi].e.clone();
            b.shares[pi].e = substitute(&e, spec.mode, partner.as_ref(), rng);
            if let Some(pj) = pj {
                b.shares[pj].e = e;
            }
            label = format!("E{i}");
        }
        Target::T => {
            let (pi, pj) = (share_pos(&b, i)?, swap_idx.map(|j| share_pos(&b, j)).transpose()?);
            let partner = pj.map(|pj| b.shares[pj].t.clone());
            let t = b.shares[pi].t.clone();
            b.shares[pi].t = substitute_commitment(&params, &t, spec.mode, partner.as_ref(), rng);
            if let Some(pj) = pj {
                b.shares[pj].t = t;
            }
            label = format!("T{i}");
        }
        Target::Z => {
            let (pi, pj) = (mask_pos(&b, i)?, swap_idx.map(|j| mask_pos(&b, j)).transpose()?);
            let partner = pj.map(|pj| b.masks[pj].z.clone());
            let z = b.masks[pi].z.clone();
            b.masks[pi].z = substitute(&z, spec.mode, partner.as_ref(), rng);
            if let Some(pj) = pj {
                b.masks[pj].z = z;
            }
            label = format!("z{i}");
        }
        Target::C => {
            if swap_idx.is_some() || i != 1 {
                return Err(Error::param("c has a single position and no swap partner"));
            }
            let mut new = substitute(&b.c, spec.mode, None, rng);
            if new.is_zero() {
                new = &new + &Gfp::one(params.q());
            }
            b.c = new;
            label = "c".to_string();
        }
        Target::Tail => {
            let (pi, pj) = (tail_pos(i)?, swap_idx.map(tail_pos).transpose()?);
            let partner = pj.map(|pj| b.tail[pj].1.clone());
            let v = b.tail[pi].1.clone();
            b.tail[pi].1 = substitute(&v, spec.mode, partner.as_ref(), rng);
            if let Some(pj) = pj {
                b.tail[pj].1 = v;
            }
            label = format!("tail{i}");
        }
        Target::InitSubshadow => {
            // Run the sequence from a substituted initial term and publish
            // everything from it, except that participant i keeps the honest
            // (E_i, T_i) pair, which opens correctly.
            let spec0 = state.spec().clone();
            let mut init = spec0.init().to_vec();
            let k = init.len() as u64;
            let in_window = |n: u64| (1..=k).contains(&n);
            if !in_window(i) || swap_idx.is_some_and(|j| !in_window(j)) {
                return Err(Error::param(format!("init-subshadow positions are 1..={k}")));
            }
            let partner = swap_idx.map(|j| init[j as usize - 1].clone());
            init[i as usize - 1] = substitute(&init[i as usize - 1], spec.mode, partner.as_ref(), rng);
            let forged = NlrSpec::new(spec0.variant(), spec0.k(), spec0.c().clone(), init)?;
            let last = b
                .shares
                .iter()
                .map(|s| s.index - 1)
                .chain(b.masks.iter().map(|mk| mk.index))
                .chain(b.tail.iter().map(|t| t.0))
                .max()
                .unwrap_or(0);
            let seq = nlr::generate(&forged, last)?;
            for (e, s) in b.registry.entries().iter().zip(b.shares.iter_mut()) {
                if e.index == i {
                    continue;
                }
                let u = seq.get(e.index - 1).unwrap();
                s.e = &xtr::blinding(&params, &e.y, state.b()) * u;
                s.t = params.commit(u);
            }
            let secrets = state.secrets();
            for mk in b.masks.iter_mut() {
                if let Some(secret) = secrets.iter().find(|s| s.slot == mk.slot) {
                    mk.z = &secret.value - seq.get(mk.index).unwrap();
                }
            }
            for t in b.tail.iter_mut() {
                t.1 = seq.get(t.0).unwrap().clone();
            }
            label = format!("u{}", i - 1);
        }
        Target::MaskSubshadow => {
            // Participant i receives a substituted term whose E_i and T_i
            // agree with each other; the rest of the sequence is honest.
            let pi = share_pos(&b, i)?;
            let mut held = state.clone();
            let u = held.term(i - 1);
            let partner = match swap_idx {
                Some(j) => Some(share_pos(&b, j).map(|_| held.term(j - 1))?),
                None => None,
            };
            let forged = substitute(&u, spec.mode, partner.as_ref(), rng);
            let y = &b.registry.by_index(i).unwrap().y;
            let kappa = xtr::blinding(&params, y, state.b());
            let s = &mut b.shares[pi];
            s.e = &kappa * &forged;
            s.t = params.commit(&forged);
            label = format!("u{}", i - 1);
        }
    }
    Ok((b, vec![label]))
}

/// Every check each participant can run, merged into one report.
fn run_all_verifications(report: &mut ScenarioReport, session: &Session) -> Result<()> {
    let mut public_done = false;
    for p in &session.participants {
        let checks = vmss::verify_participant(&session.bulletin, p.index, p.keys.private())?;
        for c in checks {
            match c.kind {
                vmss::CheckKind::Own => {
                    report.record(format!("own:{}", c.index), c.passed, Detector::Participant(p.index));
                }
                _ if public_done => {}
                vmss::CheckKind::Instance => {
                    report.record(format!("instance:{}", c.index), c.passed, Detector::Public);
                }
                vmss::CheckKind::Subgroup => {
                    report.record(format!("subgroup:{}", c.index), c.passed, Detector::Public);
                }
            }
        }
        public_done = true;
    }
    Ok(())
}

/// Whether the first k participants recover the dealt secrets.
fn coalition_recovers(session: &Session) -> bool {
    let k = session.bulletin.k();
    let shares: Result<Vec<RecoveryShare>> = session.participants[..k]
        .iter()
        .map(|p| share_for(&session.bulletin, p))
        .collect();
    let Ok(shares) = shares else {
        return false;
    };
    match vmss::recover(&session.bulletin, &shares, Way::Interpolation) {
        Ok(got) => got.iter().map(|s| &s.value).eq(session.secrets.iter()),
        Err(_) => false,
    }
}

/// Deals honestly, lets the dealer tamper as `spec` says, and runs every
/// participant's verification.
pub fn run_dealer_attack<R: RngCore + ?Sized>(
    params: &XtrParams,
    config: &SchemeConfig,
    spec: &TamperSpec,
    rng: &mut R,
) -> Result<ScenarioReport> {
    spec.validate(config)?;
    let mut session = Session::new(params, config, rng)?;
    let before = session.bulletin.to_text();
    let mut report = ScenarioReport::new(spec.name());
    let (tampered, labels) = tamper(&session.bulletin, &session.state, spec, rng)?;
    session.bulletin = tampered;
    report.tampered = labels;
    report.effective = session.bulletin.to_text() != before;
    report.covered = Some(coverage(config, params.q().value(), spec.target, spec.index));
    run_all_verifications(&mut report, &session)?;
    report.secrets_intact = Some(coalition_recovers(&session));
    Ok(report)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheatMode {
    Honest,
    /// Submits u + 1.
    Increment,
    /// Submits the honest value under another participant index.
    Relabel(u64),
}

impl fmt::Display for CheatMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CheatMode::Honest => f.write_str("honest"),
            CheatMode::Increment => f.write_str("increment"),
            CheatMode::Relabel(j) => write!(f, "relabel-{j}"),
        }
    }
}

fn recovery_report(session: &Session, shares: &[RecoveryShare], report: &mut ScenarioReport) {
    let result = vmss::recover(&session.bulletin, shares, Way::Interpolation);
    let passed = !matches!(result, Err(Error::CheaterIdentified { .. }));
    report.record("cross-verify".into(), passed, Detector::Coalition);
    match result {
        Err(Error::CheaterIdentified { ids }) => report.named = ids,
        Ok(got) => {
            report.secrets_intact = Some(got.iter().map(|s| &s.value).eq(session.secrets.iter()));
        }
        Err(_) => report.secrets_intact = Some(false),
    }
}

/// A k-coalition recovers while the participant at `cheater` lies.
pub fn run_participant_cheat(session: &Session, cheater: u64, mode: CheatMode) -> Result<ScenarioReport> {
    let k = session.bulletin.k();
    let liar = session
        .participant(cheater)
        .ok_or_else(|| Error::param(format!("no participant at index {cheater}")))?;
    let mut shares = vec![share_for(&session.bulletin, liar)?];
    for p in &session.participants {
        if shares.len() == k {
            break;
        }
        if p.index != cheater {
            shares.push(share_for(&session.bulletin, p)?);
        }
    }
    let mut report = ScenarioReport::new(format!("participant/{cheater}/{mode}"));
    match mode {
        CheatMode::Honest => {}
        CheatMode::Increment => {
            shares[0].u = &shares[0].u + &Gfp::one(session.bulletin.params().q());
            report.tampered.push(format!("share{cheater}"));
        }
        CheatMode::Relabel(j) => {
            shares[0].index = j;
            report.tampered.push(format!("index{cheater}"));
        }
    }
    report.effective = mode != CheatMode::Honest;
    recovery_report(session, &shares, &mut report);
    Ok(report)
}

/// Participants `a` and `b` submit their honest subshadows under each
/// other's identity.
pub fn run_conspiracy(session: &Session, a: u64, b: u64) -> Result<ScenarioReport> {
    if a == b {
        return Err(Error::param("a conspiracy needs two participants"));
    }
    let k = session.bulletin.k();
    let pa = session.participant(a).ok_or_else(|| Error::param("no participant a"))?;
    let pb = session.participant(b).ok_or_else(|| Error::param("no participant b"))?;
    let mut sa = share_for(&session.bulletin, pa)?;
    let mut sb = share_for(&session.bulletin, pb)?;
    std::mem::swap(&mut sa.id, &mut sb.id);
    let mut shares = vec![sa, sb];
    for p in &session.participants {
        if shares.len() >= k {
            break;
        }
        if p.index != a && p.index != b {
            shares.push(share_for(&session.bulletin, p)?);
        }
    }
    let mut report = ScenarioReport::new(format!("conspiracy/{a}/{b}"));
    report.tampered = vec![format!("id{a}"), format!("id{b}")];
    report.effective = true;
    recovery_report(session, &shares, &mut report);
    Ok(report)
}

/// Extracted shares of `people`.
fn shares_of(bulletin: &Bulletin, people: &[&Participant]) -> Result<Vec<RecoveryShare>> {
    people.iter().map(|p| share_for(bulletin, p)).collect()
}

fn recovered(bulletin: &Bulletin, shares: &[RecoveryShare], way: Way) -> Option<Vec<Gfp>> {
    vmss::recover(bulletin, shares, way)
        .ok()
        .map(|v| v.into_iter().map(|s| s.value).collect())
}

/// A full honest lifecycle: deal, verify, recover both ways, then one of
/// each dynamic operation with a recovery after every step.
pub fn run_session<R: RngCore + ?Sized>(
    params: &XtrParams,
    config: &SchemeConfig,
    rng: &mut R,
) -> Result<ScenarioReport> {
    let mut s = Session::new(params, config, rng)?;
    let k = config.k;
    let mut report = ScenarioReport::new(format!(
        "session/scheme{}/k{}/m{}/l{}",
        config.scheme, config.k, config.m, config.l
    ));
    report.effective = false;

    let all_ok = s.participants.iter().all(|p| {
        vmss::verify_participant(&s.bulletin, p.index, p.keys.private())
            .is_ok_and(|checks| checks.iter().all(|c| c.passed))
    });
    report.record("verify".into(), all_ok, Detector::Coalition);

    let first: Vec<&Participant> = s.participants.iter().take(k).collect();
    let shares = shares_of(&s.bulletin, &first)?;
    let way1 = recovered(&s.bulletin, &shares, Way::Interpolation);
    let way2 = recovered(&s.bulletin, &shares, Way::Consecutive);
    report.record("recover:lagrange".into(), way1.as_ref() == Some(&s.secrets), Detector::Coalition);
    report.record("recover:consecutive".into(), way2.as_ref() == Some(&s.secrets), Detector::Coalition);

    let short = vmss::recover(&s.bulletin, &shares[..k - 1], Way::Interpolation);
    report.record(
        "below-threshold".into(),
        matches!(short, Err(Error::InsufficientShares { .. })),
        Detector::Coalition,
    );

    // Removal first: at small q the shadow space may be full.
    if config.m > k {
        let gone = s.participants.remove(0);
        s.bulletin = vmss::remove_participant(&s.bulletin, &gone.id)?;
        let rest: Vec<&Participant> = s.participants.iter().take(k).collect();
        let mut shares = shares_of(&s.bulletin, &rest)?;
        report.record(
            "remove-participant:recover".into(),
            recovered(&s.bulletin, &shares, Way::Interpolation).as_ref() == Some(&s.secrets),
            Detector::Coalition,
        );
        shares[0] = RecoveryShare {
            id: gone.id.clone(),
            index: gone.index,
            u: s.state.sequence().get(gone.index - 1).unwrap().clone(),
        };
        let rejected = matches!(
            vmss::recover(&s.bulletin, &shares, Way::Interpolation),
            Err(Error::CheaterIdentified { ref ids }) if ids == std::slice::from_ref(&gone.id)
        );
        report.record("remove-participant:reject".into(), rejected, Detector::Coalition);
    }

    let keys = fresh_keys(params, s.bulletin.registry(), rng)?;
    let id = format!("P{}", s.state.next_index() + 1);
    let (b2, st2) = vmss::add_participant(&s.bulletin, &s.state, &id, keys.public())?;
    let newcomer = Participant {
        index: b2.registry().by_id(&id).unwrap().index,
        id,
        keys,
    };
    s.bulletin = b2;
    s.state = st2;
    s.participants.push(newcomer);
    let mut coalition: Vec<&Participant> = vec![s.participants.last().unwrap()];
    coalition.extend(s.participants.iter().take(k - 1));
    let shares = shares_of(&s.bulletin, &coalition)?;
    report.record(
        "add-participant:recover".into(),
        recovered(&s.bulletin, &shares, Way::Interpolation).as_ref() == Some(&s.secrets),
        Detector::Coalition,
    );

    let extra = xtr::random_nonzero(params.q(), rng);
    let (b3, st3) = vmss::add_secret(&s.bulletin, &s.state, &extra)?;
    s.bulletin = b3;
    s.state = st3;
    s.secrets.push(extra);
    report.record(
        "add-secret:recover".into(),
        recovered(&s.bulletin, &shares, Way::Interpolation).as_ref() == Some(&s.secrets),
        Detector::Coalition,
    );

    s.bulletin = vmss::remove_secret(&s.bulletin, 1)?;
    s.secrets.remove(0);
    report.record(
        "remove-secret:recover".into(),
        recovered(&s.bulletin, &shares, Way::Interpolation).as_ref() == Some(&s.secrets),
        Detector::Coalition,
    );

    let new_k = if k < s.bulletin.m() && nlr::check_binomial_bound(k + 1, params.q()).is_ok() {
        k + 1
    } else {
        k
    };
    let old: Vec<RecoveryShare> = shares_of(
        &s.bulletin,
        &s.participants.iter().collect::<Vec<_>>(),
    )?;
    let (b4, st4) = vmss::redeal(&s.bulletin, &s.state, new_k, rng)?;
    s.bulletin = b4;
    s.state = st4;
    for p in s.participants.iter_mut() {
        p.index = s.bulletin.registry().by_id(&p.id).unwrap().index;
    }
    let team: Vec<&Participant> = s.participants.iter().take(new_k).collect();
    let shares = shares_of(&s.bulletin, &team)?;
    report.record(
        "change-threshold:recover".into(),
        recovered(&s.bulletin, &shares, Way::Interpolation).as_ref() == Some(&s.secrets),
        Detector::Coalition,
    );
    report.record(
        "change-threshold:below".into(),
        matches!(
            vmss::recover(&s.bulletin, &shares[..new_k - 1], Way::Interpolation),
            Err(Error::InsufficientShares { .. })
        ),
        Detector::Coalition,
    );
    let stale = old
        .iter()
        .filter(|sh| {
            let index = s.bulletin.registry().by_id(&sh.id).unwrap().index;
            vmss::verify_own(&s.bulletin, index, &sh.u)
        })
        .count();
    report.record(
        format!("change-threshold:stale-accepted={stale}"),
        true,
        Detector::Coalition,
    );
    Ok(report)
}

/// Dealer attacks over every target and position, each with increment,
/// randomize and (where a partner exists) swap.
pub fn coverage_matrix<R: RngCore + ?Sized>(
    params: &XtrParams,
    configs: &[SchemeConfig],
    rng: &mut R,
) -> Result<Vec<(SchemeConfig, ScenarioReport)>> {
    let mut rows = Vec::new();
    for config in configs {
        for target in Target::ALL {
            let positions = target.positions(config);
            for &index in &positions {
                let mut modes = vec![Mode::Increment, Mode::Randomize];
                if target != Target::C && positions.len() > 1 {
                    let j = positions.iter().copied().find(|&j| j != index).unwrap();
                    modes.push(Mode::SwapWith(j));
                }
                for mode in modes {
                    let spec = TamperSpec { target, index, mode };
                    rows.push((*config, run_dealer_attack(params, config, &spec, rng)?));
                }
            }
        }
    }
    Ok(rows)
}

/// One line per scenario.
pub fn render_matrix(rows: &[(SchemeConfig, ScenarioReport)]) -> String {
    let mut s = String::from("# scheme k m l | scenario | covered effective detected | detected_by | failed checks | secrets_intact\n");
    for (c, r) in rows {
        let by: Vec<String> = r.detected_by.iter().map(Detector::to_string).collect();
        s.push_str(&format!(
            "{} {} {} {} | {} | {} {} {} | {} | {} | {}\n",
            c.scheme,
            c.k,
            c.m,
            c.l,
            r.name,
            r.covered.unwrap_or(false),
            r.effective,
            r.detected,
            if by.is_empty() { "-".into() } else { by.join(",") },
            if r.checks_failed.is_empty() { "-".into() } else { r.checks_failed.join(",") },
            r.secrets_intact.map_or("-".into(), |b| b.to_string()),
        ));
    }
    s
}

/// Candidates for secret `slot` consistent with k−1 shares and the tail:
/// for each v, adding the point u = v − z at the mask index and
/// interpolating must reproduce every known point.
pub fn interpolation_candidates(bulletin: &Bulletin, shares: &[RecoveryShare], slot: usize) -> Result<Vec<Gfp>> {
    let q = bulletin.params().q();
    let k = bulletin.k();
    let variant = bulletin.scheme().variant();
    let mask = bulletin
        .masks()
        .iter()
        .find(|mk| mk.slot == slot)
        .ok_or_else(|| Error::param(format!("no secret in slot {slot}")))?;
    let mut known: Vec<(u64, Gfp)> = shares.iter().map(|s| (s.index - 1, s.u.clone())).collect();
    known.extend(bulletin.tail().iter().cloned());
    if known.len() != k + 1 {
        return Err(Error::param("expected k-1 shares"));
    }
    let mut out = Vec::new();
    for v in field_elements(q.value()) {
        let cand = Gfp::new(v, q);
        let mut pts = known.clone();
        pts.push((mask.index, &cand - &mask.z));
        let poly = nlr::recover_polynomial(variant, &pts, k, q)?;
        if pts
            .iter()
            .all(|(x, u)| &nlr::eval_closed_form(variant, &poly, *x, q) == u)
        {
            out.push(cand);
        }
    }
    Ok(out)
}

/// As [`interpolation_candidates`], but a candidate must also satisfy every
/// recursion instance over indices 0..=last with the published c.
pub fn recursion_candidates(bulletin: &Bulletin, shares: &[RecoveryShare], slot: usize) -> Result<Vec<Gfp>> {
    let q = bulletin.params().q();
    let k = bulletin.k();
    let variant = bulletin.scheme().variant();
    let mask = bulletin
        .masks()
        .iter()
        .find(|mk| mk.slot == slot)
        .ok_or_else(|| Error::param(format!("no secret in slot {slot}")))?;
    let last = bulletin.tail()[1].0;
    let mut known: Vec<(u64, Gfp)> = shares.iter().map(|s| (s.index - 1, s.u.clone())).collect();
    known.extend(bulletin.tail().iter().cloned());
    let mut out = Vec::new();
    for v in field_elements(q.value()) {
        let cand = Gfp::new(v, q);
        let mut pts = known.clone();
        pts.push((mask.index, &cand - &mask.z));
        let poly = nlr::recover_polynomial(variant, &pts, k, q)?;
        let terms: Vec<Gfp> = (0..=last)
            .map(|i| nlr::eval_closed_form(variant, &poly, i, q))
            .collect();
        let spec = NlrSpec::new(variant, k, bulletin.c().clone(), terms[..k].to_vec())?;
        let fits = (0..=last - k as u64)
            .all(|i| nlr::window_holds(&spec, i, &terms[i as usize..=i as usize + k]));
        if fits {
            out.push(cand);
        }
    }
    Ok(out)
}

fn field_elements(q: &BigUint) -> impl Iterator<Item = BigUint> + '_ {
    let mut v = BigUint::default();
    std::iter::from_fn(move || {
        if &v >= q {
            return None;
        }
        let out = v.clone();
        v += 1u32;
        Some(out)
    })
}
