mod files;

use std::fmt;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use xtr_vmss::gf::{Gfp, Gfp2};
use xtr_vmss::harness::{
    self, coverage_matrix, render_matrix, run_conspiracy, run_dealer_attack,
    run_participant_cheat, run_session, CheatMode, Mode, Session, TamperSpec, Target,
};
use xtr_vmss::vmss::{
    self, Bulletin, DealerState, KeyFile, RecoveryShare, Registry, Scheme, SchemeConfig, Way,
};
use xtr_vmss::xtr::{self, XtrParams, MAX_LAMBDA, MIN_LAMBDA};
use xtr_vmss::Error;

const EXIT_OTHER: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_CONSTRAINT: u8 = 3;
const EXIT_VERIFY: u8 = 4;
const EXIT_CHEATER: u8 = 5;
const EXIT_INSUFFICIENT: u8 = 6;
const EXIT_COLLISION: u8 = 7;

#[derive(Parser)]
#[command(name = "xtr-vmss", version, about = "Verifiable multi-secret sharing over XTR")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate public parameters (lambda, p, q, Tr(g), g).
    Setup {
        #[arg(long, value_parser = clap::value_parser!(u32).range(MIN_LAMBDA as i64..=MAX_LAMBDA as i64))]
        lambda: u32,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a participant key pair.
    Keygen {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        id: String,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Add a key file's (id, y) to the registry, creating it if needed.
    Register {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        registry: PathBuf,
    },
    /// Split secrets among the registered participants.
    Deal {
        #[arg(long)]
        params: PathBuf,
        #[arg(long)]
        registry: PathBuf,
        /// Decimal secret in 1..q; repeat for each secret.
        #[arg(long = "secret")]
        secrets: Vec<String>,
        /// File with one decimal secret per line.
        #[arg(long)]
        secrets_file: Option<PathBuf>,
        #[arg(long, default_value = "1")]
        variant: Scheme,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        /// Dealer-only state needed for later dynamic operations.
        #[arg(long)]
        state: PathBuf,
    },
    /// Run every check available to one participant.
    Verify {
        #[arg(long)]
        bulletin: PathBuf,
        #[arg(long)]
        key: PathBuf,
    },
    /// Extract this participant's subshadow into a share file.
    Share {
        #[arg(long)]
        bulletin: PathBuf,
        #[arg(long)]
        key: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Recover the published secrets from share files.
    Recover {
        #[arg(long)]
        bulletin: PathBuf,
        #[arg(long = "share", required = true)]
        shares: Vec<PathBuf>,
        #[arg(long, default_value = "lagrange")]
        way: Way,
    },
    /// Dealer-side changes to an existing bulletin.
    Dynamic {
        #[command(flatten)]
        files: DealerFiles,
        #[command(subcommand)]
        op: DynamicOp,
    },
    /// Rewrite a bulletin as a dishonest dealer would.
    Tamper {
        #[command(flatten)]
        files: DealerFiles,
        #[arg(long)]
        target: String,
        #[arg(long)]
        index: u64,
        #[arg(long, default_value = "increment")]
        mode: Mode,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a harness scenario end to end and write its report.
    DemoAttack {
        /// control, session, matrix, init-subshadow, mask-subshadow,
        /// dealer/<target>/<index>/<mode>, participant/<index>/<mode>,
        /// conspiracy/<a>/<b>
        #[arg(long)]
        scenario: String,
        #[arg(long)]
        params: Option<PathBuf>,
        #[arg(long, default_value_t = MIN_LAMBDA)]
        lambda: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value = "1")]
        variant: Scheme,
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, default_value_t = 4)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        l: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct DealerFiles {
    #[arg(long, global = true)]
    bulletin: Option<PathBuf>,
    #[arg(long, global = true)]
    state: Option<PathBuf>,
}

#[derive(Subcommand)]
enum DynamicOp {
    AddParticipant {
        #[arg(long)]
        id: String,
        /// Public shadow as "z1,z2".
        #[arg(long)]
        y: String,
    },
    RemoveParticipant {
        #[arg(long)]
        id: String,
    },
    AddSecret {
        #[arg(long)]
        secret: String,
    },
    RemoveSecret {
        #[arg(long)]
        slot: usize,
    },
    ChangeThreshold {
        #[arg(long)]
        k: usize,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// A check failed; the message lists which.
#[derive(Debug)]
struct VerificationFailed(String);

impl fmt::Display for VerificationFailed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "verification failed: {}", self.0)
    }
}

impl std::error::Error for VerificationFailed {}

fn rng(seed: Option<u64>) -> ChaCha20Rng {
    match seed {
        Some(s) => ChaCha20Rng::seed_from_u64(s),
        None => ChaCha20Rng::from_rng(rand::thread_rng()).expect("thread rng"),
    }
}

fn load_params(path: &Path) -> Result<XtrParams> {
    XtrParams::parse_params_file(&files::read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_bulletin(path: &Path) -> Result<Bulletin> {
    Bulletin::parse(&files::read(path)?).with_context(|| format!("in {}", path.display()))
}

fn load_key(path: &Path, params: &XtrParams) -> Result<KeyFile> {
    KeyFile::parse(&files::read(path)?, params).with_context(|| format!("in {}", path.display()))
}

fn parse_secret(s: &str, params: &XtrParams) -> Result<Gfp> {
    Gfp::parse_canonical(s.trim(), params.q(), 1)
        .map_err(|_| Error::Domain(format!("secret {s:?} is not a decimal in 1..q")).into())
}

fn participant_index(bulletin: &Bulletin, id: &str) -> Result<u64> {
    bulletin
        .registry()
        .by_id(id)
        .map(|e| e.index)
        .ok_or_else(|| Error::Identity(format!("{id:?} is not in the bulletin registry")).into())
}

fn cmd_setup(lambda: u32, seed: Option<u64>, out: &Path) -> Result<()> {
    let params = xtr::generate_params(lambda, &mut rng(seed))?;
    files::write_atomic(out, &params.to_params_file(), false)?;
    println!("p={} q={}", params.p().value(), params.q().value());
    Ok(())
}

fn cmd_keygen(params: &Path, id: &str, seed: Option<u64>, out: &Path) -> Result<()> {
    let params = load_params(params)?;
    xtr_vmss::codec::validate_id(id)?;
    let keypair = xtr::keygen(&params, &mut rng(seed));
    let file = KeyFile { id: id.to_string(), keypair };
    files::write_atomic(out, &file.to_text(), true)?;
    eprintln!("note: {} holds a private key; keep it readable by its owner only", out.display());
    println!("id={id} y={}", file.keypair.public().to_canonical());
    Ok(())
}

fn cmd_register(params: &Path, key: &Path, registry: &Path) -> Result<()> {
    let params = load_params(params)?;
    let key = load_key(key, &params)?;
    let current = match files::read_optional(registry)? {
        Some(text) => Registry::parse(&text, params.p()).with_context(|| format!("in {}", registry.display()))?,
        None => Registry::new(),
    };
    let next = vmss::register(&params, &current, &key.id, key.keypair.public())?;
    files::write_atomic(registry, &next.to_text(params.p()), false)?;
    let index = next.by_id(&key.id).expect("just registered").index;
    println!("registered {} at index {index}", key.id);
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_deal(
    params: &Path,
    registry: &Path,
    secrets: &[String],
    secrets_file: Option<&Path>,
    variant: Scheme,
    k: usize,
    seed: Option<u64>,
    out: &Path,
    state: &Path,
) -> Result<()> {
    let params = load_params(params)?;
    let registry = Registry::parse(&files::read(registry)?, params.p())?;
    let mut values = secrets.iter().map(|s| parse_secret(s, &params)).collect::<Result<Vec<_>>>()?;
    if let Some(path) = secrets_file {
        for line in files::read(path)?.lines().filter(|l| !l.trim().is_empty()) {
            values.push(parse_secret(line, &params)?);
        }
    }
    if values.is_empty() {
        bail!(Error::Parameter("no secrets given".into()));
    }
    let config = SchemeConfig::new(variant, k, registry.len(), values.len())?;
    let (bulletin, dealer) = vmss::deal(&params, &config, &registry, &values, &mut rng(seed))?;
    let items = bulletin.public_item_count();
    let (m, l) = (bulletin.m(), bulletin.l());
    if items != 3 * m + l + 9 {
        bail!("public item count {items} differs from 3m+l+9 = {}", 3 * m + l + 9);
    }
    files::write_atomic(state, &dealer.to_text(), true)?;
    files::write_atomic(out, &bulletin.to_text(), false)?;
    eprintln!("note: {} is dealer-only; keep it private", state.display());
    println!("public items: {items} (3m+l+9, m={m}, l={l})");
    Ok(())
}

fn cmd_verify(bulletin: &Path, key: &Path) -> Result<()> {
    let bulletin = load_bulletin(bulletin)?;
    let key = load_key(key, bulletin.params())?;
    let index = participant_index(&bulletin, &key.id)?;
    let checks = vmss::verify_participant(&bulletin, index, key.keypair.private())?;
    for c in &checks {
        println!("{c}");
    }
    let failed: Vec<String> = checks.iter().filter(|c| !c.passed).map(|c| c.to_string()).collect();
    if !failed.is_empty() {
        return Err(VerificationFailed(failed.join("; ")).into());
    }
    Ok(())
}

fn cmd_share(bulletin: &Path, key: &Path, out: &Path) -> Result<()> {
    let bulletin = load_bulletin(bulletin)?;
    let key = load_key(key, bulletin.params())?;
    let index = participant_index(&bulletin, &key.id)?;
    let u = vmss::extract_subshadow(&bulletin, index, key.keypair.private())?;
    if !vmss::verify_own(&bulletin, index, &u) {
        return Err(VerificationFailed(format!("own {index} FAIL")).into());
    }
    let share = RecoveryShare { id: key.id.clone(), index, u };
    files::write_atomic(out, &share.to_text(), true)?;
    eprintln!("note: {} holds a subshadow; keep it private until recovery", out.display());
    Ok(())
}

fn cmd_recover(bulletin: &Path, shares: &[PathBuf], way: Way) -> Result<()> {
    let bulletin = load_bulletin(bulletin)?;
    let shares = shares
        .iter()
        .map(|p| {
            RecoveryShare::parse(&files::read(p)?, bulletin.params().q()).with_context(|| format!("in {}", p.display()))
        })
        .collect::<Result<Vec<_>>>()?;
    for s in vmss::recover(&bulletin, &shares, way)? {
        println!("secret {} = {}", s.slot, s.value.value());
    }
    Ok(())
}

fn dealer_paths(files: &DealerFiles) -> Result<(&Path, &Path)> {
    let b = files.bulletin.as_deref().ok_or_else(|| Error::Parameter("--bulletin is required".into()))?;
    let s = files.state.as_deref().ok_or_else(|| Error::Parameter("--state is required".into()))?;
    Ok((b, s))
}

fn load_dealer(files: &DealerFiles) -> Result<(Bulletin, DealerState)> {
    let (b, s) = dealer_paths(files)?;
    let bulletin = load_bulletin(b)?;
    let state = DealerState::parse(&files::read(s)?, bulletin.params()).with_context(|| format!("in {}", s.display()))?;
    Ok((bulletin, state))
}

fn cmd_dynamic(files: &DealerFiles, op: &DynamicOp) -> Result<()> {
    let (bulletin, state) = load_dealer(files)?;
    let params = bulletin.params().clone();
    let (next, next_state) = match op {
        DynamicOp::AddParticipant { id, y } => {
            let y = Gfp2::parse_canonical(y, params.p(), 1)?;
            let (b, s) = vmss::add_participant(&bulletin, &state, id, &y)?;
            println!("added {id} at index {}", b.registry().by_id(id).expect("added").index);
            (b, Some(s))
        }
        DynamicOp::RemoveParticipant { id } => (vmss::remove_participant(&bulletin, id)?, None),
        DynamicOp::AddSecret { secret } => {
            let (b, s) = vmss::add_secret(&bulletin, &state, &parse_secret(secret, &params)?)?;
            println!("added secret in slot {}", b.masks().last().expect("added").slot);
            (b, Some(s))
        }
        DynamicOp::RemoveSecret { slot } => (vmss::remove_secret(&bulletin, *slot)?, None),
        DynamicOp::ChangeThreshold { k, seed } => {
            let (b, s) = vmss::redeal(&bulletin, &state, *k, &mut rng(*seed))?;
            (b, Some(s))
        }
    };
    let (bpath, spath) = dealer_paths(files)?;
    if let Some(s) = next_state {
        files::write_atomic(spath, &s.to_text(), true)?;
    }
    files::write_atomic(bpath, &next.to_text(), false)?;
    println!("public items: {}", next.public_item_count());
    Ok(())
}

fn cmd_tamper(files: &DealerFiles, target: &str, index: u64, mode: Mode, seed: Option<u64>, out: &Path) -> Result<()> {
    let (bulletin, state) = load_dealer(files)?;
    let spec = TamperSpec { target: Target::parse(target)?, index, mode };
    let (forged, labels) = harness::tamper(&bulletin, &state, &spec, &mut rng(seed))?;
    files::write_atomic(out, &forged.to_text(), false)?;
    println!("tampered {}", labels.join(","));
    Ok(())
}

/// "dealer/<target>/<index>/<mode>" and the shorthands.
fn dealer_spec(scenario: &str, config: &SchemeConfig) -> Result<Option<TamperSpec>> {
    let spec = match scenario {
        "control" => TamperSpec { target: Target::E, index: 1, mode: Mode::Identity },
        "init-subshadow" => TamperSpec { target: Target::InitSubshadow, index: 1, mode: Mode::Increment },
        "mask-subshadow" => TamperSpec {
            target: Target::MaskSubshadow,
            index: config.k as u64 + 1,
            mode: Mode::Increment,
        },
        _ => {
            let Some(rest) = scenario.strip_prefix("dealer/") else {
                return Ok(None);
            };
            let parts: Vec<&str> = rest.split('/').collect();
            let [target, index, mode] = parts[..] else {
                bail!(Error::Parameter(format!("expected dealer/<target>/<index>/<mode>, got {scenario:?}")));
            };
            TamperSpec {
                target: Target::parse(target)?,
                index: index.parse().map_err(|_| Error::Parameter(format!("bad index {index:?}")))?,
                mode: mode.parse()?,
            }
        }
    };
    Ok(Some(spec))
}

fn parse_cheat(mode: &str) -> Result<CheatMode> {
    match mode {
        "honest" => Ok(CheatMode::Honest),
        "increment" => Ok(CheatMode::Increment),
        _ => mode
            .strip_prefix("relabel-")
            .and_then(|j| j.parse().ok())
            .map(CheatMode::Relabel)
            .ok_or_else(|| Error::Parameter(format!("unknown cheat mode {mode:?}")).into()),
    }
}

fn two_numbers(rest: &str, scenario: &str) -> Result<(u64, String)> {
    let (a, b) = rest
        .split_once('/')
        .ok_or_else(|| Error::Parameter(format!("malformed scenario {scenario:?}")))?;
    let a = a.parse().map_err(|_| Error::Parameter(format!("bad index in {scenario:?}")))?;
    Ok((a, b.to_string()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_demo_attack(
    scenario: &str,
    params: Option<&Path>,
    lambda: u32,
    seed: u64,
    variant: Scheme,
    k: usize,
    m: usize,
    l: usize,
    out: Option<&Path>,
) -> Result<()> {
    let mut r = rng(Some(seed));
    let params = match params {
        Some(p) => load_params(p)?,
        None => xtr::generate_params(lambda, &mut r)?,
    };
    let config = SchemeConfig::new(variant, k, m, l)?;
    let text = if scenario == "matrix" {
        render_matrix(&coverage_matrix(&params, &[config], &mut r)?)
    } else if scenario == "session" {
        run_session(&params, &config, &mut r)?.to_text()
    } else if let Some(spec) = dealer_spec(scenario, &config)? {
        run_dealer_attack(&params, &config, &spec, &mut r)?.to_text()
    } else if let Some(rest) = scenario.strip_prefix("participant/") {
        let (i, mode) = two_numbers(rest, scenario)?;
        let session = Session::new(&params, &config, &mut r)?;
        run_participant_cheat(&session, i, parse_cheat(&mode)?)?.to_text()
    } else if let Some(rest) = scenario.strip_prefix("conspiracy/") {
        let (a, b) = two_numbers(rest, scenario)?;
        let b = b.parse().map_err(|_| Error::Parameter(format!("bad index in {scenario:?}")))?;
        let session = Session::new(&params, &config, &mut r)?;
        run_conspiracy(&session, a, b)?.to_text()
    } else {
        bail!(Error::Parameter(format!("unknown scenario {scenario:?}")));
    };
    match out {
        Some(path) => files::write_atomic(path, &text, false)?,
        None => print!("{text}"),
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Setup { lambda, seed, out } => cmd_setup(lambda, seed, &out),
        Command::Keygen { params, id, seed, out } => cmd_keygen(&params, &id, seed, &out),
        Command::Register { params, key, registry } => cmd_register(&params, &key, &registry),
        Command::Deal { params, registry, secrets, secrets_file, variant, k, seed, out, state } => cmd_deal(
            &params,
            &registry,
            &secrets,
            secrets_file.as_deref(),
            variant,
            k,
            seed,
            &out,
            &state,
        ),
        Command::Verify { bulletin, key } => cmd_verify(&bulletin, &key),
        Command::Share { bulletin, key, out } => cmd_share(&bulletin, &key, &out),
        Command::Recover { bulletin, shares, way } => cmd_recover(&bulletin, &shares, way),
        Command::Dynamic { files, op } => cmd_dynamic(&files, &op),
        Command::Tamper { files, target, index, mode, seed, out } => {
            cmd_tamper(&files, &target, index, mode, seed, &out)
        }
        Command::DemoAttack { scenario, params, lambda, seed, variant, k, m, l, out } => {
            cmd_demo_attack(&scenario, params.as_deref(), lambda, seed, variant, k, m, l, out.as_deref())
        }
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<VerificationFailed>().is_some() {
        return EXIT_VERIFY;
    }
    match err.downcast_ref::<Error>() {
        Some(Error::Parameter(_) | Error::Domain(_) | Error::Identity(_)) => EXIT_USAGE,
        Some(Error::ConstraintViolation(_) | Error::BlindingDegenerate | Error::GenerationFailed(_)) => {
            EXIT_CONSTRAINT
        }
        Some(Error::MalformedBulletin { .. } | Error::CorruptCiphertext) => EXIT_VERIFY,
        Some(Error::CheaterIdentified { .. }) => EXIT_CHEATER,
        Some(Error::InsufficientShares { .. }) => EXIT_INSUFFICIENT,
        Some(Error::ShadowCollision) => EXIT_COLLISION,
        _ => EXIT_OTHER,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            if matches!(e.downcast_ref::<Error>(), Some(Error::ShadowCollision)) {
                eprintln!("hint: run keygen again to draw a fresh key pair");
            }
            ExitCode::from(exit_code(&e))
        }
    }
}
