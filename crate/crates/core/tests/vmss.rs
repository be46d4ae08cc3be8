mod common;

use std::path::PathBuf;

use num_bigint::BigUint;
use xtr_vmss::gf::{Gfp, Gfp2, Gfp6};
use xtr_vmss::harness::{enroll, fresh_keys, share_for, Participant, Session};
use xtr_vmss::vmss::{
    self, Bulletin, DealerState, KeyFile, RecoveryShare, Registry, Scheme, SchemeConfig, Way,
};
use xtr_vmss::xtr::{self, XtrParams};
use xtr_vmss::Error;

use common::{lambda32, rng, toy};

fn config(scheme: Scheme, k: usize, m: usize, l: usize) -> SchemeConfig {
    SchemeConfig::new(scheme, k, m, l).unwrap()
}

fn values(secrets: &[vmss::Secret]) -> Vec<Gfp> {
    secrets.iter().map(|s| s.value.clone()).collect()
}

fn shares(s: &Session, people: &[&Participant]) -> Vec<RecoveryShare> {
    people.iter().map(|p| share_for(&s.bulletin, p).unwrap()).collect()
}

fn first(s: &Session, n: usize) -> Vec<RecoveryShare> {
    let people: Vec<&Participant> = s.participants.iter().take(n).collect();
    shares(s, &people)
}

#[test]
fn registration_order_and_collisions() {
    let params = toy();
    let mut r = rng(1);
    let (registry, people) = enroll(&params, 4, &mut r).unwrap();
    let idx: Vec<u64> = registry.entries().iter().map(|e| e.index).collect();
    assert_eq!(idx, vec![1, 2, 3, 4]);
    let y = people[0].keys.public();
    assert_eq!(
        vmss::register(&params, &registry, "fresh", y),
        Err(Error::ShadowCollision)
    );
    let keys = xtr::keygen(&params, &mut r);
    assert!(matches!(
        vmss::register(&params, &Registry::new(), "bad id!", keys.public()),
        Err(Error::Identity(_))
    ));
}

#[test]
fn values_that_are_not_subgroup_traces_are_refused() {
    let params = lambda32();
    let mut r = rng(2);
    let p = params.p();
    let bogus = Gfp2::new(123u32.into(), 456u32.into(), p);
    let in_base = Gfp2::from_u64(5, p);
    let identity = Gfp2::from_u64(3, p);
    for y in [&bogus, &in_base, &identity] {
        assert!(!xtr::public_shadow_check(&params, y));
        assert!(matches!(vmss::register(&params, &Registry::new(), "P1", y), Err(Error::Domain(_))));
    }
    let s = Session::new(&params, &config(Scheme::Scheme1, 2, 4, 1), &mut r).unwrap();
    assert!(matches!(
        vmss::add_participant(&s.bulletin, &s.state, "late", &bogus),
        Err(Error::Domain(_))
    ));
    let y1 = s.bulletin.registry().by_index(1).unwrap().y.to_canonical();
    let text = s.bulletin.to_text().replacen(&y1, &bogus.to_canonical(), 1);
    assert!(matches!(Bulletin::parse(&text), Err(Error::Parse { .. })));
}

/// Tr(g^x) only depends on the orbit of x under multiplication by p² mod q;
/// at q = 13 that leaves four distinct shadows.
#[test]
fn toy_shadow_space_holds_four_participants() {
    let params = toy();
    let mut shadows: Vec<_> = (2u32..13)
        .map(|x| xtr::trace_ladder(params.c(), &x.into()))
        .collect();
    shadows.sort_by_key(|y| y.to_canonical());
    shadows.dedup();
    assert_eq!(shadows.len(), 4);
    assert!(enroll(&params, 4, &mut rng(2)).is_ok());
    assert_eq!(enroll(&params, 5, &mut rng(2)).unwrap_err(), Error::ShadowCollision);
}

#[test]
fn public_item_count_for_five_participants_two_secrets() {
    let params = lambda32();
    let s = Session::new(&params, &config(Scheme::Scheme1, 3, 5, 2), &mut rng(3)).unwrap();
    assert_eq!(s.bulletin.public_item_count(), 26);
    assert!(s.bulletin.to_text().ends_with("items=26\n"));
}

#[test]
fn zero_secret_is_rejected() {
    let params = toy();
    let mut r = rng(4);
    let (registry, _) = enroll(&params, 3, &mut r).unwrap();
    let secrets = vec![params.scalar(5), params.scalar(0)];
    assert!(matches!(
        vmss::deal(&params, &config(Scheme::Scheme2, 2, 3, 2), &registry, &secrets, &mut r),
        Err(Error::Domain(_))
    ));
}

#[test]
fn deal_checks_binomial_bound() {
    let params = toy();
    let c = SchemeConfig::new(Scheme::Scheme1, 6, 6, 1).unwrap();
    assert!(matches!(c.check_params(&params), Err(Error::ConstraintViolation(_))));
}

#[test]
fn honest_bulletins_pass_every_check() {
    let params = [toy(), lambda32()];
    let mut r = rng(5);
    for trial in 0..100usize {
        let p = &params[trial % 2];
        let scheme = Scheme::ALL[trial / 2 % 2];
        let k = 1 + trial % 3;
        let m = (k + trial % 2).min(4).max(k);
        let s = Session::new(p, &config(scheme, k, m, 1 + trial % 3), &mut r).unwrap();
        for person in &s.participants {
            let checks = vmss::verify_participant(&s.bulletin, person.index, person.keys.private()).unwrap();
            assert!(checks.iter().all(|c| c.passed), "trial {trial}: {checks:?}");
            let u = vmss::extract_subshadow(&s.bulletin, person.index, person.keys.private()).unwrap();
            assert_eq!(&u, s.state.sequence().get(person.index - 1).unwrap());
        }
    }
}

#[test]
fn instance_zero_has_unit_right_side() {
    let params = toy();
    assert!(params.commit(&params.scalar(0)).is_one());
    let s = Session::new(&params, &config(Scheme::Scheme1, 2, 4, 1), &mut rng(6)).unwrap();
    let inst = vmss::verify_consistency(&s.bulletin).unwrap();
    assert_eq!(inst, vec![(0, true), (1, true)]);
}

#[test]
fn own_check_binds_the_subshadow() {
    let params = toy();
    let s = Session::new(&params, &config(Scheme::Scheme2, 2, 3, 1), &mut rng(7)).unwrap();
    for p in &s.participants {
        let u = s.state.sequence().get(p.index - 1).unwrap();
        assert!(vmss::verify_own(&s.bulletin, p.index, u));
        assert!(!vmss::verify_own(&s.bulletin, p.index, &(u + &params.scalar(1))));
    }
    assert!(matches!(
        vmss::extract_subshadow(&s.bulletin, 9, &BigUint::from(2u8)),
        Err(Error::Parameter(_))
    ));
}

/// With the wrong private key the extracted value opens T_i with
/// probability about 1/q.
#[test]
fn wrong_key_rarely_opens_the_commitment() {
    let params = lambda32();
    let mut r = rng(8);
    let s = Session::new(&params, &config(Scheme::Scheme1, 2, 3, 1), &mut r).unwrap();
    let mut opened = 0;
    for _ in 0..200 {
        let wrong = xtr::keygen(&params, &mut r);
        if let Ok(u) = vmss::extract_subshadow(&s.bulletin, 1, wrong.private()) {
            opened += vmss::verify_own(&s.bulletin, 1, &u) as usize;
        }
    }
    assert_eq!(opened, 0);
}

#[test]
fn recovery_both_ways_reproduces_secrets() {
    let params = [toy(), lambda32()];
    let mut r = rng(9);
    for trial in 0..100usize {
        let p = &params[trial % 2];
        let scheme = Scheme::ALL[trial / 2 % 2];
        let k = 2 + trial % 3;
        let m = if trial % 2 == 0 { 4 } else { k + trial % 4 };
        let s = Session::new(p, &config(scheme, k, m.max(k), 1 + trial % 3), &mut r).unwrap();
        let sh = first(&s, k);
        let a = vmss::recover(&s.bulletin, &sh, Way::Interpolation).unwrap();
        let b = vmss::recover(&s.bulletin, &sh, Way::Consecutive).unwrap();
        assert_eq!(values(&a), s.secrets, "trial {trial}");
        assert_eq!(a, b);
        assert_eq!(
            vmss::recover(&s.bulletin, &sh[..k - 1], Way::Interpolation),
            Err(Error::InsufficientShares { needed: k, got: k - 1 })
        );
    }
}

#[test]
fn consecutive_way_needs_a_run() {
    let params = lambda32();
    let s = Session::new(&params, &config(Scheme::Scheme1, 2, 4, 2), &mut rng(10)).unwrap();
    let people: Vec<&Participant> = vec![&s.participants[0], &s.participants[2]];
    let sh = shares(&s, &people);
    assert_eq!(
        vmss::recover(&s.bulletin, &sh, Way::Consecutive),
        Err(Error::InsufficientShares { needed: 2, got: 1 })
    );
    assert_eq!(
        values(&vmss::recover(&s.bulletin, &sh, Way::Interpolation).unwrap()),
        s.secrets
    );
}

#[test]
fn lying_participant_is_named() {
    let params = toy();
    let s = Session::new(&params, &config(Scheme::Scheme1, 3, 4, 2), &mut rng(11)).unwrap();
    let mut sh = first(&s, 3);
    sh[1].u = &sh[1].u + &params.scalar(1);
    assert_eq!(
        vmss::recover(&s.bulletin, &sh, Way::Interpolation),
        Err(Error::CheaterIdentified { ids: vec!["P2".into()] })
    );
}

#[test]
fn swapped_identities_are_both_named() {
    let params = toy();
    let s = Session::new(&params, &config(Scheme::Scheme2, 2, 4, 1), &mut rng(12)).unwrap();
    let mut sh = first(&s, 2);
    let id0 = sh[0].id.clone();
    sh[0].id = sh[1].id.clone();
    sh[1].id = id0;
    assert_eq!(
        vmss::recover(&s.bulletin, &sh, Way::Interpolation),
        Err(Error::CheaterIdentified { ids: vec!["P2".into(), "P1".into()] })
    );
}

#[test]
fn added_participant_joins_a_coalition() {
    let params = lambda32();
    let mut r = rng(13);
    for scheme in Scheme::ALL {
        let (m, l, k) = (5, 2, 3);
        let mut s = Session::new(&params, &config(scheme, k, m, l), &mut r).unwrap();
        let before = s.bulletin.clone();
        let keys = fresh_keys(&params, s.bulletin.registry(), &mut r).unwrap();
        let (b, st) = vmss::add_participant(&s.bulletin, &s.state, "newcomer", keys.public()).unwrap();
        let entry = b.registry().by_id("newcomer").unwrap().clone();
        // Sequence index m+l+2, one past the published tail.
        assert_eq!(entry.index - 1, (m + l + 2) as u64);
        assert_eq!(&b.shares()[..m], before.shares());
        assert_eq!(b.masks(), before.masks());
        assert_eq!(b.tail(), before.tail());
        assert_eq!(b.public_item_count(), 3 * (m + 1) + l + 9);
        s.bulletin = b;
        s.state = st;
        let newcomer = Participant {
            id: "newcomer".into(),
            index: entry.index,
            keys,
        };
        let mut people = vec![&newcomer];
        people.extend(s.participants.iter().skip(2).take(k - 1));
        let sh = shares(&s, &people);
        assert_eq!(values(&vmss::recover(&s.bulletin, &sh, Way::Interpolation).unwrap()), s.secrets);
        let checks = vmss::verify_participant(&s.bulletin, newcomer.index, newcomer.keys.private()).unwrap();
        assert!(checks.iter().all(|c| c.passed));
        let dup = vmss::add_participant(&s.bulletin, &s.state, "other", newcomer.keys.public());
        assert_eq!(dup.unwrap_err(), Error::ShadowCollision);
    }
}

#[test]
fn removed_participant_is_refused() {
    let params = toy();
    let s = Session::new(&params, &config(Scheme::Scheme1, 2, 4, 2), &mut rng(14)).unwrap();
    let gone = &s.participants[1];
    let b = vmss::remove_participant(&s.bulletin, &gone.id).unwrap();
    assert_eq!(b.public_item_count(), 3 * 3 + 2 + 9);
    let old = share_for(&s.bulletin, gone).unwrap();
    let rest: Vec<RecoveryShare> = [&s.participants[2], &s.participants[3]]
        .iter()
        .map(|p| share_for(&b, p).unwrap())
        .collect();
    assert_eq!(values(&vmss::recover(&b, &rest, Way::Interpolation).unwrap()), s.secrets);
    assert_eq!(values(&vmss::recover(&b, &rest, Way::Consecutive).unwrap()), s.secrets);
    let with_old = vec![old, rest[0].clone()];
    assert_eq!(
        vmss::recover(&b, &with_old, Way::Interpolation),
        Err(Error::CheaterIdentified { ids: vec![gone.id.clone()] })
    );
    assert!(matches!(vmss::remove_participant(&b, &gone.id), Err(Error::Identity(_))));
}

#[test]
fn secrets_can_be_added_and_removed() {
    let params = toy();
    let mut r = rng(15);
    let s = Session::new(&params, &config(Scheme::Scheme2, 2, 4, 2), &mut r).unwrap();
    let sh = first(&s, 2);
    let extra = params.scalar(11);
    let (b, st) = vmss::add_secret(&s.bulletin, &s.state, &extra).unwrap();
    assert_eq!(b.public_item_count(), 3 * 4 + 3 + 9);
    assert_eq!(b.tail(), s.bulletin.tail());
    let mut want = s.secrets.clone();
    want.push(extra.clone());
    assert_eq!(values(&vmss::recover(&b, &sh, Way::Interpolation).unwrap()), want);
    assert_eq!(values(&vmss::recover(&b, &sh, Way::Consecutive).unwrap()), want);
    assert!(matches!(vmss::add_secret(&b, &st, &params.scalar(0)), Err(Error::Domain(_))));

    let b2 = vmss::remove_secret(&b, 2).unwrap();
    let got = vmss::recover(&b2, &sh, Way::Interpolation).unwrap();
    assert_eq!(got.iter().map(|s| s.slot).collect::<Vec<_>>(), vec![1, 3]);
    assert_eq!(values(&got), vec![s.secrets[0].clone(), extra.clone()]);
    assert!(!b2.to_text().contains("\nz=2 "));
    assert!(matches!(vmss::remove_secret(&b2, 2), Err(Error::Parameter(_))));

    // Removing then re-adding the same value.
    let (b3, _) = vmss::add_secret(&b2, &st, &s.secrets[1]).unwrap();
    let got = vmss::recover(&b3, &sh, Way::Interpolation).unwrap();
    assert_eq!(got.last().unwrap().value, s.secrets[1]);

    let empty = vmss::remove_secret(&vmss::remove_secret(&b2, 1).unwrap(), 3).unwrap();
    assert_eq!(vmss::recover(&empty, &sh, Way::Interpolation).unwrap(), vec![]);
}

#[test]
fn threshold_change_redeals() {
    let params = lambda32();
    let mut r = rng(16);
    let s = Session::new(&params, &config(Scheme::Scheme1, 2, 5, 2), &mut r).unwrap();
    let old = first(&s, 5);
    let (b, _) = vmss::redeal(&s.bulletin, &s.state, 3, &mut r).unwrap();
    assert_eq!(b.k(), 3);
    let fresh: Vec<RecoveryShare> = s.participants.iter().map(|p| share_for(&b, p).unwrap()).collect();
    assert_eq!(values(&vmss::recover(&b, &fresh[..3], Way::Interpolation).unwrap()), s.secrets);
    assert!(matches!(
        vmss::recover(&b, &fresh[..2], Way::Interpolation),
        Err(Error::InsufficientShares { .. })
    ));
    let stale = old.iter().filter(|sh| vmss::verify_own(&b, sh.index, &sh.u)).count();
    assert_eq!(stale, 0);

    let (same, _) = vmss::redeal(&s.bulletin, &s.state, 2, &mut r).unwrap();
    assert_eq!(same.k(), 2);
    assert_eq!(same.public_item_count(), s.bulletin.public_item_count());
    assert_ne!(same, s.bulletin);
    assert!(matches!(
        vmss::redeal(&s.bulletin, &s.state, 6, &mut r),
        Err(Error::Parameter(_))
    ));
}

#[test]
fn commitments_outside_the_subgroup_are_malformed() {
    let params = toy();
    let s = Session::new(&params, &config(Scheme::Scheme2, 2, 4, 1), &mut rng(17)).unwrap();
    let text = s.bulletin.to_text();
    let t2 = s.bulletin.share(2).unwrap().t.to_canonical();
    let outside = &Gfp6::theta(params.field()) + &Gfp6::one(params.field());
    let forged = Bulletin::parse(&text.replace(&format!("T=2 {t2}"), &format!("T=2 {}", outside.to_canonical()))).unwrap();
    assert!(matches!(
        vmss::verify_consistency(&forged),
        Err(Error::MalformedBulletin { index: 2, .. })
    ));
}

#[test]
fn bulletin_text_roundtrip() {
    for params in [toy(), lambda32()] {
        let mut r = rng(18);
        let mut s = Session::new(&params, &config(Scheme::Scheme1, 2, 4, 2), &mut r).unwrap();
        let keys = fresh_keys(&params, s.bulletin.registry(), &mut r);
        if let Ok(keys) = keys {
            let (b, st) = vmss::add_participant(&s.bulletin, &s.state, "late", keys.public()).unwrap();
            s.bulletin = b;
            s.state = st;
        }
        s.bulletin = vmss::remove_secret(&s.bulletin, 1).unwrap();
        let text = s.bulletin.to_text();
        let back = Bulletin::parse(&text).unwrap();
        assert_eq!(back, s.bulletin);
        assert_eq!(back.to_text(), text);
        assert!(Bulletin::parse(&text.replace("items=", "items=1")).is_err());
        assert!(Bulletin::parse(&text[..text.len() - 1]).is_err());

        let state_text = s.state.to_text();
        let state = DealerState::parse(&state_text, &params).unwrap();
        assert_eq!(state, s.state);
        assert_eq!(state.to_text(), state_text);
    }
}

#[test]
fn key_and_share_files_roundtrip() {
    let params = toy();
    let s = Session::new(&params, &config(Scheme::Scheme1, 2, 3, 1), &mut rng(19)).unwrap();
    let p = &s.participants[0];
    let kf = KeyFile {
        id: p.id.clone(),
        keypair: p.keys.clone(),
    };
    let text = kf.to_text();
    assert_eq!(KeyFile::parse(&text, &params).unwrap(), kf);
    let other = s.participants[1].keys.public().to_canonical();
    let bad = text.replace(&format!("y={}", p.keys.public().to_canonical()), &format!("y={other}"));
    assert!(KeyFile::parse(&bad, &params).is_err());

    let share = s.share(1).unwrap();
    assert_eq!(RecoveryShare::parse(&share.to_text(), params.q()).unwrap(), share);
    assert!(RecoveryShare::parse("xtr-vmss share v1\nid=P1\nindex=0\nu=1\n", params.q()).is_err());
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

fn check_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing {}", path.display()));
    assert_eq!(actual, expected, "{name} differs; rerun with UPDATE_GOLDEN=1 after review");
}

#[test]
fn toy_bulletin_is_byte_stable() {
    let params = toy();
    let run = || {
        let mut r = rng(20);
        let (registry, _) = enroll(&params, 4, &mut r).unwrap();
        let secrets = vec![params.scalar(3), params.scalar(7)];
        let (b, _) = vmss::deal(&params, &config(Scheme::Scheme1, 2, 4, 2), &registry, &secrets, &mut r).unwrap();
        b.to_text()
    };
    let text = run();
    assert_eq!(text, run());
    check_golden("bulletin_toy.txt", &text);
}

#[test]
fn params_serialize_canonically() {
    let params: XtrParams = lambda32();
    let text = params.to_params_file();
    assert_eq!(XtrParams::parse_params_file(&text).unwrap(), params);
}

#[test]
fn composite_modulus_is_rejected_before_field_setup() {
    let params = toy();
    let s = Session::new(&params, &config(Scheme::Scheme1, 2, 3, 1), &mut rng(21)).unwrap();
    let text = s.bulletin.to_text().replace("\np=23\n", "\np=20\n");
    assert!(matches!(Bulletin::parse(&text), Err(Error::Parse { .. })));
    // Over Z/20 the field constructor must give up rather than spin.
    let m = xtr_vmss::gf::Modulus::new(20u32.into());
    let c = Gfp2::new(3u32.into(), 7u32.into(), &m);
    let _ = xtr_vmss::gf::SexticField::new(c);
}

#[test]
fn oversized_thresholds_and_indices_are_refused() {
    let params = lambda32();
    let s = Session::new(&params, &config(Scheme::Scheme2, 2, 3, 1), &mut rng(22)).unwrap();
    let text = s.bulletin.to_text();
    let huge_k = text.replace("threshold=2", "threshold=4000000000");
    assert!(Bulletin::parse(&huge_k).is_err());
    let tail = s.bulletin.tail()[1].0;
    let far = text.replace(&format!("tail={tail} "), "tail=1000000 ");
    assert!(Bulletin::parse(&far).is_err());
    let state = s.state.to_text();
    let n = s.state.next_index();
    let far = state.replace(&format!("next_index={n}"), "next_index=1000000");
    assert!(DealerState::parse(&far, &params).is_err());
    assert!(matches!(
        xtr_vmss::nlr::check_binomial_bound(4_000_000_000, params.q()),
        Err(Error::ConstraintViolation(_))
    ));
}
