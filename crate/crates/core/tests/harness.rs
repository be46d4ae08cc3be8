mod common;

use std::path::PathBuf;

use xtr_vmss::harness::{
    coverage, coverage_matrix, interpolation_candidates, recursion_candidates, render_matrix,
    run_conspiracy, run_dealer_attack, run_participant_cheat, run_session, CheatMode, Detector,
    Mode, Session, TamperSpec, Target,
};
use xtr_vmss::vmss::{Scheme, SchemeConfig};

use common::{lambda32, rng, toy};

fn config(scheme: Scheme, k: usize, m: usize, l: usize) -> SchemeConfig {
    SchemeConfig::new(scheme, k, m, l).unwrap()
}

#[test]
fn identity_tamper_is_a_silent_control() {
    let params = toy();
    let c = config(Scheme::Scheme1, 2, 4, 2);
    for target in Target::ALL {
        for index in target.positions(&c) {
            let spec = TamperSpec { target, index, mode: Mode::Identity };
            let r = run_dealer_attack(&params, &c, &spec, &mut rng(index)).unwrap();
            assert!(!r.effective, "{}", r.name);
            assert!(!r.detected, "{}", r.to_text());
            assert_eq!(r.secrets_intact, Some(true));
        }
    }
}

#[test]
fn committed_tampers_are_caught() {
    let params = lambda32();
    for scheme in Scheme::ALL {
        let c = config(scheme, 2, 5, 2);
        for (target, index) in [
            (Target::E, 3),
            (Target::T, 1),
            (Target::InitSubshadow, 1),
            (Target::InitSubshadow, 2),
            (Target::MaskSubshadow, 4),
        ] {
            for mode in [Mode::Increment, Mode::Randomize] {
                let spec = TamperSpec { target, index, mode };
                let r = run_dealer_attack(&params, &c, &spec, &mut rng(index)).unwrap();
                assert_eq!(r.covered, Some(true));
                assert!(r.effective && r.detected, "{}", r.to_text());
            }
        }
    }
}

#[test]
fn e_tamper_is_seen_by_its_owner() {
    let params = lambda32();
    let c = config(Scheme::Scheme2, 3, 4, 1);
    let spec = TamperSpec { target: Target::E, index: 2, mode: Mode::Increment };
    let r = run_dealer_attack(&params, &c, &spec, &mut rng(30)).unwrap();
    assert_eq!(r.detected_by, vec![Detector::Participant(2)]);
}

#[test]
fn uncommitted_tampers_corrupt_silently() {
    let params = lambda32();
    let c = config(Scheme::Scheme1, 2, 4, 2);
    for (target, index) in [(Target::Z, 1), (Target::Tail, 2)] {
        let spec = TamperSpec { target, index, mode: Mode::Increment };
        let r = run_dealer_attack(&params, &c, &spec, &mut rng(31)).unwrap();
        assert_eq!(r.covered, Some(false));
        assert!(!r.detected);
        assert_eq!(r.secrets_intact, Some(false));
    }
}

#[test]
fn coverage_rules() {
    let c = config(Scheme::Scheme1, 2, 4, 2);
    let q = 13u32.into();
    assert!(coverage(&c, &q, Target::E, 1));
    assert!(!coverage(&c, &q, Target::Z, 1));
    assert!(coverage(&c, &q, Target::C, 1));
    // m = k leaves only instance 0, which cannot see c.
    let c = config(Scheme::Scheme1, 4, 4, 1);
    assert!(!coverage(&c, &q, Target::C, 1));
}

#[test]
fn participant_cheats_are_named() {
    let params = toy();
    let s = Session::new(&params, &config(Scheme::Scheme1, 2, 4, 2), &mut rng(32)).unwrap();
    let honest = run_participant_cheat(&s, 3, CheatMode::Honest).unwrap();
    assert!(!honest.detected);
    assert_eq!(honest.secrets_intact, Some(true));
    let inc = run_participant_cheat(&s, 3, CheatMode::Increment).unwrap();
    assert_eq!(inc.named, vec!["P3".to_string()]);
    let rel = run_participant_cheat(&s, 3, CheatMode::Relabel(4)).unwrap();
    assert_eq!(rel.named, vec!["P3".to_string()]);
    let con = run_conspiracy(&s, 1, 2).unwrap();
    assert_eq!(con.named, vec!["P2".to_string(), "P1".to_string()]);
    assert!(run_conspiracy(&s, 1, 1).is_err());
}

#[test]
fn report_text_is_deterministic() {
    let params = toy();
    let c = config(Scheme::Scheme2, 2, 4, 2);
    let spec = TamperSpec { target: Target::T, index: 2, mode: Mode::SwapWith(3) };
    let a = run_dealer_attack(&params, &c, &spec, &mut rng(33)).unwrap().to_text();
    let b = run_dealer_attack(&params, &c, &spec, &mut rng(33)).unwrap().to_text();
    assert_eq!(a, b);
    assert!(a.starts_with("scenario=dealer/T/2/swap-3\n"));
    assert_eq!(a.lines().count(), 10);
    assert!(TamperSpec { target: Target::T, index: 2, mode: Mode::SwapWith(2) }
        .validate(&c)
        .is_err());
    assert!(TamperSpec { target: Target::Z, index: 3, mode: Mode::Increment }
        .validate(&c)
        .is_err());
}

#[test]
fn honest_sessions_pass_at_toy_scale() {
    let params = toy();
    for scheme in Scheme::ALL {
        let r = run_session(&params, &config(scheme, 2, 4, 2), &mut rng(34)).unwrap();
        assert!(!r.detected, "{}", r.to_text());
    }
}

#[test]
fn honest_sessions_pass_at_32_bits() {
    let params = lambda32();
    for scheme in Scheme::ALL {
        let r = run_session(&params, &config(scheme, 3, 6, 3), &mut rng(35)).unwrap();
        assert!(!r.detected, "{}", r.to_text());
        assert!(r.checks_run.iter().any(|c| c == "change-threshold:stale-accepted=0"));
    }
}

#[test]
fn below_threshold_leaves_every_value_possible() {
    let params = toy();
    for scheme in Scheme::ALL {
        let s = Session::new(&params, &config(scheme, 3, 4, 1), &mut rng(36)).unwrap();
        let shares = vec![s.share(1).unwrap(), s.share(2).unwrap()];
        let cands = interpolation_candidates(&s.bulletin, &shares, 1).unwrap();
        assert_eq!(cands.len(), 13);
    }
}

/// Once c is public the recursion instances pin the missing point down.
#[test]
fn public_c_narrows_below_threshold_candidates() {
    let params = toy();
    let s = Session::new(&params, &config(Scheme::Scheme1, 3, 4, 1), &mut rng(37)).unwrap();
    let shares = vec![s.share(1).unwrap(), s.share(2).unwrap()];
    let cands = recursion_candidates(&s.bulletin, &shares, 1).unwrap();
    assert!(cands.len() < 13);
    assert!(cands.contains(&s.secrets[0]));
}

#[test]
fn coverage_matrix_is_stable() {
    let params = toy();
    let configs: Vec<SchemeConfig> = Scheme::ALL
        .into_iter()
        .flat_map(|s| [config(s, 2, 4, 2), config(s, 4, 4, 1)])
        .collect();
    let rows = coverage_matrix(&params, &configs, &mut rng(38)).unwrap();
    for (_, r) in &rows {
        if r.covered == Some(true) && r.effective {
            assert!(r.detected, "{}", r.to_text());
        }
    }
    let text = render_matrix(&rows);
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden/coverage_matrix.txt");
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, &text).unwrap();
    }
    assert_eq!(text, std::fs::read_to_string(&path).unwrap());
}
