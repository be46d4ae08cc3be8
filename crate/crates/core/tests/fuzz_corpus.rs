//! Replays the checked-in fuzz corpus, plus deterministic truncations and
//! byte edits of every seed, through the same round-trip checks the fuzz
//! targets make.

use std::fs;
use std::path::PathBuf;

use xtr_vmss::gf::{Gfp, Gfp2, Gfp6};
use xtr_vmss::vmss::{self, Bulletin, DealerState, KeyFile, RecoveryShare, Registry};
use xtr_vmss::xtr::XtrParams;

fn corpus_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus")
}

fn toy() -> XtrParams {
    XtrParams::parse_params_file(&fs::read_to_string(corpus_dir().join("parse_params/toy")).unwrap()).unwrap()
}

fn check(target: &str, text: &str, params: &XtrParams) {
    match target {
        "parse_params" => {
            if let Ok(p) = XtrParams::parse_params_file(text) {
                assert_eq!(XtrParams::parse_params_file(&p.to_params_file()).unwrap(), p);
            }
        }
        "parse_bulletin" => {
            if let Ok(b) = Bulletin::parse(text) {
                assert_eq!(Bulletin::parse(&b.to_text()).unwrap(), b);
                let _ = vmss::verify_consistency(&b);
            }
        }
        "parse_registry" => {
            if let Ok(r) = Registry::parse(text, params.p()) {
                assert_eq!(Registry::parse(&r.to_text(params.p()), params.p()).unwrap(), r);
            }
        }
        "parse_key" => {
            if let Ok(k) = KeyFile::parse(text, params) {
                assert_eq!(KeyFile::parse(&k.to_text(), params).unwrap(), k);
            }
        }
        "parse_share" => {
            if let Ok(s) = RecoveryShare::parse(text, params.q()) {
                assert_eq!(RecoveryShare::parse(&s.to_text(), params.q()).unwrap(), s);
            }
        }
        "parse_dealer_state" => {
            if let Ok(s) = DealerState::parse(text, params) {
                assert_eq!(DealerState::parse(&s.to_text(), params).unwrap(), s);
            }
        }
        "parse_field_elements" => {
            if let Ok(a) = Gfp::parse_canonical(text, params.q(), 1) {
                assert_eq!(a.value().to_string(), text);
            }
            if let Ok(a) = Gfp2::parse_canonical(text, params.p(), 1) {
                assert_eq!(a.to_canonical(), text);
            }
            if let Ok(a) = Gfp6::parse_canonical(text, params.field(), 1) {
                assert_eq!(a.to_canonical(), text);
            }
        }
        other => panic!("no checks for corpus {other}"),
    }
}

fn variants(seed: &str) -> Vec<String> {
    let mut out = vec![seed.to_string()];
    let bytes = seed.as_bytes();
    let step = (bytes.len() / 40).max(1);
    for cut in (0..bytes.len()).step_by(step) {
        out.push(String::from_utf8_lossy(&bytes[..cut]).into_owned());
        for b in *b"09,=\n -" {
            let mut edited = bytes.to_vec();
            edited[cut] = b;
            out.push(String::from_utf8_lossy(&edited).into_owned());
        }
        let mut dup = bytes.to_vec();
        dup.insert(cut, bytes[cut]);
        out.push(String::from_utf8_lossy(&dup).into_owned());
    }
    out
}

#[test]
fn every_target_has_seeds() {
    for target in [
        "parse_params",
        "parse_bulletin",
        "parse_registry",
        "parse_key",
        "parse_share",
        "parse_dealer_state",
        "parse_field_elements",
    ] {
        let n = fs::read_dir(corpus_dir().join(target)).unwrap().count();
        assert!(n > 0, "{target} has no seeds");
    }
}

#[test]
fn seeds_and_edits_roundtrip() {
    let params = toy();
    for dir in fs::read_dir(corpus_dir()).unwrap() {
        let dir = dir.unwrap().path();
        let target = dir.file_name().unwrap().to_str().unwrap().to_string();
        for seed in fs::read_dir(&dir).unwrap() {
            let text = fs::read_to_string(seed.unwrap().path()).unwrap();
            for v in variants(&text) {
                check(&target, &v, &params);
            }
        }
    }
}

#[test]
fn seeds_parse() {
    let params = toy();
    let read = |p: &str| fs::read_to_string(corpus_dir().join(p)).unwrap();
    assert!(XtrParams::parse_params_file(&read("parse_params/lambda32")).is_ok());
    assert!(Bulletin::parse(&read("parse_bulletin/dealt")).is_ok());
    assert!(Bulletin::parse(&read("parse_bulletin/tombstone")).is_ok());
    assert_eq!(Registry::parse(&read("parse_registry/three"), params.p()).unwrap().len(), 3);
    assert!(KeyFile::parse(&read("parse_key/p1"), &params).is_ok());
    assert!(RecoveryShare::parse(&read("parse_share/p1"), params.q()).is_ok());
    assert!(DealerState::parse(&read("parse_dealer_state/dealt"), &params).is_ok());
    assert!(Gfp2::parse_canonical(&read("parse_field_elements/unreduced"), params.p(), 1).is_err());
}
