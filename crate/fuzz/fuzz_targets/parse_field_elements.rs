#![no_main]

use libfuzzer_sys::fuzz_target;
use xtr_vmss::gf::{Gfp, Gfp2, Gfp6};
use xtr_vmss::xtr::XtrParams;

const PARAMS: &str = include_str!("../corpus/parse_params/toy");

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let params = XtrParams::parse_params_file(PARAMS).unwrap();
    if let Ok(a) = Gfp::parse_canonical(text, params.q(), 1) {
        assert_eq!(a.value().to_string(), text);
    }
    if let Ok(a) = Gfp2::parse_canonical(text, params.p(), 1) {
        assert_eq!(a.to_canonical(), text);
    }
    if let Ok(a) = Gfp6::parse_canonical(text, params.field(), 1) {
        assert_eq!(a.to_canonical(), text);
    }
});
