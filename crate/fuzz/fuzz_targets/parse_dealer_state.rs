#![no_main]

use libfuzzer_sys::fuzz_target;
use xtr_vmss::vmss::DealerState;
use xtr_vmss::xtr::XtrParams;

const PARAMS: &str = include_str!("../corpus/parse_params/toy");

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let params = XtrParams::parse_params_file(PARAMS).unwrap();
    if let Ok(s) = DealerState::parse(text, &params) {
        assert_eq!(DealerState::parse(&s.to_text(), &params).unwrap(), s);
    }
});
