#![no_main]

use libfuzzer_sys::fuzz_target;
use xtr_vmss::vmss::RecoveryShare;
use xtr_vmss::xtr::XtrParams;

const PARAMS: &str = include_str!("../corpus/parse_params/toy");

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let params = XtrParams::parse_params_file(PARAMS).unwrap();
    if let Ok(s) = RecoveryShare::parse(text, params.q()) {
        assert_eq!(RecoveryShare::parse(&s.to_text(), params.q()).unwrap(), s);
    }
});
