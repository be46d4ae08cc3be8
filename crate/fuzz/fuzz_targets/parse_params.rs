#![no_main]

use libfuzzer_sys::fuzz_target;
use xtr_vmss::xtr::XtrParams;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(params) = XtrParams::parse_params_file(text) {
        let again = XtrParams::parse_params_file(&params.to_params_file()).unwrap();
        assert_eq!(again, params);
    }
});
