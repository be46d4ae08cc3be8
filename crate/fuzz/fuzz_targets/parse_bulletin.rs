#![no_main]

use libfuzzer_sys::fuzz_target;
use xtr_vmss::vmss::{self, Bulletin};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(b) = Bulletin::parse(text) {
        assert_eq!(Bulletin::parse(&b.to_text()).unwrap(), b);
        // Verification must reject or report, never panic.
        let _ = vmss::verify_consistency(&b);
    }
});
