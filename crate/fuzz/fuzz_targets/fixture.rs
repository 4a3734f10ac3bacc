#![no_main]

use libfuzzer_sys::fuzz_target;
use poncelet_core::fixtures::Fixture;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(f) = Fixture::parse(text) {
        for k in f.indices() {
            assert!(f.expected(k).is_some(), "indexed center {k} has no kind");
        }
    }
});
