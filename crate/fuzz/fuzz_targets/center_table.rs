#![no_main]

use libfuzzer_sys::fuzz_target;
use poncelet_core::centers::CenterTable;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(table) = CenterTable::parse(text) {
        for k in table.indices() {
            let spec = table.get(k).expect("listed index resolves");
            let _ = spec.weights([3.0, 4.0, 5.0]);
        }
    }
});
