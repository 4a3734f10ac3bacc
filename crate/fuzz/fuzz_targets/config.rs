#![no_main]

use libfuzzer_sys::fuzz_target;
use poncelet_cli::config::{parse_centers, parse_grid, ConfigPatch, RunConfig};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = ConfigPatch::parse(text) {
        let _ = RunConfig::from_patch(p);
    }
    let _ = parse_centers(text);
    let _ = parse_grid(text);
});
