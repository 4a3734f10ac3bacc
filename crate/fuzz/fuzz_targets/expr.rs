#![no_main]

use libfuzzer_sys::fuzz_target;
use poncelet_core::expr::parse_expr;

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else { return };
    if let Ok(e) = parse_expr(src) {
        let _ = e.eval(3.0, 4.0, 5.0);
        let _ = e.is_squared_rational();
        let _ = e.rotated().eval(1.0, 1.0, 1.0);
    }
});
