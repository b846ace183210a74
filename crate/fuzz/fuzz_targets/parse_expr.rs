//! Fuzzes the expression parser. Accepted input must survive a
//! render/re-parse round trip unchanged; everything else must fail with an
//! error, never a panic.

#![no_main]

use libfuzzer_sys::fuzz_target;
use moyal::PhasePoly;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(poly) = PhasePoly::parse(text) {
        let rendered = poly.render();
        let back = PhasePoly::parse(&rendered).expect("rendered form must re-parse");
        assert_eq!(poly, back, "round trip changed the polynomial");
    }
});
