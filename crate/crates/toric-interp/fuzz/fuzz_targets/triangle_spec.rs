//! Triangle spec parser: must never panic, and accepted specs must survive
//! a format/parse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_interp::text::{format_triangle, parse_triangle};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(t) = parse_triangle(s) {
        let reparsed = parse_triangle(&format_triangle(&t)).expect("formatted spec reparses");
        assert_eq!(t, reparsed, "round trip must be stable");
    }
});
