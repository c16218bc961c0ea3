//! Rational parser: must never panic, and accepted values must survive a
//! format/parse round trip.

#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_interp::text::{format_rat, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(r) = parse_rational(s) {
        let reparsed = parse_rational(&format_rat(&r)).expect("formatted rational reparses");
        assert_eq!(r, reparsed, "round trip must be stable");
    }
});
