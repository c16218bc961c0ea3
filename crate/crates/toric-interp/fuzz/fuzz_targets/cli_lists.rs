//! The comma-separated list decoders behind CLI flags: integers, points,
//! positive-integer lists, and weight/degree quadruples. None may panic on
//! arbitrary input; errors are the expected outcome.

#![no_main]

use libfuzzer_sys::fuzz_target;
use toric_interp::text::{
    format_point, parse_int, parse_point, parse_positive_int_list, parse_wpp,
};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    let _ = parse_int(s);
    let _ = parse_positive_int_list(s);
    let _ = parse_wpp(s);
    if let Ok(p) = parse_point(s) {
        let reparsed = parse_point(&format_point(&p)).expect("formatted point reparses");
        assert_eq!(p, reparsed, "round trip must be stable");
    }
});
