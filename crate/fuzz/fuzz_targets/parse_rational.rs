#![no_main]

use libfuzzer_sys::fuzz_target;
use moonshine_engine::rational::{format_rational, parse_rational};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(q) = parse_rational(s) {
        let again = parse_rational(&format_rational(&q)).expect("canonical form parses");
        assert_eq!(q, again);
    }
});
