#![no_main]

use libfuzzer_sys::fuzz_target;
use moonshine_engine::virasoro::VirElement;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(e) = s.parse::<VirElement>() {
        let again: VirElement = e.to_string().parse().expect("display form parses");
        assert_eq!(e, again);
    }
});
