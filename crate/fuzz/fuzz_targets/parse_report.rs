#![no_main]

use libfuzzer_sys::fuzz_target;
use moonshine_engine::report::ReportDocument;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = ReportDocument::from_json(s) {
        let again = ReportDocument::from_json(&doc.to_json()).expect("serialized report parses");
        assert_eq!(doc, again);
    }
});
