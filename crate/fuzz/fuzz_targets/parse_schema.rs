#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(model) = xsdmerge::parse_schema(text, "fuzz") {
        // whatever parses must serialize, re-parse and come back equal
        let out = xsdmerge::serialize_schema(&model).expect("parsed models serialize");
        let again = xsdmerge::parse_schema(&out, "fuzz").expect("serializer output parses");
        assert!(again.structurally_equal(&model));
    }
});
