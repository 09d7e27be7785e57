#![no_main]

use std::sync::OnceLock;

use libfuzzer_sys::fuzz_target;
use xsdmerge::SchemaModel;

const SCHEMA: &str = include_str!("../../fixtures/s1.xsd");
static MODEL: OnceLock<SchemaModel> = OnceLock::new();

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    let model = MODEL.get_or_init(|| xsdmerge::parse_schema(SCHEMA, "s1").unwrap());
    let map = xsdmerge::resolve_idrefs(model, &[text]);
    // a failed document never contributes targets on its own
    if !map.failed_documents.is_empty() {
        assert!(map.is_empty());
    }
});
