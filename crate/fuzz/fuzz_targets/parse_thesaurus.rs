#![no_main]

use libfuzzer_sys::fuzz_target;
use xsdmerge::Thesaurus;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(thesaurus) = Thesaurus::parse(text) {
        // every accepted pair must be symmetric
        for line in text.lines() {
            let line = line.strip_suffix('\r').unwrap_or(line);
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if let Some((a, b)) = line.split_once('\t') {
                assert!(thesaurus.lexical_synonym(a.trim(), b.trim()));
                assert!(thesaurus.lexical_synonym(b.trim(), a.trim()));
            }
        }
    }
});
