#![no_main]

use fks_core::format::{emit, parse_document};
use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(doc) = parse_document(text) else { return };
    let canonical = emit(&doc);
    let again = parse_document(&canonical).expect("canonical output parses");
    assert_eq!(again, doc);
    assert_eq!(emit(&again), canonical);
});
