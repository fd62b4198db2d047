#![no_main]

use fks_core::catalog::example;
use libfuzzer_sys::fuzz_target;

// Words are evaluated in HYPER4 so exponents exercise the full group law.
fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if fks_core::extension::parse_word(text).is_err() {
        return;
    }
    let data = example("HYPER4").unwrap().data;
    let gamma = data.group().unwrap();
    if let Ok(g) = gamma.word_normal_form(text) {
        assert!(gamma.multiply(&g, &gamma.inverse(&g)).is_identity());
    }
});
