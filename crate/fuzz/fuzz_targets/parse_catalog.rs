#![no_main]

use libfuzzer_sys::fuzz_target;
use quadknot::catalog::parse_catalog;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = parse_catalog(text) {
        for e in c.entries() {
            assert_eq!(c.get(&e.name).map(|x| x.crossings()), Some(e.crossings()));
        }
    }
});
