#![no_main]

use libfuzzer_sys::fuzz_target;
use quadknot::LaurentPoly;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(p) = text.parse::<LaurentPoly>() else { return };
    let back: LaurentPoly = p.to_string().parse().expect("printed polynomial parses");
    assert_eq!(back, p);
});
