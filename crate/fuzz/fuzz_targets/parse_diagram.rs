#![no_main]

use libfuzzer_sys::fuzz_target;
use quadknot::parse_diagram;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(d) = parse_diagram(text) else { return };
    // Accepted diagrams are spherical and survive a round trip.
    assert_eq!(d.num_crossings() as i64 - d.num_edges() as i64 + d.faces().len() as i64, 2);
    let again = parse_diagram(&d.to_code()).expect("printed code parses");
    assert_eq!(again.to_code(), d.to_code());
});
