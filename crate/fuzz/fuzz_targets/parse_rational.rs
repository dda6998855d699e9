#![no_main]
use libfuzzer_sys::fuzz_target;
use triad::json;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(q) = json::parse_rational(s) {
        let back = json::parse_rational(&q.to_string()).expect("display form parses");
        assert_eq!(back, q);
    }
});
