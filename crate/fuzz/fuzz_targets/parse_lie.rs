#![no_main]
use libfuzzer_sys::fuzz_target;
use triad::json;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(l) = json::parse_lie(s, 5) {
        let back = json::parse_lie(&json::lie_to_string(&l), 5).expect("own output parses");
        assert_eq!(back, l);
        let _ = l.check_filippov();
    }
});
