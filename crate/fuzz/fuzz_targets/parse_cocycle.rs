#![no_main]
use libfuzzer_sys::fuzz_target;
use triad::json;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = json::parse_cocycle(s, 3) {
        let out = json::cocycle_to_string(&c);
        let back = json::parse_cocycle(&out, 3).expect("own output parses");
        assert_eq!(json::cocycle_to_string(&back), out);
        let _ = c.check();
    }
});
