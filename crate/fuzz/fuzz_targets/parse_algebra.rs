#![no_main]
use libfuzzer_sys::fuzz_target;
use triad::json;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    // Small limit keeps the checker cheap on accepted inputs.
    if let Ok(a) = json::parse_algebra(s, 4) {
        let out = json::algebra_to_string(&a);
        let back = json::parse_algebra(&out, 4).expect("own output parses");
        assert_eq!(back, a);
        let _ = a.check_semi_associative();
    }
});
