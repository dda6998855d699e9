#![no_main]
use libfuzzer_sys::fuzz_target;
use triad::json;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(dm) = json::parse_double_module(s, 3) {
        let back = json::parse_double_module(&json::module_to_string(&dm), 3).expect("own output parses");
        assert_eq!(back, dm);
        let _ = dm.check();
    }
});
