#![no_main]
use libfuzzer_sys::fuzz_target;
use triad::json;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(v) = json::parse_subspace(s, 8) {
        assert!(v.dim() <= v.ambient_dim());
        for b in v.basis_vectors() {
            assert!(v.contains(&b).unwrap());
        }
    }
});
