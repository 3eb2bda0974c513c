#![no_main]

use libfuzzer_sys::fuzz_target;
use mbqc::compiler::parse_target;
use mbqc::quantum::linalg::is_unitary;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(m) = parse_target(text) {
        assert!(is_unitary(&m, 1e-6));
    }
});
