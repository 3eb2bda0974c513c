#![no_main]

use libfuzzer_sys::fuzz_target;
use mbqc::compiler::Circuit;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(c) = Circuit::parse(text) {
        let again = Circuit::parse(&c.serialize()).expect("serialized circuit parses");
        assert_eq!(again, c);
    }
});
