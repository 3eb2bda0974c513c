#![no_main]

use libfuzzer_sys::fuzz_target;
use mbqc::schemes::{parse_schemes, serialize_scheme};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(schemes) = parse_schemes(text) {
        for s in &schemes {
            let again = parse_schemes(&serialize_scheme(s)).expect("serialized scheme parses");
            assert_eq!(again.as_slice(), std::slice::from_ref(s));
        }
    }
});
