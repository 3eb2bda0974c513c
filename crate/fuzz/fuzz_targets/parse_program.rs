#![no_main]

use libfuzzer_sys::fuzz_target;
use mbqc::engine::MeasurementProgram;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(p) = MeasurementProgram::parse(text) {
        let again = MeasurementProgram::parse(&p.serialize()).expect("serialized program parses");
        assert_eq!(again, p);
        let _ = p.validate(mbqc::schemes::builtin_library());
    }
});
