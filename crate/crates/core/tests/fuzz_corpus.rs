//! Replays the checked-in fuzz seeds through the same checks the fuzz
//! targets make, so the corpus is exercised on stable toolchains.

use mbqc::compiler::{parse_target, Circuit};
use mbqc::engine::MeasurementProgram;
use mbqc::quantum::linalg::is_unitary;
use mbqc::schemes::{parse_schemes, serialize_scheme};
use std::path::PathBuf;

fn seeds(target: &str) -> Vec<(PathBuf, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fuzz/corpus")
        .join(target);
    let mut out: Vec<_> = std::fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| e.unwrap().path())
        .map(|p| {
            let text = std::fs::read_to_string(&p).unwrap();
            (p, text)
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn scheme_seeds() {
    let mut parsed = 0;
    for (path, text) in seeds("parse_scheme") {
        if let Ok(schemes) = parse_schemes(&text) {
            parsed += 1;
            for s in &schemes {
                let again = parse_schemes(&serialize_scheme(s)).unwrap();
                assert_eq!(again.as_slice(), std::slice::from_ref(s), "{}", path.display());
            }
        }
    }
    assert!(parsed >= 9);
}

#[test]
fn program_seeds() {
    for (path, text) in seeds("parse_program") {
        if let Ok(p) = MeasurementProgram::parse(&text) {
            assert_eq!(
                MeasurementProgram::parse(&p.serialize()).unwrap(),
                p,
                "{}",
                path.display()
            );
        }
    }
}

#[test]
fn circuit_seeds() {
    for (path, text) in seeds("parse_circuit") {
        if let Ok(c) = Circuit::parse(&text) {
            assert_eq!(Circuit::parse(&c.serialize()).unwrap(), c, "{}", path.display());
        }
    }
}

#[test]
fn target_seeds() {
    for (path, text) in seeds("parse_target") {
        if let Ok(m) = parse_target(&text) {
            assert!(is_unitary(&m, 1e-6), "{}", path.display());
        }
    }
}

mod mutated {
    use super::*;
    use proptest::prelude::*;

    const TARGETS: [&str; 4] = ["parse_scheme", "parse_program", "parse_circuit", "parse_target"];

    /// Splices `insert` into a seed at `at`, replacing `cut` bytes, on char
    /// boundaries.
    fn splice(seed: &str, at: usize, cut: usize, insert: &str) -> String {
        let floor = |mut i: usize| {
            i = i.min(seed.len());
            while !seed.is_char_boundary(i) {
                i -= 1;
            }
            i
        };
        let a = floor(at);
        let b = floor(a + cut);
        format!("{}{insert}{}", &seed[..a], &seed[b..])
    }

    fn run(target: &str, text: &str) {
        match target {
            "parse_scheme" => {
                if let Ok(schemes) = parse_schemes(text) {
                    for s in &schemes {
                        assert_eq!(
                            parse_schemes(&serialize_scheme(s)).unwrap().as_slice(),
                            std::slice::from_ref(s)
                        );
                    }
                }
            }
            "parse_program" => {
                if let Ok(p) = MeasurementProgram::parse(text) {
                    assert_eq!(MeasurementProgram::parse(&p.serialize()).unwrap(), p);
                }
            }
            "parse_circuit" => {
                if let Ok(c) = Circuit::parse(text) {
                    assert_eq!(Circuit::parse(&c.serialize()).unwrap(), c);
                }
            }
            _ => {
                if let Ok(m) = parse_target(text) {
                    assert!(is_unitary(&m, 1e-6));
                }
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(2000))]

        #[test]
        fn mutated_seeds_never_panic(
            t in 0usize..4,
            pick in any::<usize>(),
            at in any::<usize>(),
            cut in 0usize..12,
            insert in "(\\PC|\n| |,|;|#|-|[0-9]|wires|scheme|step|end|CZ|HT|@|\\+s1){0,6}",
        ) {
            let seeds = seeds(TARGETS[t]);
            let (_, seed) = &seeds[pick % seeds.len()];
            let at = if seed.is_empty() { 0 } else { at % seed.len() };
            run(TARGETS[t], &splice(seed, at, cut, &insert));
        }
    }
}
