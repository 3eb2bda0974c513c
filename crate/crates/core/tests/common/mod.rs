#![allow(dead_code)]

use mbqc::parse::ParseError;
use mbqc::quantum::{CMatrix, StateVector, C64};
use mbqc::schemes::{parse_scheme, serialize_scheme, MeasurementScheme};
use rand::Rng;

/// Haar-random 2×2 unitary: a Haar state as first column, completed to
/// SU(2), times a uniform phase.
pub fn haar_unitary<R: Rng + ?Sized>(rng: &mut R) -> CMatrix {
    let col = StateVector::random(1, rng).unwrap();
    let (a, b) = (col.amplitudes()[0], col.amplitudes()[1]);
    let phase = C64::from_polar(1.0, rng.random_range(0.0..std::f64::consts::TAU));
    CMatrix::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()]) * phase
}

/// One qubit in `psi` on qubit 0 and `|0⟩` on qubit 1.
pub fn with_ancilla(psi: &StateVector) -> StateVector {
    let zero = C64::new(0.0, 0.0);
    let a = psi.amplitudes();
    StateVector::from_amplitudes(vec![a[0], a[1], zero, zero]).unwrap()
}

/// Text-level mutations of a scheme; each variant breaks one claim. Some
/// are already refused when the scheme is built.
pub fn mutants(scheme: &MeasurementScheme) -> Vec<(String, Result<MeasurementScheme, ParseError>)> {
    let text = serialize_scheme(scheme);
    let lines: Vec<&str> = text.lines().collect();
    let rebuild = |f: &dyn Fn(usize, &str) -> Option<String>| -> String {
        let mut done = false;
        lines
            .iter()
            .enumerate()
            .map(|(i, l)| match (done, f(i, l)) {
                (false, Some(r)) => {
                    done = true;
                    r
                }
                _ => l.to_string(),
            })
            .collect::<Vec<_>>()
            .join("\n")
            + "\n"
    };
    let mut out = Vec::new();
    let target = rebuild(&|_, l| {
        l.starts_with("target ").then(|| {
            let replacement = match (scheme.n_logical(), l) {
                (2, "target gate CZ") => "CX",
                (2, _) => "CZ",
                (_, "target gate T") => "S",
                _ => "T",
            };
            format!("target gate {replacement}")
        })
    });
    out.push(("target".to_string(), target));
    let byproduct = rebuild(&|_, l| {
        l.starts_with("byproduct ").then(|| {
            let mut parts: Vec<String> = l.split_whitespace().map(str::to_string).collect();
            let z = parts.iter_mut().find(|p| p.starts_with("z=")).unwrap();
            z.push_str("+s1");
            parts.join(" ")
        })
    });
    out.push(("byproduct".to_string(), byproduct));
    // The last single-qubit step measured along y instead.
    let last_single = lines
        .iter()
        .rposition(|l| l.starts_with("step ") && l.split_whitespace().nth(2) == Some("@"));
    if let Some(idx) = last_single {
        let observable = rebuild(&|i, l| {
            (i == idx).then(|| {
                let role = l.split_whitespace().last().unwrap();
                format!("step 0,1,0 @ {role}")
            })
        });
        out.push(("observable".to_string(), observable));
    }
    out.into_iter().map(|(kind, t)| (kind, parse_scheme(&t))).collect()
}
