use super::affine::AffineBit;
use super::scheme::{ByproductRule, Family, MeasurementScheme, SchemeParts, Target};
use super::SchemeError;
use crate::quantum::BlochAxis;
use crate::verifier::verify_scheme;
use std::sync::OnceLock;

const Z: BlochAxis = BlochAxis::Z;
const X: BlochAxis = BlochAxis::X;
const D: BlochAxis = BlochAxis::X_MINUS_Y;

/// Named collection of certified schemes.
#[derive(Clone, Debug)]
pub struct Library {
    schemes: Vec<MeasurementScheme>,
}

impl Library {
    /// Certifies every scheme with the branch verifier.
    pub fn new(schemes: Vec<MeasurementScheme>) -> Result<Self, SchemeError> {
        for (i, s) in schemes.iter().enumerate() {
            if schemes[..i].iter().any(|t| t.name() == s.name()) {
                return Err(SchemeError::Invalid {
                    scheme: s.name().to_string(),
                    message: "duplicate scheme name".into(),
                });
            }
            let report = verify_scheme(s)?;
            if !report.passed {
                return Err(SchemeError::Invalid {
                    scheme: s.name().to_string(),
                    message: format!("failed verification: {}", report.summary()),
                });
            }
        }
        Ok(Library { schemes })
    }

    pub fn get(&self, name: &str) -> Result<&MeasurementScheme, SchemeError> {
        self.schemes
            .iter()
            .find(|s| s.name() == name)
            .ok_or_else(|| SchemeError::UnknownScheme(name.to_string()))
    }

    pub fn schemes(&self) -> &[MeasurementScheme] {
        &self.schemes
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.schemes.iter().map(|s| s.name())
    }

    /// The uncertified built-in definitions, in library order.
    pub fn builtin_definitions() -> Vec<MeasurementScheme> {
        BUILDERS.iter().map(|build| build()).collect()
    }
}

/// The built-in library, certified on first use.
///
/// Panics if a built-in scheme fails verification: that is a defect in the
/// library itself, not a runtime condition.
pub fn builtin_library() -> &'static Library {
    static LIBRARY: OnceLock<Library> = OnceLock::new();
    LIBRARY.get_or_init(|| match Library::new(Library::builtin_definitions()) {
        Ok(lib) => lib,
        Err(e) => panic!("built-in scheme library is broken: {e}"),
    })
}

type Builder = fn() -> MeasurementScheme;

const BUILDERS: [Builder; 8] = [
    state_transfer,
    h_step,
    ht_step,
    lambda_z_h_step,
    lemma2_sigma_z,
    lemma3_sigma_x,
    x_measurement_sim,
    lambda_x_step,
];

fn s(labels: &[usize]) -> AffineBit {
    AffineBit::of(labels)
}

fn build(parts: SchemeParts<'_>) -> MeasurementScheme {
    let name = parts.name.to_string();
    MeasurementScheme::from_parts(parts).unwrap_or_else(|e| panic!("built-in `{name}` is malformed: {e}"))
}

/// Moves the state of `a` onto `b`. With a single `Z⊗X` measurement the
/// transfer necessarily carries a Hadamard.
fn state_transfer() -> MeasurementScheme {
    build(SchemeParts {
        name: "state_transfer",
        family: Family::F1,
        roles: &["a", "b"],
        relocation: &[("a", "b")],
        steps: vec![(vec![X], vec!["b"]), (vec![Z, X], vec!["b", "a"]), (vec![Z], vec!["a"])],
        target: Target::Gate("H".into()),
        byproduct: vec![ByproductRule::new(s(&[2]), s(&[1, 3]))],
        success: None,
    })
}

fn h_step() -> MeasurementScheme {
    build(SchemeParts {
        name: "h_step",
        family: Family::F1,
        roles: &["a", "b"],
        relocation: &[("a", "b")],
        steps: vec![(vec![Z], vec!["b"]), (vec![Z, X], vec!["a", "b"]), (vec![X], vec!["a"])],
        target: Target::Gate("H".into()),
        byproduct: vec![ByproductRule::new(s(&[1, 3]), s(&[2]))],
        success: None,
    })
}

fn ht_step() -> MeasurementScheme {
    build(SchemeParts {
        name: "ht_step",
        family: Family::F2,
        roles: &["a", "b"],
        relocation: &[("a", "b")],
        steps: vec![(vec![Z], vec!["b"]), (vec![Z, X], vec!["a", "b"]), (vec![D], vec!["a"])],
        target: Target::Gate("HT".into()),
        byproduct: vec![ByproductRule::new(s(&[1, 3]), s(&[2]))],
        success: None,
    })
}

/// `ΛZ(Id⊗H)` on `(a, b)`, leaving the result on `(a, c)`.
///
/// The byproduct on `a` is `Z^{s1+s3}`: the third measurement's outcome
/// enters the first wire's phase as well as the second wire's bit flip.
fn lambda_z_h_step() -> MeasurementScheme {
    build(SchemeParts {
        name: "lambda_z_h_step",
        family: Family::F2,
        roles: &["a", "b", "c"],
        relocation: &[("a", "a"), ("b", "c")],
        steps: vec![
            (vec![Z], vec!["c"]),
            (vec![Z, X], vec!["a", "c"]),
            (vec![Z, X], vec!["c", "b"]),
            (vec![Z], vec!["b"]),
        ],
        target: Target::Gate("CZH".into()),
        byproduct: vec![
            ByproductRule::new(AffineBit::ZERO, s(&[1, 3])),
            ByproductRule::new(s(&[3]), s(&[2, 4])),
        ],
        success: None,
    })
}

/// Applies `Z` to `b` exactly when `s1 ≠ s3`, identity otherwise.
fn lemma2_sigma_z() -> MeasurementScheme {
    build(SchemeParts {
        name: "lemma2_sigma_z",
        family: Family::F2,
        roles: &["a", "b"],
        relocation: &[("b", "b")],
        steps: vec![(vec![Z], vec!["a"]), (vec![Z, X], vec!["b", "a"]), (vec![Z], vec!["a"])],
        target: Target::Gate("Z".into()),
        byproduct: vec![ByproductRule::NONE],
        success: Some(s(&[1, 3])),
    })
}

/// Applies `X` to `b` exactly when `s1 ≠ s3`, identity otherwise.
fn lemma3_sigma_x() -> MeasurementScheme {
    build(SchemeParts {
        name: "lemma3_sigma_x",
        family: Family::F2,
        roles: &["a", "b"],
        relocation: &[("b", "b")],
        steps: vec![(vec![D], vec!["a"]), (vec![Z, X], vec!["a", "b"]), (vec![D], vec!["a"])],
        target: Target::Gate("X".into()),
        byproduct: vec![ByproductRule::NONE],
        success: Some(s(&[1, 3])),
    })
}

/// An `X` measurement of `b` whose outcome is `s1 ⊕ s2`.
fn x_measurement_sim() -> MeasurementScheme {
    build(SchemeParts {
        name: "x_measurement_sim",
        family: Family::F2,
        roles: &["a", "b"],
        relocation: &[("b", "b")],
        steps: vec![(vec![Z], vec!["a"]), (vec![Z, X], vec!["a", "b"])],
        target: Target::Measure {
            axis: X,
            outcome: s(&[1, 2]),
        },
        byproduct: vec![ByproductRule::NONE],
        success: None,
    })
}

/// `ΛX` with control `a` and target `b`, mediated by `c`.
fn lambda_x_step() -> MeasurementScheme {
    build(SchemeParts {
        name: "lambda_x_step",
        family: Family::F1,
        roles: &["a", "b", "c"],
        relocation: &[("a", "a"), ("b", "b")],
        steps: vec![
            (vec![Z], vec!["c"]),
            (vec![Z, X], vec!["a", "c"]),
            (vec![Z, X], vec!["c", "b"]),
            (vec![X], vec!["c"]),
        ],
        target: Target::Gate("CX".into()),
        byproduct: vec![
            ByproductRule::new(AffineBit::ZERO, s(&[1, 3])),
            ByproductRule::new(s(&[2, 4]), AffineBit::ZERO),
        ],
        success: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn library_loads_and_certifies() {
        let lib = builtin_library();
        assert_eq!(lib.schemes().len(), 8);
        for name in [
            "state_transfer",
            "h_step",
            "ht_step",
            "lambda_z_h_step",
            "lemma2_sigma_z",
            "lemma3_sigma_x",
            "x_measurement_sim",
            "lambda_x_step",
        ] {
            assert!(lib.get(name).is_ok(), "{name}");
        }
        assert!(matches!(lib.get("nope"), Err(SchemeError::UnknownScheme(_))));
    }

    #[test]
    fn f2_schemes_stay_in_family() {
        for s in builtin_library().schemes() {
            assert!(s.within_family(), "{}", s.name());
            if s.family() == Family::F2 {
                assert!(s.steps().iter().all(|st| Family::F2.contains(&st.factors)));
            }
        }
    }

    #[test]
    fn sigma_x_sequence() {
        let s = builtin_library().get("lemma3_sigma_x").unwrap();
        let factors: Vec<_> = s.steps().iter().map(|st| st.factors.clone()).collect();
        assert_eq!(factors, vec![vec![D], vec![Z, X], vec![D]]);
    }

    #[test]
    fn lambda_z_h_relocates_b_to_c() {
        let s = builtin_library().get("lambda_z_h_step").unwrap();
        let reloc: Vec<_> = s.relocation().collect();
        assert_eq!(reloc, vec![("a", "a"), ("b", "c")]);
        assert_eq!(s.ancillas().len(), 1);
    }

    #[test]
    fn duplicate_names_rejected() {
        let defs = vec![ht_step(), ht_step()];
        assert!(Library::new(defs).is_err());
    }
}
