//! Certification: exhaustive branch proofs for schemes and seeded
//! statistical comparison of programs against reference unitaries.

mod program;
mod report;

pub use program::{apply_reference, verify_program, verify_program_with, ProgramStats};
pub use report::{format_report_structured, format_report_text};

use crate::quantum::linalg::{identity, max_abs_diff};
use crate::quantum::{CMatrix, Outcome, Pauli, PauliString, C64};
use crate::schemes::{enumerate_branches, MeasurementScheme, SchemeError};

/// Maximum entry deviation tolerated between a branch and its claim.
pub const PROPORTIONALITY_TOL: f64 = 1e-9;
/// Tolerance on `Σ K†K = I`.
pub const COMPLETENESS_TOL: f64 = 1e-10;
/// Tolerance on exact probability claims such as `1/2`.
pub const PROBABILITY_TOL: f64 = 1e-10;
/// Branches lighter than this carry no claim.
pub const ZERO_BRANCH: f64 = 1e-12;

/// `λ` with `A = λB` entrywise within `tol`, if one exists.
pub fn is_proportional(a: &CMatrix, b: &CMatrix, tol: f64) -> Option<C64> {
    if a.shape() != b.shape() {
        return None;
    }
    let (idx, pivot) = b
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))?;
    if pivot.norm() == 0.0 {
        return None;
    }
    let lambda = a.as_slice()[idx] / pivot;
    (max_abs_diff(a, &(b * lambda)) <= tol).then_some(lambda)
}

/// Which claim a branch is checked against.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BranchClaim {
    /// `pauli(byproduct) · target`
    Target,
    /// Identity, for a failed attempt of a probabilistic scheme.
    Failure,
    /// Zero operator; no claim.
    Null,
}

#[derive(Clone, Debug)]
pub struct BranchRecord {
    pub outcomes: Vec<Outcome>,
    pub claim: BranchClaim,
    pub probability: f64,
    /// Byproduct declared by the scheme's rule.
    pub declared: PauliString,
    /// Pauli found by search such that the branch is proportional to
    /// `P · target` (or `P` for failure branches).
    pub recovered: Option<PauliString>,
    /// Proportionality constant against the declared claim.
    pub factor: Option<C64>,
    pub deviation: f64,
    pub passed: bool,
}

impl BranchRecord {
    pub fn outcome_bits(&self) -> String {
        self.outcomes.iter().map(|o| char::from(b'0' + o.bit())).collect()
    }
}

#[derive(Clone, Debug)]
pub struct VerificationReport {
    pub scheme: String,
    pub branches: Vec<BranchRecord>,
    /// `max |Σ K†K − I|`.
    pub completeness_deviation: f64,
    /// Total generic probability of success branches, for probabilistic schemes.
    pub success_probability: Option<f64>,
    pub family_ok: bool,
    /// Exactly one ancilla enters and exactly one qubit is released.
    pub one_ancilla_ok: bool,
    pub max_deviation: f64,
    pub passed: bool,
    pub problems: Vec<String>,
}

impl VerificationReport {
    pub fn nonzero_branches(&self) -> usize {
        self.branches.iter().filter(|b| b.claim != BranchClaim::Null).count()
    }

    pub fn passing_branches(&self) -> usize {
        self.branches
            .iter()
            .filter(|b| b.claim != BranchClaim::Null && b.passed)
            .count()
    }

    pub fn summary(&self) -> String {
        let verdict = if self.passed { "pass" } else { "FAIL" };
        let mut s = format!(
            "{} {}: {}/{} branches, max deviation {:.3e}",
            self.scheme,
            verdict,
            self.passing_branches(),
            self.nonzero_branches(),
            self.max_deviation
        );
        for p in &self.problems {
            s.push_str("; ");
            s.push_str(p);
        }
        s
    }
}

/// Proves, branch by branch, that a scheme does what it declares.
pub fn verify_scheme(scheme: &MeasurementScheme) -> Result<VerificationReport, SchemeError> {
    let branches = enumerate_branches(scheme)?;
    let n = scheme.n_logical();
    let dim = 1usize << n;
    let mut problems = Vec::new();

    let mut records = Vec::with_capacity(branches.len());
    let mut completeness = CMatrix::zeros(dim, dim);
    let mut success_probability = 0.0;
    for branch in &branches {
        completeness += branch.operator.adjoint() * &branch.operator;
        let declared = scheme.byproduct_of(&branch.outcomes)?;
        let succeeded = scheme.succeeded(&branch.outcomes)?;
        if succeeded {
            success_probability += branch.generic_probability;
        }
        if branch.generic_probability < ZERO_BRANCH {
            records.push(BranchRecord {
                outcomes: branch.outcomes.clone(),
                claim: BranchClaim::Null,
                probability: branch.generic_probability,
                declared,
                recovered: None,
                factor: None,
                deviation: 0.0,
                passed: true,
            });
            continue;
        }
        let (claim, base) = if succeeded {
            (BranchClaim::Target, scheme.target().matrix(&branch.outcomes))
        } else {
            (BranchClaim::Failure, identity(dim))
        };
        let expected = declared.matrix(n) * &base;
        let factor = is_proportional(&branch.operator, &expected, PROPORTIONALITY_TOL);
        let deviation = match factor {
            Some(l) => max_abs_diff(&branch.operator, &(&expected * l)),
            None => best_deviation(&branch.operator, &expected),
        };
        records.push(BranchRecord {
            outcomes: branch.outcomes.clone(),
            claim,
            probability: branch.generic_probability,
            declared,
            recovered: recover_pauli(&branch.operator, &base, n),
            factor,
            deviation,
            passed: factor.is_some(),
        });
    }

    let completeness_deviation = max_abs_diff(&completeness, &identity(dim));
    if completeness_deviation > COMPLETENESS_TOL {
        problems.push(format!(
            "branches are incomplete (deviation {completeness_deviation:.3e})"
        ));
    }
    let failed = records.iter().filter(|r| !r.passed).count();
    if failed > 0 {
        problems.push(format!("{failed} branch(es) disagree with the declared byproduct"));
    }
    let success_probability = scheme.success_rule().map(|_| success_probability);
    if let Some(p) = success_probability {
        if (p - 0.5).abs() > PROBABILITY_TOL {
            problems.push(format!("success probability {p} is not 1/2"));
        }
    }
    let family_ok = scheme.within_family();
    if !family_ok {
        problems.push(format!("a step leaves family {}", scheme.family()));
    }
    let one_ancilla_ok = scheme.ancillas().len() == 1 && scheme.discarded().len() == 1;
    if !one_ancilla_ok {
        problems.push(format!(
            "{} ancilla(s) in, {} qubit(s) released; exactly one of each is required",
            scheme.ancillas().len(),
            scheme.discarded().len()
        ));
    }
    let max_deviation = records.iter().map(|r| r.deviation).fold(0.0, f64::max);
    Ok(VerificationReport {
        scheme: scheme.name().to_string(),
        branches: records,
        completeness_deviation,
        success_probability,
        family_ok,
        one_ancilla_ok,
        max_deviation,
        passed: problems.is_empty(),
        problems,
    })
}

/// The Pauli `P`, if any, with `operator ∝ P · base`.
fn recover_pauli(operator: &CMatrix, base: &CMatrix, n: usize) -> Option<PauliString> {
    const LETTERS: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    (0..4usize.pow(n as u32)).find_map(|code| {
        let p = PauliString::from_letters((0..n).map(|q| (q, LETTERS[(code >> (2 * q)) & 3])));
        let m = p.matrix(n) * base;
        is_proportional(operator, &m, PROPORTIONALITY_TOL).map(|_| p)
    })
}

/// Least-squares residual of `operator` against the span of `expected`.
fn best_deviation(operator: &CMatrix, expected: &CMatrix) -> f64 {
    let norm2: f64 = expected.iter().map(|x| x.norm_sqr()).sum();
    if norm2 == 0.0 {
        return operator.iter().map(|x| x.norm()).fold(0.0, f64::max);
    }
    let overlap: C64 = expected.iter().zip(operator.iter()).map(|(e, o)| e.conj() * o).sum();
    max_abs_diff(operator, &(expected * (overlap / norm2)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::gates;
    use crate::schemes::{Library, MeasurementScheme, SchemeParts, Target};

    #[test]
    fn proportionality() {
        let x = gates::pauli_x();
        let l = is_proportional(&(&x * C64::new(0.0, 2.0)), &x, 1e-12).unwrap();
        assert!((l - C64::new(0.0, 2.0)).norm() < 1e-12);
        assert!(is_proportional(&x, &gates::pauli_z(), 1e-9).is_none());
        assert!(is_proportional(&x, &CMatrix::zeros(2, 2), 1e-9).is_none());
    }

    #[test]
    fn every_definition_passes() {
        for s in Library::builtin_definitions() {
            let r = verify_scheme(&s).unwrap();
            assert!(r.passed, "{}", r.summary());
            assert!(r.completeness_deviation < COMPLETENESS_TOL);
        }
    }

    #[test]
    fn sigma_z_failure_branches_carry_half() {
        let s = Library::builtin_definitions()
            .into_iter()
            .find(|s| s.name() == "lemma2_sigma_z")
            .unwrap();
        let r = verify_scheme(&s).unwrap();
        let fail: f64 = r
            .branches
            .iter()
            .filter(|b| b.claim == BranchClaim::Failure)
            .map(|b| b.probability)
            .sum();
        assert!((fail - 0.5).abs() < 1e-12);
        for b in r.branches.iter().filter(|b| b.claim == BranchClaim::Failure) {
            assert!(b.recovered.as_ref().unwrap().is_identity_up_to_phase());
        }
    }

    #[test]
    fn wrong_target_is_rejected() {
        let s = MeasurementScheme::from_parts(SchemeParts {
            name: "wrong",
            family: crate::schemes::Family::F2,
            roles: &["a", "b"],
            relocation: &[("a", "b")],
            steps: vec![
                (vec![crate::quantum::BlochAxis::Z], vec!["b"]),
                (
                    vec![crate::quantum::BlochAxis::Z, crate::quantum::BlochAxis::X],
                    vec!["a", "b"],
                ),
                (vec![crate::quantum::BlochAxis::X_MINUS_Y], vec!["a"]),
            ],
            target: Target::Gate("H".into()),
            byproduct: vec![Default::default()],
            success: None,
        })
        .unwrap();
        let r = verify_scheme(&s).unwrap();
        assert!(!r.passed);
        assert!(r.max_deviation > 1e-3);
    }
}
