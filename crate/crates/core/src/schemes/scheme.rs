use super::affine::AffineBit;
use super::SchemeError;
use crate::quantum::linalg::{gates, is_unitary};
use crate::quantum::{BlochAxis, CMatrix, Outcome, PauliString};
use std::fmt;

pub const MAX_ROLES: usize = 4;
pub const MAX_STEPS: usize = 16;
const AXIS_TOL: f64 = 1e-12;

/// Observable families a scheme may draw from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    /// `{Z⊗X, X, Z, (X−Y)/√2}`
    F1,
    /// `{Z⊗X, Z, (X−Y)/√2}`
    F2,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::F1 => "F1",
            Family::F2 => "F2",
        }
    }

    pub fn parse(name: &str) -> Option<Family> {
        match name {
            "F1" => Some(Family::F1),
            "F2" => Some(Family::F2),
            _ => None,
        }
    }

    /// Structural membership of a factor list. Two-qubit members are Z on
    /// one qubit and X on the other, in either support order.
    pub fn contains(self, factors: &[BlochAxis]) -> bool {
        let is = |a: &BlochAxis, b: BlochAxis| a.approx_eq(&b, AXIS_TOL);
        match factors {
            [single] => {
                is(single, BlochAxis::Z)
                    || is(single, BlochAxis::X_MINUS_Y)
                    || (self == Family::F1 && is(single, BlochAxis::X))
            }
            [p, q] => (is(p, BlochAxis::Z) && is(q, BlochAxis::X)) || (is(p, BlochAxis::X) && is(q, BlochAxis::Z)),
            _ => false,
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One measurement: factor `i` acts on role `roles[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementStep {
    pub factors: Vec<BlochAxis>,
    pub roles: Vec<usize>,
}

impl MeasurementStep {
    pub fn single(axis: BlochAxis, role: usize) -> Self {
        MeasurementStep {
            factors: vec![axis],
            roles: vec![role],
        }
    }

    pub fn pair(first: BlochAxis, r0: usize, second: BlochAxis, r1: usize) -> Self {
        MeasurementStep {
            factors: vec![first, second],
            roles: vec![r0, r1],
        }
    }

    pub fn touches(&self, role: usize) -> bool {
        self.roles.contains(&role)
    }

    pub fn factor_on(&self, role: usize) -> Option<BlochAxis> {
        self.roles.iter().position(|&r| r == role).map(|i| self.factors[i])
    }
}

/// What a scheme claims to do to its logical inputs.
#[derive(Clone, Debug, PartialEq)]
pub enum Target {
    /// A gate from [`gates::by_name`].
    Gate(String),
    Unitary(CMatrix),
    /// A measurement of `axis` on the single logical qubit, whose outcome
    /// bit is `outcome` evaluated on the step outcomes.
    Measure {
        axis: BlochAxis,
        outcome: AffineBit,
    },
}

impl Target {
    /// The target's matrix; for measurements, the projector selected by
    /// `outcomes`.
    pub fn matrix(&self, outcomes: &[Outcome]) -> CMatrix {
        match self {
            Target::Gate(name) => gates::by_name(name).expect("validated gate name"),
            Target::Unitary(m) => m.clone(),
            Target::Measure { axis, outcome } => {
                let branch = if outcome.eval(outcomes) {
                    Outcome::Minus
                } else {
                    Outcome::Plus
                };
                let v = nalgebra::DVector::from_vec(axis.eigenvector(branch).to_vec());
                &v * v.adjoint()
            }
        }
    }

    pub fn is_unitary(&self) -> bool {
        !matches!(self, Target::Measure { .. })
    }

    fn dim(&self) -> usize {
        match self {
            Target::Gate(name) => gates::by_name(name).map_or(0, |m| m.nrows()),
            Target::Unitary(m) => m.nrows(),
            Target::Measure { .. } => 2,
        }
    }
}

/// `X^x Z^z` on one logical output.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ByproductRule {
    pub x: AffineBit,
    pub z: AffineBit,
}

impl ByproductRule {
    pub const NONE: ByproductRule = ByproductRule {
        x: AffineBit::ZERO,
        z: AffineBit::ZERO,
    };

    pub fn new(x: AffineBit, z: AffineBit) -> Self {
        ByproductRule { x, z }
    }
}

/// A named sequence of measurements over symbolic roles together with the
/// operation it claims to implement.
///
/// Logical qubit `i` enters on role `inputs[i]` and leaves on role
/// `outputs[i]`. Roles that are not inputs are ancillas; roles that are not
/// outputs are left behind in a known eigenstate of their last single-qubit
/// measurement.
#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementScheme {
    pub(crate) name: String,
    pub(crate) family: Family,
    pub(crate) roles: Vec<String>,
    pub(crate) inputs: Vec<usize>,
    pub(crate) outputs: Vec<usize>,
    pub(crate) steps: Vec<MeasurementStep>,
    pub(crate) target: Target,
    pub(crate) byproduct: Vec<ByproductRule>,
    pub(crate) success: Option<AffineBit>,
}

/// Unvalidated parts of a scheme, keyed by role names.
#[derive(Clone, Debug)]
pub struct SchemeParts<'a> {
    pub name: &'a str,
    pub family: Family,
    pub roles: &'a [&'a str],
    /// `(input role, output role)` per logical qubit.
    pub relocation: &'a [(&'a str, &'a str)],
    /// `(factors, role names)` per step.
    pub steps: Vec<(Vec<BlochAxis>, Vec<&'a str>)>,
    pub target: Target,
    /// Byproduct per logical output, in relocation order.
    pub byproduct: Vec<ByproductRule>,
    pub success: Option<AffineBit>,
}

impl MeasurementScheme {
    pub fn from_parts(parts: SchemeParts<'_>) -> Result<Self, SchemeError> {
        let role_index = |name: &str| -> Result<usize, SchemeError> {
            parts
                .roles
                .iter()
                .position(|r| *r == name)
                .ok_or_else(|| SchemeError::UnknownRole(name.to_string()))
        };
        let steps = parts
            .steps
            .iter()
            .map(|(factors, roles)| {
                Ok(MeasurementStep {
                    factors: factors.clone(),
                    roles: roles.iter().map(|r| role_index(r)).collect::<Result<_, _>>()?,
                })
            })
            .collect::<Result<Vec<_>, SchemeError>>()?;
        let scheme = MeasurementScheme {
            name: parts.name.to_string(),
            family: parts.family,
            roles: parts.roles.iter().map(|r| r.to_string()).collect(),
            inputs: parts
                .relocation
                .iter()
                .map(|(i, _)| role_index(i))
                .collect::<Result<_, _>>()?,
            outputs: parts
                .relocation
                .iter()
                .map(|(_, o)| role_index(o))
                .collect::<Result<_, _>>()?,
            steps,
            target: parts.target,
            byproduct: parts.byproduct,
            success: parts.success,
        };
        scheme.validate()?;
        Ok(scheme)
    }

    fn validate(&self) -> Result<(), SchemeError> {
        let invalid = |msg: String| {
            Err(SchemeError::Invalid {
                scheme: self.name.clone(),
                message: msg,
            })
        };
        if self.name.is_empty() || !self.name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
            return invalid(format!("bad scheme name `{}`", self.name));
        }
        if self.roles.is_empty() || self.roles.len() > MAX_ROLES {
            return invalid(format!("{} roles (1..={MAX_ROLES} allowed)", self.roles.len()));
        }
        for (i, r) in self.roles.iter().enumerate() {
            if r.is_empty() || !r.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return invalid(format!("bad role name `{r}`"));
            }
            if self.roles[..i].contains(r) {
                return invalid(format!("role `{r}` declared twice"));
            }
        }
        if self.inputs.is_empty() {
            return invalid("no logical qubits".into());
        }
        if has_duplicates(&self.inputs) {
            return invalid("an input role is relocated twice".into());
        }
        if has_duplicates(&self.outputs) {
            return invalid("relocation is not injective".into());
        }
        if self.steps.is_empty() || self.steps.len() > MAX_STEPS {
            return invalid(format!("{} steps (1..={MAX_STEPS} allowed)", self.steps.len()));
        }
        for (i, step) in self.steps.iter().enumerate() {
            if step.factors.is_empty() || step.factors.len() > 2 || step.factors.len() != step.roles.len() {
                return invalid(format!("step {} has mismatched factors and roles", i + 1));
            }
            if has_duplicates(&step.roles) {
                return invalid(format!("step {} repeats a role", i + 1));
            }
        }
        // Every ancilla is initialized by a single-qubit measurement before
        // anything else touches it.
        for anc in self.ancillas() {
            match self.steps.iter().find(|s| s.touches(anc)) {
                Some(s) if s.roles.len() == 1 => {}
                _ => {
                    return invalid(format!(
                        "ancilla `{}` is not initialized by a single-qubit measurement",
                        self.roles[anc]
                    ))
                }
            }
        }
        for d in self.discarded() {
            if self.final_eigenstate_step(d).is_none() {
                return invalid(format!(
                    "discarded role `{}` does not end in a known single-qubit eigenstate",
                    self.roles[d]
                ));
            }
        }
        match &self.target {
            Target::Gate(name) if gates::by_name(name).is_none() => {
                return invalid(format!("unknown gate `{name}`"));
            }
            Target::Unitary(m) if !m.is_square() || !is_unitary(m, 1e-10) => {
                return invalid("target matrix is not unitary".into());
            }
            Target::Measure { outcome, .. } if outcome.max_label() > self.steps.len() => {
                return invalid("measurement outcome rule references a missing step".into());
            }
            _ => {}
        }
        if self.target.dim() != 1 << self.inputs.len() {
            return invalid(format!(
                "target acts on dimension {} but there are {} logical qubits",
                self.target.dim(),
                self.inputs.len()
            ));
        }
        if self.byproduct.len() != self.outputs.len() {
            return invalid("one byproduct rule per logical output is required".into());
        }
        let k = self.steps.len();
        if self
            .byproduct
            .iter()
            .any(|b| b.x.max_label() > k || b.z.max_label() > k)
            || self.success.is_some_and(|s| s.max_label() > k)
        {
            return invalid("a rule references a missing step".into());
        }
        Ok(())
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn roles(&self) -> &[String] {
        &self.roles
    }

    pub fn steps(&self) -> &[MeasurementStep] {
        &self.steps
    }

    pub fn target(&self) -> &Target {
        &self.target
    }

    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    pub fn byproduct_rules(&self) -> &[ByproductRule] {
        &self.byproduct
    }

    pub fn success_rule(&self) -> Option<AffineBit> {
        self.success
    }

    pub fn n_logical(&self) -> usize {
        self.inputs.len()
    }

    /// `(input role, output role)` names per logical qubit.
    pub fn relocation(&self) -> impl Iterator<Item = (&str, &str)> + '_ {
        self.inputs
            .iter()
            .zip(&self.outputs)
            .map(|(&i, &o)| (self.roles[i].as_str(), self.roles[o].as_str()))
    }

    /// Roles that carry no logical input.
    pub fn ancillas(&self) -> Vec<usize> {
        (0..self.roles.len()).filter(|r| !self.inputs.contains(r)).collect()
    }

    /// Roles that carry no logical output.
    pub fn discarded(&self) -> Vec<usize> {
        (0..self.roles.len()).filter(|r| !self.outputs.contains(r)).collect()
    }

    /// The step whose single-qubit observable fixes the final state of a
    /// discarded role: its last single-qubit measurement, provided every
    /// later step touching the role measures a commuting factor there.
    pub fn final_eigenstate_step(&self, role: usize) -> Option<usize> {
        let last_single = self
            .steps
            .iter()
            .rposition(|s| s.roles.len() == 1 && s.roles[0] == role)?;
        let axis = self.steps[last_single].factors[0];
        let commutes_after = self.steps[last_single + 1..]
            .iter()
            .filter_map(|s| s.factor_on(role))
            .all(|f| f.is_parallel(&axis, AXIS_TOL));
        commutes_after.then_some(last_single)
    }

    /// Evaluates the byproduct rule. Logical output `i` is qubit `i` of the
    /// returned string; each factor is `X^x Z^z`, phase included.
    pub fn byproduct_of(&self, outcomes: &[Outcome]) -> Result<PauliString, SchemeError> {
        self.check_outcomes(outcomes)?;
        Ok(PauliString::from_xz_bits(
            self.byproduct
                .iter()
                .enumerate()
                .map(|(i, r)| (i, r.x.eval(outcomes), r.z.eval(outcomes))),
        ))
    }

    /// Whether the branch realizes the target (always, without a success rule).
    pub fn succeeded(&self, outcomes: &[Outcome]) -> Result<bool, SchemeError> {
        self.check_outcomes(outcomes)?;
        Ok(self.success.is_none_or(|s| s.eval(outcomes)))
    }

    fn check_outcomes(&self, outcomes: &[Outcome]) -> Result<(), SchemeError> {
        if outcomes.len() != self.steps.len() {
            return Err(SchemeError::OutcomeCount {
                expected: self.steps.len(),
                got: outcomes.len(),
            });
        }
        Ok(())
    }

    /// Whether every step uses an observable of the declared family.
    pub fn within_family(&self) -> bool {
        self.steps.iter().all(|s| self.family.contains(&s.factors))
    }
}

fn has_duplicates(v: &[usize]) -> bool {
    v.iter().enumerate().any(|(i, x)| v[..i].contains(x))
}
