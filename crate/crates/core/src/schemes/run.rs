use super::scheme::MeasurementScheme;
use super::SchemeError;
use crate::quantum::{Observable, Outcome, PauliString, StateVector};
use rand::Rng;

/// Physical qubit assigned to each role, in role order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Binding(Vec<usize>);

impl Binding {
    /// Binds roles by name; every role must be covered exactly once.
    pub fn from_pairs(scheme: &MeasurementScheme, pairs: &[(&str, usize)]) -> Result<Self, SchemeError> {
        let mut physical = vec![None; scheme.roles().len()];
        for &(name, q) in pairs {
            let idx = scheme
                .roles()
                .iter()
                .position(|r| r == name)
                .ok_or_else(|| SchemeError::UnknownRole(name.to_string()))?;
            if physical[idx].replace(q).is_some() {
                return Err(SchemeError::BindingCollision(format!("role `{name}` bound twice")));
            }
        }
        let physical = physical
            .into_iter()
            .enumerate()
            .map(|(i, q)| q.ok_or_else(|| SchemeError::UnboundRole(scheme.roles()[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Binding::new(scheme, physical)
    }

    pub fn new(scheme: &MeasurementScheme, physical: Vec<usize>) -> Result<Self, SchemeError> {
        if physical.len() != scheme.roles().len() {
            return Err(SchemeError::UnboundRole(format!(
                "{} roles but {} qubits",
                scheme.roles().len(),
                physical.len()
            )));
        }
        for (i, q) in physical.iter().enumerate() {
            if physical[..i].contains(q) {
                return Err(SchemeError::BindingCollision(format!("qubit {q} bound to two roles")));
            }
        }
        Ok(Binding(physical))
    }

    pub fn qubit(&self, role: usize) -> usize {
        self.0[role]
    }

    pub fn qubits(&self) -> &[usize] {
        &self.0
    }
}

/// One measurement as it happened on the register.
#[derive(Clone, Debug, PartialEq)]
pub struct StepRecord {
    pub step: usize,
    pub observable: Observable,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeRun {
    pub outcomes: Vec<Outcome>,
    /// Byproduct on the logical outputs (qubit `i` = logical output `i`).
    pub byproduct: PauliString,
    pub success: bool,
    pub records: Vec<StepRecord>,
}

impl SchemeRun {
    /// Outcomes as a bit string, first step first.
    pub fn outcome_bits(&self) -> String {
        self.outcomes.iter().map(|o| char::from(b'0' + o.bit())).collect()
    }
}

/// Measures the scheme's steps in order on the bound qubits.
///
/// After the call logical output `i` lives on `binding.qubit(outputs[i])`.
pub fn run_scheme<R: Rng + ?Sized>(
    state: &mut StateVector,
    scheme: &MeasurementScheme,
    binding: &Binding,
    rng: &mut R,
) -> Result<SchemeRun, SchemeError> {
    if let Some(&q) = binding.qubits().iter().find(|&&q| q >= state.n_qubits()) {
        return Err(SchemeError::BindingCollision(format!(
            "qubit {q} outside a {}-qubit register",
            state.n_qubits()
        )));
    }
    let mut outcomes = Vec::with_capacity(scheme.steps().len());
    let mut records = Vec::with_capacity(scheme.steps().len());
    for (i, step) in scheme.steps().iter().enumerate() {
        let support = step.roles.iter().map(|&r| binding.qubit(r)).collect();
        let observable = Observable::new(step.factors.clone(), support)?;
        let outcome = state.measure(&observable, rng)?;
        outcomes.push(outcome);
        records.push(StepRecord {
            step: i,
            observable,
            outcome,
        });
    }
    Ok(SchemeRun {
        byproduct: scheme.byproduct_of(&outcomes)?,
        success: scheme.succeeded(&outcomes)?,
        outcomes,
        records,
    })
}
