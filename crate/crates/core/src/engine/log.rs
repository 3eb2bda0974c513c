use super::register::Correction;
use crate::quantum::{Observable, Outcome, Pauli, PauliFrame, PauliString};
use std::fmt::Write;

/// Why a measurement happened.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Role {
    /// Part of the instruction's own scheme.
    Main,
    /// Attempt `attempt` of a corrector applying `pauli` to `wire`.
    Corrector { wire: usize, pauli: Pauli, attempt: u32 },
}

#[derive(Clone, Debug, PartialEq)]
pub struct MeasurementRecord {
    pub role: Role,
    pub scheme: String,
    /// 0-based step within the scheme.
    pub step: usize,
    /// Observable on physical qubits.
    pub observable: Observable,
    pub outcome: Outcome,
}

#[derive(Clone, Debug, PartialEq)]
pub struct InstructionLog {
    pub index: usize,
    /// Outcomes of the instruction's own scheme (empty for Pauli instructions).
    pub outcomes: Vec<Outcome>,
    /// Reported byproduct, with qubit `i` meaning the instruction's `i`-th wire.
    pub byproduct: PauliString,
    pub corrections: Vec<Correction>,
    pub measurements: Vec<MeasurementRecord>,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct ExecutionLog {
    pub instructions: Vec<InstructionLog>,
    /// Physical qubit of each wire at the end.
    pub final_wire_map: Vec<usize>,
    /// Physical qubit free at the end.
    pub ancilla: usize,
    /// Byproducts left in place by `ignore` instructions, XORed per wire
    /// without propagation through later gates.
    pub uncorrected: PauliFrame,
}

impl ExecutionLog {
    pub fn total_measurements(&self) -> usize {
        self.instructions.iter().map(|i| i.measurements.len()).sum()
    }

    /// Attempts of every corrector letter that ran, in order.
    pub fn corrector_attempts(&self) -> Vec<u32> {
        self.instructions
            .iter()
            .flat_map(|i| &i.corrections)
            .flat_map(|c| c.attempts.iter().map(|(_, a)| *a))
            .collect()
    }

    /// One line per measurement:
    /// `SEQ instr=I scheme=NAME step=J role=ROLE obs=LABEL support=P,Q outcome=B`.
    pub fn transcript(&self) -> String {
        let mut out = String::new();
        let mut seq = 0;
        for instr in &self.instructions {
            for m in &instr.measurements {
                let role = match m.role {
                    Role::Main => "main".to_string(),
                    Role::Corrector { wire, pauli, attempt } => {
                        format!("correct:{}:w{wire}:{attempt}", pauli.symbol())
                    }
                };
                let support: Vec<String> = m.observable.support().iter().map(|q| q.to_string()).collect();
                let _ = writeln!(
                    out,
                    "{seq} instr={} scheme={} step={} role={role} obs={} support={} outcome={}",
                    instr.index,
                    m.scheme,
                    m.step + 1,
                    m.observable.label(),
                    support.join(","),
                    m.outcome.bit()
                );
                seq += 1;
            }
        }
        out
    }
}
