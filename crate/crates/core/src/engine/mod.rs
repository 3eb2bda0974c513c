//! Corrective execution: runs measurement programs on a register with one
//! ancilla, undoing every reported byproduct with repeat-until-success
//! Pauli correctors so the overall computation is deterministic.

mod log;
mod program;
mod register;

pub use log::{ExecutionLog, InstructionLog, MeasurementRecord, Role};
pub use program::{Instruction, MeasurementProgram, Policy, DEFAULT_MAX_ATTEMPTS};
pub use register::{correction_for, decompose, Correction, Register, X_CORRECTOR, Z_CORRECTOR};

use crate::quantum::{Pauli, PauliFrame, PauliString, QuantumError, StateVector};
use crate::schemes::{builtin_library, Family, Library, SchemeError};
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum EngineError {
    #[error("invalid program: {0}")]
    Program(String),
    #[error("instruction {index}: {message}")]
    BadInstruction { index: usize, message: String },
    #[error("input has {got} qubits but the program has {expected} wires")]
    InputSize { expected: usize, got: usize },
    #[error("`{scheme}` needs {ancillas} ancilla(s) and releases {released} qubit(s); exactly one of each is allowed")]
    AncillaClaim {
        scheme: String,
        ancillas: usize,
        released: usize,
    },
    #[error("`{scheme}` step {step} measures outside family {family}")]
    FamilyViolation {
        scheme: String,
        step: usize,
        family: Family,
    },
    #[error("corrector for {} on wire {wire} failed {attempts} times", .pauli.symbol())]
    Exhausted { wire: usize, pauli: Pauli, attempts: u32 },
    #[error(transparent)]
    Scheme(#[from] SchemeError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

/// An execution that stopped early, with everything logged up to the stop.
#[derive(Debug)]
pub struct ExecutionFailure {
    pub error: EngineError,
    pub log: ExecutionLog,
    /// Instruction that failed, when the failure happened while running one.
    pub instruction: Option<usize>,
}

impl std::fmt::Display for ExecutionFailure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.instruction {
            Some(i) => write!(f, "instruction {i}: {}", self.error),
            None => write!(f, "{}", self.error),
        }
    }
}

impl std::error::Error for ExecutionFailure {}

/// Runs `program` against the built-in library.
pub fn execute_program<R: Rng + ?Sized>(
    program: &MeasurementProgram,
    input: &StateVector,
    rng: &mut R,
) -> Result<(StateVector, ExecutionLog), Box<ExecutionFailure>> {
    execute_program_with(builtin_library(), program, input, rng)
}

/// Runs `program`. `input` holds one qubit per wire; the engine adds the
/// ancilla. The returned state has wire `i` on qubit `i`.
pub fn execute_program_with<R: Rng + ?Sized>(
    library: &Library,
    program: &MeasurementProgram,
    input: &StateVector,
    rng: &mut R,
) -> Result<(StateVector, ExecutionLog), Box<ExecutionFailure>> {
    let fail = |error: EngineError, log: ExecutionLog, instruction: Option<usize>| {
        Box::new(ExecutionFailure {
            error,
            log,
            instruction,
        })
    };
    let mut log = ExecutionLog {
        uncorrected: PauliFrame::new(program.wires()),
        ..ExecutionLog::default()
    };
    if input.n_qubits() != program.wires() {
        let e = EngineError::InputSize {
            expected: program.wires(),
            got: input.n_qubits(),
        };
        return Err(fail(e, log, None));
    }
    if let Err(e) = program.validate(library) {
        return Err(fail(e, log, None));
    }
    let mut register = match Register::new(input) {
        Ok(r) => r,
        Err(e) => return Err(fail(e, log, None)),
    };
    register.require_family(program.family());

    for (index, instr) in program.instructions().iter().enumerate() {
        let mut entry = InstructionLog {
            index,
            outcomes: Vec::new(),
            byproduct: PauliString::identity(),
            corrections: Vec::new(),
            measurements: Vec::new(),
        };
        let result = run_instruction(
            library,
            program,
            &mut register,
            instr,
            rng,
            &mut entry,
            &mut log.uncorrected,
        );
        log.instructions.push(entry);
        if let Err(e) = result {
            log.final_wire_map = register.wire_map().to_vec();
            log.ancilla = register.ancilla();
            return Err(fail(e, log, Some(index)));
        }
    }
    log.final_wire_map = register.wire_map().to_vec();
    log.ancilla = register.ancilla();
    match register.logical_state() {
        Ok(state) => Ok((state, log)),
        Err(e) => Err(fail(e, log, None)),
    }
}

fn run_instruction<R: Rng + ?Sized>(
    library: &Library,
    program: &MeasurementProgram,
    register: &mut Register,
    instr: &Instruction,
    rng: &mut R,
    entry: &mut InstructionLog,
    uncorrected: &mut PauliFrame,
) -> Result<(), EngineError> {
    let max_attempts = program.max_attempts();
    match instr {
        Instruction::Scheme { scheme, wires, policy } => {
            let scheme = library.get(scheme)?;
            let run = register.apply_scheme(scheme, wires, rng, &mut entry.measurements, Role::Main)?;
            entry.outcomes = run.outcomes.clone();
            entry.byproduct = run.byproduct.clone();
            match policy {
                Policy::Correct => {
                    for (wire, letters) in correction_for(&run.byproduct, wires) {
                        for letter in letters {
                            let c = register.correct_pauli(
                                library,
                                wire,
                                letter,
                                max_attempts,
                                rng,
                                &mut entry.measurements,
                            )?;
                            entry.corrections.push(c);
                        }
                    }
                }
                Policy::Ignore => {
                    for (q, p) in run.byproduct.letters() {
                        uncorrected.push(wires[q], p.has_x(), p.has_z());
                    }
                }
            }
        }
        Instruction::Pauli { letter, wire } => {
            let c = register.correct_pauli(library, *wire, *letter, max_attempts, rng, &mut entry.measurements)?;
            entry.corrections.push(c);
        }
    }
    Ok(())
}
