//! Dense statevector simulation: registers, local unitaries, projective
//! measurement of ±1 observables and the Pauli group.

pub mod linalg;
mod observable;
mod pauli;
mod rng;
mod state;

pub use linalg::{CMatrix, C64};
pub use observable::{BlochAxis, Observable, Outcome};
pub use pauli::{Pauli, PauliFrame, PauliString};
pub use rng::{SeedStream, SimRng};
pub(crate) use state::project_amplitudes;
pub use state::{Projection, StateVector, MAX_QUBITS, MIN_BRANCH_PROBABILITY};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum QuantumError {
    #[error("register size {0} is not supported")]
    RegisterSize(usize),
    #[error("basis index {index} out of range for dimension {dim}")]
    BasisIndex { index: usize, dim: usize },
    #[error("qubit {qubit} out of range for a {n_qubits}-qubit register")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },
    #[error("qubit {0} appears twice in a support list")]
    RepeatedQubit(usize),
    #[error("arity mismatch: {factors} factors or rows for {support} support qubits")]
    BadArity { factors: usize, support: usize },
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("state norm {0} is not 1")]
    NotNormalized(f64),
    #[error("({x}, {y}, {z}) is not a unit Bloch vector")]
    NotUnitAxis { x: f64, y: f64, z: f64 },
    #[error("outcome bit must be 0 or 1, got {0}")]
    BadOutcomeBit(u8),
    #[error("selected measurement branch has zero probability")]
    ZeroProbabilityBranch,
    #[error("qubit {0} is entangled with the rest of the register")]
    Entangled(usize),
}
