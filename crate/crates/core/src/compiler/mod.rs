//! Approximate universality over `{HT, σ_y, ΛZ(Id⊗H)}`: rotation algebra,
//! the irrational-angle power search, Euler decomposition about the two
//! fixed axes and circuit compilation to measurement programs.

mod circuit;
mod euler;
mod power;
mod rotation;
mod single;
mod target;
mod word;

pub use circuit::{
    circuit_unitary, compile_circuit, word_unitary, BlockRealization, BlockReport, Circuit, CompiledCircuit, Gate,
};
pub use euler::{euler_decompose, EulerAngles};
pub use power::{approx_power, exact_power, PowerFit, DEFAULT_K_MAX, EXACT_K, EXACT_TOL};
pub use rotation::{
    axis_angle_of, axis_m, axis_n, coaxial_distance, distance_up_to_phase, rotation_matrix, theta_star, AxisAngle,
    Rotation,
};
pub use single::{compile_single_qubit, ApproxReport, Stage, StageAxis};
pub use target::parse_target;
pub use word::{GateWord, Letter, M_BLOCK, N_BLOCK};

use crate::quantum::QuantumError;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum CompileError {
    #[error("expected a {expected}-dimensional operator, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("matrix is not unitary")]
    NotUnitary,
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("rotation axes are parallel")]
    ParallelAxes,
    #[error("target tilts the first axis by {tilt:.6} rad, beyond three-factor reach")]
    Unreachable { tilt: f64 },
    #[error("decomposition residual {residual:e}")]
    Decomposition { residual: f64 },
    #[error(
        "no k ≤ {k_max} brings R(θ*)^k within {epsilon:e} of angle {alpha}; best k = {best_k} at {best_distance:e}"
    )]
    PowerNotFound {
        alpha: f64,
        epsilon: f64,
        k_max: usize,
        best_k: usize,
        best_distance: f64,
    },
    #[error("stage {stage}: {source}")]
    Stage { stage: usize, source: Box<CompileError> },
    #[error("block `{gates}` on wire {wire}: {source}")]
    Gate {
        wire: usize,
        gates: String,
        source: Box<CompileError>,
    },
    #[error("{0}")]
    Circuit(String),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

impl CompileError {
    pub(crate) fn in_stage(self, stage: usize) -> CompileError {
        CompileError::Stage {
            stage,
            source: Box::new(self),
        }
    }

    /// True when the error comes from a power search running out of `k`.
    pub fn is_exhaustion(&self) -> bool {
        match self {
            CompileError::PowerNotFound { .. } => true,
            CompileError::Stage { source, .. } | CompileError::Gate { source, .. } => source.is_exhaustion(),
            _ => false,
        }
    }
}
