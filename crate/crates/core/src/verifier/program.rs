use crate::engine::{execute_program_with, EngineError, MeasurementProgram};
use crate::quantum::{CMatrix, SeedStream, StateVector, C64};
use crate::schemes::{builtin_library, Library};
use rayon::prelude::*;

/// Seeded statistics of a program against a reference unitary.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProgramStats {
    pub trials: usize,
    /// Runs that stopped because a corrector ran out of attempts.
    pub exhaustions: usize,
    /// Runs that stopped for any other reason.
    pub errors: usize,
    /// `max 1 − |⟨ref|out⟩|²` over completed runs.
    pub worst_infidelity: f64,
    /// `max min_φ ‖ref − e^{iφ} out‖` over completed runs.
    pub worst_deviation: f64,
    /// `max sqrt(1 − |⟨ref|out⟩|²)`, the trace distance of the pure states.
    pub worst_trace_distance: f64,
    pub mean_measurements: f64,
    pub max_measurements: usize,
    /// Mean attempts per corrector letter, over all correctors that ran.
    pub mean_attempts: f64,
    pub correctors: usize,
    pub first_error: Option<String>,
}

/// Applies a register-order matrix (qubit 0 least significant).
pub fn apply_reference(reference: &CMatrix, input: &StateVector) -> StateVector {
    let v = nalgebra::DVector::from_column_slice(input.amplitudes());
    let out = reference * v;
    StateVector::from_amplitudes(out.iter().copied().collect::<Vec<C64>>())
        .expect("reference unitary preserves the norm")
}

/// Runs the program on every computational basis state and then on Haar
/// random states up to `trials` inputs, each trial on its own substream.
///
/// `reference` acts on amplitudes in register order, wire 0 least
/// significant.
pub fn verify_program(program: &MeasurementProgram, reference: &CMatrix, trials: usize, seed: u64) -> ProgramStats {
    verify_program_with(builtin_library(), program, reference, trials, seed)
}

pub fn verify_program_with(
    library: &Library,
    program: &MeasurementProgram,
    reference: &CMatrix,
    trials: usize,
    seed: u64,
) -> ProgramStats {
    let dim = 1usize << program.wires();
    assert_eq!(reference.nrows(), dim, "reference dimension does not match the wires");
    let inputs = SeedStream::new(seed).split(0);
    let runs = SeedStream::new(seed).split(1);

    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let input = if i < dim {
                StateVector::new_register(program.wires(), i).expect("basis index in range")
            } else {
                StateVector::random(program.wires(), &mut inputs.substream(i as u64)).expect("register size")
            };
            let expected = apply_reference(reference, &input);
            let mut rng = runs.substream(i as u64);
            match execute_program_with(library, program, &input, &mut rng) {
                Ok((out, log)) => {
                    let overlap = expected.inner(&out).norm();
                    Trial::Done {
                        infidelity: (1.0 - overlap * overlap).max(0.0),
                        deviation: expected.distance_up_to_phase(&out),
                        measurements: log.total_measurements(),
                        attempts: log.corrector_attempts(),
                    }
                }
                Err(f) => Trial::Failed {
                    exhausted: matches!(f.error, EngineError::Exhausted { .. }),
                    message: f.to_string(),
                },
            }
        })
        .collect();

    let mut stats = ProgramStats {
        trials,
        ..ProgramStats::default()
    };
    let mut done = 0usize;
    let mut measurements = 0usize;
    let mut attempts = 0u64;
    for t in results {
        match t {
            Trial::Done {
                infidelity,
                deviation,
                measurements: m,
                attempts: a,
            } => {
                done += 1;
                stats.worst_infidelity = stats.worst_infidelity.max(infidelity);
                stats.worst_deviation = stats.worst_deviation.max(deviation);
                stats.worst_trace_distance = stats.worst_trace_distance.max(infidelity.sqrt());
                measurements += m;
                stats.max_measurements = stats.max_measurements.max(m);
                stats.correctors += a.len();
                attempts += a.iter().map(|&x| u64::from(x)).sum::<u64>();
            }
            Trial::Failed { exhausted, message } => {
                if exhausted {
                    stats.exhaustions += 1;
                } else {
                    stats.errors += 1;
                }
                stats.first_error.get_or_insert(message);
            }
        }
    }
    if done > 0 {
        stats.mean_measurements = measurements as f64 / done as f64;
    }
    if stats.correctors > 0 {
        stats.mean_attempts = attempts as f64 / stats.correctors as f64;
    }
    stats
}

enum Trial {
    Done {
        infidelity: f64,
        deviation: f64,
        measurements: usize,
        attempts: Vec<u32>,
    },
    Failed {
        exhausted: bool,
        message: String,
    },
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::Policy;
    use crate::quantum::linalg::{gates, identity};

    #[test]
    fn empty_program_matches_identity() {
        let stats = verify_program(&MeasurementProgram::new(2), &identity(4), 10, 1);
        assert_eq!(stats.exhaustions + stats.errors, 0);
        assert!(stats.worst_infidelity < 1e-12);
    }

    #[test]
    fn ht_program_matches() {
        let mut p = MeasurementProgram::new(1);
        p.push_scheme("ht_step", &[0], Policy::Correct);
        let stats = verify_program(&p, &gates::ht(), 50, 9);
        assert!(stats.worst_infidelity < 1e-9, "{stats:?}");
        assert!(stats.mean_measurements >= 3.0);
    }

    #[test]
    fn wrong_reference_is_visible() {
        let mut p = MeasurementProgram::new(1);
        p.push_scheme("ht_step", &[0], Policy::Correct);
        let stats = verify_program(&p, &gates::hadamard(), 20, 9);
        assert!(stats.worst_infidelity > 0.1);
    }
}
