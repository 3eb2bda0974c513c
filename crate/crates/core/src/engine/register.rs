use super::log::{MeasurementRecord, Role};
use super::EngineError;
use crate::quantum::{Pauli, PauliString, StateVector};
use crate::schemes::{run_scheme, Binding, Family, Library, MeasurementScheme, SchemeRun};
use rand::Rng;

/// Name of the corrector that applies `Z` with probability 1/2.
pub const Z_CORRECTOR: &str = "lemma2_sigma_z";
/// Name of the corrector that applies `X` with probability 1/2.
pub const X_CORRECTOR: &str = "lemma3_sigma_x";

/// Logical wires on a physical register with exactly one free qubit.
///
/// Schemes move logical qubits between physical qubits; the register keeps
/// the wire → qubit map and the position of the single free ancilla so
/// callers only ever address wires.
#[derive(Clone, Debug)]
pub struct Register {
    state: StateVector,
    wire_map: Vec<usize>,
    ancilla: usize,
    family: Option<Family>,
}

/// Correctors run for one Pauli on one wire.
#[derive(Clone, Debug, PartialEq)]
pub struct Correction {
    pub wire: usize,
    pub pauli: Pauli,
    /// Attempts per corrector letter, in the order they ran.
    pub attempts: Vec<(Pauli, u32)>,
}

impl Correction {
    pub fn total_attempts(&self) -> u32 {
        self.attempts.iter().map(|(_, a)| a).sum()
    }
}

impl Register {
    /// Places the logical input on qubits `0..wires` and a fresh ancilla on
    /// qubit `wires`.
    pub fn new(input: &StateVector) -> Result<Self, EngineError> {
        let wires = input.n_qubits();
        let ancilla = StateVector::new_register(1, 0)?;
        Ok(Register {
            state: input.tensor(&ancilla),
            wire_map: (0..wires).collect(),
            ancilla: wires,
            family: None,
        })
    }

    /// Rejects any scheme that measures outside `family`.
    pub fn require_family(&mut self, family: Option<Family>) {
        self.family = family;
    }

    pub fn wires(&self) -> usize {
        self.wire_map.len()
    }

    pub fn physical(&self, wire: usize) -> usize {
        self.wire_map[wire]
    }

    pub fn wire_map(&self) -> &[usize] {
        &self.wire_map
    }

    pub fn ancilla(&self) -> usize {
        self.ancilla
    }

    pub fn state(&self) -> &StateVector {
        &self.state
    }

    /// The logical state, wire `i` as qubit `i`, with the ancilla removed.
    pub fn logical_state(&self) -> Result<StateVector, EngineError> {
        let reduced = self.state.remove_product_qubit(self.ancilla)?;
        let order: Vec<usize> = self
            .wire_map
            .iter()
            .map(|&p| if p > self.ancilla { p - 1 } else { p })
            .collect();
        Ok(reduced.permute(&order)?)
    }

    /// Runs a scheme with its logical qubits on `wires` and its ancilla on
    /// the free qubit, then updates the wire map.
    pub fn apply_scheme<R: Rng + ?Sized>(
        &mut self,
        scheme: &MeasurementScheme,
        wires: &[usize],
        rng: &mut R,
        sink: &mut Vec<MeasurementRecord>,
        role: Role,
    ) -> Result<SchemeRun, EngineError> {
        let ancillas = scheme.ancillas();
        let released = scheme.discarded();
        if ancillas.len() != 1 || released.len() != 1 {
            return Err(EngineError::AncillaClaim {
                scheme: scheme.name().to_string(),
                ancillas: ancillas.len(),
                released: released.len(),
            });
        }
        if let Some(family) = self.family {
            if let Some(step) = scheme.steps().iter().position(|s| !family.contains(&s.factors)) {
                return Err(EngineError::FamilyViolation {
                    scheme: scheme.name().to_string(),
                    step: step + 1,
                    family,
                });
            }
        }
        if wires.len() != scheme.n_logical() || wires.iter().any(|&w| w >= self.wires()) {
            return Err(EngineError::Program(format!(
                "`{}` cannot act on wires {wires:?}",
                scheme.name()
            )));
        }
        let mut physical = vec![usize::MAX; scheme.roles().len()];
        for (i, &role_idx) in scheme.inputs().iter().enumerate() {
            physical[role_idx] = self.wire_map[wires[i]];
        }
        physical[ancillas[0]] = self.ancilla;
        let binding = Binding::new(scheme, physical)?;
        let run = run_scheme(&mut self.state, scheme, &binding, rng)?;
        for rec in &run.records {
            sink.push(MeasurementRecord {
                role,
                scheme: scheme.name().to_string(),
                step: rec.step,
                observable: rec.observable.clone(),
                outcome: rec.outcome,
            });
        }
        for (i, &out_role) in scheme.outputs().iter().enumerate() {
            self.wire_map[wires[i]] = binding.qubit(out_role);
        }
        self.ancilla = binding.qubit(released[0]);
        Ok(run)
    }

    /// Applies `target` to `wire` by repeating probabilistic correctors
    /// until each succeeds. `Y` runs as `X` then `Z` (`ZX = iY`).
    pub fn correct_pauli<R: Rng + ?Sized>(
        &mut self,
        library: &Library,
        wire: usize,
        target: Pauli,
        max_attempts: u32,
        rng: &mut R,
        sink: &mut Vec<MeasurementRecord>,
    ) -> Result<Correction, EngineError> {
        let mut attempts = Vec::new();
        for letter in decompose(target) {
            let scheme = library.get(match letter {
                Pauli::X => X_CORRECTOR,
                _ => Z_CORRECTOR,
            })?;
            let mut n = 0;
            loop {
                if n == max_attempts {
                    return Err(EngineError::Exhausted {
                        wire,
                        pauli: letter,
                        attempts: n,
                    });
                }
                n += 1;
                let role = Role::Corrector {
                    wire,
                    pauli: letter,
                    attempt: n,
                };
                if self.apply_scheme(scheme, &[wire], rng, sink, role)?.success {
                    break;
                }
            }
            attempts.push((letter, n));
        }
        Ok(Correction {
            wire,
            pauli: target,
            attempts,
        })
    }
}

/// Corrector letters for one Pauli, in application order.
pub fn decompose(p: Pauli) -> Vec<Pauli> {
    match p {
        Pauli::I => vec![],
        Pauli::X => vec![Pauli::X],
        Pauli::Z => vec![Pauli::Z],
        Pauli::Y => vec![Pauli::X, Pauli::Z],
    }
}

/// Per-wire Paulis that undo a byproduct. Logical output `i` of the
/// byproduct sits on `wires[i]`; identity letters are dropped.
///
/// Undoing `X^x Z^z` means applying `Z^z X^x`, so within a wire `X` always
/// runs before `Z`.
pub fn correction_for(byproduct: &PauliString, wires: &[usize]) -> Vec<(usize, Vec<Pauli>)> {
    byproduct
        .letters()
        .filter(|(_, p)| *p != Pauli::I)
        .map(|(q, p)| (wires[q], decompose(p)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plans() {
        assert!(correction_for(&PauliString::identity(), &[0, 1]).is_empty());
        let zx = PauliString::from_letters([(0, Pauli::Z), (1, Pauli::X)]);
        assert_eq!(
            correction_for(&zx, &[0, 1]),
            vec![(0, vec![Pauli::Z]), (1, vec![Pauli::X])]
        );
        let y = PauliString::single(0, Pauli::Y);
        assert_eq!(correction_for(&y, &[3]), vec![(3, vec![Pauli::X, Pauli::Z])]);
    }
}
