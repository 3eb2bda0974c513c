use crate::quantum::linalg::{gates, identity};
use crate::quantum::{CMatrix, Pauli, StateVector};
use std::fmt;

/// One generator applied to specific wires.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    /// `H·T` on a wire.
    HT(usize),
    /// A Pauli on a wire; `σ_y` is the generator, `σ_x`/`σ_z` appear when a
    /// circuit names them directly.
    Pauli(Pauli, usize),
    /// `ΛZ(Id⊗H)` with the Hadamard on the second wire.
    CZH(usize, usize),
}

impl Letter {
    pub fn matrix(&self) -> CMatrix {
        match self {
            Letter::HT(_) => gates::ht(),
            Letter::Pauli(p, _) => p.matrix(),
            Letter::CZH(..) => gates::czh(),
        }
    }

    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Letter::HT(w) | Letter::Pauli(_, w) => vec![w],
            Letter::CZH(a, b) => vec![a, b],
        }
    }

    /// Moves a single-wire letter to another wire.
    pub fn on_wire(self, wire: usize) -> Letter {
        match self {
            Letter::HT(_) => Letter::HT(wire),
            Letter::Pauli(p, _) => Letter::Pauli(p, wire),
            Letter::CZH(..) => self,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Letter::HT(w) => write!(f, "HT@{w}"),
            Letter::Pauli(p, w) => write!(f, "S{}@{w}", p.symbol()),
            Letter::CZH(a, b) => write!(f, "CZH@{a},{b}"),
        }
    }
}

/// Letters in application order: the first letter acts first.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GateWord {
    pub letters: Vec<Letter>,
}

impl GateWord {
    pub fn new() -> Self {
        GateWord::default()
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn push(&mut self, letter: Letter) {
        self.letters.push(letter);
    }

    pub fn extend(&mut self, other: &GateWord) {
        self.letters.extend_from_slice(&other.letters);
    }

    /// 2×2 product of a word whose letters all act on one wire.
    pub fn single_qubit_matrix(&self) -> CMatrix {
        self.letters.iter().fold(identity(2), |acc, l| {
            assert!(!matches!(l, Letter::CZH(..)), "two-qubit letter in a single-qubit word");
            l.matrix() * acc
        })
    }

    /// Applies the word to a register (wire `w` is qubit `w`).
    pub fn apply(&self, state: &mut StateVector) -> Result<(), crate::quantum::QuantumError> {
        for l in &self.letters {
            state.apply_unitary(&l.matrix(), &l.wires())?;
        }
        Ok(())
    }

    /// Space-separated letter names without wires, e.g. `HT HT SY`.
    pub fn compact(&self) -> String {
        self.letters
            .iter()
            .map(|l| match l {
                Letter::HT(_) => "HT".to_string(),
                Letter::Pauli(p, _) => format!("S{}", p.symbol()),
                Letter::CZH(..) => "CZH".to_string(),
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

impl fmt::Display for GateWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.letters.iter().map(|l| l.to_string()).collect();
        f.write_str(&parts.join(" "))
    }
}

/// `R_n(θ*)` up to phase, in application order.
pub const N_BLOCK: [Letter; 2] = [Letter::HT(0), Letter::HT(0)];
/// `R_m(θ*)` up to phase: the product `σ_y·HT·σ_y·HT`, applied right to left.
pub const M_BLOCK: [Letter; 4] = [
    Letter::HT(0),
    Letter::Pauli(Pauli::Y, 0),
    Letter::HT(0),
    Letter::Pauli(Pauli::Y, 0),
];
