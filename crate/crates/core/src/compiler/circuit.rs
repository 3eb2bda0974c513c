//! Circuit input and compilation to measurement programs.
//!
//! One gate per line, `#` starts a comment:
//!
//! ```text
//! wires 2            # optional; defaults to the largest wire + 1
//! H 0
//! CZ 0 1
//! U 1 0.6,0 0,-0.8 0,-0.8 0.6,0
//! ```
//!
//! Single-qubit names: `H T S X Y Z HT`; `U w` takes four row-major complex
//! entries `re,im`. Two-qubit names: `CZ`, `CX` (control first) and `CZH`
//! (Hadamard on the second wire, then `CZ`).

use super::rotation::distance_up_to_phase;
use super::single::{compile_single_qubit, ApproxReport};
use super::word::{GateWord, Letter};
use super::CompileError;
use crate::engine::{MeasurementProgram, Policy};
use crate::parse::{format_complex, parse_complex, parse_usize, token_lines, ParseError};
use crate::quantum::linalg::{gates, identity, is_unitary};
use crate::quantum::{CMatrix, Pauli, StateVector, MAX_QUBITS};
use crate::schemes::Family;
use std::fmt::{self, Write};

#[derive(Clone, Debug, PartialEq)]
pub enum Gate {
    /// A named single-qubit gate (`H T S X Y Z HT`).
    Named(String, usize),
    Unitary(CMatrix, usize),
    CZ(usize, usize),
    CX(usize, usize),
    CZH(usize, usize),
}

const SINGLE_NAMES: [&str; 7] = ["H", "T", "S", "X", "Y", "Z", "HT"];

impl Gate {
    pub fn wires(&self) -> Vec<usize> {
        match *self {
            Gate::Named(_, w) | Gate::Unitary(_, w) => vec![w],
            Gate::CZ(a, b) | Gate::CX(a, b) | Gate::CZH(a, b) => vec![a, b],
        }
    }

    pub fn matrix(&self) -> CMatrix {
        match self {
            Gate::Named(name, _) => gates::by_name(name).expect("validated name"),
            Gate::Unitary(m, _) => m.clone(),
            Gate::CZ(..) => gates::cz(),
            Gate::CX(..) => gates::cx(),
            Gate::CZH(..) => gates::czh(),
        }
    }

    /// The letter realizing this gate exactly, when there is one.
    fn exact_letter(&self) -> Option<Letter> {
        match self {
            Gate::Named(name, w) => match name.as_str() {
                "HT" => Some(Letter::HT(*w)),
                "X" => Some(Letter::Pauli(Pauli::X, *w)),
                "Y" => Some(Letter::Pauli(Pauli::Y, *w)),
                "Z" => Some(Letter::Pauli(Pauli::Z, *w)),
                _ => None,
            },
            _ => None,
        }
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Gate::Named(name, w) => write!(f, "{name} {w}"),
            Gate::Unitary(m, w) => {
                write!(f, "U {w}")?;
                for r in 0..2 {
                    for c in 0..2 {
                        write!(f, " {}", format_complex(m[(r, c)]))?;
                    }
                }
                Ok(())
            }
            Gate::CZ(a, b) => write!(f, "CZ {a} {b}"),
            Gate::CX(a, b) => write!(f, "CX {a} {b}"),
            Gate::CZH(a, b) => write!(f, "CZH {a} {b}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    pub wires: usize,
    pub gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(wires: usize) -> Self {
        Circuit {
            wires,
            gates: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut declared = None;
        let mut gates = Vec::new();
        for (line, tokens) in token_lines(text) {
            let err = |m: String| ParseError::new(line, m);
            let wire = |t: &str| -> Result<usize, ParseError> {
                let w = parse_usize(t).map_err(err)?;
                // One simulator qubit stays free for the ancilla.
                if w >= MAX_QUBITS - 1 {
                    return Err(err(format!("wire {w} exceeds the simulator limit")));
                }
                Ok(w)
            };
            let gate = match tokens.as_slice() {
                ["wires", n] => {
                    if declared.replace(parse_usize(n).map_err(err)?).is_some() {
                        return Err(err("`wires` given twice".into()));
                    }
                    continue;
                }
                [name, w] if SINGLE_NAMES.contains(name) => Gate::Named(name.to_string(), wire(w)?),
                ["U", w, entries @ ..] => {
                    if entries.len() != 4 {
                        return Err(err("`U` takes a wire and four entries `re,im`".into()));
                    }
                    let vals = entries
                        .iter()
                        .map(|e| parse_complex(e))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(err)?;
                    let m = CMatrix::from_row_slice(2, 2, &vals);
                    if !is_unitary(&m, 1e-10) {
                        return Err(err("matrix is not unitary".into()));
                    }
                    Gate::Unitary(m, wire(w)?)
                }
                [name @ ("CZ" | "CX" | "CZH"), a, b] => {
                    let (a, b) = (wire(a)?, wire(b)?);
                    if a == b {
                        return Err(err(format!("`{name}` needs two distinct wires")));
                    }
                    match *name {
                        "CZ" => Gate::CZ(a, b),
                        "CX" => Gate::CX(a, b),
                        _ => Gate::CZH(a, b),
                    }
                }
                _ => return Err(err(format!("unrecognized gate line `{}`", tokens.join(" ")))),
            };
            gates.push(gate);
        }
        let used = gates.iter().flat_map(|g| g.wires()).max().map_or(0, |w| w + 1);
        let wires = match declared {
            Some(n) if n < used => {
                return Err(ParseError::new(0, format!("`wires {n}` but wire {} is used", used - 1)))
            }
            Some(n) if n > MAX_QUBITS - 1 => return Err(ParseError::new(0, format!("{n} wires exceed the limit"))),
            Some(n) => n,
            None => used,
        };
        Ok(Circuit { wires, gates })
    }

    pub fn serialize(&self) -> String {
        let mut out = format!("wires {}\n", self.wires);
        for g in &self.gates {
            let _ = writeln!(out, "{g}");
        }
        out
    }

    pub fn apply(&self, state: &mut StateVector) -> Result<(), crate::quantum::QuantumError> {
        for g in &self.gates {
            state.apply_unitary(&g.matrix(), &g.wires())?;
        }
        Ok(())
    }
}

/// The circuit's unitary in register order (wire 0 least significant).
pub fn circuit_unitary(circuit: &Circuit) -> Result<CMatrix, CompileError> {
    register_matrix(circuit.wires, |s| circuit.apply(s))
}

/// A word's unitary in register order.
pub fn word_unitary(word: &GateWord, wires: usize) -> Result<CMatrix, CompileError> {
    register_matrix(wires, |s| word.apply(s))
}

fn register_matrix(
    wires: usize,
    apply: impl Fn(&mut StateVector) -> Result<(), crate::quantum::QuantumError>,
) -> Result<CMatrix, CompileError> {
    let dim = 1usize << wires;
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut s = StateVector::new_register(wires, col)?;
        apply(&mut s)?;
        for (row, a) in s.amplitudes().iter().enumerate() {
            m[(row, col)] = *a;
        }
    }
    Ok(m)
}

/// How one single-qubit block was realized.
#[derive(Clone, Debug, PartialEq)]
pub enum BlockRealization {
    /// The block multiplies to a phase; nothing is emitted.
    Identity,
    /// Emitted letter for letter.
    Exact,
    Approximated(Box<ApproxReport>),
}

#[derive(Clone, Debug, PartialEq)]
pub struct BlockReport {
    pub wire: usize,
    /// Source gates merged into the block.
    pub gates: Vec<String>,
    pub realization: BlockRealization,
    pub letters: usize,
    pub distance: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompiledCircuit {
    pub program: MeasurementProgram,
    pub word: GateWord,
    pub blocks: Vec<BlockReport>,
    pub epsilon: f64,
    /// Budget given to each approximated block.
    pub block_budget: f64,
    /// Sum of block distances, an upper bound on the circuit error.
    pub error_bound: f64,
}

impl CompiledCircuit {
    /// Per-block table as `key=value` lines.
    pub fn report_structured(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "compile wires={} epsilon={} blocks={} block_budget={:e} error_bound={:e} letters={} instructions={}",
            self.program.wires(),
            self.epsilon,
            self.blocks.len(),
            self.block_budget,
            self.error_bound,
            self.word.len(),
            self.program.instructions().len()
        );
        for (i, b) in self.blocks.iter().enumerate() {
            let (mode, ks) = match &b.realization {
                BlockRealization::Identity => ("identity", "-".to_string()),
                BlockRealization::Exact => ("exact", "-".to_string()),
                BlockRealization::Approximated(r) => (
                    "approx",
                    r.exponents()
                        .iter()
                        .map(|k| k.to_string())
                        .collect::<Vec<_>>()
                        .join(","),
                ),
            };
            let _ = writeln!(
                out,
                "block index={} wire={} gates={} mode={mode} k={ks} letters={} distance={:e}",
                i,
                b.wire,
                b.gates.join(","),
                b.letters,
                b.distance
            );
        }
        out
    }

    pub fn report_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "{} wire(s), {} block(s), {} letter(s), {} instruction(s); error bound {:.3e} (epsilon {})",
            self.program.wires(),
            self.blocks.len(),
            self.word.len(),
            self.program.instructions().len(),
            self.error_bound,
            self.epsilon
        );
        let _ = writeln!(
            out,
            "  {:<5} {:<4} {:<24} {:<8} {:>8} {:>12}",
            "block", "wire", "gates", "mode", "letters", "distance"
        );
        for (i, b) in self.blocks.iter().enumerate() {
            let mode = match b.realization {
                BlockRealization::Identity => "identity",
                BlockRealization::Exact => "exact",
                BlockRealization::Approximated(_) => "approx",
            };
            let _ = writeln!(
                out,
                "  {:<5} {:<4} {:<24} {:<8} {:>8} {:>12.3e}",
                i,
                b.wire,
                b.gates.join(" "),
                mode,
                b.letters,
                b.distance
            );
        }
        out
    }
}

/// Pending single-qubit gates on one wire.
#[derive(Clone, Debug, Default)]
struct Pending {
    gates: Vec<(String, CMatrix, Option<Letter>)>,
}

enum Segment {
    Block {
        wire: usize,
        gates: Vec<(String, CMatrix, Option<Letter>)>,
    },
    Czh(usize, usize),
}

/// Rewrites a circuit over `{HT, σ_y, ΛZ(Id⊗H)}` and emits the program.
///
/// `ΛZ = ΛZ(Id⊗H)·(Id⊗H)` and `ΛX = (Id⊗H)·ΛZ(Id⊗H)`: the extra Hadamards
/// join the neighbouring single-qubit gates, and every maximal run of
/// single-qubit gates on a wire becomes one block. Blocks made only of
/// `HT` and Paulis are emitted exactly; the rest share `ε` equally.
pub fn compile_circuit(circuit: &Circuit, epsilon: f64, k_max: usize) -> Result<CompiledCircuit, CompileError> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(CompileError::BadEpsilon(epsilon));
    }
    let hadamard = || ("H".to_string(), gates::hadamard(), None);
    let mut pending = vec![Pending::default(); circuit.wires];
    let mut segments = Vec::new();
    let flush = |pending: &mut Vec<Pending>, segments: &mut Vec<Segment>, w: usize| {
        let gates = std::mem::take(&mut pending[w].gates);
        if !gates.is_empty() {
            segments.push(Segment::Block { wire: w, gates });
        }
    };
    for g in &circuit.gates {
        if g.wires().iter().any(|&w| w >= circuit.wires) {
            return Err(CompileError::Circuit(format!(
                "gate `{g}` addresses a wire outside the circuit"
            )));
        }
        match *g {
            Gate::Named(ref name, w) => pending[w].gates.push((name.clone(), g.matrix(), g.exact_letter())),
            Gate::Unitary(ref m, w) => pending[w].gates.push(("U".into(), m.clone(), None)),
            Gate::CZ(a, b) => {
                pending[b].gates.push(hadamard());
                flush(&mut pending, &mut segments, a);
                flush(&mut pending, &mut segments, b);
                segments.push(Segment::Czh(a, b));
            }
            Gate::CX(a, b) => {
                flush(&mut pending, &mut segments, a);
                flush(&mut pending, &mut segments, b);
                segments.push(Segment::Czh(a, b));
                pending[b].gates.push(hadamard());
            }
            Gate::CZH(a, b) => {
                flush(&mut pending, &mut segments, a);
                flush(&mut pending, &mut segments, b);
                segments.push(Segment::Czh(a, b));
            }
        }
    }
    for w in 0..circuit.wires {
        flush(&mut pending, &mut segments, w);
    }

    // Classify blocks, then split the budget over the approximated ones.
    let classify = |gates: &[(String, CMatrix, Option<Letter>)]| -> Result<(CMatrix, u8), CompileError> {
        let m = gates.iter().fold(identity(2), |acc, (_, g, _)| g * acc);
        let kind = if distance_up_to_phase(&m, &identity(2))? < 1e-12 {
            0
        } else if gates.iter().all(|(_, _, l)| l.is_some()) {
            1
        } else {
            2
        };
        Ok((m, kind))
    };
    let mut approximated = 0usize;
    for s in &segments {
        if let Segment::Block { gates, .. } = s {
            if classify(gates)?.1 == 2 {
                approximated += 1;
            }
        }
    }
    let block_budget = if approximated == 0 {
        epsilon
    } else {
        epsilon / approximated as f64
    };

    let mut word = GateWord::new();
    let mut blocks = Vec::new();
    for s in segments {
        match s {
            Segment::Czh(a, b) => word.push(Letter::CZH(a, b)),
            Segment::Block { wire, gates } => {
                let (m, kind) = classify(&gates)?;
                let names: Vec<String> = gates.iter().map(|(n, _, _)| n.clone()).collect();
                let (realization, letters) = match kind {
                    0 => (BlockRealization::Identity, GateWord::new()),
                    1 => (
                        BlockRealization::Exact,
                        GateWord {
                            letters: gates.iter().map(|(_, _, l)| l.expect("exact block")).collect(),
                        },
                    ),
                    _ => {
                        let report = compile_single_qubit(&m, block_budget, k_max).map_err(|e| CompileError::Gate {
                            wire,
                            gates: names.join(" "),
                            source: Box::new(e),
                        })?;
                        let letters = GateWord {
                            letters: report.word.letters.iter().map(|l| l.on_wire(wire)).collect(),
                        };
                        (BlockRealization::Approximated(Box::new(report)), letters)
                    }
                };
                let local = GateWord {
                    letters: letters.letters.iter().map(|l| l.on_wire(0)).collect(),
                };
                let distance = distance_up_to_phase(&m, &local.single_qubit_matrix())?;
                blocks.push(BlockReport {
                    wire,
                    gates: names,
                    realization,
                    letters: letters.len(),
                    distance,
                });
                word.extend(&letters);
            }
        }
    }

    let mut program = MeasurementProgram::new(circuit.wires).with_family(Family::F2);
    for l in &word.letters {
        match *l {
            Letter::HT(w) => program.push_scheme("ht_step", &[w], Policy::Correct),
            Letter::Pauli(p, w) => program.push_pauli(p, w),
            Letter::CZH(a, b) => program.push_scheme("lambda_z_h_step", &[a, b], Policy::Correct),
        }
    }
    let error_bound = blocks.iter().map(|b| b.distance).sum();
    Ok(CompiledCircuit {
        program,
        word,
        blocks,
        epsilon,
        block_budget,
        error_bound,
    })
}
