//! Measurement programs and their text format.
//!
//! ```text
//! program
//! wires 2
//! family F2
//! max-attempts 64
//! scheme ht_step 0 correct
//! scheme lambda_z_h_step 0 1 correct
//! pauli Y 1
//! end
//! ```

use super::EngineError;
use crate::parse::{parse_usize, token_lines, ParseError};
use crate::quantum::Pauli;
use crate::schemes::{Family, Library};
use std::fmt::{self, Write};

pub const DEFAULT_MAX_ATTEMPTS: u32 = 64;

/// What to do with a scheme's reported byproduct.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Policy {
    /// Undo it with repeat-until-success correctors.
    Correct,
    /// Leave it in place and only record it.
    Ignore,
}

impl Policy {
    pub fn name(self) -> &'static str {
        match self {
            Policy::Correct => "correct",
            Policy::Ignore => "ignore",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Instruction {
    /// Runs a library scheme; logical qubit `i` of the scheme is `wires[i]`.
    Scheme {
        scheme: String,
        wires: Vec<usize>,
        policy: Policy,
    },
    /// Applies a Pauli to one wire through correctors.
    Pauli { letter: Pauli, wire: usize },
}

impl fmt::Display for Instruction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instruction::Scheme { scheme, wires, policy } => {
                write!(f, "scheme {scheme}")?;
                for w in wires {
                    write!(f, " {w}")?;
                }
                write!(f, " {}", policy.name())
            }
            Instruction::Pauli { letter, wire } => write!(f, "pauli {} {wire}", letter.symbol()),
        }
    }
}

/// A schedule of schemes and corrections over logical wires.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasurementProgram {
    wires: usize,
    max_attempts: u32,
    family: Option<Family>,
    instructions: Vec<Instruction>,
}

impl MeasurementProgram {
    pub fn new(wires: usize) -> Self {
        MeasurementProgram {
            wires,
            max_attempts: DEFAULT_MAX_ATTEMPTS,
            family: None,
            instructions: Vec::new(),
        }
    }

    pub fn with_max_attempts(mut self, max_attempts: u32) -> Self {
        self.max_attempts = max_attempts;
        self
    }

    /// Requires every executed observable to come from `family`.
    pub fn with_family(mut self, family: Family) -> Self {
        self.family = Some(family);
        self
    }

    pub fn wires(&self) -> usize {
        self.wires
    }

    pub fn max_attempts(&self) -> u32 {
        self.max_attempts
    }

    pub fn family(&self) -> Option<Family> {
        self.family
    }

    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    pub fn push(&mut self, instruction: Instruction) {
        self.instructions.push(instruction);
    }

    pub fn push_scheme(&mut self, scheme: &str, wires: &[usize], policy: Policy) {
        self.push(Instruction::Scheme {
            scheme: scheme.to_string(),
            wires: wires.to_vec(),
            policy,
        });
    }

    pub fn push_pauli(&mut self, letter: Pauli, wire: usize) {
        self.push(Instruction::Pauli { letter, wire });
    }

    /// Checks names against the library and wire arities.
    pub fn validate(&self, library: &Library) -> Result<(), EngineError> {
        if self.max_attempts == 0 {
            return Err(EngineError::Program("max-attempts must be positive".into()));
        }
        for (i, instr) in self.instructions.iter().enumerate() {
            let bad = |m: String| EngineError::BadInstruction { index: i, message: m };
            match instr {
                Instruction::Scheme { scheme, wires, .. } => {
                    let s = library.get(scheme)?;
                    if wires.len() != s.n_logical() {
                        return Err(bad(format!(
                            "`{scheme}` takes {} wire(s), got {}",
                            s.n_logical(),
                            wires.len()
                        )));
                    }
                    for (j, &w) in wires.iter().enumerate() {
                        if w >= self.wires {
                            return Err(bad(format!("wire {w} out of range")));
                        }
                        if wires[..j].contains(&w) {
                            return Err(bad(format!("wire {w} used twice")));
                        }
                    }
                }
                Instruction::Pauli { wire, .. } => {
                    if *wire >= self.wires {
                        return Err(bad(format!("wire {wire} out of range")));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let mut out = String::from("program\n");
        let _ = writeln!(out, "wires {}", self.wires);
        if let Some(f) = self.family {
            let _ = writeln!(out, "family {f}");
        }
        let _ = writeln!(out, "max-attempts {}", self.max_attempts);
        for instr in &self.instructions {
            let _ = writeln!(out, "{instr}");
        }
        out.push_str("end\n");
        out
    }

    /// Parses the text format. Scheme names are resolved later, at
    /// validation or execution time.
    pub fn parse(text: &str) -> Result<Self, ParseError> {
        let mut lines = token_lines(text);
        match lines.next() {
            Some((_, t)) if t == ["program"] => {}
            Some((l, _)) => return Err(ParseError::new(l, "expected `program`")),
            None => return Err(ParseError::new(0, "empty program file")),
        }
        let mut wires = None;
        let mut family = None;
        let mut max_attempts = DEFAULT_MAX_ATTEMPTS;
        let mut instructions = Vec::new();
        let mut ended = false;
        for (line, tokens) in lines {
            let err = |m: String| ParseError::new(line, m);
            if ended {
                return Err(err("content after `end`".into()));
            }
            match tokens.as_slice() {
                ["end"] => ended = true,
                ["wires", n] => {
                    if wires.replace(parse_usize(n).map_err(err)?).is_some() {
                        return Err(err("`wires` given twice".into()));
                    }
                }
                ["family", f] => {
                    family = Some(Family::parse(f).ok_or_else(|| err(format!("unknown family `{f}`")))?);
                }
                ["max-attempts", n] => {
                    max_attempts = n
                        .parse::<u32>()
                        .ok()
                        .filter(|&v| v > 0)
                        .ok_or_else(|| err(format!("`{n}` is not a positive attempt count")))?;
                }
                ["scheme", name, rest @ ..] => {
                    let (policy, wire_toks) = match rest.split_last() {
                        Some((&"correct", w)) => (Policy::Correct, w),
                        Some((&"ignore", w)) => (Policy::Ignore, w),
                        _ => (Policy::Correct, rest),
                    };
                    if wire_toks.is_empty() {
                        return Err(err("scheme instruction needs at least one wire".into()));
                    }
                    let wires = wire_toks
                        .iter()
                        .map(|w| parse_usize(w))
                        .collect::<Result<Vec<_>, _>>()
                        .map_err(err)?;
                    instructions.push(Instruction::Scheme {
                        scheme: name.to_string(),
                        wires,
                        policy,
                    });
                }
                ["pauli", letter, wire] => {
                    let letter = match letter.chars().collect::<Vec<_>>().as_slice() {
                        [c] => Pauli::from_symbol(*c),
                        _ => None,
                    }
                    .ok_or_else(|| err(format!("`{letter}` is not a Pauli letter")))?;
                    instructions.push(Instruction::Pauli {
                        letter,
                        wire: parse_usize(wire).map_err(err)?,
                    });
                }
                _ => return Err(err(format!("unrecognized line `{}`", tokens.join(" ")))),
            }
        }
        if !ended {
            return Err(ParseError::new(0, "missing `end`"));
        }
        let wires = wires.ok_or_else(|| ParseError::new(0, "missing `wires`"))?;
        let program = MeasurementProgram {
            wires,
            max_attempts,
            family,
            instructions,
        };
        for (i, instr) in program.instructions.iter().enumerate() {
            let out_of_range = match instr {
                Instruction::Scheme { wires: ws, .. } => ws.iter().any(|&w| w >= wires),
                Instruction::Pauli { wire, .. } => *wire >= wires,
            };
            if out_of_range {
                return Err(ParseError::new(
                    0,
                    format!("instruction {i} addresses a wire ≥ {wires}"),
                ));
            }
        }
        Ok(program)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::schemes::builtin_library;

    fn sample() -> MeasurementProgram {
        let mut p = MeasurementProgram::new(2).with_family(Family::F2).with_max_attempts(30);
        p.push_scheme("ht_step", &[0], Policy::Correct);
        p.push_scheme("lambda_z_h_step", &[1, 0], Policy::Ignore);
        p.push_pauli(Pauli::Y, 1);
        p
    }

    #[test]
    fn round_trip() {
        let p = sample();
        let text = p.serialize();
        assert_eq!(MeasurementProgram::parse(&text).unwrap(), p);
        p.validate(builtin_library()).unwrap();
    }

    #[test]
    fn parse_errors() {
        assert_eq!(MeasurementProgram::parse("wires 1\n").unwrap_err().line, 1);
        assert!(MeasurementProgram::parse("program\nwires 1\n").is_err());
        assert_eq!(
            MeasurementProgram::parse("program\nwires 1\npauli Q 0\nend\n")
                .unwrap_err()
                .line,
            3
        );
        assert!(MeasurementProgram::parse("program\nwires 1\npauli X 1\nend\n").is_err());
        assert!(MeasurementProgram::parse("program\nwires 1\nmax-attempts 0\nend\n").is_err());
    }

    #[test]
    fn validation_catches_arity_and_names() {
        let lib = builtin_library();
        let mut p = MeasurementProgram::new(2);
        p.push_scheme("lambda_z_h_step", &[0], Policy::Correct);
        assert!(matches!(p.validate(lib), Err(EngineError::BadInstruction { .. })));
        let mut p = MeasurementProgram::new(2);
        p.push_scheme("teleport", &[0], Policy::Correct);
        assert!(p.validate(lib).is_err());
        let mut p = MeasurementProgram::new(2);
        p.push_scheme("lambda_z_h_step", &[1, 1], Policy::Correct);
        assert!(p.validate(lib).is_err());
    }
}
