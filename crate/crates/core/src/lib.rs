//! Measurement-only quantum computation with a minimal observable family.
//!
//! The crate simulates sequences of projective measurements drawn from
//! `{Z⊗X, Z, (X−Y)/√2}` acting on a register with a single helper qubit,
//! certifies measurement schemes by exhaustive branch analysis, turns
//! probabilistic "up to a Pauli" steps into deterministic computations by
//! repeat-until-success correction, and compiles arbitrary circuits into
//! such measurement programs through the gate set `{HT, σ_y, ΛZ(Id⊗H)}`.
//!
//! * [`quantum`]: statevector substrate, observables and Pauli algebra.
//! * [`schemes`]: measurement schemes, their execution and the built-in library.
//! * [`engine`]: measurement programs and the corrective execution strategy.
//! * [`compiler`]: rotation algebra, power search and circuit compilation.
//! * [`verifier`]: branch-level certification of schemes and programs.

pub mod compiler;
pub mod engine;
pub mod parse;
pub mod quantum;
pub mod schemes;
pub mod verifier;
