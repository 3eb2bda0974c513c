mod common;

use common::haar_unitary;
use mbqc::compiler::{circuit_unitary, Circuit, Gate};
use mbqc::engine::{execute_program, EngineError, Instruction, MeasurementProgram, Policy};
use mbqc::quantum::linalg::{gates, identity};
use mbqc::quantum::{Pauli, SeedStream, StateVector};
use mbqc::schemes::{builtin_library, Family};
use mbqc::verifier::apply_reference;
use proptest::prelude::*;
use rand::Rng;

const LETTERS: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

fn ht_program(steps: usize, policy: Policy) -> MeasurementProgram {
    let mut p = MeasurementProgram::new(1).with_family(Family::F2);
    for _ in 0..steps {
        p.push_scheme("ht_step", &[0], policy);
    }
    p
}

#[test]
fn ht_chains_are_deterministic() {
    let stream = SeedStream::new(41);
    for seed in 0..50 {
        let mut rng = stream.substream(seed);
        let steps = rng.random_range(1..=5);
        let program = ht_program(steps, Policy::Correct);
        let input = StateVector::random(1, &mut rng).unwrap();
        let (out, _) = execute_program(&program, &input, &mut rng).unwrap();
        let reference = (0..steps).fold(identity(2), |acc, _| gates::ht() * acc);
        let expected = apply_reference(&reference, &input);
        let fidelity = expected.fidelity(&out);
        assert!((fidelity - 1.0).abs() < 1e-9, "seed {seed}, {steps} steps: {fidelity}");
    }
}

#[test]
fn sigma_z_never_exhausts_at_30_attempts() {
    let program = MeasurementProgram::parse("program\nwires 1\nfamily F2\nmax-attempts 30\npauli Z 0\nend\n").unwrap();
    let stream = SeedStream::new(43);
    let mut exhausted = 0;
    let mut attempts = 0u64;
    for i in 0..10_000 {
        let mut rng = stream.substream(i);
        let input = StateVector::random(1, &mut rng).unwrap();
        match execute_program(&program, &input, &mut rng) {
            Ok((out, log)) => {
                attempts += log.corrector_attempts().iter().map(|&a| a as u64).sum::<u64>();
                let expected = apply_reference(&gates::pauli_z(), &input);
                assert!(expected.distance_up_to_phase(&out) < 1e-9);
            }
            Err(f) if matches!(f.error, EngineError::Exhausted { .. }) => exhausted += 1,
            Err(f) => panic!("{f}"),
        }
    }
    assert_eq!(exhausted, 0);
    let mean = attempts as f64 / 10_000.0;
    assert!((1.94..=2.06).contains(&mean), "{mean}");
}

/// Every measurement is either a step of the instruction's scheme or a
/// step of one corrector attempt.
#[test]
fn measurement_counts_add_up() {
    let library = builtin_library();
    let corrector_steps = |p: Pauli| {
        let name = if p == Pauli::Z {
            "lemma2_sigma_z"
        } else {
            "lemma3_sigma_x"
        };
        library.get(name).unwrap().steps().len()
    };
    let main_steps = library.get("ht_step").unwrap().steps().len();
    let stream = SeedStream::new(47);
    for i in 0..500 {
        let mut rng = stream.substream(i);
        let input = StateVector::random(1, &mut rng).unwrap();
        let (_, log) = execute_program(&ht_program(3, Policy::Correct), &input, &mut rng).unwrap();
        let expected: usize = log
            .instructions
            .iter()
            .map(|instr| {
                main_steps
                    + instr
                        .corrections
                        .iter()
                        .flat_map(|c| &c.attempts)
                        .map(|(p, a)| corrector_steps(*p) * *a as usize)
                        .sum::<usize>()
            })
            .sum();
        assert_eq!(log.total_measurements(), expected);
    }
}

#[test]
fn ignored_byproducts_are_recorded() {
    let stream = SeedStream::new(53);
    for i in 0..100 {
        let mut rng = stream.substream(i);
        let input = StateVector::random(1, &mut rng).unwrap();
        let (out, log) = execute_program(&ht_program(1, Policy::Ignore), &input, &mut rng).unwrap();
        assert!(log.instructions[0].corrections.is_empty());
        let frame = log.uncorrected.as_pauli_string().matrix(1);
        let expected = apply_reference(&(frame * gates::ht()), &input);
        assert!(expected.distance_up_to_phase(&out) < 1e-9);
    }
}

#[test]
fn family_is_enforced() {
    let mut p = MeasurementProgram::new(1).with_family(Family::F2);
    p.push_scheme("state_transfer", &[0], Policy::Correct);
    let input = StateVector::new_register(1, 0).unwrap();
    let err = execute_program(&p, &input, &mut SeedStream::new(1).substream(0)).unwrap_err();
    assert!(
        matches!(err.error, EngineError::FamilyViolation { .. } | EngineError::Program(_)),
        "{err}"
    );
    // Without a declared family the same scheme runs.
    let mut p = MeasurementProgram::new(1);
    p.push_scheme("state_transfer", &[0], Policy::Correct);
    assert!(execute_program(&p, &input, &mut SeedStream::new(1).substream(0)).is_ok());
}

#[test]
fn input_size_is_checked() {
    let input = StateVector::new_register(2, 0).unwrap();
    let err = execute_program(
        &ht_program(1, Policy::Correct),
        &input,
        &mut SeedStream::new(1).substream(0),
    )
    .unwrap_err();
    assert_eq!(err.error, EngineError::InputSize { expected: 1, got: 2 });
}

/// A random exact program over two wires and the circuit it implements.
fn exact_pair<R: Rng>(rng: &mut R, n: usize) -> (MeasurementProgram, Circuit) {
    let mut program = MeasurementProgram::new(2).with_family(Family::F2);
    let mut circuit = Circuit::new(2);
    for _ in 0..n {
        let a = rng.random_range(0..2);
        match rng.random_range(0..3) {
            0 => {
                program.push_scheme("ht_step", &[a], Policy::Correct);
                circuit.push(Gate::Named("HT".into(), a));
            }
            1 => {
                let l = LETTERS[rng.random_range(0..3)];
                program.push_pauli(l, a);
                circuit.push(Gate::Named(l.symbol().to_string(), a));
            }
            _ => {
                program.push_scheme("lambda_z_h_step", &[a, 1 - a], Policy::Correct);
                circuit.push(Gate::CZH(a, 1 - a));
            }
        }
    }
    (program, circuit)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn exact_programs_match_their_circuit(seed in any::<u64>(), n in 0usize..6) {
        let mut rng = SeedStream::new(seed).substream(0);
        let (program, circuit) = exact_pair(&mut rng, n);
        let input = StateVector::random(2, &mut rng).unwrap();
        let (out, _) = execute_program(&program, &input, &mut rng).unwrap();
        let expected = apply_reference(&circuit_unitary(&circuit).unwrap(), &input);
        prop_assert!(expected.distance_up_to_phase(&out) < 1e-9);
    }

    #[test]
    fn programs_round_trip(seed in any::<u64>(), n in 0usize..10, attempts in 1u32..200) {
        let mut rng = SeedStream::new(seed).substream(0);
        let (program, _) = exact_pair(&mut rng, n);
        let program = program.with_max_attempts(attempts);
        let text = program.serialize();
        let parsed = MeasurementProgram::parse(&text).unwrap();
        prop_assert_eq!(&parsed, &program);
        prop_assert_eq!(parsed.serialize(), text);
    }

    #[test]
    fn same_seed_same_transcript(seed in any::<u64>(), n in 1usize..5) {
        let mut rng = SeedStream::new(seed).substream(0);
        let (program, _) = exact_pair(&mut rng, n);
        let input = StateVector::random(2, &mut rng).unwrap();
        let run = || {
            let mut r = SeedStream::new(seed).substream(1);
            let (out, log) = execute_program(&program, &input, &mut r).unwrap();
            (out, log.transcript())
        };
        let (a, ta) = run();
        let (b, tb) = run();
        prop_assert_eq!(ta, tb);
        prop_assert_eq!(a, b);
    }

    #[test]
    fn haar_inputs_survive_correctors(seed in any::<u64>(), idx in 0usize..3) {
        let mut rng = SeedStream::new(seed).substream(0);
        let u = haar_unitary(&mut rng);
        let input = apply_reference(&u, &StateVector::new_register(1, 0).unwrap());
        let mut program = MeasurementProgram::new(1).with_family(Family::F2);
        program.push(Instruction::Pauli { letter: LETTERS[idx], wire: 0 });
        let (out, log) = execute_program(&program, &input, &mut rng).unwrap();
        let expected = apply_reference(&LETTERS[idx].matrix(), &input);
        prop_assert!(expected.distance_up_to_phase(&out) < 1e-9);
        prop_assert!(log.corrector_attempts().iter().all(|&a| a >= 1));
    }
}
