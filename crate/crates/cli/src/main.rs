//! `mbqc`: verify measurement schemes, compile circuits to measurement
//! programs, execute them with seeds and bench the single-qubit
//! approximation.
//!
//! Exit status: 0 success, 1 verification or execution failure, 2 parse or
//! usage error, 3 search or corrector exhaustion.

use clap::{Parser, Subcommand, ValueEnum};
use mbqc::compiler::{
    axis_m, axis_n, circuit_unitary, compile_circuit, compile_single_qubit, theta_star, Circuit, CompileError,
    DEFAULT_K_MAX,
};
use mbqc::engine::{execute_program, EngineError, MeasurementProgram};
use mbqc::parse::ParseError;
use mbqc::quantum::{CMatrix, SeedStream, StateVector, C64};
use mbqc::schemes::{builtin_library, parse_schemes, serialize_scheme, MeasurementScheme};
use mbqc::verifier::{apply_reference, format_report_structured, format_report_text, verify_scheme};
use rayon::prelude::*;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "mbqc", version, about = "Measurement-based quantum computation toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Structured,
}

#[derive(Subcommand)]
enum Command {
    /// Verify every branch of the built-in library or of a scheme file.
    Verify {
        #[arg(long)]
        scheme: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Compile a circuit to a measurement program over the F2 family.
    Compile {
        #[arg(long)]
        circuit: PathBuf,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        /// Write the program here; the report then goes to stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Execute a program shot by shot.
    Run {
        #[arg(long)]
        program: PathBuf,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        shots: usize,
        /// Input state: one of `0 1 + -` per wire (wire 0 first),
        /// `basis:K`, or `random` (Haar, fresh per shot).
        #[arg(long)]
        input: Option<String>,
        /// Reference circuit; enables the fidelity column.
        #[arg(long)]
        circuit: Option<PathBuf>,
        /// Override the program's corrector attempt limit.
        #[arg(long)]
        max_attempts: Option<u32>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Approximate a single-qubit target by powers of the irrational rotations.
    Approx {
        /// Gate word such as `HTHT`, `H`, `I`, or four row-major entries
        /// `re,im;re,im;re,im;re,im`.
        #[arg(long)]
        target: String,
        #[arg(long, default_value_t = 0.1)]
        epsilon: f64,
        #[arg(long, default_value_t = DEFAULT_K_MAX)]
        k_max: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Print the built-in scheme library in the scheme file format.
    Library {
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

const EXIT_FAIL: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_EXHAUSTED: u8 = 3;

/// An early exit: a status code and a message for stderr.
#[derive(Debug)]
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }

    fn parse(path: &Path, e: ParseError) -> Self {
        Failure::new(EXIT_PARSE, format!("{}: {e}", path.display()))
    }
}

/// Main output plus the exit code it should end with.
struct Done {
    output: String,
    code: u8,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (result, output) = match cli.command {
        Command::Verify { scheme, format, output } => (cmd_verify(scheme.as_deref(), format), output),
        Command::Compile {
            circuit,
            epsilon,
            k_max,
            format,
            output,
        } => (cmd_compile(&circuit, epsilon, k_max, format, output.as_deref()), None),
        Command::Run {
            program,
            seed,
            shots,
            input,
            circuit,
            max_attempts,
            format,
            output,
        } => {
            let opts = RunOptions {
                program,
                seed,
                shots,
                input,
                circuit,
                max_attempts,
                format,
            };
            (cmd_run(&opts), output)
        }
        Command::Approx {
            target,
            epsilon,
            k_max,
            format,
            output,
        } => (cmd_approx(&target, epsilon, k_max, format), output),
        Command::Library { output } => (cmd_library(), output),
    };
    match result {
        Ok(done) => {
            if let Err(e) = emit(&done.output, output.as_deref()) {
                eprintln!("error: {e}");
                return ExitCode::from(EXIT_FAIL);
            }
            ExitCode::from(done.code)
        }
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn emit(text: &str, path: Option<&Path>) -> std::io::Result<()> {
    match path {
        Some(p) => std::fs::write(p, text),
        None => {
            use std::io::Write;
            match std::io::stdout().lock().write_all(text.as_bytes()) {
                Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
                r => r,
            }
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn check_epsilon(epsilon: f64) -> Result<(), Failure> {
    if epsilon > 0.0 && epsilon.is_finite() {
        Ok(())
    } else {
        Err(Failure::new(
            EXIT_PARSE,
            format!("--epsilon must be positive, got {epsilon}"),
        ))
    }
}

fn cmd_verify(scheme: Option<&Path>, format: Format) -> Result<Done, Failure> {
    let schemes: Vec<MeasurementScheme> = match scheme {
        Some(path) => parse_schemes(&read(path)?).map_err(|e| Failure::parse(path, e))?,
        None => builtin_library().schemes().to_vec(),
    };
    let mut out = String::new();
    let mut all_pass = true;
    for s in &schemes {
        let report = verify_scheme(s).map_err(|e| Failure::new(EXIT_FAIL, format!("{}: {e}", s.name())))?;
        all_pass &= report.passed;
        match format {
            Format::Text => {
                out.push_str(&format_report_text(&report));
                out.push('\n');
            }
            Format::Structured => out.push_str(&format_report_structured(&report)),
        }
    }
    let passed = schemes.len();
    match format {
        Format::Text => {
            let _ = writeln!(
                out,
                "{} scheme(s) verified: {}",
                passed,
                if all_pass { "all pass" } else { "FAIL" }
            );
        }
        Format::Structured => {
            let _ = writeln!(
                out,
                "verify schemes={} verdict={}",
                passed,
                if all_pass { "pass" } else { "fail" }
            );
        }
    }
    Ok(Done {
        output: out,
        code: if all_pass { 0 } else { EXIT_FAIL },
    })
}

fn compile_failure(e: CompileError) -> Failure {
    let code = if e.is_exhaustion() { EXIT_EXHAUSTED } else { EXIT_FAIL };
    Failure::new(code, e.to_string())
}

fn cmd_compile(
    circuit: &Path,
    epsilon: f64,
    k_max: usize,
    format: Format,
    output: Option<&Path>,
) -> Result<Done, Failure> {
    check_epsilon(epsilon)?;
    let c = Circuit::parse(&read(circuit)?).map_err(|e| Failure::parse(circuit, e))?;
    let compiled = compile_circuit(&c, epsilon, k_max).map_err(compile_failure)?;
    let report = match format {
        Format::Text => compiled.report_text(),
        Format::Structured => compiled.report_structured(),
    };
    let program = compiled.program.serialize();
    let out = match output {
        Some(path) => {
            std::fs::write(path, &program).map_err(|e| Failure::new(EXIT_FAIL, format!("{}: {e}", path.display())))?;
            report
        }
        // The report rides along as comments so stdout stays a valid program.
        None => {
            let mut out = program;
            for line in report.lines() {
                let _ = writeln!(out, "# {line}");
            }
            out
        }
    };
    Ok(Done { output: out, code: 0 })
}

struct RunOptions {
    program: PathBuf,
    seed: u64,
    shots: usize,
    input: Option<String>,
    circuit: Option<PathBuf>,
    max_attempts: Option<u32>,
    format: Format,
}

enum InputSpec {
    Fixed(StateVector),
    Random,
}

fn parse_input(spec: Option<&str>, wires: usize) -> Result<InputSpec, Failure> {
    let bad = |m: String| Failure::new(EXIT_PARSE, format!("--input: {m}"));
    let state = |r: Result<StateVector, mbqc::quantum::QuantumError>| r.map_err(|e| bad(e.to_string()));
    match spec {
        None => Ok(InputSpec::Fixed(state(StateVector::new_register(wires, 0))?)),
        Some("random") => Ok(InputSpec::Random),
        Some(s) if s.starts_with("basis:") => {
            let k: usize = s[6..].parse().map_err(|_| bad(format!("`{s}` is not `basis:K`")))?;
            if k >> wires != 0 {
                return Err(bad(format!("basis index {k} needs more than {wires} wire(s)")));
            }
            Ok(InputSpec::Fixed(state(StateVector::new_register(wires, k))?))
        }
        Some(s) => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            let singles = s
                .chars()
                .map(|c| match c {
                    '0' => Ok([C64::new(1.0, 0.0), C64::new(0.0, 0.0)]),
                    '1' => Ok([C64::new(0.0, 0.0), C64::new(1.0, 0.0)]),
                    '+' => Ok([C64::new(h, 0.0), C64::new(h, 0.0)]),
                    '-' => Ok([C64::new(h, 0.0), C64::new(-h, 0.0)]),
                    _ => Err(bad(format!("`{c}` is not one of 0 1 + -"))),
                })
                .collect::<Result<Vec<_>, _>>()?;
            if singles.len() != wires {
                return Err(bad(format!("{} state(s) given for {wires} wire(s)", singles.len())));
            }
            let amps = (0..1usize << wires)
                .map(|idx| (0..wires).map(|w| singles[w][(idx >> w) & 1]).product())
                .collect();
            Ok(InputSpec::Fixed(state(StateVector::from_amplitudes(amps))?))
        }
    }
}

struct Shot {
    status: &'static str,
    measurements: usize,
    attempts: u32,
    fidelity: Option<f64>,
    message: Option<String>,
}

fn cmd_run(opts: &RunOptions) -> Result<Done, Failure> {
    let mut program = MeasurementProgram::parse(&read(&opts.program)?).map_err(|e| Failure::parse(&opts.program, e))?;
    if let Some(n) = opts.max_attempts {
        if n == 0 {
            return Err(Failure::new(EXIT_PARSE, "--max-attempts must be positive"));
        }
        program = program.with_max_attempts(n);
    }
    program
        .validate(builtin_library())
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", opts.program.display())))?;
    let input = parse_input(opts.input.as_deref(), program.wires())?;
    let reference = match &opts.circuit {
        Some(path) => {
            let c = Circuit::parse(&read(path)?).map_err(|e| Failure::parse(path, e))?;
            if c.wires > program.wires() {
                return Err(Failure::new(
                    EXIT_PARSE,
                    format!("reference circuit has {} wires, program {}", c.wires, program.wires()),
                ));
            }
            let padded = Circuit {
                wires: program.wires(),
                gates: c.gates,
            };
            Some(circuit_unitary(&padded).map_err(|e| Failure::new(EXIT_FAIL, e.to_string()))?)
        }
        None => None,
    };

    let inputs = SeedStream::new(opts.seed).split(0);
    let runs = SeedStream::new(opts.seed).split(1);
    let shots: Vec<Shot> = (0..opts.shots)
        .into_par_iter()
        .map(|i| {
            let state = match &input {
                InputSpec::Fixed(s) => s.clone(),
                InputSpec::Random => StateVector::random(program.wires(), &mut inputs.substream(i as u64))
                    .expect("register size checked by validation"),
            };
            let mut rng = runs.substream(i as u64);
            match execute_program(&program, &state, &mut rng) {
                Ok((out, log)) => Shot {
                    status: "ok",
                    measurements: log.total_measurements(),
                    attempts: log.corrector_attempts().iter().sum(),
                    fidelity: reference.as_ref().map(|r| apply_reference(r, &state).fidelity(&out)),
                    message: None,
                },
                Err(f) => Shot {
                    status: if matches!(f.error, EngineError::Exhausted { .. }) {
                        "exhausted"
                    } else {
                        "error"
                    },
                    measurements: f.log.total_measurements(),
                    attempts: f.log.corrector_attempts().iter().sum(),
                    fidelity: None,
                    message: Some(f.to_string()),
                },
            }
        })
        .collect();

    let ok: Vec<&Shot> = shots.iter().filter(|s| s.status == "ok").collect();
    let exhausted = shots.iter().filter(|s| s.status == "exhausted").count();
    let errors = shots.iter().filter(|s| s.status == "error").count();
    let mean = |f: &dyn Fn(&Shot) -> f64| {
        if ok.is_empty() {
            0.0
        } else {
            ok.iter().map(|s| f(s)).sum::<f64>() / ok.len() as f64
        }
    };
    let mean_measurements = mean(&|s| s.measurements as f64);
    let mean_attempts = mean(&|s| s.attempts as f64);
    let min_fidelity = ok
        .iter()
        .filter_map(|s| s.fidelity)
        .fold(None, |m: Option<f64>, f| Some(m.map_or(f, |m| m.min(f))));
    let fid = |f: Option<f64>| f.map_or("-".to_string(), |f| format!("{f:.12}"));

    let mut out = String::new();
    match opts.format {
        Format::Text => {
            let _ = writeln!(
                out,
                "{:>6} {:<9} {:>12} {:>9} {:>15}",
                "shot", "status", "measurements", "attempts", "fidelity"
            );
            for (i, s) in shots.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "{:>6} {:<9} {:>12} {:>9} {:>15}",
                    i,
                    s.status,
                    s.measurements,
                    s.attempts,
                    fid(s.fidelity)
                );
                if let Some(m) = &s.message {
                    let _ = writeln!(out, "       {m}");
                }
            }
            let _ = writeln!(
                out,
                "shots {}  ok {}  exhausted {}  errors {}  mean measurements {:.4}  mean attempts {:.4}  min fidelity {}",
                shots.len(),
                ok.len(),
                exhausted,
                errors,
                mean_measurements,
                mean_attempts,
                fid(min_fidelity)
            );
        }
        Format::Structured => {
            for (i, s) in shots.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "shot index={} status={} measurements={} attempts={} fidelity={}",
                    i,
                    s.status,
                    s.measurements,
                    s.attempts,
                    fid(s.fidelity)
                );
            }
            let _ = writeln!(
                out,
                "summary shots={} ok={} exhausted={} errors={} mean_measurements={:.6} mean_attempts={:.6} min_fidelity={} seed={}",
                shots.len(),
                ok.len(),
                exhausted,
                errors,
                mean_measurements,
                mean_attempts,
                fid(min_fidelity),
                opts.seed
            );
        }
    }
    let code = if exhausted > 0 {
        EXIT_EXHAUSTED
    } else if errors > 0 {
        EXIT_FAIL
    } else {
        0
    };
    Ok(Done { output: out, code })
}

/// `HTHT`, `H`, `I`… read as an operator product, or four `re,im` entries.
fn parse_target(spec: &str) -> Result<CMatrix, Failure> {
    mbqc::compiler::parse_target(spec).map_err(|e| Failure::new(EXIT_PARSE, format!("--target: {e}")))
}

fn cmd_approx(target: &str, epsilon: f64, k_max: usize, format: Format) -> Result<Done, Failure> {
    check_epsilon(epsilon)?;
    let u = parse_target(target)?;
    match compile_single_qubit(&u, epsilon, k_max) {
        Ok(r) => Ok(Done {
            output: match format {
                Format::Text => {
                    let mut out = r.to_text();
                    if !r.word.is_empty() {
                        let _ = writeln!(out, "word        {}", r.word.compact());
                    }
                    out
                }
                Format::Structured => r.to_structured(),
            },
            code: 0,
        }),
        Err(e) => {
            // Best-effort row for the stage that ran out of exponents.
            let mut source = &e;
            let mut stage = None;
            while let CompileError::Stage {
                stage: s,
                source: inner,
            } = source
            {
                stage = Some(*s);
                source = inner;
            }
            let mut message = e.to_string();
            if let CompileError::PowerNotFound {
                alpha,
                best_k,
                best_distance,
                ..
            } = source
            {
                message = match format {
                    Format::Text => format!(
                        "{message}\nbest-effort stage {} angle {alpha:.9} k {best_k} distance {best_distance:.3e}",
                        stage.unwrap_or(0)
                    ),
                    Format::Structured => format!(
                        "{message}\nbest stage={} angle={alpha} k={best_k} achieved={best_distance:e} theta_star={} n={} m={}",
                        stage.unwrap_or(0),
                        theta_star(),
                        axis_n(),
                        axis_m()
                    ),
                };
            }
            Err(Failure::new(
                if e.is_exhaustion() { EXIT_EXHAUSTED } else { EXIT_FAIL },
                message,
            ))
        }
    }
}

fn cmd_library() -> Result<Done, Failure> {
    let out = builtin_library()
        .schemes()
        .iter()
        .map(serialize_scheme)
        .collect::<Vec<_>>()
        .join("\n");
    Ok(Done { output: out, code: 0 })
}
