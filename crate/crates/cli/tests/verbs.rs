use mbqc::engine::{Instruction, MeasurementProgram};
use mbqc::schemes::{builtin_library, parse_schemes, Family};
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn mbqc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbqc"))
        .args(args)
        .output()
        .expect("spawn mbqc")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Value of `key=` in a structured line.
fn field<'a>(line: &'a str, key: &str) -> &'a str {
    line.split_whitespace()
        .find_map(|t| t.strip_prefix(key).and_then(|r| r.strip_prefix('=')))
        .unwrap_or_else(|| panic!("no `{key}` in `{line}`"))
}

const HT_PROGRAM: &str = "program\nwires 1\nfamily F2\nscheme ht_step 0 correct\nend\n";
const SIGMA_Z_PROGRAM: &str = "program\nwires 1\nfamily F2\npauli Z 0\nend\n";

#[test]
fn verify_library_passes() {
    let o = mbqc(&["verify"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("8 scheme(s) verified: all pass"));
}

#[test]
fn verify_structured_is_line_oriented() {
    let o = mbqc(&["verify", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let reports: Vec<&str> = out.lines().filter(|l| l.starts_with("report ")).collect();
    assert_eq!(reports.len(), 8);
    assert!(reports.iter().all(|l| field(l, "verdict") == "pass"));
    assert!(out
        .lines()
        .all(|l| l.starts_with("report ") || l.starts_with("branch ") || l.starts_with("verify ")));
    assert_eq!(out.lines().last(), Some("verify schemes=8 verdict=pass"));
}

#[test]
fn verify_corrupted_scheme_fails() {
    let dir = TempDir::new().unwrap();
    let library = stdout(&mbqc(&["library"]));
    let h_step = library.split("\n\n").find(|b| b.contains("scheme h_step")).unwrap();
    let bad = write(&dir, "bad.scheme", &h_step.replace("target gate H", "target gate T"));
    let o = mbqc(&["verify", "--scheme", s(&bad)]);
    assert_eq!(o.status.code(), Some(1), "{}", stdout(&o));
    assert!(stdout(&o).contains("FAIL"));
}

#[test]
fn verify_parse_error_has_location() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.scheme", "scheme x\nfamily F9\n");
    let o = mbqc(&["verify", "--scheme", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn library_round_trips() {
    let o = mbqc(&["library"]);
    assert_eq!(o.status.code(), Some(0));
    let parsed = parse_schemes(&stdout(&o)).unwrap();
    assert_eq!(parsed.as_slice(), builtin_library().schemes());
}

#[test]
fn compile_hadamard_uses_f2_only() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "h.circuit", "H 0\n");
    let out_path = dir.path().join("h.program");
    let o = mbqc(&[
        "compile",
        "--circuit",
        s(&c),
        "--epsilon",
        "0.1",
        "--output",
        s(&out_path),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let program = MeasurementProgram::parse(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(program.family(), Some(Family::F2));
    assert!(!program.instructions().is_empty());
    for instr in program.instructions() {
        if let Instruction::Scheme { scheme, .. } = instr {
            let sch = builtin_library().get(scheme).unwrap();
            assert_eq!(sch.family(), Family::F2, "{scheme}");
            assert!(sch.steps().iter().all(|st| Family::F2.contains(&st.factors)));
        }
    }
    assert!(stdout(&o).contains("approx"));
}

#[test]
fn compile_stdout_is_a_valid_program() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "czh.circuit", "CZ 0 1\nH 1\n");
    let o = mbqc(&["compile", "--circuit", s(&c)]);
    assert_eq!(o.status.code(), Some(0));
    let program = MeasurementProgram::parse(&stdout(&o)).unwrap();
    assert!(program
        .instructions()
        .iter()
        .any(|i| matches!(i, Instruction::Scheme { scheme, .. } if scheme == "lambda_z_h_step")));
}

#[test]
fn compile_empty_circuit() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "empty.circuit", "# nothing\n");
    let o = mbqc(&["compile", "--circuit", s(&c)]);
    assert_eq!(o.status.code(), Some(0));
    let program = MeasurementProgram::parse(&stdout(&o)).unwrap();
    assert!(program.instructions().is_empty());
}

#[test]
fn compile_exit_codes() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "h.circuit", "H 0\n");
    let o = mbqc(&["compile", "--circuit", s(&c), "--epsilon", "1e-9", "--k-max", "5"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("wire 0"), "{}", stderr(&o));
    let o = mbqc(&["compile", "--circuit", s(&c), "--epsilon", "-1"]);
    assert_eq!(o.status.code(), Some(2));
    let bad = write(&dir, "bad.circuit", "H 0\nFOO 1\n");
    let o = mbqc(&["compile", "--circuit", s(&bad)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 2"));
}

#[test]
fn run_ht_has_unit_fidelity() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "ht.program", HT_PROGRAM);
    let c = write(&dir, "ht.circuit", "HT 0\n");
    let o = mbqc(&[
        "run",
        "--program",
        s(&p),
        "--circuit",
        s(&c),
        "--input",
        "0",
        "--shots",
        "1000",
        "--seed",
        "11",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let out = stdout(&o);
    let shots: Vec<&str> = out.lines().filter(|l| l.starts_with("shot ")).collect();
    assert_eq!(shots.len(), 1000);
    for l in shots {
        assert!(field(l, "fidelity").parse::<f64>().unwrap() >= 1.0 - 1e-9, "{l}");
    }
}

#[test]
fn run_sigma_z_mean_attempts() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "z.program", SIGMA_Z_PROGRAM);
    let o = mbqc(&[
        "run",
        "--program",
        s(&p),
        "--shots",
        "10000",
        "--seed",
        "3",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mean: f64 = field(out.lines().last().unwrap(), "mean_attempts").parse().unwrap();
    assert!((1.94..=2.06).contains(&mean), "{mean}");
}

#[test]
fn run_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "ht.program", HT_PROGRAM);
    let args = [
        "run",
        "--program",
        s(&p),
        "--input",
        "random",
        "--shots",
        "200",
        "--seed",
        "5",
    ];
    let a = mbqc(&args);
    let b = mbqc(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = mbqc(&[
        "run",
        "--program",
        s(&p),
        "--input",
        "random",
        "--shots",
        "200",
        "--seed",
        "6",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn run_exit_codes() {
    let dir = TempDir::new().unwrap();
    let p = write(&dir, "z.program", SIGMA_Z_PROGRAM);
    // The seed is mandatory.
    assert_eq!(mbqc(&["run", "--program", s(&p)]).status.code(), Some(2));
    // One attempt per corrector exhausts about half the shots.
    let o = mbqc(&[
        "run",
        "--program",
        s(&p),
        "--seed",
        "1",
        "--shots",
        "50",
        "--max-attempts",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("exhausted"));
    let o = mbqc(&["run", "--program", s(&p), "--seed", "1", "--input", "01"]);
    assert_eq!(o.status.code(), Some(2));
    let unknown = write(&dir, "u.program", "program\nwires 1\nscheme nope 0\nend\n");
    assert_eq!(
        mbqc(&["run", "--program", s(&unknown), "--seed", "1"]).status.code(),
        Some(2)
    );
}

#[test]
fn approx_examples() {
    let o = mbqc(&["approx", "--target", "HTHT", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let line = stdout(&o).lines().next().unwrap().to_string();
    assert_eq!(field(&line, "word_length"), "2");
    assert_eq!(field(&line, "distance").parse::<f64>().unwrap(), 0.0);

    let o = mbqc(&["approx", "--target", "I", "--format", "structured"]);
    assert_eq!(field(stdout(&o).lines().next().unwrap(), "word_length"), "0");

    let o = mbqc(&["approx", "--target", "H", "--epsilon", "0.05", "--format", "structured"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let line = out.lines().next().unwrap();
    assert!(field(line, "distance").parse::<f64>().unwrap() < 0.05);
    assert_eq!(
        out.lines().filter(|l| l.starts_with("stage ")).count(),
        field(line, "k").split(',').count()
    );

    let o = mbqc(&["approx", "--target", "0.6,0;0,-0.8;0,-0.8;0.6,0"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("theta*"));
}

#[test]
fn approx_exit_codes() {
    let o = mbqc(&[
        "approx",
        "--target",
        "H",
        "--epsilon",
        "1e-9",
        "--k-max",
        "10",
        "--format",
        "structured",
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("best stage="), "{}", stderr(&o));
    assert_eq!(mbqc(&["approx", "--target", "Q"]).status.code(), Some(2));
    assert_eq!(mbqc(&["approx", "--target", "1,0;0,0;0,0;2,0"]).status.code(), Some(2));
    assert_eq!(
        mbqc(&["approx", "--target", "H", "--epsilon", "0"]).status.code(),
        Some(2)
    );
}
