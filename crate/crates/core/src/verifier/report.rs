use super::{BranchClaim, VerificationReport};
use crate::parse::format_complex;
use std::fmt::Write;

fn verdict(passed: bool) -> &'static str {
    if passed {
        "pass"
    } else {
        "fail"
    }
}

fn claim_name(c: BranchClaim) -> &'static str {
    match c {
        BranchClaim::Target => "target",
        BranchClaim::Failure => "failure",
        BranchClaim::Null => "null",
    }
}

/// Human-readable table.
pub fn format_report_text(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{}", r.summary());
    let _ = writeln!(
        out,
        "  completeness {:.3e}  family {}  one-ancilla {}{}",
        r.completeness_deviation,
        if r.family_ok { "ok" } else { "VIOLATED" },
        if r.one_ancilla_ok { "ok" } else { "VIOLATED" },
        r.success_probability
            .map(|p| format!("  success probability {p:.12}"))
            .unwrap_or_default()
    );
    let _ = writeln!(
        out,
        "  {:<8} {:<8} {:>10} {:<12} {:<12} {:>10}  verdict",
        "outcomes", "claim", "prob", "declared", "recovered", "deviation"
    );
    for b in &r.branches {
        let _ = writeln!(
            out,
            "  {:<8} {:<8} {:>10.6} {:<12} {:<12} {:>10.3e}  {}",
            b.outcome_bits(),
            claim_name(b.claim),
            b.probability,
            b.declared.to_string(),
            b.recovered.as_ref().map_or("-".to_string(), |p| p.to_string()),
            b.deviation,
            verdict(b.passed)
        );
    }
    out
}

/// Line-oriented `key=value` records: one `report` line, then one `branch`
/// line per outcome vector.
pub fn format_report_structured(r: &VerificationReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "report scheme={} verdict={} branches={} nonzero={} passing={} max_deviation={:e} completeness={:e} family={} one_ancilla={} success_probability={}",
        r.scheme,
        verdict(r.passed),
        r.branches.len(),
        r.nonzero_branches(),
        r.passing_branches(),
        r.max_deviation,
        r.completeness_deviation,
        verdict(r.family_ok),
        verdict(r.one_ancilla_ok),
        r.success_probability.map_or("-".to_string(), |p| p.to_string()),
    );
    for b in &r.branches {
        let _ = writeln!(
            out,
            "branch scheme={} outcomes={} claim={} probability={} declared={} recovered={} factor={} deviation={:e} verdict={}",
            r.scheme,
            b.outcome_bits(),
            claim_name(b.claim),
            b.probability,
            b.declared,
            b.recovered.as_ref().map_or("-".to_string(), |p| p.to_string()),
            b.factor.map_or("-".to_string(), format_complex),
            b.deviation,
            verdict(b.passed)
        );
    }
    out
}
