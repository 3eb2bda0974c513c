//! Line-oriented scheme format.
//!
//! ```text
//! scheme lambda_z_h_step
//! family F2
//! roles a b c
//! relocate a->a b->c
//! target gate CZH
//! step 0,0,1 @ c
//! step 0,0,1 1,0,0 @ a c
//! step 0,0,1 1,0,0 @ c b
//! step 0,0,1 @ b
//! byproduct a x=0 z=s1+s3
//! byproduct c x=s3 z=s2+s4
//! end
//! ```
//!
//! Targets are `gate NAME`, `unitary re,im …` (row-major, square) or
//! `measure x,y,z outcome=RULE`. An optional `success RULE` line marks
//! probabilistic schemes. Numbers are written in shortest round-trip form,
//! so serialize → parse reproduces the scheme bit for bit.

use super::affine::AffineBit;
use super::scheme::{ByproductRule, Family, MeasurementScheme, SchemeParts, Target};
use crate::parse::{format_complex, parse_axis, parse_complex, token_lines, ParseError};
use crate::quantum::{BlochAxis, CMatrix};
use std::fmt::Write;

pub fn serialize_scheme(scheme: &MeasurementScheme) -> String {
    let mut out = String::new();
    let roles = scheme.roles();
    let _ = writeln!(out, "scheme {}", scheme.name());
    let _ = writeln!(out, "family {}", scheme.family());
    let _ = writeln!(out, "roles {}", roles.join(" "));
    let reloc: Vec<String> = scheme.relocation().map(|(i, o)| format!("{i}->{o}")).collect();
    let _ = writeln!(out, "relocate {}", reloc.join(" "));
    match scheme.target() {
        Target::Gate(name) => {
            let _ = writeln!(out, "target gate {name}");
        }
        Target::Unitary(m) => {
            let entries: Vec<String> = (0..m.nrows())
                .flat_map(|r| (0..m.ncols()).map(move |c| (r, c)))
                .map(|(r, c)| format_complex(m[(r, c)]))
                .collect();
            let _ = writeln!(out, "target unitary {}", entries.join(" "));
        }
        Target::Measure { axis, outcome } => {
            let _ = writeln!(out, "target measure {axis} outcome={outcome}");
        }
    }
    for step in scheme.steps() {
        let factors: Vec<String> = step.factors.iter().map(|f| f.to_string()).collect();
        let support: Vec<&str> = step.roles.iter().map(|&r| roles[r].as_str()).collect();
        let _ = writeln!(out, "step {} @ {}", factors.join(" "), support.join(" "));
    }
    for (rule, &role) in scheme.byproduct_rules().iter().zip(scheme.outputs()) {
        let _ = writeln!(out, "byproduct {} x={} z={}", roles[role], rule.x, rule.z);
    }
    if let Some(rule) = scheme.success_rule() {
        let _ = writeln!(out, "success {rule}");
    }
    out.push_str("end\n");
    out
}

/// Parses a file holding exactly one scheme.
pub fn parse_scheme(text: &str) -> Result<MeasurementScheme, ParseError> {
    let mut all = parse_schemes(text)?;
    match all.len() {
        1 => Ok(all.remove(0)),
        n => Err(ParseError::new(0, format!("expected one scheme, found {n}"))),
    }
}

/// Parses any number of consecutive `scheme … end` blocks.
pub fn parse_schemes(text: &str) -> Result<Vec<MeasurementScheme>, ParseError> {
    let mut schemes = Vec::new();
    let mut block: Option<Block> = None;
    for (line, tokens) in token_lines(text) {
        let err = |m: String| ParseError::new(line, m);
        match (&mut block, tokens[0]) {
            (None, "scheme") => {
                if tokens.len() != 2 {
                    return Err(err("expected `scheme NAME`".into()));
                }
                block = Some(Block::new(line, tokens[1]));
            }
            (None, other) => return Err(err(format!("expected `scheme`, found `{other}`"))),
            (Some(_), "end") => {
                if tokens.len() != 1 {
                    return Err(err("`end` takes no arguments".into()));
                }
                let done = block.take().expect("inside a block");
                schemes.push(done.finish(line)?);
            }
            (Some(b), _) => b.line(line, &tokens).map_err(err)?,
        }
    }
    if let Some(b) = block {
        return Err(ParseError::new(b.start, format!("scheme `{}` has no `end`", b.name)));
    }
    Ok(schemes)
}

struct Block {
    start: usize,
    name: String,
    family: Option<Family>,
    roles: Option<Vec<String>>,
    relocation: Option<Vec<(String, String)>>,
    target: Option<Target>,
    steps: Vec<(Vec<BlochAxis>, Vec<String>)>,
    byproduct: Vec<(String, ByproductRule)>,
    success: Option<AffineBit>,
}

impl Block {
    fn new(start: usize, name: &str) -> Self {
        Block {
            start,
            name: name.to_string(),
            family: None,
            roles: None,
            relocation: None,
            target: None,
            steps: Vec::new(),
            byproduct: Vec::new(),
            success: None,
        }
    }

    fn line(&mut self, _line: usize, tokens: &[&str]) -> Result<(), String> {
        let args = &tokens[1..];
        match tokens[0] {
            "family" => {
                let [name] = args else {
                    return Err("expected `family F1|F2`".into());
                };
                let fam = Family::parse(name).ok_or_else(|| format!("unknown family `{name}`"))?;
                set_once(&mut self.family, fam, "family")
            }
            "roles" => {
                if args.is_empty() {
                    return Err("`roles` needs at least one name".into());
                }
                set_once(&mut self.roles, args.iter().map(|s| s.to_string()).collect(), "roles")
            }
            "relocate" => {
                let pairs = args
                    .iter()
                    .map(|a| {
                        a.split_once("->")
                            .map(|(i, o)| (i.to_string(), o.to_string()))
                            .ok_or_else(|| format!("`{a}` is not `in->out`"))
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                set_once(&mut self.relocation, pairs, "relocate")
            }
            "target" => set_once(&mut self.target, parse_target(args)?, "target"),
            "step" => {
                let at = args
                    .iter()
                    .position(|t| *t == "@")
                    .ok_or("expected `step AXIS… @ ROLE…`")?;
                let factors = args[..at]
                    .iter()
                    .map(|t| parse_axis(t))
                    .collect::<Result<Vec<_>, _>>()?;
                let roles = args[at + 1..].iter().map(|s| s.to_string()).collect();
                self.steps.push((factors, roles));
                Ok(())
            }
            "byproduct" => {
                let [role, x, z] = args else {
                    return Err("expected `byproduct ROLE x=RULE z=RULE`".into());
                };
                let x = x.strip_prefix("x=").ok_or("expected `x=RULE`")?;
                let z = z.strip_prefix("z=").ok_or("expected `z=RULE`")?;
                if self.byproduct.iter().any(|(r, _)| r == role) {
                    return Err(format!("byproduct for `{role}` given twice"));
                }
                let rule = ByproductRule::new(AffineBit::parse(x)?, AffineBit::parse(z)?);
                self.byproduct.push((role.to_string(), rule));
                Ok(())
            }
            "success" => {
                let [rule] = args else {
                    return Err("expected `success RULE`".into());
                };
                set_once(&mut self.success, AffineBit::parse(rule)?, "success")
            }
            other => Err(format!("unknown keyword `{other}`")),
        }
    }

    fn finish(self, end_line: usize) -> Result<MeasurementScheme, ParseError> {
        let err = |m: String| ParseError::new(self.start, m);
        let family = self.family.ok_or_else(|| err("missing `family`".into()))?;
        let roles = self.roles.ok_or_else(|| err("missing `roles`".into()))?;
        let relocation = self.relocation.ok_or_else(|| err("missing `relocate`".into()))?;
        let target = self.target.ok_or_else(|| err("missing `target`".into()))?;
        let mut byproduct = Vec::with_capacity(relocation.len());
        for (_, out) in &relocation {
            let rule = self
                .byproduct
                .iter()
                .find(|(r, _)| r == out)
                .map(|(_, rule)| *rule)
                .unwrap_or(ByproductRule::NONE);
            byproduct.push(rule);
        }
        if let Some((r, _)) = self
            .byproduct
            .iter()
            .find(|(r, _)| !relocation.iter().any(|(_, o)| o == r))
        {
            return Err(err(format!("byproduct given for `{r}`, which is not an output")));
        }
        let role_refs: Vec<&str> = roles.iter().map(String::as_str).collect();
        let reloc_refs: Vec<(&str, &str)> = relocation.iter().map(|(i, o)| (i.as_str(), o.as_str())).collect();
        let steps = self
            .steps
            .iter()
            .map(|(f, r)| (f.clone(), r.iter().map(String::as_str).collect()))
            .collect();
        MeasurementScheme::from_parts(SchemeParts {
            name: &self.name,
            family,
            roles: &role_refs,
            relocation: &reloc_refs,
            steps,
            target,
            byproduct,
            success: self.success,
        })
        .map_err(|e| ParseError::new(end_line, e.to_string()))
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, what: &str) -> Result<(), String> {
    if slot.is_some() {
        return Err(format!("`{what}` given twice"));
    }
    *slot = Some(value);
    Ok(())
}

fn parse_target(args: &[&str]) -> Result<Target, String> {
    match args {
        ["gate", name] => Ok(Target::Gate(name.to_string())),
        ["unitary", entries @ ..] => {
            let values = entries
                .iter()
                .map(|e| parse_complex(e))
                .collect::<Result<Vec<_>, _>>()?;
            let dim = (1..=4usize)
                .map(|k| 1 << k)
                .find(|d| d * d == values.len())
                .ok_or_else(|| format!("{} entries do not form a 2^k × 2^k matrix", values.len()))?;
            Ok(Target::Unitary(CMatrix::from_row_slice(dim, dim, &values)))
        }
        ["measure", axis, outcome] => {
            let rule = outcome.strip_prefix("outcome=").ok_or("expected `outcome=RULE`")?;
            Ok(Target::Measure {
                axis: parse_axis(axis)?,
                outcome: AffineBit::parse(rule)?,
            })
        }
        _ => Err("expected `target gate NAME`, `target unitary …` or `target measure AXIS outcome=RULE`".into()),
    }
}
