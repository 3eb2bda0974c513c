//! Single-qubit targets given inline: either a gate word read as an
//! operator product (`HTHT`, `H S`, `I`), or four row-major complex entries
//! `re,im;re,im;re,im;re,im`.

use crate::parse::{parse_complex, ParseError};
use crate::quantum::linalg::{gates, identity, is_unitary};
use crate::quantum::CMatrix;

pub fn parse_target(spec: &str) -> Result<CMatrix, ParseError> {
    let bad = |m: String| ParseError::new(0, m);
    let spec = spec.trim();
    if spec.is_empty() {
        return Err(bad("empty target".into()));
    }
    if spec.contains(',') {
        let entries = spec
            .split(';')
            .map(|e| parse_complex(e.trim()).map_err(bad))
            .collect::<Result<Vec<_>, _>>()?;
        if entries.len() != 4 {
            return Err(bad(format!("expected 4 entries, got {}", entries.len())));
        }
        let m = CMatrix::from_row_slice(2, 2, &entries);
        if !is_unitary(&m, 1e-10) {
            return Err(bad("matrix is not unitary".into()));
        }
        return Ok(m);
    }
    let mut m = identity(2);
    let mut rest = spec;
    while let Some(c) = rest.chars().next() {
        let name = if rest.starts_with("HT") {
            "HT"
        } else {
            &rest[..c.len_utf8()]
        };
        let g = if name == "I" {
            identity(2)
        } else {
            gates::by_name(name).ok_or_else(|| bad(format!("unknown gate `{name}`")))?
        };
        m *= g;
        rest = rest[name.len()..].trim_start();
    }
    Ok(m)
}
