use crate::quantum::Outcome;
use std::fmt;

/// A bit computed as `constant ⊕ s_{i1} ⊕ s_{i2} ⊕ …` over measurement
/// outcomes. Terms are 1-based step numbers, matching the `s1, s2, …`
/// labels of the text format.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct AffineBit {
    constant: bool,
    /// Bit `i` set means `s_{i+1}` participates.
    terms: u64,
}

pub const MAX_TERMS: usize = 64;

impl AffineBit {
    pub const ZERO: AffineBit = AffineBit {
        constant: false,
        terms: 0,
    };
    pub const ONE: AffineBit = AffineBit {
        constant: true,
        terms: 0,
    };

    /// XOR of the given 1-based outcome labels.
    pub fn of(labels: &[usize]) -> Self {
        let mut bit = AffineBit::ZERO;
        for &l in labels {
            assert!((1..=MAX_TERMS).contains(&l), "outcome label {l} out of range");
            bit.terms ^= 1 << (l - 1);
        }
        bit
    }

    pub fn plus_one(mut self) -> Self {
        self.constant = !self.constant;
        self
    }

    pub fn constant(&self) -> bool {
        self.constant
    }

    /// Largest label used, or 0 for a constant.
    pub fn max_label(&self) -> usize {
        (u64::BITS - self.terms.leading_zeros()) as usize
    }

    pub fn labels(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_TERMS).filter(|i| self.terms >> i & 1 == 1).map(|i| i + 1)
    }

    /// Panics if a referenced outcome is missing; callers validate lengths.
    pub fn eval(&self, outcomes: &[Outcome]) -> bool {
        self.labels()
            .fold(self.constant, |acc, l| acc ^ (outcomes[l - 1] == Outcome::Minus))
    }

    /// Parses `0`, `1`, `s2`, `s1+s3`, `1+s2+s4`.
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut bit = AffineBit::ZERO;
        for part in text.split('+') {
            match part {
                "0" => {}
                "1" => bit.constant = !bit.constant,
                _ => {
                    let label: usize = part
                        .strip_prefix('s')
                        .and_then(|n| n.parse().ok())
                        .filter(|n| (1..=MAX_TERMS).contains(n))
                        .ok_or_else(|| format!("`{part}` is not 0, 1 or s<k>"))?;
                    bit.terms ^= 1 << (label - 1);
                }
            }
        }
        Ok(bit)
    }
}

impl fmt::Display for AffineBit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.constant {
            parts.push("1".into());
        }
        parts.extend(self.labels().map(|l| format!("s{l}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join("+"))
        }
    }
}
