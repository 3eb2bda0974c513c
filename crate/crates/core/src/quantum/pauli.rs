use super::linalg::{gates, identity, kron_all, CMatrix, C64};
use std::collections::BTreeMap;
use std::fmt;
use std::ops::Mul;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => identity(2),
            Pauli::X => gates::pauli_x(),
            Pauli::Y => gates::pauli_y(),
            Pauli::Z => gates::pauli_z(),
        }
    }

    /// Single-qubit product `self · rhs` as (power of i, letter).
    fn mul_letter(self, rhs: Pauli) -> (u8, Pauli) {
        use Pauli::*;
        match (self, rhs) {
            (I, p) | (p, I) => (0, p),
            (a, b) if a == b => (0, I),
            (X, Y) => (1, Z),
            (Y, Z) => (1, X),
            (Z, X) => (1, Y),
            (Y, X) => (3, Z),
            (Z, Y) => (3, X),
            (X, Z) => (3, Y),
            _ => unreachable!(),
        }
    }

    /// Letter for `X^x Z^z` together with the power of i it carries:
    /// X·Z = -iY.
    pub fn from_xz(x: bool, z: bool) -> (u8, Pauli) {
        match (x, z) {
            (false, false) => (0, Pauli::I),
            (true, false) => (0, Pauli::X),
            (false, true) => (0, Pauli::Z),
            (true, true) => (3, Pauli::Y),
        }
    }

    pub fn has_x(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    pub fn has_z(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_symbol(c: char) -> Option<Pauli> {
        Some(match c {
            'I' => Pauli::I,
            'X' => Pauli::X,
            'Y' => Pauli::Y,
            'Z' => Pauli::Z,
            _ => return None,
        })
    }
}

/// Phase · ⊗_q letter(q), with phase a power of i.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct PauliString {
    phase: u8,
    letters: BTreeMap<usize, Pauli>,
}

impl PauliString {
    pub fn identity() -> Self {
        Self::default()
    }

    pub fn single(qubit: usize, letter: Pauli) -> Self {
        let mut p = Self::identity();
        p.set(qubit, letter);
        p
    }

    pub fn from_letters<It: IntoIterator<Item = (usize, Pauli)>>(letters: It) -> Self {
        let mut p = Self::identity();
        for (q, l) in letters {
            p.set(q, l);
        }
        p
    }

    /// `X^x Z^z` on each listed qubit, phases included.
    pub fn from_xz_bits<It: IntoIterator<Item = (usize, bool, bool)>>(bits: It) -> Self {
        let mut p = Self::identity();
        for (q, x, z) in bits {
            let (phase, letter) = Pauli::from_xz(x, z);
            p.phase = (p.phase + phase) % 4;
            p.set(q, letter);
        }
        p
    }

    pub fn with_phase(mut self, power_of_i: u8) -> Self {
        self.phase = power_of_i % 4;
        self
    }

    fn set(&mut self, qubit: usize, letter: Pauli) {
        if letter == Pauli::I {
            self.letters.remove(&qubit);
        } else {
            self.letters.insert(qubit, letter);
        }
    }

    /// Phase as a power of i (0..4).
    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn phase_factor(&self) -> C64 {
        match self.phase {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        }
    }

    pub fn letter(&self, qubit: usize) -> Pauli {
        self.letters.get(&qubit).copied().unwrap_or(Pauli::I)
    }

    /// Non-identity letters in qubit order.
    pub fn letters(&self) -> impl Iterator<Item = (usize, Pauli)> + '_ {
        self.letters.iter().map(|(&q, &l)| (q, l))
    }

    pub fn is_identity_up_to_phase(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.letters.keys().next_back().copied()
    }

    /// Dense matrix over qubits `0..n_qubits`, qubit 0 most significant.
    pub fn matrix(&self, n_qubits: usize) -> CMatrix {
        assert!(
            self.max_qubit().is_none_or(|q| q < n_qubits),
            "Pauli string does not fit in {n_qubits} qubits"
        );
        let mats: Vec<CMatrix> = (0..n_qubits).map(|q| self.letter(q).matrix()).collect();
        kron_all(mats.iter()) * self.phase_factor()
    }
}

impl Mul<&PauliString> for &PauliString {
    type Output = PauliString;

    fn mul(self, rhs: &PauliString) -> PauliString {
        let mut out = PauliString {
            phase: (self.phase + rhs.phase) % 4,
            letters: BTreeMap::new(),
        };
        let qubits: std::collections::BTreeSet<usize> =
            self.letters.keys().chain(rhs.letters.keys()).copied().collect();
        for q in qubits {
            let (ph, l) = self.letter(q).mul_letter(rhs.letter(q));
            out.phase = (out.phase + ph) % 4;
            out.set(q, l);
        }
        out
    }
}

impl Mul for PauliString {
    type Output = PauliString;

    fn mul(self, rhs: PauliString) -> PauliString {
        &self * &rhs
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["+", "+i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}")?;
        if self.letters.is_empty() {
            return write!(f, "I");
        }
        let body: Vec<String> = self.letters.iter().map(|(q, l)| format!("{}{q}", l.symbol())).collect();
        write!(f, "{}", body.join("."))
    }
}

/// The Pauli byproduct still owed on each logical wire, in `X^x Z^z` form.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PauliFrame {
    bits: Vec<(bool, bool)>,
}

impl PauliFrame {
    pub fn new(wires: usize) -> Self {
        PauliFrame {
            bits: vec![(false, false); wires],
        }
    }

    /// Left-multiplies `X^x Z^z` on a wire (phase dropped).
    pub fn push(&mut self, wire: usize, x: bool, z: bool) {
        let (fx, fz) = &mut self.bits[wire];
        *fx ^= x;
        *fz ^= z;
    }

    pub fn get(&self, wire: usize) -> (bool, bool) {
        self.bits[wire]
    }

    pub fn clear(&mut self, wire: usize) {
        self.bits[wire] = (false, false);
    }

    pub fn is_clear(&self) -> bool {
        self.bits.iter().all(|&(x, z)| !x && !z)
    }

    pub fn as_pauli_string(&self) -> PauliString {
        PauliString::from_xz_bits(self.bits.iter().enumerate().map(|(q, &(x, z))| (q, x, z)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::max_abs_diff;

    const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    #[test]
    fn z_times_x_is_i_y() {
        let p = PauliString::single(0, Pauli::Z) * PauliString::single(0, Pauli::X);
        assert_eq!(p, PauliString::single(0, Pauli::Y).with_phase(1));
    }

    #[test]
    fn x_squared_is_identity() {
        let p = PauliString::single(0, Pauli::X) * PauliString::single(0, Pauli::X);
        assert_eq!(p, PauliString::identity());
    }

    #[test]
    fn disjoint_supports_commute() {
        let p = PauliString::single(0, Pauli::Z) * PauliString::single(1, Pauli::X);
        assert_eq!(p.phase(), 0);
        assert_eq!(p.letter(0), Pauli::Z);
        assert_eq!(p.letter(1), Pauli::X);
        let m = p.matrix(2);
        let expected = Pauli::Z.matrix().kronecker(&Pauli::X.matrix());
        assert!(max_abs_diff(&m, &expected) < 1e-15);
    }

    #[test]
    fn product_table_agrees_with_matrices() {
        for a in ALL {
            for b in ALL {
                let pa = PauliString::single(0, a);
                let pb = PauliString::single(0, b);
                let prod = &pa * &pb;
                let direct = pa.matrix(1) * pb.matrix(1);
                assert!(max_abs_diff(&prod.matrix(1), &direct) < 1e-15, "{a:?}{b:?}");
            }
        }
    }

    #[test]
    fn i_sigma_y_matrix() {
        let m = PauliString::single(0, Pauli::Y).with_phase(1).matrix(1);
        let zx = Pauli::Z.matrix() * Pauli::X.matrix();
        assert!(max_abs_diff(&m, &zx) < 1e-15);
        assert_eq!(m[(0, 1)], C64::new(1.0, 0.0));
        assert_eq!(m[(1, 0)], C64::new(-1.0, 0.0));
    }

    #[test]
    fn xz_bits_carry_phase() {
        let p = PauliString::from_xz_bits([(0, true, true)]);
        let direct = Pauli::X.matrix() * Pauli::Z.matrix();
        assert!(max_abs_diff(&p.matrix(1), &direct) < 1e-15);
    }

    #[test]
    fn frame_accumulates_mod_two() {
        let mut f = PauliFrame::new(2);
        f.push(1, true, false);
        f.push(1, true, true);
        assert_eq!(f.get(1), (false, true));
        assert_eq!(f.as_pauli_string(), PauliString::single(1, Pauli::Z));
        f.clear(1);
        assert!(f.is_clear());
    }

    #[test]
    fn display() {
        let p = PauliString::from_letters([(0, Pauli::Z), (2, Pauli::X)]).with_phase(3);
        assert_eq!(p.to_string(), "-iZ0.X2");
        assert_eq!(PauliString::identity().to_string(), "+I");
    }
}
