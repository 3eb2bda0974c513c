use super::linalg::{gates, kron_all, CMatrix, C64};
use super::QuantumError;
use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;

const UNIT_TOL: f64 = 1e-12;

/// A unit vector on the Bloch sphere, read as the observable `xX + yY + zZ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochAxis {
    x: f64,
    y: f64,
    z: f64,
}

impl BlochAxis {
    pub const X: BlochAxis = BlochAxis { x: 1.0, y: 0.0, z: 0.0 };
    pub const Y: BlochAxis = BlochAxis { x: 0.0, y: 1.0, z: 0.0 };
    pub const Z: BlochAxis = BlochAxis { x: 0.0, y: 0.0, z: 1.0 };
    /// (X − Y)/√2
    pub const X_MINUS_Y: BlochAxis = BlochAxis {
        x: FRAC_1_SQRT_2,
        y: -FRAC_1_SQRT_2,
        z: 0.0,
    };

    /// Accepts components that already form a unit vector.
    pub fn new(x: f64, y: f64, z: f64) -> Result<Self, QuantumError> {
        let norm2 = x * x + y * y + z * z;
        if !norm2.is_finite() || (norm2 - 1.0).abs() > UNIT_TOL {
            return Err(QuantumError::NotUnitAxis { x, y, z });
        }
        Ok(BlochAxis { x, y, z })
    }

    /// Rescales an arbitrary nonzero vector onto the sphere.
    pub fn normalized(x: f64, y: f64, z: f64) -> Result<Self, QuantumError> {
        let norm = (x * x + y * y + z * z).sqrt();
        if !norm.is_finite() || norm < 1e-300 {
            return Err(QuantumError::NotUnitAxis { x, y, z });
        }
        Ok(BlochAxis {
            x: x / norm,
            y: y / norm,
            z: z / norm,
        })
    }

    pub fn components(&self) -> [f64; 3] {
        [self.x, self.y, self.z]
    }

    pub fn dot(&self, other: &BlochAxis) -> f64 {
        self.x * other.x + self.y * other.y + self.z * other.z
    }

    pub fn neg(&self) -> BlochAxis {
        BlochAxis {
            x: -self.x,
            y: -self.y,
            z: -self.z,
        }
    }

    /// True when the axes agree up to sign, i.e. the observables commute.
    pub fn is_parallel(&self, other: &BlochAxis, tol: f64) -> bool {
        (self.dot(other).abs() - 1.0).abs() <= tol
    }

    pub fn approx_eq(&self, other: &BlochAxis, tol: f64) -> bool {
        (self.x - other.x).abs() <= tol && (self.y - other.y).abs() <= tol && (self.z - other.z).abs() <= tol
    }

    pub fn matrix(&self) -> CMatrix {
        gates::pauli_x() * C64::from(self.x)
            + gates::pauli_y() * C64::from(self.y)
            + gates::pauli_z() * C64::from(self.z)
    }

    /// Normalized eigenvector for eigenvalue +1 (`Plus`) or -1 (`Minus`).
    pub fn eigenvector(&self, outcome: Outcome) -> [C64; 2] {
        let axis = match outcome {
            Outcome::Plus => *self,
            Outcome::Minus => self.neg(),
        };
        let theta = axis.z.clamp(-1.0, 1.0).acos();
        let phi = axis.y.atan2(axis.x);
        [
            C64::from((theta / 2.0).cos()),
            C64::from_polar((theta / 2.0).sin(), phi),
        ]
    }

    /// Short label for the axes named in the observable families.
    pub fn label(&self) -> String {
        const NAMED: [(BlochAxis, &str); 4] = [
            (BlochAxis::X, "X"),
            (BlochAxis::Y, "Y"),
            (BlochAxis::Z, "Z"),
            (BlochAxis::X_MINUS_Y, "(X-Y)/sqrt2"),
        ];
        for (axis, name) in NAMED {
            if self.approx_eq(&axis, 1e-12) {
                return name.to_string();
            }
            if self.approx_eq(&axis.neg(), 1e-12) {
                return format!("-{name}");
            }
        }
        format!("({},{},{})", self.x, self.y, self.z)
    }
}

impl fmt::Display for BlochAxis {
    /// Shortest round-trip decimal form, so parsing gives back the same bits.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{},{}", self.x, self.y, self.z)
    }
}

/// Measurement outcome: `Plus` is eigenvalue +1 (bit 0), `Minus` is -1 (bit 1).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn bit(self) -> u8 {
        match self {
            Outcome::Plus => 0,
            Outcome::Minus => 1,
        }
    }

    pub fn from_bit(bit: u8) -> Result<Self, QuantumError> {
        match bit {
            0 => Ok(Outcome::Plus),
            1 => Ok(Outcome::Minus),
            b => Err(QuantumError::BadOutcomeBit(b)),
        }
    }

    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }
}

/// A ±1-valued observable: a tensor product of Bloch-axis observables on
/// distinct qubits. Factor `i` acts on `support[i]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Observable {
    factors: Vec<BlochAxis>,
    support: Vec<usize>,
}

impl Observable {
    pub fn new(factors: Vec<BlochAxis>, support: Vec<usize>) -> Result<Self, QuantumError> {
        if factors.is_empty() || factors.len() > 2 || factors.len() != support.len() {
            return Err(QuantumError::BadArity {
                factors: factors.len(),
                support: support.len(),
            });
        }
        if support.len() == 2 && support[0] == support[1] {
            return Err(QuantumError::RepeatedQubit(support[0]));
        }
        Ok(Observable { factors, support })
    }

    pub fn single(axis: BlochAxis, qubit: usize) -> Self {
        Observable {
            factors: vec![axis],
            support: vec![qubit],
        }
    }

    pub fn pair(first: BlochAxis, q0: usize, second: BlochAxis, q1: usize) -> Result<Self, QuantumError> {
        Observable::new(vec![first, second], vec![q0, q1])
    }

    pub fn factors(&self) -> &[BlochAxis] {
        &self.factors
    }

    pub fn support(&self) -> &[usize] {
        &self.support
    }

    /// Matrix on the support, first support qubit most significant.
    pub fn matrix(&self) -> CMatrix {
        let mats: Vec<CMatrix> = self.factors.iter().map(BlochAxis::matrix).collect();
        kron_all(mats.iter())
    }

    pub fn label(&self) -> String {
        self.factors
            .iter()
            .zip(&self.support)
            .map(|(f, q)| format!("{}_{q}", f.label()))
            .collect::<Vec<_>>()
            .join("*")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::{identity, max_abs_diff};

    #[test]
    fn z_matrix_is_diagonal() {
        let m = Observable::single(BlochAxis::Z, 0).matrix();
        assert!(max_abs_diff(&m, &gates::pauli_z()) < 1e-15);
    }

    #[test]
    fn x_minus_y_entries() {
        let m = BlochAxis::X_MINUS_Y.matrix();
        let r = FRAC_1_SQRT_2;
        assert!((m[(0, 0)]).norm() < 1e-15);
        assert!((m[(0, 1)] - C64::new(r, r)).norm() < 1e-15);
        assert!((m[(1, 0)] - C64::new(r, -r)).norm() < 1e-15);
        assert!((m[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn zx_has_x_and_minus_x_blocks() {
        let m = Observable::pair(BlochAxis::Z, 0, BlochAxis::X, 1).unwrap().matrix();
        let x = gates::pauli_x();
        for r in 0..2 {
            for c in 0..2 {
                assert_eq!(m[(r, c)], x[(r, c)]);
                assert_eq!(m[(r + 2, c + 2)], -x[(r, c)]);
                assert_eq!(m[(r, c + 2)], C64::from(0.0));
            }
        }
    }

    #[test]
    fn eigenvectors_match_eigenvalues() {
        for axis in [
            BlochAxis::X,
            BlochAxis::Y,
            BlochAxis::Z,
            BlochAxis::X_MINUS_Y,
            BlochAxis::Z.neg(),
        ] {
            let m = axis.matrix();
            for o in [Outcome::Plus, Outcome::Minus] {
                let v = nalgebra::DVector::from_vec(axis.eigenvector(o).to_vec());
                let mv = &m * &v;
                let diff = mv - &v * C64::from(o.sign());
                assert!(diff.norm() < 1e-12, "{axis} {o:?}");
                assert!((v.norm() - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(BlochAxis::new(1.0, 1.0, 0.0).is_err());
        assert!(BlochAxis::new(f64::NAN, 0.0, 0.0).is_err());
        assert!(BlochAxis::normalized(0.0, 0.0, 0.0).is_err());
        assert!(Observable::pair(BlochAxis::Z, 1, BlochAxis::X, 1).is_err());
        assert!(Observable::new(vec![], vec![]).is_err());
        assert!(Outcome::from_bit(2).is_err());
    }

    #[test]
    fn squares_to_identity() {
        let obs = Observable::pair(BlochAxis::X_MINUS_Y, 2, BlochAxis::Z, 0).unwrap();
        let m = obs.matrix();
        assert!(max_abs_diff(&(&m * &m), &identity(4)) < 1e-12);
    }
}
