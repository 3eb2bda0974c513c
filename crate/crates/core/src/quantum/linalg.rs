//! Small dense complex matrices and the fixed gate set.
//!
//! Matrices acting on an ordered qubit list use the textbook Kronecker
//! convention: the first listed qubit is the most significant bit of the
//! local basis index. Register-wide state vectors use the opposite
//! convention (qubit 0 is the least significant bit); [`StateVector`]
//! handles the translation.
//!
//! [`StateVector`]: crate::quantum::StateVector

use nalgebra::DMatrix;
use num_complex::Complex64;
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_4};

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Builds a square matrix from row-major entries.
pub fn square(dim: usize, entries: &[C64]) -> CMatrix {
    assert_eq!(entries.len(), dim * dim, "expected {} entries", dim * dim);
    CMatrix::from_row_slice(dim, dim, entries)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Kronecker product of the factors, first factor most significant.
pub fn kron_all<'a, It>(factors: It) -> CMatrix
where
    It: IntoIterator<Item = &'a CMatrix>,
{
    factors.into_iter().fold(identity(1), |acc, f| acc.kronecker(f))
}

/// Largest entry-wise modulus of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter().zip(b.iter()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

pub fn is_unitary(m: &CMatrix, tol: f64) -> bool {
    if !m.is_square() {
        return false;
    }
    let prod = m.adjoint() * m;
    max_abs_diff(&prod, &identity(m.nrows())) <= tol
}

pub fn det2(m: &CMatrix) -> C64 {
    m[(0, 0)] * m[(1, 1)] - m[(0, 1)] * m[(1, 0)]
}

/// Eigenvalues of a unitary matrix.
///
/// 2×2 inputs use the closed form; larger inputs go through the complex
/// Schur decomposition, whose triangular factor carries the spectrum.
pub fn unitary_eigenvalues(u: &CMatrix) -> Vec<C64> {
    assert!(u.is_square());
    match u.nrows() {
        1 => vec![u[(0, 0)]],
        2 => {
            let tr = u[(0, 0)] + u[(1, 1)];
            let det = det2(u);
            let disc = (tr * tr - det * 4.0).sqrt();
            vec![(tr + disc) / 2.0, (tr - disc) / 2.0]
        }
        _ => {
            let schur = nalgebra::Schur::new(u.clone());
            let (_, t) = schur.unpack();
            (0..t.nrows()).map(|i| t[(i, i)]).collect()
        }
    }
}

pub mod gates {
    //! The named gates used throughout the toolkit.

    use super::*;

    pub fn pauli_x() -> CMatrix {
        square(2, &[ZERO, ONE, ONE, ZERO])
    }

    pub fn pauli_y() -> CMatrix {
        square(2, &[ZERO, -I, I, ZERO])
    }

    pub fn pauli_z() -> CMatrix {
        square(2, &[ONE, ZERO, ZERO, -ONE])
    }

    pub fn hadamard() -> CMatrix {
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        square(2, &[h, h, h, -h])
    }

    pub fn t() -> CMatrix {
        square(2, &[ONE, ZERO, ZERO, C64::from_polar(1.0, FRAC_PI_4)])
    }

    pub fn s() -> CMatrix {
        square(2, &[ONE, ZERO, ZERO, I])
    }

    /// The product H·T (T acts first).
    pub fn ht() -> CMatrix {
        hadamard() * t()
    }

    pub fn cz() -> CMatrix {
        CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![ONE, ONE, ONE, -ONE]))
    }

    /// Controlled-X with the first qubit as control.
    pub fn cx() -> CMatrix {
        let mut m = CMatrix::zeros(4, 4);
        m[(0, 0)] = ONE;
        m[(1, 1)] = ONE;
        m[(2, 3)] = ONE;
        m[(3, 2)] = ONE;
        m
    }

    /// ΛZ·(Id⊗H): Hadamard on the second qubit followed by controlled-Z.
    pub fn czh() -> CMatrix {
        cz() * identity(2).kronecker(&hadamard())
    }

    /// Looks up a gate by its canonical name.
    pub fn by_name(name: &str) -> Option<CMatrix> {
        Some(match name {
            "I" => identity(2),
            "I2" => identity(4),
            "X" => pauli_x(),
            "Y" => pauli_y(),
            "Z" => pauli_z(),
            "H" => hadamard(),
            "T" => t(),
            "S" => s(),
            "HT" => ht(),
            "CZ" => cz(),
            "CX" => cx(),
            "CZH" => czh(),
            _ => return None,
        })
    }
}
