use super::CompileError;
use crate::quantum::linalg::{det2, identity, is_unitary, unitary_eigenvalues, I};
use crate::quantum::{BlochAxis, CMatrix, C64};
use std::f64::consts::{FRAC_PI_8, PI, TAU};

/// Angles below this are treated as the identity rotation.
const ANGLE_EPS: f64 = 1e-12;

/// A Bloch-sphere rotation `R_n(θ) = cos(θ/2) I − i sin(θ/2) n·σ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Rotation {
    pub axis: BlochAxis,
    /// Radians in `[0, 4π)`.
    pub angle: f64,
}

impl Rotation {
    pub fn new(axis: BlochAxis, angle: f64) -> Self {
        Rotation {
            axis,
            angle: angle.rem_euclid(2.0 * TAU),
        }
    }

    pub fn matrix(&self) -> CMatrix {
        rotation_matrix(self.axis, self.angle)
    }

    /// Action on Bloch vectors (Rodrigues' formula).
    pub fn apply_to(&self, v: [f64; 3]) -> [f64; 3] {
        rotate_vector(self.axis, self.angle, v)
    }
}

pub fn rotation_matrix(axis: BlochAxis, angle: f64) -> CMatrix {
    let (s, c) = (angle / 2.0).sin_cos();
    identity(2) * C64::from(c) - axis.matrix() * (I * s)
}

pub(crate) fn rotate_vector(axis: BlochAxis, angle: f64, v: [f64; 3]) -> [f64; 3] {
    let n = axis.components();
    let (s, c) = angle.sin_cos();
    let cross = cross(n, v);
    let d = dot(n, v);
    [0, 1, 2].map(|i| v[i] * c + cross[i] * s + n[i] * d * (1.0 - c))
}

pub(crate) fn dot(a: [f64; 3], b: [f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

/// `U = e^{i·phase} · R_axis(angle)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AxisAngle {
    pub rotation: Rotation,
    /// Global phase in `[0, 2π)`.
    pub phase: f64,
    /// False when the angle is zero and the axis is an arbitrary placeholder.
    pub axis_defined: bool,
}

/// Splits a 2×2 unitary into a global phase and a rotation.
///
/// The representation is canonical: the angle lies in `[0, π]` (the `SU(2)`
/// sign is absorbed into the phase), and at exactly `π`, where `n` and `−n`
/// describe the same operator, the axis with a positive first nonzero
/// component is chosen. An identity-like input gets angle 0 and the `z`
/// axis with `axis_defined = false`.
pub fn axis_angle_of(u: &CMatrix) -> Result<AxisAngle, CompileError> {
    if u.shape() != (2, 2) {
        return Err(CompileError::Dimension {
            expected: 2,
            got: u.nrows(),
        });
    }
    if !is_unitary(u, 1e-10) {
        return Err(CompileError::NotUnitary);
    }
    let (mut phase, a0, a) = su2_parts(u);
    let s = dot(a, a).sqrt();
    let angle = 2.0 * s.atan2(a0);
    if angle < ANGLE_EPS {
        return Ok(AxisAngle {
            rotation: Rotation {
                axis: BlochAxis::Z,
                angle: 0.0,
            },
            phase: phase.rem_euclid(TAU),
            axis_defined: false,
        });
    }
    let mut axis = a.map(|x| x / s);
    if a0 < ANGLE_EPS {
        // Angle π: R_n(π) = −R_{−n}(π) up to the phase already taken.
        let first = axis.iter().copied().find(|x| x.abs() > 1e-12).unwrap_or(1.0);
        if first < 0.0 {
            axis = axis.map(|x| -x);
            phase += PI;
        }
    }
    Ok(AxisAngle {
        rotation: Rotation {
            axis: BlochAxis::normalized(axis[0], axis[1], axis[2]).expect("nonzero axis"),
            angle,
        },
        phase: phase.rem_euclid(TAU),
        axis_defined: true,
    })
}

/// `(φ, a0, a)` with `U = e^{iφ}(a0 I − i a·σ)` and `a0 ≥ 0`, read off the
/// entries directly so that tiny rotation angles keep full precision.
fn su2_parts(u: &CMatrix) -> (f64, f64, [f64; 3]) {
    let phase = det2(u).arg() / 2.0;
    let v = u * C64::from_polar(1.0, -phase);
    let a0 = (v[(0, 0)].re + v[(1, 1)].re) / 2.0;
    let a = [
        -(v[(0, 1)].im + v[(1, 0)].im) / 2.0,
        (v[(1, 0)].re - v[(0, 1)].re) / 2.0,
        (v[(1, 1)].im - v[(0, 0)].im) / 2.0,
    ];
    if a0 < 0.0 {
        (phase + PI, -a0, a.map(|x| -x))
    } else {
        (phase, a0, a)
    }
}

/// `θ*` with `cos(θ*/2) = cos²(π/8)`.
pub fn theta_star() -> f64 {
    2.0 * FRAC_PI_8.cos().powi(2).acos()
}

/// Rotation axis of `(HT)²`: `∝ (cos π/8, −sin π/8, cos π/8)`.
pub fn axis_n() -> BlochAxis {
    let (s, c) = FRAC_PI_8.sin_cos();
    BlochAxis::normalized(c, -s, c).expect("nonzero")
}

/// Rotation axis of `(σ_y·HT)²`: `∝ (−cos π/8, sin π/8, cos π/8)`.
pub fn axis_m() -> BlochAxis {
    let (s, c) = FRAC_PI_8.sin_cos();
    BlochAxis::normalized(-c, s, c).expect("nonzero")
}

/// `min_φ ‖A − e^{iφ}B‖₂`.
///
/// With the eigenphases of `A†B` covered by a minimal arc of width `w`,
/// the optimum puts `e^{iφ}` at the arc's midpoint and the distance is
/// `2 sin(w/4)`.
pub fn distance_up_to_phase(a: &CMatrix, b: &CMatrix) -> Result<f64, CompileError> {
    if a.shape() != b.shape() || !a.is_square() {
        return Err(CompileError::Dimension {
            expected: a.nrows(),
            got: b.nrows(),
        });
    }
    let w = a.adjoint() * b;
    if w.nrows() == 2 {
        // The SU(2) angle of A†B is exactly the arc between its eigenphases.
        let (_, a0, v) = su2_parts(&w);
        let arc = 2.0 * dot(v, v).sqrt().atan2(a0);
        return Ok(2.0 * (arc / 4.0).sin());
    }
    let mut phases: Vec<f64> = unitary_eigenvalues(&w)
        .iter()
        .map(|z| z.arg().rem_euclid(TAU))
        .collect();
    phases.sort_by(f64::total_cmp);
    let largest_gap = phases
        .windows(2)
        .map(|w| w[1] - w[0])
        .chain(std::iter::once(phases[0] + TAU - phases[phases.len() - 1]))
        .fold(0.0, f64::max);
    let arc = (TAU - largest_gap).max(0.0);
    Ok(2.0 * (arc / 4.0).sin())
}

/// Phase-invariant distance between `R(α)` and `R(β)` about a common axis.
pub fn coaxial_distance(alpha: f64, beta: f64) -> f64 {
    let delta = (beta - alpha + PI).rem_euclid(TAU) - PI;
    2.0 * (delta.abs() / 4.0).sin()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quantum::linalg::{gates, max_abs_diff, ONE};

    #[test]
    fn special_unitary() {
        let r = rotation_matrix(axis_n(), 0.7);
        assert!((det2(&r) - ONE).norm() < 1e-12);
        assert!(max_abs_diff(&rotation_matrix(axis_m(), 0.0), &identity(2)) < 1e-15);
        assert!(max_abs_diff(&rotation_matrix(axis_m(), TAU), &(identity(2) * -ONE)) < 1e-12);
    }

    #[test]
    fn t_is_a_z_rotation() {
        let r = rotation_matrix(BlochAxis::Z, PI / 4.0) * C64::from_polar(1.0, PI / 8.0);
        assert!(max_abs_diff(&r, &gates::t()) < 1e-12);
    }

    #[test]
    fn sigma_z_decomposes() {
        let aa = axis_angle_of(&gates::pauli_z()).unwrap();
        assert!(aa.rotation.axis.approx_eq(&BlochAxis::Z, 1e-12));
        assert!((aa.rotation.angle - PI).abs() < 1e-12);
        assert!((aa.phase - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn identity_flags_axis() {
        let aa = axis_angle_of(&(identity(2) * C64::from_polar(1.0, 0.3))).unwrap();
        assert!(!aa.axis_defined);
        assert_eq!(aa.rotation.angle, 0.0);
        assert!((aa.phase - 0.3).abs() < 1e-12);
    }

    #[test]
    fn distances() {
        assert!((distance_up_to_phase(&identity(2), &gates::pauli_z()).unwrap() - 2f64.sqrt()).abs() < 1e-12);
        let ph = identity(2) * C64::from_polar(1.0, 1.234);
        assert!(distance_up_to_phase(&identity(2), &ph).unwrap() < 1e-12);
        assert!(distance_up_to_phase(&identity(2), &identity(4)).is_err());
        let a = rotation_matrix(axis_n(), 0.3);
        let b = rotation_matrix(axis_n(), 1.1);
        let d = distance_up_to_phase(&a, &b).unwrap();
        assert!((d - coaxial_distance(0.3, 1.1)).abs() < 1e-12);
    }

    #[test]
    fn rodrigues_matches_conjugation() {
        let r = Rotation::new(axis_m(), 0.9);
        let v = [0.3, -0.5, 0.812403840463596];
        let rv = r.apply_to(v);
        let vm = BlochAxis::normalized(v[0], v[1], v[2]).unwrap().matrix();
        let conj = r.matrix() * vm * r.matrix().adjoint();
        let expect = BlochAxis::normalized(rv[0], rv[1], rv[2]).unwrap().matrix();
        let scale = dot(v, v).sqrt();
        assert!(max_abs_diff(&conj, &(expect * C64::from(scale))) < 1e-12);
    }
}
