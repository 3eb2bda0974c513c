use super::rotation::{axis_angle_of, cross, dot, rotate_vector, rotation_matrix};
use super::CompileError;
use crate::quantum::linalg::{is_unitary, max_abs_diff};
use crate::quantum::{BlochAxis, CMatrix, C64};
use std::f64::consts::TAU;

/// `U = e^{iα} R_n(β) R_m(γ) R_n(δ)`, all angles in `[0, 2π)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EulerAngles {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
}

impl EulerAngles {
    pub fn recompose(&self, n: BlochAxis, m: BlochAxis) -> CMatrix {
        rotation_matrix(n, self.beta)
            * rotation_matrix(m, self.gamma)
            * rotation_matrix(n, self.delta)
            * C64::from_polar(1.0, self.alpha)
    }
}

/// Decomposes `U` about two non-parallel axes.
///
/// The middle angle is fixed by how far `U` tilts `n`: since `R_n(δ)` fixes
/// `n` and `R_n(β)` preserves the `n`-component, `n·U(n) = n·R_m(γ)(n)`,
/// which is affine in `cos γ`. `β` then aligns `R_m(γ)(n)` with `U(n)`
/// around `n`, and `δ` is what remains.
///
/// For non-orthogonal axes three factors cannot reach every rotation: `γ`
/// exists only when the angle between `n` and `U(n)` is at most twice the
/// angle between the axes (measured as the acute angle between lines).
/// Outside that cone the result is [`CompileError::Unreachable`].
pub fn euler_decompose(u: &CMatrix, n: BlochAxis, m: BlochAxis) -> Result<EulerAngles, CompileError> {
    if u.shape() != (2, 2) {
        return Err(CompileError::Dimension {
            expected: 2,
            got: u.nrows(),
        });
    }
    if !is_unitary(u, 1e-10) {
        return Err(CompileError::NotUnitary);
    }
    let c = n.dot(&m);
    if c.abs() > 1.0 - 1e-9 {
        return Err(CompileError::ParallelAxes);
    }
    let nv = n.components();
    let aa = axis_angle_of(u)?;
    let v = rotate_vector(aa.rotation.axis, aa.rotation.angle, nv);

    let cos_gamma = (dot(nv, v) - c * c) / (1.0 - c * c);
    if !(-1.0 - 1e-9..=1.0 + 1e-9).contains(&cos_gamma) {
        return Err(CompileError::Unreachable {
            tilt: dot(nv, v).clamp(-1.0, 1.0).acos(),
        });
    }
    // Near γ = 0 the half-angle form keeps full precision:
    // |n − v|² = 4(1 − c²) sin²(γ/2).
    let chord = {
        let d = [nv[0] - v[0], nv[1] - v[1], nv[2] - v[2]];
        dot(d, d).sqrt() / 2.0
    };
    let half_sin = chord / (1.0 - c * c).sqrt();
    let gamma = if half_sin < std::f64::consts::FRAC_1_SQRT_2 {
        2.0 * half_sin.asin()
    } else {
        cos_gamma.clamp(-1.0, 1.0).acos()
    };
    let w = rotate_vector(m, gamma, nv);

    // Signed angle about n from the part of w perpendicular to n to that of v.
    let perp = |x: [f64; 3]| {
        let d = dot(nv, x);
        [x[0] - d * nv[0], x[1] - d * nv[1], x[2] - d * nv[2]]
    };
    let (wp, vp) = (perp(w), perp(v));
    let beta = if dot(wp, wp) < 1e-20 || dot(vp, vp) < 1e-20 {
        0.0
    } else {
        dot(nv, cross(wp, vp)).atan2(dot(wp, vp))
    };

    let head = rotation_matrix(n, beta) * rotation_matrix(m, gamma);
    let rest = head.adjoint() * u;
    // rest = e^{iα} R_n(δ): its rotation part fixes n.
    let ra = axis_angle_of(&rest)?;
    let along = ra.rotation.axis.dot(&n);
    let delta = if along >= 0.0 {
        ra.rotation.angle
    } else {
        -ra.rotation.angle
    };

    let mut angles = EulerAngles {
        alpha: 0.0,
        beta: beta.rem_euclid(TAU),
        gamma: gamma.rem_euclid(TAU),
        delta: delta.rem_euclid(TAU),
    };
    // Read the phase off the largest entry of the recomposed product.
    let recomposed = angles.recompose(n, m);
    let (idx, pivot) = recomposed
        .iter()
        .enumerate()
        .max_by(|x, y| x.1.norm_sqr().total_cmp(&y.1.norm_sqr()))
        .expect("2×2");
    angles.alpha = (u.as_slice()[idx] / pivot).arg().rem_euclid(TAU);

    let residual = max_abs_diff(&angles.recompose(n, m), u);
    if residual > 1e-7 {
        return Err(CompileError::Decomposition { residual });
    }
    Ok(angles)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::rotation::{axis_m, axis_n, theta_star};
    use crate::quantum::linalg::{gates, identity};

    #[test]
    fn trivial_cases() {
        let e = euler_decompose(&identity(2), axis_n(), axis_m()).unwrap();
        assert!(max_abs_diff(&e.recompose(axis_n(), axis_m()), &identity(2)) < 1e-12);
        let r = rotation_matrix(axis_n(), theta_star());
        let e = euler_decompose(&r, axis_n(), axis_m()).unwrap();
        assert!(max_abs_diff(&e.recompose(axis_n(), axis_m()), &r) < 1e-12);
        assert!(e.gamma.abs() < 1e-7 || (TAU - e.gamma).abs() < 1e-7);
    }

    #[test]
    fn orthogonal_axes_reach_everything() {
        for g in [gates::hadamard(), gates::t(), gates::pauli_y(), gates::s()] {
            let e = euler_decompose(&g, BlochAxis::Z, BlochAxis::Y).unwrap();
            assert!(max_abs_diff(&e.recompose(BlochAxis::Z, BlochAxis::Y), &g) < 1e-10);
        }
    }

    #[test]
    fn parallel_axes_rejected() {
        let e = euler_decompose(&gates::hadamard(), BlochAxis::Z, BlochAxis::Z.neg());
        assert_eq!(e, Err(CompileError::ParallelAxes));
    }

    #[test]
    fn out_of_cone_target_is_unreachable() {
        // Flipping n onto −n is beyond a three-factor product about n, m.
        let n = axis_n().components();
        let target_axis = {
            // A rotation by π about an axis perpendicular to n sends n to −n.
            let p = cross(n, [0.0, 0.0, 1.0]);
            BlochAxis::normalized(p[0], p[1], p[2]).unwrap()
        };
        let u = rotation_matrix(target_axis, std::f64::consts::PI);
        assert!(matches!(
            euler_decompose(&u, axis_n(), axis_m()),
            Err(CompileError::Unreachable { .. })
        ));
    }
}
