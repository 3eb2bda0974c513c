use super::rotation::{coaxial_distance, theta_star};
use super::CompileError;

pub const DEFAULT_K_MAX: usize = 1_000_000;

/// Largest exponent tried when looking for an exact hit before approximating.
pub const EXACT_K: usize = 16;
/// Distance below which a power counts as an exact hit.
pub const EXACT_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PowerFit {
    pub k: usize,
    /// Phase-invariant distance between `R(α)` and `R(θ*)^k`.
    pub achieved: f64,
}

/// Smallest `k ≤ k_max` with `d(R(α), R(θ*)^k) < ε` about a common axis.
///
/// Only the circle distance `|kθ* − α| mod 2π` is evaluated, so the loop
/// does no matrix work. The axis is irrelevant: every rotation axis gives
/// the same distance.
pub fn approx_power(alpha: f64, epsilon: f64, k_max: usize) -> Result<PowerFit, CompileError> {
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(CompileError::BadEpsilon(epsilon));
    }
    let theta = theta_star();
    let mut best = PowerFit {
        k: 0,
        achieved: f64::INFINITY,
    };
    for k in 0..=k_max {
        let achieved = coaxial_distance(alpha, k as f64 * theta);
        if achieved < epsilon {
            return Ok(PowerFit { k, achieved });
        }
        if achieved < best.achieved {
            best = PowerFit { k, achieved };
        }
    }
    Err(CompileError::PowerNotFound {
        alpha,
        epsilon,
        k_max,
        best_k: best.k,
        best_distance: best.achieved,
    })
}

/// A `k ≤ EXACT_K` reproducing `α` exactly, if any.
pub fn exact_power(alpha: f64) -> Option<PowerFit> {
    let theta = theta_star();
    (0..=EXACT_K)
        .map(|k| PowerFit {
            k,
            achieved: coaxial_distance(alpha, k as f64 * theta),
        })
        .find(|f| f.achieved < EXACT_TOL)
}
