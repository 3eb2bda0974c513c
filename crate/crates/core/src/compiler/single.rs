use super::euler::{euler_decompose, EulerAngles};
use super::power::{approx_power, exact_power, PowerFit, EXACT_TOL};
use super::rotation::{axis_m, axis_n, distance_up_to_phase, rotation_matrix, theta_star};
use super::word::{GateWord, M_BLOCK, N_BLOCK};
use super::CompileError;
use crate::parse::format_complex;
use crate::quantum::linalg::{identity, is_unitary};
use crate::quantum::CMatrix;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write;

/// Which of the two irrational-rotation axes a stage uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StageAxis {
    N,
    M,
}

impl StageAxis {
    pub fn name(self) -> &'static str {
        match self {
            StageAxis::N => "n",
            StageAxis::M => "m",
        }
    }
}

/// One rotation `R_axis(angle) ≈ R_axis(θ*)^k`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Stage {
    pub axis: StageAxis,
    pub angle: f64,
    pub k: usize,
    pub achieved: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ApproxReport {
    pub target: CMatrix,
    pub word: GateWord,
    /// Phase-invariant distance between the target and the word's product,
    /// computed from the emitted letters.
    pub distance: f64,
    pub epsilon: f64,
    pub angles: EulerAngles,
    /// Factors in product order, leftmost first: `n:β, m:γ, n:δ`, followed
    /// by `m:γ₀` when the target needed a pre-rotation.
    pub stages: Vec<Stage>,
    /// Pre-rotation about `m` applied before the three-factor product.
    pub pre_rotation: Option<f64>,
    pub stage_budget: f64,
}

impl ApproxReport {
    pub fn exponents(&self) -> Vec<usize> {
        self.stages.iter().map(|s| s.k).collect()
    }

    /// Sum of the per-stage distances, an upper bound on `distance`.
    pub fn stage_sum(&self) -> f64 {
        self.stages.iter().map(|s| s.achieved).sum()
    }

    /// `key=value` lines: one `approx` record, then one `stage` per factor.
    pub fn to_structured(&self) -> String {
        let mut out = String::new();
        let entries: Vec<String> = self.target.transpose().iter().map(|c| format_complex(*c)).collect();
        let ks: Vec<String> = self.exponents().iter().map(|k| k.to_string()).collect();
        let _ = writeln!(
            out,
            "approx target={} epsilon={} distance={:e} theta_star={} k={} alpha={} beta={} gamma={} delta={} pre_rotation={} word_length={} word={}",
            entries.join(";"),
            self.epsilon,
            self.distance,
            theta_star(),
            ks.join(","),
            self.angles.alpha,
            self.angles.beta,
            self.angles.gamma,
            self.angles.delta,
            self.pre_rotation.map_or("-".to_string(), |g| g.to_string()),
            self.word.len(),
            if self.word.is_empty() { "-".to_string() } else { self.word.compact().replace(' ', ",") },
        );
        for (i, s) in self.stages.iter().enumerate() {
            let _ = writeln!(
                out,
                "stage index={} axis={} angle={} k={} achieved={:e} budget={:e}",
                i + 1,
                s.axis.name(),
                s.angle,
                s.k,
                s.achieved,
                self.stage_budget
            );
        }
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let n = axis_n();
        let m = axis_m();
        let _ = writeln!(out, "theta*      {:.12} rad ({:.8}·π)", theta_star(), theta_star() / PI);
        let _ = writeln!(out, "axis n      {n}");
        let _ = writeln!(out, "axis m      {m}");
        let _ = writeln!(
            out,
            "angles      alpha {:.9}  beta {:.9}  gamma {:.9}  delta {:.9}",
            self.angles.alpha, self.angles.beta, self.angles.gamma, self.angles.delta
        );
        if let Some(g) = self.pre_rotation {
            let _ = writeln!(out, "pre-rotate  m by {g:.9}");
        }
        let _ = writeln!(
            out,
            "  {:<5} {:<4} {:>14} {:>8} {:>12}",
            "stage", "axis", "angle", "k", "distance"
        );
        for (i, s) in self.stages.iter().enumerate() {
            let _ = writeln!(
                out,
                "  {:<5} {:<4} {:>14.9} {:>8} {:>12.3e}",
                i + 1,
                s.axis.name(),
                s.angle,
                s.k,
                s.achieved
            );
        }
        let _ = writeln!(
            out,
            "total       {:.3e} (epsilon {}, stage budget {:.3e})",
            self.distance, self.epsilon, self.stage_budget
        );
        let _ = writeln!(out, "word length {}", self.word.len());
        out
    }
}

/// Approximates `U` by a word over `{HT, σ_y}`.
///
/// `U = e^{iα} R_n(β) R_m(γ) R_n(δ)` with each factor replaced by a power
/// of `R(θ*)` within `ε/3`. When no such triple exists, `U` is first split
/// as `U' R_m(γ₀)` for a fixed `γ₀` and the four factors share `ε/4` each.
/// Exact powers with small exponents are preferred over approximations.
pub fn compile_single_qubit(u: &CMatrix, epsilon: f64, k_max: usize) -> Result<ApproxReport, CompileError> {
    if u.shape() != (2, 2) {
        return Err(CompileError::Dimension {
            expected: 2,
            got: u.nrows(),
        });
    }
    if !is_unitary(u, 1e-10) {
        return Err(CompileError::NotUnitary);
    }
    if epsilon.is_nan() || epsilon <= 0.0 {
        return Err(CompileError::BadEpsilon(epsilon));
    }
    let (n, m) = (axis_n(), axis_m());
    if distance_up_to_phase(u, &identity(2))? < EXACT_TOL {
        return Ok(ApproxReport {
            target: u.clone(),
            word: GateWord::new(),
            distance: distance_up_to_phase(u, &identity(2))?,
            epsilon,
            angles: EulerAngles {
                alpha: 0.0,
                beta: 0.0,
                gamma: 0.0,
                delta: 0.0,
            },
            stages: Vec::new(),
            pre_rotation: None,
            stage_budget: epsilon,
        });
    }

    let (angles, pre_rotation) = match euler_decompose(u, n, m) {
        Ok(a) => (a, None),
        Err(CompileError::Unreachable { tilt }) => {
            let mut found = None;
            for g0 in [FRAC_PI_2, PI, 3.0 * FRAC_PI_2] {
                let reduced = u * rotation_matrix(m, g0).adjoint();
                if let Ok(a) = euler_decompose(&reduced, n, m) {
                    found = Some((a, Some(g0)));
                    break;
                }
            }
            found.ok_or(CompileError::Unreachable { tilt })?
        }
        Err(e) => return Err(e),
    };

    let mut plan = vec![
        (StageAxis::N, angles.beta),
        (StageAxis::M, angles.gamma),
        (StageAxis::N, angles.delta),
    ];
    if let Some(g0) = pre_rotation {
        plan.push((StageAxis::M, g0));
    }
    let stage_budget = epsilon / plan.len() as f64;
    let mut stages = Vec::with_capacity(plan.len());
    for (i, &(axis, angle)) in plan.iter().enumerate() {
        let PowerFit { k, achieved } = match exact_power(angle) {
            Some(fit) => fit,
            None => approx_power(angle, stage_budget, k_max).map_err(|e| e.in_stage(i + 1))?,
        };
        stages.push(Stage {
            axis,
            angle,
            k,
            achieved,
        });
    }

    // The rightmost factor acts first.
    let mut word = GateWord::new();
    for stage in stages.iter().rev() {
        let block: &[_] = match stage.axis {
            StageAxis::N => &N_BLOCK,
            StageAxis::M => &M_BLOCK,
        };
        for _ in 0..stage.k {
            word.letters.extend_from_slice(block);
        }
    }
    let distance = distance_up_to_phase(u, &word.single_qubit_matrix())?;
    Ok(ApproxReport {
        target: u.clone(),
        word,
        distance,
        epsilon,
        angles,
        stages,
        pre_rotation,
        stage_budget,
    })
}
