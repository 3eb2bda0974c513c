use super::linalg::{is_unitary, CMatrix, C64, ONE, ZERO};
use super::observable::{Observable, Outcome};
use super::QuantumError;
use rand::Rng;

const NORM_TOL: f64 = 1e-10;
/// Branches below this probability are never sampled.
pub const MIN_BRANCH_PROBABILITY: f64 = 1e-14;
pub const MAX_QUBITS: usize = 16;

/// Dense pure state. Basis index bit `q` holds qubit `q` (qubit 0 least
/// significant).
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amps: Vec<C64>,
}

/// Unnormalized image of a state under one spectral projector.
#[derive(Clone, Debug)]
pub struct Projection {
    pub probability: f64,
    pub amplitudes: Vec<C64>,
}

impl StateVector {
    /// Computational basis state `|basis_index⟩`.
    pub fn new_register(n_qubits: usize, basis_index: usize) -> Result<Self, QuantumError> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QuantumError::RegisterSize(n_qubits));
        }
        let dim = 1usize << n_qubits;
        if basis_index >= dim {
            return Err(QuantumError::BasisIndex {
                index: basis_index,
                dim,
            });
        }
        let mut amps = vec![ZERO; dim];
        amps[basis_index] = ONE;
        Ok(StateVector { n_qubits, amps })
    }

    /// Wraps an amplitude vector; it must already be normalized to 1e-10
    /// and is renormalized exactly.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self, QuantumError> {
        let dim = amps.len();
        if dim < 2 || !dim.is_power_of_two() || dim > 1 << MAX_QUBITS {
            return Err(QuantumError::RegisterSize(dim));
        }
        let norm = norm_sqr(&amps).sqrt();
        if !norm.is_finite() || (norm - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NotNormalized(norm));
        }
        let amps = amps.into_iter().map(|a| a / norm).collect();
        Ok(StateVector {
            n_qubits: dim.trailing_zeros() as usize,
            amps,
        })
    }

    /// Haar-random state drawn from `rng`.
    pub fn random<R: Rng + ?Sized>(n_qubits: usize, rng: &mut R) -> Result<Self, QuantumError> {
        use rand_distr::{Distribution, StandardNormal};
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(QuantumError::RegisterSize(n_qubits));
        }
        let amps: Vec<C64> = (0..1usize << n_qubits)
            .map(|_| C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng)))
            .collect();
        let norm = norm_sqr(&amps).sqrt();
        Ok(StateVector {
            n_qubits,
            amps: amps.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm_sqr(&self.amps).sqrt()
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        assert_eq!(self.n_qubits, other.n_qubits);
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// |⟨self|other⟩|².
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    /// min over φ of ‖self − e^{iφ}·other‖₂, evaluated on the aligned
    /// difference rather than as sqrt(2 − 2|⟨self|other⟩|), which bottoms
    /// out near 1e-8.
    pub fn distance_up_to_phase(&self, other: &StateVector) -> f64 {
        let overlap = other.inner(self);
        let phase = if overlap.norm() > 0.0 {
            overlap / overlap.norm()
        } else {
            ONE
        };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a - b * phase).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    fn check_support(&self, support: &[usize]) -> Result<(), QuantumError> {
        for (i, &q) in support.iter().enumerate() {
            if q >= self.n_qubits {
                return Err(QuantumError::QubitOutOfRange {
                    qubit: q,
                    n_qubits: self.n_qubits,
                });
            }
            if support[..i].contains(&q) {
                return Err(QuantumError::RepeatedQubit(q));
            }
        }
        Ok(())
    }

    /// Applies a 1- or 2-qubit unitary; the first support qubit is the most
    /// significant index of `matrix`.
    pub fn apply_unitary(&mut self, matrix: &CMatrix, support: &[usize]) -> Result<(), QuantumError> {
        self.check_support(support)?;
        let k = support.len();
        if !(1..=2).contains(&k) || matrix.nrows() != 1 << k {
            return Err(QuantumError::BadArity {
                factors: matrix.nrows(),
                support: k,
            });
        }
        if !is_unitary(matrix, NORM_TOL) {
            return Err(QuantumError::NotUnitary);
        }
        apply_local(&mut self.amps, matrix, support);
        Ok(())
    }

    /// `(⟨ψ|P|ψ⟩, P|ψ⟩)` for the projector `P = (I ± O)/2` of `branch`.
    pub fn project(&self, obs: &Observable, branch: Outcome) -> Result<Projection, QuantumError> {
        self.check_support(obs.support())?;
        let amplitudes = project_amplitudes(&self.amps, obs, branch);
        Ok(Projection {
            probability: norm_sqr(&amplitudes),
            amplitudes,
        })
    }

    /// Born-rule measurement. The branch is chosen by a single uniform draw
    /// compared against p(+1), and the state collapses onto it.
    pub fn measure<R: Rng + ?Sized>(&mut self, obs: &Observable, rng: &mut R) -> Result<Outcome, QuantumError> {
        let plus = self.project(obs, Outcome::Plus)?;
        let p_plus = plus.probability.clamp(0.0, 1.0);
        let draw: f64 = rng.random();
        let (outcome, projection) =
            if p_plus >= 1.0 - MIN_BRANCH_PROBABILITY || (p_plus > MIN_BRANCH_PROBABILITY && draw < p_plus) {
                (Outcome::Plus, plus)
            } else {
                (Outcome::Minus, self.project(obs, Outcome::Minus)?)
            };
        self.collapse(projection)?;
        Ok(outcome)
    }

    /// Forces a branch instead of sampling it; returns its probability.
    pub fn post_select(&mut self, obs: &Observable, branch: Outcome) -> Result<f64, QuantumError> {
        let projection = self.project(obs, branch)?;
        let p = projection.probability;
        if p < MIN_BRANCH_PROBABILITY {
            return Err(QuantumError::ZeroProbabilityBranch);
        }
        self.collapse(projection)?;
        Ok(p)
    }

    fn collapse(&mut self, projection: Projection) -> Result<(), QuantumError> {
        let norm = projection.probability.sqrt();
        if norm < MIN_BRANCH_PROBABILITY.sqrt() {
            return Err(QuantumError::ZeroProbabilityBranch);
        }
        self.amps = projection.amplitudes.into_iter().map(|a| a / norm).collect();
        Ok(())
    }

    /// Removes a qubit that is in a product state with the rest and returns
    /// the remaining register (qubits above `qubit` shift down by one).
    pub fn remove_product_qubit(&self, qubit: usize) -> Result<StateVector, QuantumError> {
        self.check_support(&[qubit])?;
        if self.n_qubits < 2 {
            return Err(QuantumError::RegisterSize(self.n_qubits - 1));
        }
        let slice = |bit: usize| -> Vec<C64> {
            (0..self.amps.len() / 2)
                .map(|i| {
                    let low = i & ((1 << qubit) - 1);
                    let high = (i >> qubit) << (qubit + 1);
                    self.amps[high | (bit << qubit) | low]
                })
                .collect()
        };
        let (s0, s1) = (slice(0), slice(1));
        let (n0, n1) = (norm_sqr(&s0), norm_sqr(&s1));
        let (keep, other) = if n0 >= n1 { (s0, s1) } else { (s1, s0) };
        let norm = norm_sqr(&keep).sqrt();
        let keep: Vec<C64> = keep.into_iter().map(|a| a / norm).collect();
        // The other slice must be a multiple of the kept one.
        let overlap: C64 = keep.iter().zip(&other).map(|(a, b)| a.conj() * b).sum();
        let residual = other
            .iter()
            .zip(&keep)
            .map(|(b, a)| (b - a * overlap).norm_sqr())
            .sum::<f64>()
            .sqrt();
        if residual > 1e-8 {
            return Err(QuantumError::Entangled(qubit));
        }
        StateVector::from_amplitudes(keep)
    }

    /// Reorders qubits: new qubit `i` is old qubit `order[i]`.
    pub fn permute(&self, order: &[usize]) -> Result<StateVector, QuantumError> {
        if order.len() != self.n_qubits {
            return Err(QuantumError::RegisterSize(order.len()));
        }
        self.check_support(order)?;
        let mut amps = vec![ZERO; self.amps.len()];
        for (old_idx, a) in self.amps.iter().enumerate() {
            let new_idx = order
                .iter()
                .enumerate()
                .fold(0, |acc, (new_q, &old_q)| acc | (((old_idx >> old_q) & 1) << new_q));
            amps[new_idx] = *a;
        }
        Ok(StateVector {
            n_qubits: self.n_qubits,
            amps,
        })
    }

    /// Appends `other` as the most significant qubits.
    pub fn tensor(&self, other: &StateVector) -> StateVector {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for b in &other.amps {
            for a in &self.amps {
                amps.push(a * b);
            }
        }
        StateVector {
            n_qubits: self.n_qubits + other.n_qubits,
            amps,
        }
    }
}

fn norm_sqr(amps: &[C64]) -> f64 {
    amps.iter().map(|a| a.norm_sqr()).sum()
}

/// `(I ± O)/2 · amps` without validation.
pub(crate) fn project_amplitudes(amps: &[C64], obs: &Observable, branch: Outcome) -> Vec<C64> {
    let mut applied = amps.to_vec();
    for (axis, &q) in obs.factors().iter().zip(obs.support()) {
        apply_local(&mut applied, &axis.matrix(), &[q]);
    }
    let sign = branch.sign();
    amps.iter().zip(&applied).map(|(a, oa)| (a + oa * sign) * 0.5).collect()
}

/// In-place local matrix application without validation.
pub(crate) fn apply_local(amps: &mut [C64], matrix: &CMatrix, support: &[usize]) {
    let k = support.len();
    let local_dim = 1usize << k;
    // Local index bit (k-1-j) corresponds to support[j].
    let offsets: Vec<usize> = (0..local_dim)
        .map(|l| {
            (0..k).fold(0, |acc, j| {
                if (l >> (k - 1 - j)) & 1 == 1 {
                    acc | (1 << support[j])
                } else {
                    acc
                }
            })
        })
        .collect();
    let mask: usize = support.iter().map(|&q| 1 << q).sum();
    let mut buf = [ZERO; 4];
    for base in 0..amps.len() {
        if base & mask != 0 {
            continue;
        }
        for l in 0..local_dim {
            buf[l] = amps[base | offsets[l]];
        }
        for r in 0..local_dim {
            let mut acc = ZERO;
            for c in 0..local_dim {
                acc += matrix[(r, c)] * buf[c];
            }
            amps[base | offsets[r]] = acc;
        }
    }
}
