use super::scheme::MeasurementScheme;
use super::SchemeError;
use crate::quantum::linalg::ZERO;
use crate::quantum::{project_amplitudes, CMatrix, Observable, Outcome, C64};
use std::f64::consts::FRAC_1_SQRT_2;

pub const MAX_ENUMERATED_STEPS: usize = 5;

/// The linear map a scheme applies for one outcome vector.
#[derive(Clone, Debug)]
pub struct Branch {
    pub outcomes: Vec<Outcome>,
    /// From the logical input space to the logical output space, both in
    /// Kronecker order (logical qubit 0 most significant).
    pub operator: CMatrix,
    /// Probability of the branch on a maximally mixed logical input,
    /// `tr(K†K) / d`.
    pub generic_probability: f64,
}

impl Branch {
    pub fn outcome_bits(&self) -> String {
        self.outcomes.iter().map(|o| char::from(b'0' + o.bit())).collect()
    }
}

/// Every outcome vector of the scheme with its branch operator.
///
/// Role `j` is placed on register qubit `j`. Each ancilla starts in the
/// equal-weight superposition of the two eigenvectors of the observable
/// that initializes it, so both outcomes of that first measurement occur
/// with probability 1/2 regardless of how the ancilla arrived. Discarded
/// roles are projected out against the eigenvector their last single-qubit
/// measurement left them in, which keeps the branch decomposition complete.
pub fn enumerate_branches(scheme: &MeasurementScheme) -> Result<Vec<Branch>, SchemeError> {
    let k = scheme.steps().len();
    if k > MAX_ENUMERATED_STEPS {
        return Err(SchemeError::TooManySteps {
            steps: k,
            max: MAX_ENUMERATED_STEPS,
        });
    }
    let n_roles = scheme.roles().len();
    let n_logical = scheme.n_logical();
    let dim_in = 1usize << n_logical;

    let mut reference = vec![[ZERO; 2]; n_roles];
    for anc in scheme.ancillas() {
        let init = scheme
            .steps()
            .iter()
            .find(|s| s.touches(anc))
            .expect("validated: every ancilla is initialized");
        let plus = init.factors[0].eigenvector(Outcome::Plus);
        let minus = init.factors[0].eigenvector(Outcome::Minus);
        reference[anc] = [
            (plus[0] + minus[0]) * FRAC_1_SQRT_2,
            (plus[1] + minus[1]) * FRAC_1_SQRT_2,
        ];
    }

    let observables: Vec<Observable> = scheme
        .steps()
        .iter()
        .map(|s| Observable::new(s.factors.clone(), s.roles.clone()))
        .collect::<Result<_, _>>()?;

    // Physical input state for every logical basis vector.
    let inputs: Vec<Vec<C64>> = (0..dim_in).map(|li| embed(scheme, &reference, li)).collect();

    let mut branches = Vec::with_capacity(1 << k);
    for bits in 0..1usize << k {
        let outcomes: Vec<Outcome> = (0..k)
            .map(|i| {
                if bits >> (k - 1 - i) & 1 == 1 {
                    Outcome::Minus
                } else {
                    Outcome::Plus
                }
            })
            .collect();
        let discard_vectors: Vec<(usize, [C64; 2])> = scheme
            .discarded()
            .into_iter()
            .map(|role| {
                let step = scheme.final_eigenstate_step(role).expect("validated discarded role");
                (role, scheme.steps()[step].factors[0].eigenvector(outcomes[step]))
            })
            .collect();

        let mut operator = CMatrix::zeros(dim_in, dim_in);
        for (col, input) in inputs.iter().enumerate() {
            let mut amps = input.clone();
            for (obs, &o) in observables.iter().zip(&outcomes) {
                amps = project_amplitudes(&amps, obs, o);
            }
            for (p, a) in amps.iter().enumerate() {
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                let weight: C64 = discard_vectors
                    .iter()
                    .map(|(role, v)| v[(p >> role) & 1].conj())
                    .product();
                let row = scheme
                    .outputs()
                    .iter()
                    .enumerate()
                    .fold(0, |acc, (i, &role)| acc | (((p >> role) & 1) << (n_logical - 1 - i)));
                operator[(row, col)] += weight * a;
            }
        }
        let generic_probability = operator.iter().map(|x| x.norm_sqr()).sum::<f64>() / dim_in as f64;
        branches.push(Branch {
            outcomes,
            operator,
            generic_probability,
        });
    }
    Ok(branches)
}

fn embed(scheme: &MeasurementScheme, reference: &[[C64; 2]], logical_index: usize) -> Vec<C64> {
    let n_roles = scheme.roles().len();
    let n_logical = scheme.n_logical();
    let mut per_role = reference.to_vec();
    for (i, &role) in scheme.inputs().iter().enumerate() {
        let bit = (logical_index >> (n_logical - 1 - i)) & 1;
        per_role[role] = if bit == 0 {
            [C64::from(1.0), ZERO]
        } else {
            [ZERO, C64::from(1.0)]
        };
    }
    (0..1usize << n_roles)
        .map(|p| (0..n_roles).map(|r| per_role[r][(p >> r) & 1]).product())
        .collect()
}
