//! The bundled 12-subject, 2-covariate dataset and the assignments published
//! alongside it.
//!
//! The covariates were drawn evenly from two Gaussians with means `(-3, 3)` and
//! `(3, 3)` and unit variance per coordinate.

use crate::discrepancy::{Assignment, CovariateSet};

/// CSV text of the bundled dataset.
pub const COVARIATES_CSV: &str = include_str!("../data/reference_covariates.csv");

/// The balance-robustness parameter used for every published assignment.
pub const PHI: f64 = 0.5;

/// Reported minimum imbalance `imb(X)`.
pub const REPORTED_OPTIMUM: f64 = 2.4496;
/// Reported imbalance of the published GSW assignment.
pub const REPORTED_GSW: f64 = 2.4720;
/// Reported imbalance of the published VQE assignment.
pub const REPORTED_VQE: f64 = 2.4497;
/// Reported imbalance of the published QAOA assignment.
pub const REPORTED_QAOA: f64 = 2.4516;

const RANDOM: [i8; 12] = [1, 1, 1, 1, -1, 1, -1, -1, 1, -1, 1, -1];
const GSW: [i8; 12] = [1, 1, -1, 1, -1, -1, 1, 1, -1, -1, 1, -1];
const VQE: [i8; 12] = [-1, -1, 1, -1, 1, 1, -1, 1, -1, 1, 1, -1];
const QAOA: [i8; 12] = [-1, -1, 1, -1, 1, 1, -1, 1, -1, 1, 1, -1];
const OPTIMAL: [i8; 12] = [1, -1, -1, 1, 1, -1, 1, -1, 1, 1, -1, -1];

pub fn covariates() -> CovariateSet {
    crate::io::read_covariates_from(COVARIATES_CSV.as_bytes())
        .expect("bundled covariate CSV is well formed")
}

fn assignment(signs: &[i8]) -> Assignment {
    Assignment::new(signs.to_vec()).expect("bundled assignment is valid")
}

pub fn random_assignment() -> Assignment {
    assignment(&RANDOM)
}

pub fn gsw_assignment() -> Assignment {
    assignment(&GSW)
}

pub fn vqe_assignment() -> Assignment {
    assignment(&VQE)
}

/// Printed identically to [`vqe_assignment`].
pub fn qaoa_assignment() -> Assignment {
    assignment(&QAOA)
}

pub fn optimal_assignment() -> Assignment {
    assignment(&OPTIMAL)
}
