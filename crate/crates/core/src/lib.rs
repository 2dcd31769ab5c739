//! # qubalance
//!
//! Euclidean discrepancy and covariate balancing cast as quadratic
//! unconstrained signed optimization (QUSO), encoded as diagonal Ising
//! Hamiltonians and solved with:
//!
//! * exhaustive search (the exact oracle),
//! * a simulated two-local VQE and QAOA,
//! * the Gram-Schmidt walk design,
//! * uniform random assignment as a baseline.
//!
//! ```
//! use qubalance::discrepancy::{build_augmented, exhaustive_search};
//!
//! let x = qubalance::reference::covariates();
//! let design = build_augmented(&x, 0.5)?;
//! let best = exhaustive_search(&design.gram(), false)?;
//! assert!((best.min_value.sqrt() - 2.4496).abs() < 5e-4);
//! # Ok::<(), qubalance::Error>(())
//! ```
//!
//! Runnable walkthroughs for each capability live in `examples/`:
//!
//! ```bash
//! cargo run --release --example exhaustive_optimum
//! cargo run --release --example qaoa_covariate_balance
//! ```

pub mod discrepancy;
pub mod error;
pub mod experiment;
pub mod gsw;
pub mod io;
pub mod ising;
pub mod optim;
pub mod qsim;
pub mod reference;
pub mod result;
pub mod vqa;

pub use discrepancy::{
    assignment_imbalance, build_augmented, coloring_discrepancy, exhaustive_search, quso_objective,
    Assignment, AugmentedDesign, CovariateSet, QusoProblem,
};
pub use error::{Error, Result};
pub use ising::{BasisOutcome, IsingHamiltonian};
pub use result::{Method, RunResult};
