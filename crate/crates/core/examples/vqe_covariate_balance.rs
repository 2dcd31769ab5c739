//! Two-local VQE (RZ/RY blocks, circular CX ring, reps = 3) on the bundled dataset.
//!
//! ```bash
//! cargo run --release --example vqe_covariate_balance [-- <seed>]
//! ```

use std::time::Instant;

use qubalance::vqa::{run_vqe, VqaSettings, DEFAULT_REPS};

fn main() -> qubalance::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0);
    let x = qubalance::reference::covariates();
    let settings = VqaSettings {
        seed,
        ..VqaSettings::default()
    };

    let start = Instant::now();
    let result = run_vqe(&x, DEFAULT_REPS, &settings)?;

    println!("optimized <H_B>    = {:.4}", result.expectation);
    println!("best sampled omega = {}", result.omega);
    println!("best sampled i_X   = {:.4}", result.imbalance);
    println!("evaluations        = {}", result.evaluations);
    println!("elapsed            = {:.2?}", start.elapsed());
    println!("{}", result.to_json()?);
    Ok(())
}
