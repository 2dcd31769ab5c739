//! QAOA (p = 8) on the bundled 12-subject dataset at phi = 0.5.
//!
//! ```bash
//! cargo run --release --example qaoa_covariate_balance [-- <seed>]
//! ```

use std::time::Instant;

use qubalance::discrepancy::{build_augmented, exhaustive_search};
use qubalance::vqa::{run_qaoa, VqaSettings, DEFAULT_LAYERS};

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
    let result = run_qaoa(&x, DEFAULT_LAYERS, &settings)?;
    let elapsed = start.elapsed();

    let optimum = exhaustive_search(&build_augmented(&x, settings.phi)?.gram(), false)?
        .min_value
        .sqrt();
    println!("optimized <H_B>     = {:.4}", result.expectation);
    println!("circuit evaluations = {}", result.evaluations);
    println!("best sampled omega  = {}", result.omega);
    println!(
        "best sampled i_X    = {:.4}  (optimum {optimum:.4})",
        result.imbalance
    );
    if let Some(h) = &result.histogram {
        println!(
            "distinct outcomes   = {} over {} shots",
            h.counts().len(),
            h.total()
        );
    }
    println!("elapsed             = {elapsed:.2?}");
    Ok(())
}
