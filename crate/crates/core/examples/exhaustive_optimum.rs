//! Exact minimum of the imbalance on the bundled 12-subject dataset.
//!
//! ```bash
//! cargo run --release --example exhaustive_optimum [-- <phi>]
//! ```

use std::time::Instant;

use qubalance::discrepancy::{build_augmented, exhaustive_search};

fn main() -> qubalance::Result<()> {
    let phi = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(0.5);
    let x = qubalance::reference::covariates();
    let design = build_augmented(&x, phi)?;

    let start = Instant::now();
    let free = exhaustive_search(&design.gram(), false)?;
    let split = exhaustive_search(&design.gram(), true)?;

    println!("phi = {phi}, xi = {:.6}", design.xi());
    println!(
        "lower bound sqrt(phi m) = {:.6}",
        design.imbalance_lower_bound()
    );
    println!(
        "optimum i_X             = {:.6}  omega = {}",
        free.min_value.sqrt(),
        free.argmin
    );
    println!(
        "equal-split optimum     = {:.6}  omega = {}",
        split.min_value.sqrt(),
        split.argmin
    );
    println!("elapsed                 = {:.2?}", start.elapsed());
    Ok(())
}
