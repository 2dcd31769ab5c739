//! Discrepancy and imbalance of the bundled reference assignments, plus a phi sweep.
//!
//! ```bash
//! cargo run --release --example evaluate_assignments
//! ```

use qubalance::discrepancy::{build_augmented, exhaustive_search};
use qubalance::experiment::evaluate;
use qubalance::reference as r;

fn main() -> qubalance::Result<()> {
    let x = r::covariates();
    for (name, w) in [
        ("random", r::random_assignment()),
        ("gsw", r::gsw_assignment()),
        ("vqe/qaoa", r::vqe_assignment()),
        ("optimal", r::optimal_assignment()),
    ] {
        let e = evaluate(&x, r::PHI, &w)?;
        println!(
            "{name:>9}  d_X = {:8.4}  i_X = {:.4}  {w}",
            e.discrepancy, e.imbalance
        );
    }

    println!("\n phi   optimum i_X   sqrt(phi m)");
    for k in 0..=10 {
        let phi = k as f64 / 10.0;
        let d = build_augmented(&x, phi)?;
        let best = exhaustive_search(&d.gram(), false)?;
        println!(
            "{phi:4.1}   {:11.4}   {:11.4}",
            best.min_value.max(0.0).sqrt(),
            d.imbalance_lower_bound()
        );
    }
    Ok(())
}
