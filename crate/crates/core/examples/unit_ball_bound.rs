//! disc(X) <= sqrt(n) for random unit-norm covariates, by exhaustive search.
//!
//! ```bash
//! cargo run --release --example unit_ball_bound
//! ```

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qubalance::discrepancy::{banaszczyk_bound_holds, CovariateSet};

fn main() -> qubalance::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    println!("  m  n   disc(X)  sqrt(n)");
    for _ in 0..12 {
        let m = rng.random_range(2..=14);
        let n = rng.random_range(1..=4);
        let mut data = DMatrix::from_fn(n, m, |_, _| rng.random_range(-1.0..1.0));
        for mut col in data.column_iter_mut() {
            col.normalize_mut();
        }
        let check = banaszczyk_bound_holds(&CovariateSet::new(data)?)?;
        println!(
            "{m:3} {n:2}  {:8.4} {:8.4}  {}",
            check.discrepancy,
            check.bound,
            if check.satisfied { "ok" } else { "VIOLATED" }
        );
    }
    Ok(())
}
