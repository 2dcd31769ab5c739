//! Gram-Schmidt walk designs against uniform randomization on the bundled dataset.
//!
//! ```bash
//! cargo run --release --example gsw_sampling [-- <samples> <seed>]
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qubalance::discrepancy::{assignment_imbalance, build_augmented, uniform_random_assignment};
use qubalance::gsw::gsw_sample;

fn main() -> qubalance::Result<()> {
    let mut args = std::env::args().skip(1);
    let samples: usize = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(0);
    let design = build_augmented(&qubalance::reference::covariates(), 0.5)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut gsw = Vec::with_capacity(samples);
    let mut uniform = Vec::with_capacity(samples);
    let mut best = None;
    for _ in 0..samples {
        let w = gsw_sample(&design, &mut rng);
        let v = assignment_imbalance(&design, &w)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, w));
        }
        gsw.push(v);
        uniform.push(assignment_imbalance(
            &design,
            &uniform_random_assignment(12, &mut rng)?,
        )?);
    }
    let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
    let (bv, bw) = best.expect("samples > 0");

    println!("{samples} draws, seed {seed}");
    println!(
        "mean i_X  gsw = {:.4}  uniform = {:.4}",
        mean(&gsw),
        mean(&uniform)
    );
    println!("best gsw  i_X = {bv:.4}  omega = {bw}");
    Ok(())
}
