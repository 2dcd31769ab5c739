//! Writes one SVG per method for the bundled dataset into a directory.
//!
//! ```bash
//! cargo run --release --example plot_assignments [-- <out_dir>]
//! ```

use std::path::PathBuf;

use qubalance::experiment::{render_svg, run, write_atomically, ExperimentConfig};
use qubalance::Method;

fn main() -> qubalance::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "plots".into()));
    std::fs::create_dir_all(&dir).map_err(|e| qubalance::Error::io(&dir, e))?;
    let x = qubalance::reference::covariates();

    for method in [Method::Random, Method::Gsw, Method::Exhaustive] {
        let result = run(
            &ExperimentConfig {
                method,
                samples: 20,
                ..Default::default()
            },
            &x,
        )?;
        let path = dir.join(format!("{method}.svg"));
        write_atomically(&path, &render_svg(&x, Some(&result))?)?;
        println!(
            "{:>10}: i_X = {:.4} -> {}",
            method.to_string(),
            result.imbalance,
            path.display()
        );
    }
    Ok(())
}
