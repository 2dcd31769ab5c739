//! QUSO matrix -> Ising couplings -> diagonal spectrum, checked against w^T Q w.
//!
//! ```bash
//! cargo run --release --example ising_encoding
//! ```

use qubalance::discrepancy::{build_augmented, quso_objective};
use qubalance::ising::to_assignment;
use qubalance::{BasisOutcome, IsingHamiltonian};

fn main() -> qubalance::Result<()> {
    let x = qubalance::reference::covariates();
    let q = build_augmented(&x, 0.5)?.gram();
    let h = IsingHamiltonian::from_quso(&q);

    println!(
        "{} couplings, trace offset tr(Q) = {:.6}",
        h.couplings().len(),
        q.trace_offset()
    );
    for c in h.couplings().iter().take(5) {
        println!("  Z{} Z{}  {:+.6}", c.i, c.j, c.coefficient);
    }

    let mut worst = 0.0f64;
    for index in 0..1usize << h.num_qubits() {
        let y = BasisOutcome::from_index(index, h.num_qubits());
        let lhs = h.eigenvalue_of(&y)? + q.trace_offset();
        worst = worst.max((lhs - quso_objective(&q, &to_assignment(&y))?).abs());
    }
    println!("max |lambda_y + tr Q - w^T Q w| over 4096 states = {worst:.2e}");

    let (lambda, y) = h.ground_state_bruteforce()?;
    println!(
        "ground state {:?}: lambda = {lambda:.6}, i_X = {:.6}",
        y.bits(),
        (lambda + q.trace_offset()).sqrt()
    );

    let mut csv = Vec::new();
    h.write_csv(&mut csv).expect("in-memory write");
    println!(
        "CSV export: {} bytes, first line {:?}",
        csv.len(),
        String::from_utf8_lossy(&csv).lines().next().unwrap_or("")
    );
    Ok(())
}
