//! Variational ground-state search for the imbalance Hamiltonian `H_B`.
//!
//! Two ansätze are provided: a two-local circuit (RZ/RY rotation layers
//! separated by a circular CX ring) and QAOA (alternating cost and transverse
//! mixer layers over the uniform superposition). Circuit parameters are tuned
//! by Nelder-Mead with random restarts; the final state is then sampled and the
//! best sampled assignment is kept.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::discrepancy::{assignment_imbalance, build_augmented, Assignment, CovariateSet};
use crate::error::{Error, Result};
use crate::ising::{to_assignment, IsingHamiltonian};
use crate::optim::{nelder_mead, Minimum, NelderMeadConfig};
use crate::qsim::{expectation_with_diagonal, sample_shots, Circuit, Gate, StateVector};
use crate::result::{Method, RunResult};

pub const DEFAULT_REPS: usize = 3;
pub const DEFAULT_LAYERS: usize = 8;
pub const DEFAULT_SHOTS: u64 = 65_536;
pub const DEFAULT_RESTARTS: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoLocalConfig {
    pub num_qubits: usize,
    pub reps: usize,
}

impl TwoLocalConfig {
    pub fn num_parameters(&self) -> usize {
        (self.reps + 1) * 2 * self.num_qubits
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct QaoaConfig {
    pub num_qubits: usize,
    /// Number of cost/mixer layers `p`.
    pub layers: usize,
}

impl QaoaConfig {
    pub fn num_parameters(&self) -> usize {
        2 * self.layers
    }
}

/// Circuit angles in radians.
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(theta: Vec<f64>) -> Result<Self> {
        if theta.iter().any(|t| !t.is_finite()) {
            return Err(Error::InvalidGate("non-finite circuit parameter".into()));
        }
        Ok(ParameterVector(theta))
    }

    pub fn zeros(len: usize) -> Self {
        ParameterVector(vec![0.0; len])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

fn check_count(expected: usize, theta: &ParameterVector) -> Result<()> {
    if theta.len() != expected {
        return Err(Error::ParameterCount {
            expected,
            got: theta.len(),
        });
    }
    Ok(())
}

fn rotation_layer(c: &mut Circuit, m: usize, angles: &[f64]) -> Result<()> {
    let (rz, ry) = angles.split_at(m);
    for (q, &t) in rz.iter().enumerate() {
        c.push(Gate::Rz(q, t))?;
    }
    for (q, &t) in ry.iter().enumerate() {
        c.push(Gate::Ry(q, t))?;
    }
    Ok(())
}

/// `reps` blocks of (RZ layer, RY layer, CX ring), then a closing rotation block.
pub fn build_two_local(cfg: &TwoLocalConfig, theta: &ParameterVector) -> Result<Circuit> {
    check_count(cfg.num_parameters(), theta)?;
    let m = cfg.num_qubits;
    let mut c = Circuit::new(m);
    let mut blocks = theta.as_slice().chunks_exact(2 * m);
    for _ in 0..cfg.reps {
        rotation_layer(&mut c, m, blocks.next().expect("counted"))?;
        if m > 1 {
            for q in 0..m {
                c.push(Gate::Cx {
                    control: q,
                    target: (q + 1) % m,
                })?;
            }
        }
    }
    rotation_layer(&mut c, m, blocks.next().expect("counted"))?;
    Ok(c)
}

/// `theta = (gamma_1..gamma_p, beta_1..beta_p)`.
///
/// Layer `k` applies `exp(-i gamma_k H)` as one `ZZPhase(2 c gamma_k)` per
/// coupling, then `exp(-i beta_k sum X)` as `RX(2 beta_k)` on every qubit.
pub fn build_qaoa(
    cfg: &QaoaConfig,
    h: &IsingHamiltonian,
    theta: &ParameterVector,
) -> Result<Circuit> {
    check_count(cfg.num_parameters(), theta)?;
    if h.num_qubits() != cfg.num_qubits {
        return Err(Error::DimensionMismatch {
            expected: cfg.num_qubits,
            got: h.num_qubits(),
        });
    }
    let m = cfg.num_qubits;
    let (gammas, betas) = theta.as_slice().split_at(cfg.layers);
    let mut c = Circuit::new(m);
    for q in 0..m {
        c.push(Gate::Hadamard(q))?;
    }
    for (&gamma, &beta) in gammas.iter().zip(betas) {
        for coupling in h.couplings() {
            c.push(Gate::ZzPhase(
                coupling.i,
                coupling.j,
                2.0 * coupling.coefficient * gamma,
            ))?;
        }
        for q in 0..m {
            c.push(Gate::Rx(q, 2.0 * beta))?;
        }
    }
    Ok(c)
}

/// Which parametrized circuit to optimize.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Ansatz {
    TwoLocal(TwoLocalConfig),
    Qaoa(QaoaConfig),
}

impl Ansatz {
    pub fn num_qubits(&self) -> usize {
        match self {
            Ansatz::TwoLocal(c) => c.num_qubits,
            Ansatz::Qaoa(c) => c.num_qubits,
        }
    }

    pub fn num_parameters(&self) -> usize {
        match self {
            Ansatz::TwoLocal(c) => c.num_parameters(),
            Ansatz::Qaoa(c) => c.num_parameters(),
        }
    }

    pub fn build(&self, h: &IsingHamiltonian, theta: &ParameterVector) -> Result<Circuit> {
        match self {
            Ansatz::TwoLocal(c) => build_two_local(c, theta),
            Ansatz::Qaoa(c) => build_qaoa(c, h, theta),
        }
    }

    /// Two-local angles uniform on `[-pi, pi]`; QAOA `gamma` on `[0, pi/2]`, `beta` on `[0, pi/4]`.
    pub fn initial_point<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<f64> {
        match self {
            Ansatz::TwoLocal(c) => (0..c.num_parameters())
                .map(|_| rng.random_range(-PI..=PI))
                .collect(),
            Ansatz::Qaoa(c) => {
                let mut theta: Vec<f64> = (0..c.layers)
                    .map(|_| rng.random_range(0.0..=PI / 2.0))
                    .collect();
                theta.extend((0..c.layers).map(|_| rng.random_range(0.0..=PI / 4.0)));
                theta
            }
        }
    }

    /// Final state for the given parameters, starting from `|0...0>`.
    pub fn prepare(&self, h: &IsingHamiltonian, theta: &ParameterVector) -> Result<StateVector> {
        let circuit = self.build(h, theta)?;
        let mut state = StateVector::zero(self.num_qubits());
        circuit.apply(&mut state)?;
        Ok(state)
    }
}

/// How `<H>` is measured inside the optimization loop.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpectationMode {
    Exact,
    Shots(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OptimizerConfig {
    pub restarts: usize,
    pub nelder_mead: NelderMeadConfig,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        OptimizerConfig {
            restarts: DEFAULT_RESTARTS,
            nelder_mead: NelderMeadConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Optimized {
    pub theta: ParameterVector,
    pub expectation: f64,
    pub evaluations: usize,
    /// Best expectation seen so far, one entry per evaluation across all restarts.
    pub history: Vec<f64>,
    pub restart: usize,
}

/// Minimizes `<psi(theta)|H|psi(theta)>` over the ansatz parameters.
///
/// Each restart gets its own generator seeded from `rng`, so the result does
/// not depend on how restarts are scheduled. Ties between restarts go to the
/// lower restart index.
pub fn minimize_expectation<R: Rng + ?Sized>(
    ansatz: &Ansatz,
    h: &IsingHamiltonian,
    mode: ExpectationMode,
    cfg: &OptimizerConfig,
    rng: &mut R,
) -> Result<Optimized> {
    if ansatz.num_qubits() != h.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.num_qubits(),
            got: ansatz.num_qubits(),
        });
    }
    if cfg.restarts == 0 || cfg.nelder_mead.max_evals == 0 {
        return Err(Error::NoEvaluations);
    }
    let seeds: Vec<u64> = (0..cfg.restarts).map(|_| rng.random()).collect();

    // Without couplings every state has <H> = 0.
    if h.couplings().is_empty() {
        let mut r = ChaCha8Rng::seed_from_u64(seeds[0]);
        return Ok(Optimized {
            theta: ParameterVector::new(ansatz.initial_point(&mut r))?,
            expectation: 0.0,
            evaluations: 1,
            history: vec![0.0],
            restart: 0,
        });
    }

    let diagonal = h.diagonal();
    let runs: Vec<Result<Minimum>> = seeds
        .par_iter()
        .map(|&seed| {
            let mut r = ChaCha8Rng::seed_from_u64(seed);
            let x0 = ansatz.initial_point(&mut r);
            let mut failure = None;
            let objective = |theta: &[f64]| -> f64 {
                let outcome = ParameterVector::new(theta.to_vec())
                    .and_then(|p| ansatz.prepare(h, &p))
                    .and_then(|state| match mode {
                        ExpectationMode::Exact => expectation_with_diagonal(&state, &diagonal),
                        ExpectationMode::Shots(n) => {
                            Ok(sample_shots(&state, n, &mut r)?.mean_of(&diagonal))
                        }
                    });
                match outcome {
                    Ok(v) => v,
                    Err(e) => {
                        failure.get_or_insert(e);
                        f64::INFINITY
                    }
                }
            };
            let min = nelder_mead(objective, &x0, &cfg.nelder_mead)?;
            if let Some(e) = failure {
                return Err(e);
            }
            Ok(min)
        })
        .collect();

    let mut best: Option<(usize, Vec<f64>, f64)> = None;
    let mut history = Vec::new();
    let mut running = f64::INFINITY;
    for (index, run) in runs.into_iter().enumerate() {
        let Minimum {
            x,
            value,
            history: trace,
            ..
        } = run?;
        for v in trace {
            running = running.min(v);
            history.push(running);
        }
        if best.as_ref().is_none_or(|b| value < b.2) {
            best = Some((index, x, value));
        }
    }
    let (restart, x, expectation) = best.ok_or(Error::NoEvaluations)?;
    Ok(Optimized {
        theta: ParameterVector::new(x)?,
        expectation,
        evaluations: history.len(),
        history,
        restart,
    })
}

/// Settings shared by [`run_vqe`] and [`run_qaoa`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VqaSettings {
    pub phi: f64,
    /// Shots for the final sampling step.
    pub shots: u64,
    pub seed: u64,
    pub optimizer: OptimizerConfig,
    /// Estimate `<H>` from this many shots during optimization instead of exactly.
    pub shots_during_opt: Option<u64>,
}

impl Default for VqaSettings {
    fn default() -> Self {
        VqaSettings {
            phi: 0.5,
            shots: DEFAULT_SHOTS,
            seed: 0,
            optimizer: OptimizerConfig::default(),
            shots_during_opt: None,
        }
    }
}

/// Two-local VQE on `H_B`.
pub fn run_vqe(x: &CovariateSet, reps: usize, settings: &VqaSettings) -> Result<RunResult> {
    let ansatz = Ansatz::TwoLocal(TwoLocalConfig {
        num_qubits: x.subjects(),
        reps,
    });
    run_variational(x, Method::Vqe, ansatz, settings)
}

/// QAOA with `layers` cost/mixer layers on `H_B`.
pub fn run_qaoa(x: &CovariateSet, layers: usize, settings: &VqaSettings) -> Result<RunResult> {
    let ansatz = Ansatz::Qaoa(QaoaConfig {
        num_qubits: x.subjects(),
        layers,
    });
    run_variational(x, Method::Qaoa, ansatz, settings)
}

/// Optimize, sample the final state, and keep the sampled assignment with the
/// lowest imbalance (preferring the representative with `omega_1 = +1`).
pub fn run_variational(
    x: &CovariateSet,
    method: Method,
    ansatz: Ansatz,
    settings: &VqaSettings,
) -> Result<RunResult> {
    let design = build_augmented(x, settings.phi)?;
    let h = IsingHamiltonian::from_quso(&design.gram());
    let mut rng = ChaCha8Rng::seed_from_u64(settings.seed);

    let mode = match settings.shots_during_opt {
        Some(n) => ExpectationMode::Shots(n),
        None => ExpectationMode::Exact,
    };
    let opt = minimize_expectation(&ansatz, &h, mode, &settings.optimizer, &mut rng)?;
    let state = ansatz.prepare(&h, &opt.theta)?;
    let expectation = expectation_with_diagonal(&state, &h.diagonal())?;
    let histogram = sample_shots(&state, settings.shots, &mut rng)?;

    let mut best: Option<(f64, Assignment)> = None;
    for (y, _) in histogram.outcomes() {
        let omega = to_assignment(&y);
        let value = assignment_imbalance(&design, &omega)?;
        let better = match &best {
            None => true,
            Some((b, w)) => value < *b || (value == *b && w.signs()[0] < 0 && omega.signs()[0] > 0),
        };
        if better {
            best = Some((value, omega));
        }
    }
    let (imbalance, omega) = best.ok_or(Error::NoEvaluations)?;

    Ok(RunResult {
        method,
        omega,
        imbalance,
        expectation,
        phi: settings.phi,
        seed: settings.seed,
        shots: settings.shots,
        ansatz: Some(ansatz),
        evaluations: opt.evaluations,
        histogram: Some(histogram),
    })
}
