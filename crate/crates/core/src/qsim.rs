//! Dense statevector simulation for the handful of gates the ansätze need.
//!
//! Conventions:
//! * amplitude index bit order: qubit 0 is the most significant bit, so bit `k`
//!   of a [`BasisOutcome`] is the state of qubit `k`;
//! * `RX/RY/RZ(theta) = exp(-i theta/2 sigma)`, `ZZPhase(theta) = exp(-i theta/2 Z⊗Z)`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::ising::{BasisOutcome, IsingHamiltonian};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Gate {
    Hadamard(usize),
    Rx(usize, f64),
    Ry(usize, f64),
    Rz(usize, f64),
    Cx { control: usize, target: usize },
    ZzPhase(usize, usize, f64),
}

impl Gate {
    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Hadamard(q) | Gate::Rx(q, _) | Gate::Ry(q, _) | Gate::Rz(q, _) => vec![q],
            Gate::Cx { control, target } => vec![control, target],
            Gate::ZzPhase(a, b, _) => vec![a, b],
        }
    }

    /// Row-major unitary on the gate's own qubits (first listed qubit most significant).
    pub fn matrix(&self) -> Vec<Complex64> {
        let i = Complex64::i();
        match *self {
            Gate::Hadamard(_) => {
                let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
                vec![h, h, h, -h]
            }
            Gate::Rx(_, t) => {
                let (s, c) = (t / 2.0).sin_cos();
                vec![c.into(), -i * s, -i * s, c.into()]
            }
            Gate::Ry(_, t) => {
                let (s, c) = (t / 2.0).sin_cos();
                vec![c.into(), (-s).into(), s.into(), c.into()]
            }
            Gate::Rz(_, t) => {
                vec![(-i * t / 2.0).exp(), ZERO, ZERO, (i * t / 2.0).exp()]
            }
            Gate::Cx { .. } => {
                let mut m = vec![ZERO; 16];
                m[0] = ONE;
                m[5] = ONE;
                m[11] = ONE;
                m[14] = ONE;
                m
            }
            Gate::ZzPhase(_, _, t) => {
                let same = (-i * t / 2.0).exp();
                let diff = (i * t / 2.0).exp();
                let mut m = vec![ZERO; 16];
                m[0] = same;
                m[5] = diff;
                m[10] = diff;
                m[15] = same;
                m
            }
        }
    }
}

/// An ordered gate list on a fixed register.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    num_qubits: usize,
    gates: Vec<Gate>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit {
            num_qubits,
            gates: Vec::new(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn push(&mut self, gate: Gate) -> Result<&mut Self> {
        let qubits = gate.qubits();
        if let Some(&q) = qubits.iter().find(|&&q| q >= self.num_qubits) {
            return Err(Error::InvalidGate(format!(
                "{gate:?}: qubit {q} out of range for {} qubits",
                self.num_qubits
            )));
        }
        if qubits.len() == 2 && qubits[0] == qubits[1] {
            return Err(Error::InvalidGate(format!("{gate:?}: qubits must differ")));
        }
        if let Gate::Rx(_, t) | Gate::Ry(_, t) | Gate::Rz(_, t) | Gate::ZzPhase(_, _, t) = gate {
            if !t.is_finite() {
                return Err(Error::InvalidGate(format!("{gate:?}: non-finite angle")));
            }
        }
        self.gates.push(gate);
        Ok(self)
    }

    /// Applies every gate in order, in place.
    pub fn apply(&self, state: &mut StateVector) -> Result<()> {
        if state.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: state.num_qubits,
            });
        }
        for gate in &self.gates {
            state.apply_gate(gate);
        }
        Ok(())
    }
}

/// Applies `c` to a copy of `s`.
pub fn apply(c: &Circuit, s: &StateVector) -> Result<StateVector> {
    let mut out = s.clone();
    c.apply(&mut out)?;
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(num_qubits: usize) -> Self {
        Self::basis(num_qubits, 0)
    }

    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << num_qubits];
        amplitudes[index] = ONE;
        StateVector {
            num_qubits,
            amplitudes,
        }
    }

    /// `|+>^{⊗m}`.
    pub fn uniform(num_qubits: usize) -> Self {
        let len = 1usize << num_qubits;
        let a = Complex64::new(1.0 / (len as f64).sqrt(), 0.0);
        StateVector {
            num_qubits,
            amplitudes: vec![a; len],
        }
    }

    /// Normalizes the given amplitudes; the length must be a power of two.
    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len == 0 || !len.is_power_of_two() {
            return Err(Error::InvalidGate(format!(
                "{len} amplitudes is not a power of two"
            )));
        }
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::InvalidGate(
                "state has zero or non-finite norm".into(),
            ));
        }
        Ok(StateVector {
            num_qubits: len.trailing_zeros() as usize,
            amplitudes: amplitudes.into_iter().map(|a| a / norm).collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|a| a.norm_sqr()).collect()
    }

    fn stride(&self, qubit: usize) -> usize {
        1 << (self.num_qubits - 1 - qubit)
    }

    fn apply_single(&mut self, qubit: usize, u: [Complex64; 4]) {
        let stride = self.stride(qubit);
        for block in self.amplitudes.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            for (a0, a1) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x0, x1) = (*a0, *a1);
                *a0 = u[0] * x0 + u[1] * x1;
                *a1 = u[2] * x0 + u[3] * x1;
            }
        }
    }

    fn apply_phase(&mut self, qubit: usize, p0: Complex64, p1: Complex64) {
        let stride = self.stride(qubit);
        for block in self.amplitudes.chunks_exact_mut(2 * stride) {
            let (lo, hi) = block.split_at_mut(stride);
            lo.iter_mut().for_each(|a| *a *= p0);
            hi.iter_mut().for_each(|a| *a *= p1);
        }
    }

    fn apply_gate(&mut self, gate: &Gate) {
        match *gate {
            Gate::Rz(q, t) => {
                let half = Complex64::new(0.0, t / 2.0);
                self.apply_phase(q, (-half).exp(), half.exp());
            }
            Gate::Hadamard(q) | Gate::Rx(q, _) | Gate::Ry(q, _) => {
                let m = gate.matrix();
                self.apply_single(q, [m[0], m[1], m[2], m[3]]);
            }
            Gate::Cx { control, target } => {
                let cmask = self.stride(control);
                let tmask = self.stride(target);
                for k in 0..self.amplitudes.len() {
                    if k & cmask != 0 && k & tmask == 0 {
                        self.amplitudes.swap(k, k | tmask);
                    }
                }
            }
            Gate::ZzPhase(a, b, t) => {
                let amask = self.stride(a);
                let bmask = self.stride(b);
                let half = Complex64::new(0.0, t / 2.0);
                let (same, diff) = ((-half).exp(), half.exp());
                for (k, amp) in self.amplitudes.iter_mut().enumerate() {
                    let parity = ((k & amask) != 0) ^ ((k & bmask) != 0);
                    *amp *= if parity { diff } else { same };
                }
            }
        }
    }
}

/// `<psi|H|psi> = sum_y |psi_y|^2 lambda_y`.
pub fn expectation_diagonal(s: &StateVector, h: &IsingHamiltonian) -> Result<f64> {
    if s.num_qubits != h.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: h.num_qubits(),
            got: s.num_qubits,
        });
    }
    Ok(s.amplitudes
        .iter()
        .enumerate()
        .map(|(k, a)| a.norm_sqr() * h.eigenvalue_at(k))
        .sum())
}

/// Same as [`expectation_diagonal`] against a precomputed [`IsingHamiltonian::diagonal`].
pub fn expectation_with_diagonal(s: &StateVector, diagonal: &[f64]) -> Result<f64> {
    if s.amplitudes.len() != diagonal.len() {
        return Err(Error::DimensionMismatch {
            expected: diagonal.len(),
            got: s.amplitudes.len(),
        });
    }
    Ok(s.amplitudes
        .iter()
        .zip(diagonal)
        .map(|(a, l)| a.norm_sqr() * l)
        .sum())
}

/// Measurement counts keyed by amplitude index.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Histogram {
    num_qubits: usize,
    counts: BTreeMap<usize, u64>,
}

impl Histogram {
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn counts(&self) -> &BTreeMap<usize, u64> {
        &self.counts
    }

    pub fn count(&self, index: usize) -> u64 {
        self.counts.get(&index).copied().unwrap_or(0)
    }

    pub fn total(&self) -> u64 {
        self.counts.values().sum()
    }

    /// Observed outcomes in index order.
    pub fn outcomes(&self) -> impl Iterator<Item = (BasisOutcome, u64)> + '_ {
        self.counts
            .iter()
            .map(|(&k, &c)| (BasisOutcome::from_index(k, self.num_qubits), c))
    }

    /// Shot estimate of `<H>` given the eigenvalue diagonal.
    pub fn mean_of(&self, diagonal: &[f64]) -> f64 {
        let total = self.total() as f64;
        self.counts
            .iter()
            .map(|(&k, &c)| diagonal[k] * c as f64)
            .sum::<f64>()
            / total
    }
}

/// Draws `shots` measurements in the computational basis.
///
/// Uniform variates are sorted and matched against the cumulative distribution
/// in one pass.
pub fn sample_shots<R: Rng + ?Sized>(
    s: &StateVector,
    shots: u64,
    rng: &mut R,
) -> Result<Histogram> {
    if shots == 0 {
        return Err(Error::InvalidGate("shots must be at least 1".into()));
    }
    let mut draws: Vec<f64> = (0..shots).map(|_| rng.random::<f64>()).collect();
    draws.sort_by(f64::total_cmp);

    let probs = s.probabilities();
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut counts = BTreeMap::new();
    let mut cumulative = 0.0;
    let mut index = 0;
    for u in draws {
        while index < last_nonzero && cumulative + probs[index] <= u {
            cumulative += probs[index];
            index += 1;
        }
        *counts.entry(index).or_insert(0) += 1;
    }
    Ok(Histogram {
        num_qubits: s.num_qubits,
        counts,
    })
}
