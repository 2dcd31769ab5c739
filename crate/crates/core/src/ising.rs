//! Diagonal two-body Ising Hamiltonians built from QUSO problems.
//!
//! `w^T Q w = tr(Q) + 2 sum_{i<j} Q_ij w_i w_j`, so dropping the constant leaves
//! `H = sum_{i<j} 2 Q_ij Z_i Z_j`. Every computational basis state `|y>` is an
//! eigenvector of `H`. Under `y_i = (w_i + 1) / 2` its eigenvalue is
//! `w^T Q w - tr(Q)`.

use std::io::{BufRead, Write};

use rayon::prelude::*;

use crate::discrepancy::{Assignment, QusoProblem};
use crate::error::{Error, Result};

/// Couplings with smaller magnitude are dropped.
pub const COUPLING_CUTOFF: f64 = 1e-15;

/// Largest register accepted by [`IsingHamiltonian::ground_state_bruteforce`].
pub const MAX_BRUTEFORCE_QUBITS: usize = 24;

/// A `Z_i Z_j` term with `i < j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coupling {
    pub i: usize,
    pub j: usize,
    pub coefficient: f64,
}

/// A computational basis label `y`, one bit per qubit.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisOutcome(Vec<u8>);

impl BasisOutcome {
    pub fn new(bits: Vec<u8>) -> Result<Self> {
        if bits.iter().any(|&b| b > 1) {
            return Err(Error::InvalidAssignment("basis bits must be 0 or 1".into()));
        }
        Ok(BasisOutcome(bits))
    }

    /// Decodes an amplitude index; qubit 0 is the most significant bit.
    pub fn from_index(index: usize, num_qubits: usize) -> Self {
        BasisOutcome(
            (0..num_qubits)
                .map(|k| ((index >> (num_qubits - 1 - k)) & 1) as u8)
                .collect(),
        )
    }

    pub fn to_index(&self) -> usize {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | usize::from(b))
    }

    pub fn bits(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Complements every bit.
    pub fn flipped(&self) -> Self {
        BasisOutcome(self.0.iter().map(|b| 1 - b).collect())
    }
}

/// `y_i = (w_i + 1) / 2`.
pub fn to_outcome(w: &Assignment) -> BasisOutcome {
    BasisOutcome(w.signs().iter().map(|&s| ((s + 1) / 2) as u8).collect())
}

/// `w_i = 2 y_i - 1`.
pub fn to_assignment(y: &BasisOutcome) -> Assignment {
    Assignment::from_bools(y.bits().iter().map(|&b| b == 1))
}

/// `sum_{i<j} c_ij Z_i Z_j`, with the dropped constant `tr(Q)` kept alongside.
#[derive(Debug, Clone, PartialEq)]
pub struct IsingHamiltonian {
    num_qubits: usize,
    couplings: Vec<Coupling>,
    trace_offset: f64,
}

impl IsingHamiltonian {
    pub fn new(num_qubits: usize, couplings: Vec<Coupling>, trace_offset: f64) -> Result<Self> {
        for c in &couplings {
            if c.i >= c.j || c.j >= num_qubits {
                return Err(Error::InvalidGate(format!(
                    "coupling ({}, {}) is not strictly upper triangular on {num_qubits} qubits",
                    c.i, c.j
                )));
            }
        }
        let couplings = couplings
            .into_iter()
            .filter(|c| c.coefficient.abs() >= COUPLING_CUTOFF)
            .collect();
        Ok(IsingHamiltonian {
            num_qubits,
            couplings,
            trace_offset,
        })
    }

    /// `c_ij = 2 Q_ij` for `i < j`.
    pub fn from_quso(p: &QusoProblem) -> Self {
        let q = p.matrix();
        let m = p.dim();
        let mut couplings = Vec::new();
        for i in 0..m {
            for j in (i + 1)..m {
                let coefficient = 2.0 * q[(i, j)];
                if coefficient.abs() >= COUPLING_CUTOFF {
                    couplings.push(Coupling { i, j, coefficient });
                }
            }
        }
        IsingHamiltonian {
            num_qubits: m,
            couplings,
            trace_offset: p.trace_offset(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn couplings(&self) -> &[Coupling] {
        &self.couplings
    }

    pub fn trace_offset(&self) -> f64 {
        self.trace_offset
    }

    /// `lambda_y = sum c_ij z_i z_j` with `z_k = +1` for `y_k = 0`, `-1` for `y_k = 1`.
    pub fn eigenvalue_of(&self, y: &BasisOutcome) -> Result<f64> {
        if y.len() != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: y.len(),
            });
        }
        let bits = y.bits();
        Ok(self
            .couplings
            .iter()
            .map(|c| {
                if bits[c.i] == bits[c.j] {
                    c.coefficient
                } else {
                    -c.coefficient
                }
            })
            .sum())
    }

    /// Eigenvalue of the basis state at amplitude `index`.
    pub fn eigenvalue_at(&self, index: usize) -> f64 {
        let m = self.num_qubits;
        self.couplings
            .iter()
            .map(|c| {
                let bi = (index >> (m - 1 - c.i)) & 1;
                let bj = (index >> (m - 1 - c.j)) & 1;
                if bi == bj {
                    c.coefficient
                } else {
                    -c.coefficient
                }
            })
            .sum()
    }

    /// All `2^m` eigenvalues in amplitude order.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..1usize << self.num_qubits)
            .into_par_iter()
            .map(|k| self.eigenvalue_at(k))
            .collect()
    }

    /// Exact ground state over all `2^m` basis states; ties go to the lowest index.
    pub fn ground_state_bruteforce(&self) -> Result<(f64, BasisOutcome)> {
        if self.num_qubits > MAX_BRUTEFORCE_QUBITS {
            return Err(Error::TooLarge {
                size: self.num_qubits,
                limit: MAX_BRUTEFORCE_QUBITS,
            });
        }
        let total = 1usize << self.num_qubits;
        let (value, index) = (0..total)
            .into_par_iter()
            .map(|k| (self.eigenvalue_at(k), k))
            .reduce(
                || (f64::INFINITY, usize::MAX),
                |a, b| {
                    if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) {
                        b
                    } else {
                        a
                    }
                },
            );
        Ok((value, BasisOutcome::from_index(index, self.num_qubits)))
    }

    /// Writes `i,j,coefficient` rows followed by an `offset,<tr(Q)>` footer.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "i,j,coefficient")?;
        for c in &self.couplings {
            writeln!(out, "{},{},{}", c.i, c.j, c.coefficient)?;
        }
        writeln!(out, "offset,{}", self.trace_offset)
    }

    /// Reads the format produced by [`IsingHamiltonian::write_csv`].
    pub fn read_csv<R: BufRead>(input: R, num_qubits: usize) -> Result<Self> {
        let mut couplings = Vec::new();
        let mut offset = None;
        for (n, line) in input.lines().enumerate() {
            let line = line.map_err(|e| Error::Parse(e.to_string()))?;
            let line = line.trim();
            if line.is_empty() || (n == 0 && line == "i,j,coefficient") {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let bad = || Error::Parse(format!("line {}: `{line}`", n + 1));
            match fields.as_slice() {
                ["offset", v] => offset = Some(v.parse::<f64>().map_err(|_| bad())?),
                [i, j, c] => couplings.push(Coupling {
                    i: i.parse().map_err(|_| bad())?,
                    j: j.parse().map_err(|_| bad())?,
                    coefficient: c.parse().map_err(|_| bad())?,
                }),
                _ => return Err(bad()),
            }
        }
        let offset = offset.ok_or_else(|| Error::Parse("missing offset footer".into()))?;
        IsingHamiltonian::new(num_qubits, couplings, offset)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::discrepancy::{build_augmented, exhaustive_search, quso_objective};
    use nalgebra::DMatrix;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_ones() -> QusoProblem {
        QusoProblem::new(DMatrix::from_element(2, 2, 1.0)).unwrap()
    }

    #[test]
    fn from_quso_examples() {
        let h = IsingHamiltonian::from_quso(&QusoProblem::new(DMatrix::identity(2, 2)).unwrap());
        assert!(h.couplings().is_empty());
        assert_eq!(h.trace_offset(), 2.0);

        let h = IsingHamiltonian::from_quso(&all_ones());
        assert_eq!(
            h.couplings(),
            &[Coupling {
                i: 0,
                j: 1,
                coefficient: 2.0
            }]
        );
        assert_eq!(h.trace_offset(), 2.0);
    }

    #[test]
    fn reference_couplings_match_covariate_products() {
        let x = crate::reference::covariates();
        let d = build_augmented(&x, 0.5).unwrap();
        let h = IsingHamiltonian::from_quso(&d.gram());
        assert_eq!(h.couplings().len(), 66);
        let scale = 0.5 / (d.xi() * d.xi());
        for c in h.couplings() {
            let dot = x.column(c.i).dot(&x.column(c.j));
            assert!((c.coefficient - 2.0 * scale * dot).abs() < 1e-12);
        }
    }

    #[test]
    fn eigenvalue_examples() {
        let h = IsingHamiltonian::from_quso(&all_ones());
        let y00 = BasisOutcome::new(vec![0, 0]).unwrap();
        let y01 = BasisOutcome::new(vec![0, 1]).unwrap();
        assert_eq!(h.eigenvalue_of(&y00).unwrap(), 2.0);
        assert_eq!(h.eigenvalue_of(&y01).unwrap(), -2.0);
        assert_eq!(h.eigenvalue_of(&y00).unwrap() + h.trace_offset(), 4.0);
        assert_eq!(h.eigenvalue_of(&y01).unwrap() + h.trace_offset(), 0.0);
        assert!(h
            .eigenvalue_of(&BasisOutcome::new(vec![0]).unwrap())
            .is_err());
    }

    #[test]
    fn index_roundtrip_uses_msb_first() {
        let y = BasisOutcome::from_index(0b100, 3);
        assert_eq!(y.bits(), &[1, 0, 0]);
        assert_eq!(y.to_index(), 4);
        for k in 0..64 {
            assert_eq!(BasisOutcome::from_index(k, 6).to_index(), k);
        }
    }

    #[test]
    fn bijection_examples() {
        let w = Assignment::new(vec![1, 1, 1]).unwrap();
        assert_eq!(to_outcome(&w).bits(), &[1, 1, 1]);
        let w = Assignment::new(vec![-1, 1, -1]).unwrap();
        assert_eq!(to_outcome(&w).bits(), &[0, 1, 0]);
        assert_eq!(to_assignment(&to_outcome(&w)), w);
    }

    #[test]
    fn ground_state_examples() {
        let h = IsingHamiltonian::from_quso(&QusoProblem::new(DMatrix::identity(4, 4)).unwrap());
        assert_eq!(h.ground_state_bruteforce().unwrap().0, 0.0);

        let h = IsingHamiltonian::from_quso(&all_ones());
        let (lambda, y) = h.ground_state_bruteforce().unwrap();
        assert_eq!(lambda, -2.0);
        assert_eq!(y.bits(), &[0, 1]);

        let big = IsingHamiltonian::new(25, vec![], 0.0).unwrap();
        assert!(big.ground_state_bruteforce().is_err());
    }

    #[test]
    fn reference_ground_state_matches_optimum() {
        let d = build_augmented(&crate::reference::covariates(), 0.5).unwrap();
        let p = d.gram();
        let h = IsingHamiltonian::from_quso(&p);
        let (lambda, y) = h.ground_state_bruteforce().unwrap();
        let min = exhaustive_search(&p, false).unwrap();
        assert!((lambda + h.trace_offset() - min.min_value).abs() < 1e-9);
        assert!(((lambda + h.trace_offset()).sqrt() - 2.4496).abs() < 5e-4);
        assert!(to_assignment(&y).equals_up_to_flip(&crate::reference::optimal_assignment()));
    }

    #[test]
    fn eigenvalues_match_objective_on_random_problems() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..50 {
            let m = rng.random_range(1..=6);
            let f = DMatrix::from_fn(3, m, |_, _| rng.random_range(-1.0..1.0));
            let p = QusoProblem::from_factor(&f);
            let h = IsingHamiltonian::from_quso(&p);
            let diag = h.diagonal();
            for (k, lambda) in diag.iter().enumerate() {
                let y = BasisOutcome::from_index(k, m);
                let w = to_assignment(&y);
                assert!((lambda + p.trace_offset() - quso_objective(&p, &w).unwrap()).abs() < 1e-9);
                assert!((lambda - h.eigenvalue_of(&y.flipped()).unwrap()).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn csv_export_roundtrip() {
        let h = IsingHamiltonian::from_quso(&all_ones());
        let mut buf = Vec::new();
        h.write_csv(&mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf.clone()).unwrap(),
            "i,j,coefficient\n0,1,2\noffset,2\n"
        );
        assert_eq!(IsingHamiltonian::read_csv(buf.as_slice(), 2).unwrap(), h);
        assert!(IsingHamiltonian::read_csv("i,j,coefficient\n0,1,2\n".as_bytes(), 2).is_err());
        assert!(IsingHamiltonian::read_csv("1,0,2\noffset,0\n".as_bytes(), 2).is_err());
    }
}
