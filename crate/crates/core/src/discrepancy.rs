//! Discrepancy and covariate-imbalance objectives.
//!
//! Subjects are the columns `x_1..x_m` of an `n x m` covariate matrix `X`. A
//! two-group assignment is a sign vector `w` in `{-1,+1}^m`. Two objectives are
//! built on top of it:
//!
//! * the coloring discrepancy `d_X(w) = ||sum_i w_i x_i||`, and
//! * the assignment imbalance `i_X(w) = ||B w||`, where `B` stacks `sqrt(phi) I_m`
//!   on top of `sqrt(1 - phi) X / xi` with `xi = max_i ||x_i||`.
//!
//! Both square to a quadratic form `w^T Q w` ([`QusoProblem`]), which is what the
//! exhaustive oracle and the Ising encoding consume.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest `m` accepted by [`exhaustive_search`].
pub const MAX_EXHAUSTIVE_SUBJECTS: usize = 30;

/// Tolerance on `||x_i|| <= 1` for the unit-ball bound.
const UNIT_NORM_SLACK: f64 = 1e-12;

/// Points per rayon work item in the exhaustive scan.
const SCAN_CHUNK: u64 = 1 << 12;

/// A vector of `+1`/`-1` signs, one per subject.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i8>", into = "Vec<i8>")]
pub struct Assignment(Vec<i8>);

impl Assignment {
    pub fn new(signs: Vec<i8>) -> Result<Self> {
        if signs.is_empty() {
            return Err(Error::InvalidAssignment("empty assignment".into()));
        }
        if let Some((i, s)) = signs.iter().enumerate().find(|(_, s)| !matches!(s, 1 | -1)) {
            return Err(Error::InvalidAssignment(format!(
                "entry {i} is {s}, expected +1 or -1"
            )));
        }
        Ok(Assignment(signs))
    }

    /// Builds an assignment from booleans, `true` meaning `+1`.
    pub fn from_bools(bits: impl IntoIterator<Item = bool>) -> Self {
        Assignment(bits.into_iter().map(|b| if b { 1 } else { -1 }).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn signs(&self) -> &[i8] {
        &self.0
    }

    pub fn to_vector(&self) -> DVector<f64> {
        DVector::from_iterator(self.0.len(), self.0.iter().map(|&s| f64::from(s)))
    }

    /// The global sign flip `-w`.
    pub fn flipped(&self) -> Self {
        Assignment(self.0.iter().map(|s| -s).collect())
    }

    /// Representative of `{w, -w}` whose first entry is `+1`.
    pub fn canonical(&self) -> Self {
        if self.0[0] == 1 {
            self.clone()
        } else {
            self.flipped()
        }
    }

    /// True when `self == other` or `self == -other`.
    pub fn equals_up_to_flip(&self, other: &Assignment) -> bool {
        self.canonical() == other.canonical()
    }

    /// Number of `+1` entries.
    pub fn count_positive(&self) -> usize {
        self.0.iter().filter(|&&s| s == 1).count()
    }

    fn check_len(&self, expected: usize) -> Result<()> {
        if self.len() != expected {
            return Err(Error::DimensionMismatch {
                expected,
                got: self.len(),
            });
        }
        Ok(())
    }
}

impl TryFrom<Vec<i8>> for Assignment {
    type Error = Error;

    fn try_from(signs: Vec<i8>) -> Result<Self> {
        Assignment::new(signs)
    }
}

impl From<Assignment> for Vec<i8> {
    fn from(a: Assignment) -> Self {
        a.0
    }
}

/// Parses literals such as `1,-1,1`, `[1, -1, 1]` or `+1 -1 +1`.
impl FromStr for Assignment {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let trimmed = s.trim().trim_start_matches('[').trim_end_matches(']');
        let signs = trimmed
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|tok| !tok.is_empty())
            .map(|tok| {
                tok.parse::<i8>()
                    .map_err(|_| Error::Parse(format!("`{tok}` is not +1 or -1")))
            })
            .collect::<Result<Vec<_>>>()?;
        Assignment::new(signs)
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "]")
    }
}

/// `m` covariate vectors in `R^n`, stored as the columns of an `n x m` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CovariateSet {
    matrix: DMatrix<f64>,
}

impl CovariateSet {
    /// Wraps an `n x m` matrix whose columns are the subjects.
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() == 0 || matrix.ncols() == 0 {
            return Err(Error::InvalidCovariates(format!(
                "need n >= 1 and m >= 1, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCovariates("non-finite entry".into()));
        }
        Ok(CovariateSet { matrix })
    }

    /// One row per subject (the transpose layout used by the CSV format).
    pub fn from_subject_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let m = rows.len();
        let n = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: bad.len(),
            });
        }
        Self::new(DMatrix::from_fn(n, m, |r, c| rows[c][r]))
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// Number of subjects `m`.
    pub fn subjects(&self) -> usize {
        self.matrix.ncols()
    }

    /// Covariate dimension `n`.
    pub fn dimension(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn column(&self, i: usize) -> DVector<f64> {
        self.matrix.column(i).into_owned()
    }

    pub fn column_norms(&self) -> Vec<f64> {
        self.matrix.column_iter().map(|c| c.norm()).collect()
    }

    /// Subject `i` as a plain row.
    pub fn subject_row(&self, i: usize) -> Vec<f64> {
        self.matrix.column(i).iter().copied().collect()
    }

    /// The Gram problem `Q_X = X^T X`, whose objective is `d_X(w)^2`.
    pub fn gram(&self) -> QusoProblem {
        QusoProblem::from_factor(&self.matrix)
    }
}

/// The `(m + n) x m` design `B = [sqrt(phi) I_m ; sqrt(1 - phi) X / xi]`.
#[derive(Debug, Clone)]
pub struct AugmentedDesign {
    base: CovariateSet,
    phi: f64,
    xi: f64,
    matrix: DMatrix<f64>,
}

impl AugmentedDesign {
    pub fn base(&self) -> &CovariateSet {
        &self.base
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// `max_i ||x_i||`, or 1 when every covariate vector is zero.
    pub fn xi(&self) -> f64 {
        self.xi
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn subjects(&self) -> usize {
        self.base.subjects()
    }

    /// `Q_B = B^T B`, computed from `B` itself.
    pub fn gram(&self) -> QusoProblem {
        QusoProblem::from_factor(&self.matrix)
    }

    /// `sqrt(phi * m)`: no assignment can do better.
    pub fn imbalance_lower_bound(&self) -> f64 {
        (self.phi * self.subjects() as f64).sqrt()
    }
}

/// Minimize `w^T Q w` over sign vectors, `Q` symmetric positive semidefinite.
#[derive(Debug, Clone, PartialEq)]
pub struct QusoProblem {
    q: DMatrix<f64>,
    trace_offset: f64,
}

impl QusoProblem {
    /// Symmetrizes `q` as `(q + q^T) / 2`.
    pub fn new(q: DMatrix<f64>) -> Result<Self> {
        if q.nrows() != q.ncols() {
            return Err(Error::DimensionMismatch {
                expected: q.nrows(),
                got: q.ncols(),
            });
        }
        if q.nrows() == 0 {
            return Err(Error::InvalidCovariates("empty QUSO matrix".into()));
        }
        if q.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidCovariates("non-finite QUSO entry".into()));
        }
        let q = (&q + q.transpose()) * 0.5;
        let trace_offset = q.trace();
        Ok(QusoProblem { q, trace_offset })
    }

    /// `M^T M`, positive semidefinite by construction.
    pub fn from_factor(factor: &DMatrix<f64>) -> Self {
        let q = factor.tr_mul(factor);
        let q = (&q + q.transpose()) * 0.5;
        let trace_offset = q.trace();
        QusoProblem { q, trace_offset }
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn dim(&self) -> usize {
        self.q.nrows()
    }

    /// `tr(Q)`, the part of `w^T Q w` that does not depend on `w`.
    pub fn trace_offset(&self) -> f64 {
        self.trace_offset
    }

    /// `tr(Q) + 2 sum_{i<j} Q_ij w_i w_j` for a raw sign slice; no validation.
    fn objective_unchecked(&self, signs: &[f64]) -> f64 {
        let m = signs.len();
        let mut cross = 0.0;
        for i in 0..m {
            let row: f64 = ((i + 1)..m).map(|j| self.q[(i, j)] * signs[j]).sum();
            cross += signs[i] * row;
        }
        self.trace_offset + 2.0 * cross
    }
}

/// `||sum_i w_i x_i||`.
pub fn coloring_discrepancy(x: &CovariateSet, w: &Assignment) -> Result<f64> {
    w.check_len(x.subjects())?;
    let mut sum = DVector::zeros(x.dimension());
    for (col, &s) in x.matrix.column_iter().zip(w.signs()) {
        sum.axpy(f64::from(s), &col, 1.0);
    }
    Ok(sum.norm())
}

/// Builds `B` for balance-robustness parameter `phi` in `[0, 1]`.
pub fn build_augmented(x: &CovariateSet, phi: f64) -> Result<AugmentedDesign> {
    if !(0.0..=1.0).contains(&phi) {
        return Err(Error::InvalidPhi(phi));
    }
    let m = x.subjects();
    let n = x.dimension();
    let max_norm = x.column_norms().into_iter().fold(0.0_f64, f64::max);
    let xi = if max_norm > 0.0 { max_norm } else { 1.0 };

    let top = phi.sqrt();
    let scale = (1.0 - phi).sqrt() / xi;
    let mut b = DMatrix::zeros(m + n, m);
    for i in 0..m {
        b[(i, i)] = top;
    }
    b.view_mut((m, 0), (n, m)).copy_from(&(x.matrix() * scale));

    Ok(AugmentedDesign {
        base: x.clone(),
        phi,
        xi,
        matrix: b,
    })
}

/// `i_X(w) = ||B w||`.
pub fn assignment_imbalance(d: &AugmentedDesign, w: &Assignment) -> Result<f64> {
    w.check_len(d.subjects())?;
    Ok((d.matrix() * w.to_vector()).norm())
}

/// `w^T Q w`.
pub fn quso_objective(p: &QusoProblem, w: &Assignment) -> Result<f64> {
    w.check_len(p.dim())?;
    let v = w.to_vector();
    Ok(v.dot(&(&p.q * &v)))
}

/// Optimum of an exhaustive scan.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchResult {
    pub min_value: f64,
    pub argmin: Assignment,
}

/// Signs of the `index`-th scanned point: `w_1 = +1`, then `w_2..w_m` read from
/// the bits of `index`, most significant first, with a set bit meaning `-1`.
fn scan_point(index: u64, m: usize, out: &mut [f64]) {
    out[0] = 1.0;
    for (i, slot) in out.iter_mut().enumerate().skip(1) {
        let bit = (index >> (m - 1 - i)) & 1;
        *slot = if bit == 1 { -1.0 } else { 1.0 };
    }
}

/// Exact minimum of `w^T Q w` by enumeration.
///
/// `w_1` is pinned to `+1` since the objective is invariant under `w -> -w`, so
/// `2^(m-1)` points are visited. Ties resolve to the first minimizer in scan
/// order. With `equal_split`, only assignments with exactly `m/2` positive
/// entries are considered.
pub fn exhaustive_search(p: &QusoProblem, equal_split: bool) -> Result<SearchResult> {
    let m = p.dim();
    if m > MAX_EXHAUSTIVE_SUBJECTS {
        return Err(Error::TooLarge {
            size: m,
            limit: MAX_EXHAUSTIVE_SUBJECTS,
        });
    }
    if equal_split && m % 2 == 1 {
        return Err(Error::OddEqualSplit(m));
    }
    let total: u64 = 1 << (m - 1);
    let half = m / 2;

    let chunks: Vec<(u64, u64)> = (0..total.div_ceil(SCAN_CHUNK))
        .map(|c| (c * SCAN_CHUNK, ((c + 1) * SCAN_CHUNK).min(total)))
        .collect();

    let partial: Vec<Option<(f64, u64)>> = chunks
        .par_iter()
        .map(|&(lo, hi)| {
            let mut signs = vec![0.0; m];
            let mut best: Option<(f64, u64)> = None;
            for k in lo..hi {
                scan_point(k, m, &mut signs);
                if equal_split && signs.iter().filter(|&&s| s > 0.0).count() != half {
                    continue;
                }
                let value = p.objective_unchecked(&signs);
                if best.is_none_or(|(b, _)| value < b) {
                    best = Some((value, k));
                }
            }
            best
        })
        .collect();

    // Reduce in chunk order so the first minimizer wins.
    let (min_value, index) = partial
        .into_iter()
        .flatten()
        .fold(None, |acc: Option<(f64, u64)>, cand| match acc {
            Some(a) if a.0 <= cand.0 => Some(a),
            _ => Some(cand),
        })
        .ok_or(Error::NoEvaluations)?;

    let mut signs = vec![0.0; m];
    scan_point(index, m, &mut signs);
    let argmin = Assignment::from_bools(signs.iter().map(|&s| s > 0.0));
    Ok(SearchResult { min_value, argmin })
}

/// Outcome of checking `disc(X) <= sqrt(n)` for unit-ball inputs.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub discrepancy: f64,
    pub bound: f64,
    pub satisfied: bool,
    pub coloring: Assignment,
}

/// Computes `disc(X)` exhaustively and compares it with `sqrt(n)`.
///
/// Every column must satisfy `||x_i|| <= 1`.
pub fn banaszczyk_bound_holds(x: &CovariateSet) -> Result<BoundCheck> {
    for (index, norm) in x.column_norms().into_iter().enumerate() {
        if norm > 1.0 + UNIT_NORM_SLACK {
            return Err(Error::HypothesisViolated { index, norm });
        }
    }
    let result = exhaustive_search(&x.gram(), false)?;
    let discrepancy = result.min_value.max(0.0).sqrt();
    let bound = (x.dimension() as f64).sqrt();
    Ok(BoundCheck {
        discrepancy,
        bound,
        satisfied: discrepancy <= bound + 1e-12,
        coloring: result.argmin,
    })
}

/// Independent fair signs.
pub fn uniform_random_assignment<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Assignment> {
    if m == 0 {
        return Err(Error::InvalidAssignment("m must be at least 1".into()));
    }
    Ok(Assignment::from_bools((0..m).map(|_| rng.random_bool(0.5))))
}
