//! Gram-Schmidt walk design.
//!
//! A fractional assignment `z` starts at the origin and moves through
//! `[-1, 1]^m` until every coordinate is frozen at `+1` or `-1`. Each step
//! moves along the direction `u` with `u_pivot = 1` whose image `B u` is as
//! short as possible given the still-alive columns, by a randomly signed step
//! chosen so that `E[z]` stays put.

use nalgebra::{DMatrix, DVector};
use rand::Rng;

use crate::discrepancy::{Assignment, AugmentedDesign};

/// `|z_i|` at or above this snaps to `±1`.
pub const FREEZE_THRESHOLD: f64 = 1.0 - 1e-12;

/// Ridge added to the alive Gram block when it is numerically singular.
pub const DAMPING: f64 = 1e-12;

/// Fractional assignment plus bookkeeping of the walk.
#[derive(Debug, Clone, PartialEq)]
pub struct WalkState {
    pub z: Vec<f64>,
    pub alive: Vec<bool>,
    pub pivot: Option<usize>,
}

impl WalkState {
    fn new(m: usize) -> Self {
        WalkState {
            z: vec![0.0; m],
            alive: vec![true; m],
            pivot: None,
        }
    }

    pub fn alive_indices(&self) -> Vec<usize> {
        (0..self.z.len()).filter(|&i| self.alive[i]).collect()
    }

    pub fn is_done(&self) -> bool {
        !self.alive.iter().any(|&a| a)
    }
}

/// Step-by-step walk over a fixed design.
#[derive(Debug, Clone)]
pub struct GramSchmidtWalk {
    gram: DMatrix<f64>,
    state: WalkState,
    pivot_phases: usize,
}

impl GramSchmidtWalk {
    pub fn new(design: &AugmentedDesign) -> Self {
        let gram = design.gram().matrix().clone();
        let m = gram.nrows();
        GramSchmidtWalk {
            gram,
            state: WalkState::new(m),
            pivot_phases: 0,
        }
    }

    pub fn state(&self) -> &WalkState {
        &self.state
    }

    /// Number of distinct pivots chosen so far.
    pub fn pivot_phases(&self) -> usize {
        self.pivot_phases
    }

    /// Minimizes `||B u||` subject to `u_pivot = 1`, `u_i = 0` off the alive set.
    fn direction(&self, pivot: usize, alive: &[usize]) -> DVector<f64> {
        let m = self.state.z.len();
        let mut u = DVector::zeros(m);
        u[pivot] = 1.0;
        let rest: Vec<usize> = alive.iter().copied().filter(|&i| i != pivot).collect();
        if rest.is_empty() {
            return u;
        }
        let k = rest.len();
        let a = DMatrix::from_fn(k, k, |r, c| self.gram[(rest[r], rest[c])]);
        let rhs = DVector::from_fn(k, |r, _| -self.gram[(rest[r], pivot)]);

        let solution = a
            .clone()
            .cholesky()
            .or_else(|| (&a + DMatrix::identity(k, k) * DAMPING).cholesky())
            .map(|ch| ch.solve(&rhs))
            .or_else(|| a.clone().svd(true, true).solve(&rhs, 1e-12).ok())
            .unwrap_or_else(|| DVector::zeros(k));
        for (slot, &i) in rest.iter().enumerate() {
            u[i] = solution[slot];
        }
        u
    }

    /// Largest `t > 0` keeping `z + t u` inside the cube, and the coordinate that hits the wall.
    fn max_step(&self, u: &DVector<f64>, sign: f64) -> (f64, usize) {
        let mut best = (f64::INFINITY, usize::MAX);
        for (i, (&zi, &ui)) in self.state.z.iter().zip(u.iter()).enumerate() {
            let d = sign * ui;
            if !self.state.alive[i] || d == 0.0 {
                continue;
            }
            let t = if d > 0.0 {
                (1.0 - zi) / d
            } else {
                (-1.0 - zi) / d
            };
            if t < best.0 {
                best = (t, i);
            }
        }
        best
    }

    /// Performs one walk step. Returns `false` once every coordinate is frozen.
    pub fn step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> bool {
        let alive = self.state.alive_indices();
        if alive.is_empty() {
            return false;
        }
        let pivot = match self.state.pivot {
            Some(p) => p,
            None => {
                let p = alive[rng.random_range(0..alive.len())];
                self.state.pivot = Some(p);
                self.pivot_phases += 1;
                p
            }
        };
        let u = self.direction(pivot, &alive);
        let (up, up_at) = self.max_step(&u, 1.0);
        let (down, down_at) = self.max_step(&u, -1.0);

        let (delta, hit) = if rng.random_bool((down / (up + down)).clamp(0.0, 1.0)) {
            (up, up_at)
        } else {
            (-down, down_at)
        };
        for (zi, ui) in self.state.z.iter_mut().zip(u.iter()) {
            *zi += delta * ui;
        }
        self.state.z[hit] = self.state.z[hit].signum();

        for i in alive {
            let zi = self.state.z[i];
            if zi.abs() >= FREEZE_THRESHOLD {
                self.state.z[i] = if zi > 0.0 { 1.0 } else { -1.0 };
                self.state.alive[i] = false;
            }
        }
        if self.state.pivot.is_some_and(|p| !self.state.alive[p]) {
            self.state.pivot = None;
        }
        true
    }

    /// Runs to completion and returns the signs.
    pub fn run<R: Rng + ?Sized>(mut self, rng: &mut R) -> Assignment {
        while self.step(rng) {}
        Assignment::from_bools(self.state.z.iter().map(|&v| v > 0.0))
    }
}

/// Draws one assignment from the Gram-Schmidt walk design.
pub fn gsw_sample<R: Rng + ?Sized>(design: &AugmentedDesign, rng: &mut R) -> Assignment {
    GramSchmidtWalk::new(design).run(rng)
}
