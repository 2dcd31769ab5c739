//! Derivative-free minimization: Nelder-Mead with dimension-adaptive
//! coefficients (Gao & Han) and a hard evaluation budget.

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NelderMeadConfig {
    /// Objective evaluations allowed, including the initial simplex.
    pub max_evals: usize,
    /// Edge length of the initial axis-aligned simplex.
    pub initial_step: f64,
    /// Stop once the spread of simplex values falls below this.
    pub ftol: f64,
    /// ... and the simplex diameter falls below this.
    pub xtol: f64,
}

impl Default for NelderMeadConfig {
    fn default() -> Self {
        NelderMeadConfig {
            max_evals: 2000,
            initial_step: 0.25,
            ftol: 1e-10,
            xtol: 1e-8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Minimum {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    /// Best value seen after each evaluation; non-increasing.
    pub history: Vec<f64>,
}

struct Budgeted<F> {
    f: F,
    max_evals: usize,
    best_x: Vec<f64>,
    best: f64,
    history: Vec<f64>,
}

impl<F: FnMut(&[f64]) -> f64> Budgeted<F> {
    fn exhausted(&self) -> bool {
        self.history.len() >= self.max_evals
    }

    fn eval(&mut self, x: &[f64]) -> Option<f64> {
        if self.exhausted() {
            return None;
        }
        let mut v = (self.f)(x);
        if v.is_nan() {
            v = f64::INFINITY;
        }
        if v < self.best || self.history.is_empty() {
            self.best = v;
            self.best_x = x.to_vec();
        }
        self.history.push(self.best);
        Some(v)
    }
}

fn lerp(from: &[f64], to: &[f64], t: f64) -> Vec<f64> {
    from.iter().zip(to).map(|(a, b)| a + t * (b - a)).collect()
}

/// Minimizes `f` starting from `x0`.
pub fn nelder_mead<F>(f: F, x0: &[f64], cfg: &NelderMeadConfig) -> Result<Minimum>
where
    F: FnMut(&[f64]) -> f64,
{
    let mut ev = Budgeted {
        f,
        max_evals: cfg.max_evals,
        best_x: x0.to_vec(),
        best: f64::INFINITY,
        history: Vec::with_capacity(cfg.max_evals),
    };
    let n = x0.len();

    if n == 0 {
        ev.eval(x0).ok_or(Error::NoEvaluations)?;
        return finish(ev);
    }

    let nf = n as f64;
    let alpha = 1.0;
    let beta = 1.0 + 2.0 / nf;
    let gamma = 0.75 - 1.0 / (2.0 * nf);
    let delta = 1.0 - 1.0 / nf;

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let mut x = x0.to_vec();
        if k > 0 {
            x[k - 1] += cfg.initial_step;
        }
        match ev.eval(&x) {
            Some(v) => simplex.push((x, v)),
            None => return finish(ev),
        }
    }

    loop {
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let f_best = simplex[0].1;
        let f_worst = simplex[n].1;
        let diameter = simplex[1..]
            .iter()
            .map(|(x, _)| {
                x.iter()
                    .zip(&simplex[0].0)
                    .map(|(a, b)| (a - b).abs())
                    .fold(0.0, f64::max)
            })
            .fold(0.0, f64::max);
        if (f_worst - f_best).abs() <= cfg.ftol && diameter <= cfg.xtol {
            break;
        }
        if ev.exhausted() {
            break;
        }

        let mut centroid = vec![0.0; n];
        for (x, _) in &simplex[..n] {
            for (c, xi) in centroid.iter_mut().zip(x) {
                *c += xi / nf;
            }
        }
        let worst = simplex[n].0.clone();

        let xr = lerp(&centroid, &worst, -alpha);
        let Some(fr) = ev.eval(&xr) else { break };

        if fr < f_best {
            let xe = lerp(&centroid, &xr, beta);
            let Some(fe) = ev.eval(&xe) else { break };
            simplex[n] = if fe < fr { (xe, fe) } else { (xr, fr) };
            continue;
        }
        if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
            continue;
        }

        let (xc, threshold) = if fr < f_worst {
            (lerp(&centroid, &xr, gamma), fr)
        } else {
            (lerp(&centroid, &worst, gamma), f_worst)
        };
        let Some(fc) = ev.eval(&xc) else { break };
        if fc < threshold || (fr < f_worst && fc <= fr) {
            simplex[n] = (xc, fc);
            continue;
        }

        let best = simplex[0].0.clone();
        for entry in simplex.iter_mut().skip(1) {
            let x = lerp(&best, &entry.0, delta);
            match ev.eval(&x) {
                Some(v) => *entry = (x, v),
                None => return finish(ev),
            }
        }
    }
    finish(ev)
}

fn finish<F>(ev: Budgeted<F>) -> Result<Minimum> {
    if ev.history.is_empty() {
        return Err(Error::NoEvaluations);
    }
    Ok(Minimum {
        x: ev.best_x,
        value: ev.best,
        evaluations: ev.history.len(),
        history: ev.history,
    })
}
