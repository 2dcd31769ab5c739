//! End-to-end experiment plumbing behind the `qubalance` binary.

use std::fmt;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::discrepancy::{
    assignment_imbalance, build_augmented, coloring_discrepancy, exhaustive_search,
    uniform_random_assignment, Assignment, CovariateSet,
};
use crate::error::{Error, Result};
use crate::gsw::gsw_sample;
use crate::ising::{to_outcome, IsingHamiltonian};
use crate::optim::NelderMeadConfig;
use crate::result::{Method, RunResult};
use crate::vqa::{self, OptimizerConfig, VqaSettings};

/// Evenly mixed isotropic Gaussian clusters.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianMixtureSpec {
    pub m: usize,
    pub means: Vec<Vec<f64>>,
    pub std_dev: f64,
    pub seed: u64,
}

impl Default for GaussianMixtureSpec {
    /// Twelve points around `(-3, 3)` and `(3, 3)` with unit variance.
    fn default() -> Self {
        GaussianMixtureSpec {
            m: 12,
            means: vec![vec![-3.0, 3.0], vec![3.0, 3.0]],
            std_dev: 1.0,
            seed: 0,
        }
    }
}

impl GaussianMixtureSpec {
    /// Draws `m / k` points per component, component by component.
    pub fn generate(&self) -> Result<CovariateSet> {
        let k = self.means.len();
        if k == 0 || self.m == 0 || !self.m.is_multiple_of(k) {
            return Err(Error::InvalidCovariates(format!(
                "m = {} must be a positive multiple of the {k} components",
                self.m
            )));
        }
        let n = self.means[0].len();
        if n == 0 || self.means.iter().any(|mu| mu.len() != n) {
            return Err(Error::InvalidCovariates(
                "component means must share one dimension".into(),
            ));
        }
        let noise = Normal::new(0.0, self.std_dev)
            .map_err(|e| Error::InvalidCovariates(format!("standard deviation: {e}")))?;
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        let per = self.m / k;
        let rows: Vec<Vec<f64>> = self
            .means
            .iter()
            .flat_map(|mu| std::iter::repeat_n(mu, per))
            .map(|mu| mu.iter().map(|c| c + noise.sample(&mut rng)).collect())
            .collect();
        CovariateSet::from_subject_rows(&rows)
    }
}

/// Parses `"-3,3;3,3"` into component means.
pub fn parse_means(s: &str) -> Result<Vec<Vec<f64>>> {
    s.split(';')
        .map(|group| {
            group
                .split(',')
                .map(|v| {
                    v.trim()
                        .parse::<f64>()
                        .map_err(|_| Error::Parse(format!("bad mean component `{v}`")))
                })
                .collect()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub method: Method,
    pub phi: f64,
    pub shots: u64,
    pub reps: usize,
    pub p: usize,
    pub seed: u64,
    pub restarts: usize,
    pub max_evals: usize,
    /// Draws for `random` and `gsw`; the best one is kept.
    pub samples: usize,
    pub equal_split: bool,
    pub shots_during_opt: Option<u64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            method: Method::Exhaustive,
            phi: 0.5,
            shots: vqa::DEFAULT_SHOTS,
            reps: vqa::DEFAULT_REPS,
            p: vqa::DEFAULT_LAYERS,
            seed: 0,
            restarts: vqa::DEFAULT_RESTARTS,
            max_evals: NelderMeadConfig::default().max_evals,
            samples: 1,
            equal_split: false,
            shots_during_opt: None,
        }
    }
}

impl ExperimentConfig {
    pub fn vqa_settings(&self) -> VqaSettings {
        VqaSettings {
            phi: self.phi,
            shots: self.shots,
            seed: self.seed,
            optimizer: OptimizerConfig {
                restarts: self.restarts,
                nelder_mead: NelderMeadConfig {
                    max_evals: self.max_evals,
                    ..NelderMeadConfig::default()
                },
            },
            shots_during_opt: self.shots_during_opt,
        }
    }
}

fn best_of<F>(
    samples: usize,
    mut draw: F,
    eval: impl Fn(&Assignment) -> Result<f64>,
) -> Result<Assignment>
where
    F: FnMut() -> Result<Assignment>,
{
    let mut best: Option<(f64, Assignment)> = None;
    for _ in 0..samples.max(1) {
        let w = draw()?;
        let v = eval(&w)?;
        if best.as_ref().is_none_or(|(b, _)| v < *b) {
            best = Some((v, w));
        }
    }
    Ok(best.expect("at least one sample").1)
}

/// Runs one method and re-scores its assignment.
pub fn run(cfg: &ExperimentConfig, x: &CovariateSet) -> Result<RunResult> {
    let design = build_augmented(x, cfg.phi)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let score = |w: &Assignment| assignment_imbalance(&design, w);

    let mut result = match cfg.method {
        Method::Random | Method::Gsw => {
            let omega = if cfg.method == Method::Random {
                best_of(
                    cfg.samples,
                    || uniform_random_assignment(x.subjects(), &mut rng),
                    score,
                )?
            } else {
                best_of(cfg.samples, || Ok(gsw_sample(&design, &mut rng)), score)?
            };
            classical(cfg, omega, cfg.samples.max(1))
        }
        Method::Exhaustive => {
            let found = exhaustive_search(&design.gram(), cfg.equal_split)?;
            classical(cfg, found.argmin, 1usize << (x.subjects() - 1))
        }
        Method::Vqe => vqa::run_vqe(x, cfg.reps, &cfg.vqa_settings())?,
        Method::Qaoa => vqa::run_qaoa(x, cfg.p, &cfg.vqa_settings())?,
    };

    result.imbalance = score(&result.omega)?;
    if result.ansatz.is_none() {
        let h = IsingHamiltonian::from_quso(&design.gram());
        result.expectation = h.eigenvalue_of(&to_outcome(&result.omega))?;
    }
    Ok(result)
}

fn classical(cfg: &ExperimentConfig, omega: Assignment, evaluations: usize) -> RunResult {
    RunResult {
        method: cfg.method,
        omega,
        imbalance: f64::NAN,
        expectation: f64::NAN,
        phi: cfg.phi,
        seed: cfg.seed,
        shots: 0,
        ansatz: None,
        evaluations,
        histogram: None,
    }
}

/// Objectives of one assignment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvaluationReport {
    pub discrepancy: f64,
    pub imbalance: f64,
    pub lower_bound: f64,
}

pub fn evaluate(x: &CovariateSet, phi: f64, omega: &Assignment) -> Result<EvaluationReport> {
    let design = build_augmented(x, phi)?;
    Ok(EvaluationReport {
        discrepancy: coloring_discrepancy(x, omega)?,
        imbalance: assignment_imbalance(&design, omega)?,
        lower_bound: design.imbalance_lower_bound(),
    })
}

impl fmt::Display for EvaluationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "discrepancy d_X  = {:.4}", self.discrepancy)?;
        writeln!(f, "imbalance   i_X  = {:.4}", self.imbalance)?;
        write!(f, "lower bound      = {:.4}", self.lower_bound)
    }
}

const SVG_SIZE: f64 = 480.0;
const SVG_MARGIN: f64 = 48.0;

/// Renders a 2-D scatter; marker shape and colour follow the sign of `omega_i`.
pub fn render_svg(x: &CovariateSet, result: Option<&RunResult>) -> Result<String> {
    if x.dimension() != 2 {
        return Err(Error::UnsupportedDimension(x.dimension()));
    }
    if let Some(r) = result {
        if r.omega.len() != x.subjects() {
            return Err(Error::DimensionMismatch {
                expected: x.subjects(),
                got: r.omega.len(),
            });
        }
    }
    let pts: Vec<(f64, f64)> = (0..x.subjects())
        .map(|i| (x.matrix()[(0, i)], x.matrix()[(1, i)]))
        .collect();
    let (mut lo_x, mut hi_x, mut lo_y, mut hi_y) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for &(px, py) in &pts {
        lo_x = lo_x.min(px);
        hi_x = hi_x.max(px);
        lo_y = lo_y.min(py);
        hi_y = hi_y.max(py);
    }
    let span = (hi_x - lo_x).max(hi_y - lo_y).max(1e-9);
    let inner = SVG_SIZE - 2.0 * SVG_MARGIN;
    let map = |px: f64, py: f64| {
        (
            SVG_MARGIN + (px - lo_x) / span * inner,
            SVG_SIZE - SVG_MARGIN - (py - lo_y) / span * inner,
        )
    };

    let mut svg = String::new();
    svg.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n");
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n",
        s = SVG_SIZE
    ));
    svg.push_str(&format!(
        "  <rect x=\"0\" y=\"0\" width=\"{s}\" height=\"{s}\" fill=\"white\"/>\n",
        s = SVG_SIZE
    ));
    svg.push_str(&format!(
        "  <rect x=\"{m}\" y=\"{m}\" width=\"{w}\" height=\"{w}\" fill=\"none\" stroke=\"#999\"/>\n",
        m = SVG_MARGIN,
        w = inner
    ));
    for (i, &(px, py)) in pts.iter().enumerate() {
        let (cx, cy) = map(px, py);
        let sign = result.map(|r| r.omega.signs()[i]);
        let marker = match sign {
            Some(1) => format!(
                "  <circle class=\"plus\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"6\" fill=\"#1f77b4\"/>\n"
            ),
            Some(_) => format!(
                "  <rect class=\"minus\" x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"#ff7f0e\"/>\n",
                cx - 6.0,
                cy - 6.0
            ),
            None => format!(
                "  <circle class=\"unassigned\" cx=\"{cx:.2}\" cy=\"{cy:.2}\" r=\"6\" fill=\"none\" stroke=\"#333\"/>\n"
            ),
        };
        svg.push_str(&marker);
    }
    let legend = match result {
        Some(r) => format!("{}: i_X = {:.4} (phi = {})", r.method, r.imbalance, r.phi),
        None => "covariates".to_string(),
    };
    svg.push_str(&format!(
        "  <text x=\"{m}\" y=\"{y}\" font-family=\"sans-serif\" font-size=\"14\">{legend}</text>\n",
        m = SVG_MARGIN,
        y = SVG_MARGIN / 2.0 + 5.0
    ));
    if result.is_some() {
        let y = SVG_SIZE - SVG_MARGIN / 2.0;
        svg.push_str(&format!(
            "  <circle cx=\"{:.2}\" cy=\"{:.2}\" r=\"6\" fill=\"#1f77b4\"/><text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">+1</text>\n",
            SVG_MARGIN,
            y - 4.0,
            SVG_MARGIN + 10.0,
            y
        ));
        svg.push_str(&format!(
            "  <rect x=\"{:.2}\" y=\"{:.2}\" width=\"12\" height=\"12\" fill=\"#ff7f0e\"/><text x=\"{:.2}\" y=\"{:.2}\" font-family=\"sans-serif\" font-size=\"12\">-1</text>\n",
            SVG_MARGIN + 44.0,
            y - 10.0,
            SVG_MARGIN + 60.0,
            y
        ));
    }
    svg.push_str("</svg>\n");
    Ok(svg)
}

/// Writes `contents` via a sibling temporary file so a failure leaves no partial output.
pub fn write_atomically(path: &Path, contents: &str) -> Result<()> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".partial");
    let tmp = std::path::PathBuf::from(tmp);
    std::fs::write(&tmp, contents).map_err(|e| Error::io(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        Error::io(path, e)
    })
}

/// One row of the reproduction table.
#[derive(Debug, Clone, PartialEq)]
pub struct ReproCheck {
    pub name: String,
    pub expected: String,
    pub observed: String,
    pub passed: bool,
}

impl ReproCheck {
    fn new(name: &str, expected: String, observed: String, passed: bool) -> Self {
        ReproCheck {
            name: name.to_string(),
            expected,
            observed,
            passed,
        }
    }
}

/// Reproduces the reference study: reported imbalances and the solver runs.
pub fn reproduce(cfg: &ExperimentConfig) -> Result<Vec<ReproCheck>> {
    use crate::reference as r;
    const TOL: f64 = 5e-4;
    let x = r::covariates();
    let phi = r::PHI;
    let design = build_augmented(&x, phi)?;
    let imb = |w: &Assignment| assignment_imbalance(&design, w);
    let mut checks = Vec::new();

    let found = exhaustive_search(&design.gram(), false)?;
    let optimum = found.min_value.sqrt();
    checks.push(ReproCheck::new(
        "exhaustive optimum",
        format!("{:.4} ± {TOL}", r::REPORTED_OPTIMUM),
        format!("{optimum:.4}"),
        (optimum - r::REPORTED_OPTIMUM).abs() <= TOL,
    ));
    checks.push(ReproCheck::new(
        "exhaustive argmin",
        format!("{} (up to sign)", r::optimal_assignment()),
        found.argmin.to_string(),
        found.argmin.equals_up_to_flip(&r::optimal_assignment()),
    ));

    let gsw_printed = imb(&r::gsw_assignment())?;
    checks.push(ReproCheck::new(
        "published GSW assignment",
        format!("{:.4} ± {TOL}", r::REPORTED_GSW),
        format!("{gsw_printed:.4}"),
        (gsw_printed - r::REPORTED_GSW).abs() <= TOL,
    ));

    let vqa_printed = imb(&r::vqe_assignment())?;
    let near = |v: f64| (vqa_printed - v).abs() <= 1e-3;
    checks.push(ReproCheck::new(
        "published VQE/QAOA assignment",
        format!("{:.4} or {:.4} ± 1e-3", r::REPORTED_VQE, r::REPORTED_QAOA),
        format!("{vqa_printed:.4}"),
        near(r::REPORTED_VQE) || near(r::REPORTED_QAOA),
    ));

    let bound = design.imbalance_lower_bound();
    checks.push(ReproCheck::new(
        "optimum above sqrt(phi m)",
        format!("{bound:.5} < imb < {:.5}", bound + 2e-4),
        format!("{optimum:.5}"),
        optimum >= bound - 1e-9 && optimum - bound < 2e-4,
    ));

    let target = 1.02 * r::REPORTED_OPTIMUM;
    for method in [Method::Qaoa, Method::Vqe] {
        let run_cfg = ExperimentConfig {
            method,
            phi,
            ..cfg.clone()
        };
        let res = run(&run_cfg, &x)?;
        checks.push(ReproCheck::new(
            &format!("{method} best sampled imbalance"),
            format!("<= {target:.4}, <H> < 0"),
            format!("{:.4}, <H> = {:.4}", res.imbalance, res.expectation),
            res.imbalance <= target && res.expectation < 0.0,
        ));
    }

    let gsw_cfg = ExperimentConfig {
        method: Method::Gsw,
        phi,
        samples: 2000,
        ..cfg.clone()
    };
    let gsw_best = run(&gsw_cfg, &x)?;
    checks.push(ReproCheck::new(
        "GSW best of 2000 draws",
        "<= 2.4800".into(),
        format!("{:.4}", gsw_best.imbalance),
        gsw_best.imbalance <= 2.48,
    ));
    Ok(checks)
}

pub fn format_checks(checks: &[ReproCheck]) -> String {
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    let mut out = String::new();
    for c in checks {
        out.push_str(&format!(
            "{:<4}  {:<width$}  expected {:<28} observed {}\n",
            if c.passed { "PASS" } else { "FAIL" },
            c.name,
            c.expected,
            c.observed,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mixture_without_noise_repeats_means() {
        let spec = GaussianMixtureSpec {
            m: 4,
            std_dev: 0.0,
            ..Default::default()
        };
        let x = spec.generate().unwrap();
        assert_eq!(x.subject_row(0), vec![-3.0, 3.0]);
        assert_eq!(x.subject_row(1), vec![-3.0, 3.0]);
        assert_eq!(x.subject_row(2), vec![3.0, 3.0]);
        assert_eq!(x.subject_row(3), vec![3.0, 3.0]);
    }

    #[test]
    fn mixture_cluster_means_are_close() {
        for seed in 0..20 {
            let x = GaussianMixtureSpec {
                seed,
                ..Default::default()
            }
            .generate()
            .unwrap();
            for (c, mu) in [(0, [-3.0, 3.0]), (1, [3.0, 3.0])] {
                for (d, &target) in mu.iter().enumerate() {
                    let mean: f64 = (0..6).map(|k| x.matrix()[(d, c * 6 + k)]).sum::<f64>() / 6.0;
                    assert!((mean - target).abs() <= 1.3, "seed {seed}: {mean}");
                }
            }
        }
    }

    #[test]
    fn mixture_rejects_uneven_split() {
        let spec = GaussianMixtureSpec {
            m: 5,
            ..Default::default()
        };
        assert!(spec.generate().is_err());
        assert_eq!(
            parse_means("-3,3; 3,3").unwrap(),
            vec![vec![-3.0, 3.0], vec![3.0, 3.0]]
        );
        assert!(parse_means("a,b").is_err());
    }

    #[test]
    fn exhaustive_run_reports_reference_optimum() {
        let r = run(
            &ExperimentConfig::default(),
            &crate::reference::covariates(),
        )
        .unwrap();
        assert!((r.imbalance - 2.4496).abs() < 5e-4);
        assert!(r
            .omega
            .equals_up_to_flip(&crate::reference::optimal_assignment()));
        assert!((r.expectation + 8.6841125 - r.imbalance * r.imbalance).abs() < 1e-6);
    }

    #[test]
    fn random_run_is_seeded() {
        let cfg = ExperimentConfig {
            method: Method::Random,
            seed: 5,
            ..Default::default()
        };
        let x = crate::reference::covariates();
        assert_eq!(run(&cfg, &x).unwrap(), run(&cfg, &x).unwrap());
    }

    #[test]
    fn evaluate_reference_vectors() {
        let x = crate::reference::covariates();
        let rep = evaluate(&x, 0.5, &crate::reference::optimal_assignment()).unwrap();
        assert!((rep.imbalance - 2.4496).abs() < 5e-4);
        assert!((rep.lower_bound - 6f64.sqrt()).abs() < 1e-12);
        assert!(rep.to_string().contains("2.4496"));
        assert!(evaluate(&x, 0.5, &Assignment::new(vec![1, -1]).unwrap()).is_err());
    }

    #[test]
    fn svg_marker_counts() {
        let x = crate::reference::covariates();
        let svg = render_svg(&x, None).unwrap();
        assert_eq!(svg.matches("class=\"unassigned\"").count(), 12);

        let r = run(&ExperimentConfig::default(), &x).unwrap();
        let svg = render_svg(&x, Some(&r)).unwrap();
        assert_eq!(svg.matches("class=\"plus\"").count(), 6);
        assert_eq!(svg.matches("class=\"minus\"").count(), 6);
        assert!(svg.contains("exhaustive: i_X = 2.4496"));

        let three = CovariateSet::new(nalgebra::DMatrix::zeros(3, 2)).unwrap();
        assert!(matches!(
            render_svg(&three, None),
            Err(Error::UnsupportedDimension(3))
        ));
    }
}
