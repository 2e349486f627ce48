//! Uniform-grid trapezoid rules and the doubling/extrapolation driver.

use crate::error::{Error, Result};
use crate::liouville::TimeGrid;

/// `∫ f` over the whole grid.
pub fn trapezoid(f: &[f64], h: f64) -> f64 {
    match f.len() {
        0 | 1 => 0.0,
        n => h * (0.5 * (f[0] + f[n - 1]) + f[1..n - 1].iter().sum::<f64>()),
    }
}

/// `[∫_0^{t_0} f, ∫_0^{t_1} f, …]`.
pub fn cumulative_trapezoid(f: &[f64], h: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(f.len());
    let mut acc = 0.0;
    out.push(0.0);
    for w in f.windows(2) {
        acc += 0.5 * h * (w[0] + w[1]);
        out.push(acc);
    }
    out.truncate(f.len());
    out
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RefineConfig {
    pub start_steps: usize,
    pub max_steps: usize,
    pub rel_tol: f64,
    /// Report `(4 T_{2n} − T_n)/3` and judge convergence on those values.
    pub richardson: bool,
}

impl Default for RefineConfig {
    fn default() -> Self {
        Self {
            start_steps: 256,
            max_steps: 8192,
            rel_tol: 1e-4,
            richardson: true,
        }
    }
}

impl RefineConfig {
    /// A single evaluation at `steps`, no extrapolation.
    pub fn fixed(steps: usize) -> Self {
        Self {
            start_steps: steps,
            max_steps: steps,
            rel_tol: 0.0,
            richardson: false,
        }
    }

    pub fn with_start(mut self, steps: usize) -> Self {
        self.start_steps = steps;
        self.max_steps = self.max_steps.max(steps);
        self
    }

    pub fn with_tolerance(mut self, rel_tol: f64) -> Self {
        self.rel_tol = rel_tol;
        self
    }

    fn validate(&self) -> Result<()> {
        if self.start_steps < 2 || self.max_steps < self.start_steps {
            return Err(Error::Domain(format!(
                "grid refinement needs 2 <= start ({}) <= max ({})",
                self.start_steps, self.max_steps
            )));
        }
        if self.rel_tol.is_nan() || self.rel_tol < 0.0 {
            return Err(Error::Domain("refinement tolerance must be nonnegative".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Refined {
    pub values: Vec<f64>,
    /// Finest grid used.
    pub steps: usize,
    pub converged: bool,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Estimate {
    pub value: f64,
    pub steps: usize,
    pub converged: bool,
}

fn settled(a: &[f64], b: &[f64], tol: f64) -> bool {
    let floor = a
        .iter()
        .chain(b)
        .map(|x| x.abs())
        .fold(0.0, f64::max)
        * 1e-14;
    a.iter()
        .zip(b)
        .all(|(x, y)| (x - y).abs() <= tol * x.abs().max(y.abs()) + floor)
}

/// Evaluates `f` on grids of `start, 2·start, …` steps until successive
/// estimates agree to `rel_tol` in every component or `max_steps` is reached.
pub fn refine<F>(tau: f64, cfg: &RefineConfig, f: F) -> Result<Refined>
where
    F: Fn(&TimeGrid) -> Result<Vec<f64>>,
{
    refine_watched(tau, cfg, usize::MAX, f)
}

/// As [`refine`], with convergence judged on the first `watched` components only.
pub fn refine_watched<F>(tau: f64, cfg: &RefineConfig, watched: usize, f: F) -> Result<Refined>
where
    F: Fn(&TimeGrid) -> Result<Vec<f64>>,
{
    cfg.validate()?;
    let mut n = cfg.start_steps;
    let mut raw = f(&TimeGrid::new(tau, n)?)?;
    let mut best: Option<Vec<f64>> = if cfg.richardson { None } else { Some(raw.clone()) };
    loop {
        if n * 2 > cfg.max_steps {
            let converged = cfg.max_steps == cfg.start_steps && !cfg.richardson;
            return Ok(Refined {
                values: best.unwrap_or(raw),
                steps: n,
                converged,
            });
        }
        n *= 2;
        let next_raw = f(&TimeGrid::new(tau, n)?)?;
        let next = if cfg.richardson {
            next_raw
                .iter()
                .zip(&raw)
                .map(|(fine, coarse)| (4.0 * fine - coarse) / 3.0)
                .collect()
        } else {
            next_raw.clone()
        };
        if let Some(prev) = &best {
            let k = watched.min(next.len());
            if settled(&prev[..k], &next[..k], cfg.rel_tol) {
                return Ok(Refined {
                    values: next,
                    steps: n,
                    converged: true,
                });
            }
        }
        best = Some(next);
        raw = next_raw;
    }
}

pub fn refine_scalar<F>(tau: f64, cfg: &RefineConfig, f: F) -> Result<Estimate>
where
    F: Fn(&TimeGrid) -> Result<f64>,
{
    let r = refine(tau, cfg, |g| f(g).map(|v| vec![v]))?;
    Ok(Estimate {
        value: r.values[0],
        steps: r.steps,
        converged: r.converged,
    })
}
