use rayon::prelude::*;

use super::fidelity_bures;
use crate::activity::{exact_qda, refine_scalar, RefineConfig};
use crate::error::{Error, Result};
use crate::liouville::{evolve_density, TimeGrid};
use crate::model::{DensityMatrix, LindbladModel};

/// Slack allowed on the speed-limit inequality.
pub const QSL_SLACK: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QslConfig {
    /// Simpson intervals in `ln t` over `[span·τ, τ]`; must be even.
    pub log_intervals: usize,
    pub span: f64,
    /// Grid control for each `B(t)` evaluation.
    pub refine: RefineConfig,
}

impl Default for QslConfig {
    fn default() -> Self {
        Self {
            log_intervals: 512,
            span: 1e-4,
            refine: RefineConfig::default(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QslReport {
    pub bures_angle: f64,
    /// `½ ∫_0^τ √B(t)/t dt`.
    pub rhs_integral: f64,
    pub satisfied: bool,
}

fn simpson(f: &[f64], h: f64) -> f64 {
    let n = f.len() - 1;
    let mut s = f[0] + f[n];
    for (i, v) in f.iter().enumerate().take(n).skip(1) {
        s += if i % 2 == 1 { 4.0 * v } else { 2.0 * v };
    }
    s * h / 3.0
}

/// `∫_0^{t₀} √B(t)/t dt` for `B(t) = r t + c t²`, with `c` fitted to `B(t₀)`.
/// Under `t = s²` the integrand becomes `2√(r + c s²)`, which is smooth.
fn first_cell(r: f64, b0: f64, t0: f64) -> f64 {
    let c = (b0 - r * t0) / (t0 * t0);
    let n = 64;
    let top = t0.sqrt();
    let h = top / n as f64;
    let f: Vec<f64> = (0..=n)
        .map(|k| {
            let s = k as f64 * h;
            2.0 * (r + c * s * s).max(0.0).sqrt()
        })
        .collect();
    simpson(&f, h)
}

/// Bures angle between `ρ0` and `ρ(τ)` against `½∫_0^τ √B(t)/t dt`.
pub fn qsl_report(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    tau: f64,
    cfg: &QslConfig,
) -> Result<QslReport> {
    if cfg.log_intervals < 2 || !cfg.log_intervals.is_multiple_of(2) {
        return Err(Error::Domain("Simpson needs an even number of intervals".into()));
    }
    if !(cfg.span > 0.0 && cfg.span < 1.0) {
        return Err(Error::Domain(format!("span must lie in (0, 1), got {}", cfg.span)));
    }
    let path = evolve_density(m, rho0, &TimeGrid::new(tau, 2)?)?;
    let angle = fidelity_bures(rho0, path.last().expect("grid has points"))?.angle;

    let n = cfg.log_intervals;
    let (u0, u1) = ((cfg.span * tau).ln(), tau.ln());
    let h = (u1 - u0) / n as f64;
    let b: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|k| {
            let t = if k == n { tau } else { (u0 + k as f64 * h).exp() };
            refine_scalar(t, &cfg.refine, |g| exact_qda(m, rho0, g)).map(|e| e.value)
        })
        .collect::<Result<_>>()?;
    let roots: Vec<f64> = b.iter().map(|v| v.max(0.0).sqrt()).collect();
    let rate0 = rho0.expectation(&m.jump_rate_operator()).re.max(0.0);
    let head = first_cell(rate0, b[0].max(0.0), cfg.span * tau);
    let rhs = 0.5 * (head + simpson(&roots, h));
    Ok(QslReport {
        bures_angle: angle,
        rhs_integral: rhs,
        satisfied: angle <= rhs + QSL_SLACK,
    })
}
