//! Finite-time activity: `A(τ)`, `B(τ)` by several routes, upper bounds and
//! approximations.

mod bounds;
mod exact;
pub mod quadrature;
mod vectorized;

pub use crate::liouville::TimeGrid;
pub use bounds::{operator_deviation, qda_upper_bounds, UpperBounds};
pub use exact::{
    classical_activity, exact_qda, exact_qda_profile, nakajima_qda, special_case_qda,
    ActivityProfile, SPECIAL_CASE_SERIES,
};
pub use quadrature::{refine, refine_scalar, refine_watched, Estimate, RefineConfig, Refined};
pub use vectorized::{
    gamma_factor, qda_approximations, qda_approximations_with, short_time_coefficient,
    vectorized_qda, vectorized_qda_with, Approximations,
};

use crate::asymptotics::{drazin_inverse, DrazinData, DrazinMethod};
use crate::error::{Error, Result};
use crate::model::{special_case_rate, DensityMatrix, LindbladModel};

#[derive(Clone, Debug, PartialEq)]
pub struct ActivityReport {
    pub tau: f64,
    pub a: f64,
    pub b_exact: f64,
    pub b_nakajima: Option<f64>,
    pub b_upper: f64,
    pub b_upper2: f64,
    pub b_vectorized: Option<f64>,
    pub b_special: Option<f64>,
    pub approx_large_t: Option<f64>,
    pub approx_small_t: Option<f64>,
    pub gamma: Option<f64>,
    pub nu: Option<f64>,
    pub grid_steps: usize,
    pub converged: bool,
}

/// Drazin data when the model has a unique steady state, `None` otherwise.
fn optional_drazin(m: &LindbladModel) -> Result<Option<DrazinData>> {
    match drazin_inverse(m) {
        Ok(dz) => Ok(Some(dz)),
        Err(Error::DegenerateSteadyState { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

impl ActivityReport {
    /// Every finite-time quantity on a common refined grid. Convergence is
    /// judged on `B_exact` and `A`.
    pub fn compute(
        m: &LindbladModel,
        rho0: &DensityMatrix,
        tau: f64,
        cfg: &RefineConfig,
    ) -> Result<Self> {
        crate::liouville::check_dim(m, rho0)?;
        let dz = optional_drazin(m)?;
        let vectorizable = dz
            .as_ref()
            .filter(|d| d.method == DrazinMethod::Spectral);
        let special_rate = match special_case_rate(m) {
            Ok(info) if info.holds => Some(info.rate),
            Ok(_) | Err(Error::ClassicalLimit) => None,
            Err(e) => return Err(e),
        };

        let r = refine_watched(tau, cfg, 2, |g| {
            let (b, a) = exact::exact_and_activity(m, rho0, g)?;
            let ub = qda_upper_bounds(m, rho0, g)?;
            let mut v = vec![b, a, nakajima_qda(m, rho0, g)?, ub.b_upper, ub.b_upper2];
            if let Some(dz) = vectorizable {
                v.push(vectorized_qda_with(m, rho0, g, dz)?);
            }
            if let Some(rate) = special_rate {
                v.push(special_case_qda(m, rho0, g, rate)?);
            }
            Ok(v)
        })?;
        let mut extra = r.values[5..].iter().copied();
        let b_vectorized = vectorizable.map(|_| extra.next().unwrap());
        let b_special = special_rate.map(|_| extra.next().unwrap());
        let a = r.values[1];
        let ap = vectorized::approximations_from(m, rho0, tau, a, dz.as_ref())?;

        Ok(Self {
            tau,
            a,
            b_exact: r.values[0],
            b_nakajima: Some(r.values[2]),
            b_upper: r.values[3],
            b_upper2: r.values[4],
            b_vectorized,
            b_special,
            approx_large_t: ap.large_t,
            approx_small_t: Some(ap.small_t),
            gamma: ap.gamma,
            nu: ap.nu,
            grid_steps: r.steps,
            converged: r.converged,
        })
    }
}
