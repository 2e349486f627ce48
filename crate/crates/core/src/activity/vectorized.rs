//! Single-integral form of `B(τ)` through the Drazin inverse, and the
//! short- and long-time approximations.

use super::exact::{expectations, state_path, trace_weights};
use super::quadrature::{refine_scalar, trapezoid, RefineConfig};
use crate::asymptotics::{coherent_rate_with, drazin_inverse, DrazinData, DrazinMethod};
use crate::error::{Error, Result};
use crate::liouville::{identity_vec, left_multiplication, TimeGrid};
use crate::model::{DensityMatrix, LindbladModel};
use crate::numerics::mat_exp;
use crate::numerics::matrix::C64;

pub fn vectorized_qda(m: &LindbladModel, rho0: &DensityMatrix, grid: &TimeGrid) -> Result<f64> {
    vectorized_qda_with(m, rho0, grid, &drazin_inverse(m)?)
}

/// `A + 8Tr[H_S ρ_ss]∫(τ−s)Tr[H_S ρ(s)]ds
///  + 8Re∫⟨⟨I|Ĥ_S L^D (e^{L(τ−s)} − 1) Ĥ_eff|ρ(s)⟩⟩ds − 4(∫Tr[H_S ρ])²`.
pub fn vectorized_qda_with(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    dz: &DrazinData,
) -> Result<f64> {
    if dz.method != DrazinMethod::Spectral {
        return Err(Error::Defective {
            condition: f64::INFINITY,
        });
    }
    let d = m.dim();
    let n = grid.steps();
    let h = grid.dt();
    let tau = grid.tau();
    let path = state_path(m, rho0, grid)?;

    let rate: Vec<f64> = expectations(&m.jump_rate_operator(), &path)
        .iter()
        .map(|z| z.re)
        .collect();
    let energy: Vec<f64> = expectations(m.hamiltonian(), &path).iter().map(|z| z.re).collect();
    let a = trapezoid(&rate, h);
    let e = trapezoid(&energy, h);
    let h_ss = dz.steady.expectation(m.hamiltonian()).re;
    let lever: Vec<f64> = energy
        .iter()
        .enumerate()
        .map(|(k, v)| (tau - grid.time(k)) * v)
        .collect();

    let step = mat_exp(&dz.liouvillian.matrix().scale_real(h))?;
    let r0 = dz
        .drazin
        .vecmat(&left_multiplication(m.hamiltonian()).vecmat(&identity_vec(d)));
    let mut rows: Vec<Vec<C64>> = Vec::with_capacity(n + 1);
    rows.push(r0.clone());
    for u in 0..n {
        let next = step.vecmat(&rows[u]);
        rows.push(next);
    }
    let heff = left_multiplication(&m.effective_hamiltonian());
    let f: Vec<f64> = path
        .iter()
        .enumerate()
        .map(|(j, rho)| {
            let x = heff.matvec(rho);
            rows[n - j]
                .iter()
                .zip(&r0)
                .zip(&x)
                .map(|((w, w0), x)| ((w - w0) * x).re)
                .sum()
        })
        .collect();

    Ok(a + 8.0 * h_ss * trapezoid(&lever, h) + 8.0 * trapezoid(&f, h) - 4.0 * e * e)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Approximations {
    /// `A(τ) + τ𝒵`; absent without a unique steady state.
    pub large_t: Option<f64>,
    /// `A(τ) + 4τ² Re Tr[ΔH_S ΔH_eff ρ0]`.
    pub small_t: f64,
    /// `max((1/τ)Σ_{j≠0} 1/|λ_j|, e^{−ντ})`.
    pub gamma: Option<f64>,
    /// `min_{j>0} |Re λ_j|`.
    pub nu: Option<f64>,
    pub a: f64,
}

/// `Re Tr[ΔH_S ΔH_eff ρ]`.
pub fn short_time_coefficient(m: &LindbladModel, rho: &DensityMatrix) -> f64 {
    let heff = m.effective_hamiltonian();
    let joint = rho.expectation(&(m.hamiltonian() * &heff));
    (joint - rho.expectation(m.hamiltonian()) * rho.expectation(&heff)).re
}

/// `γ(τ)` from the non-zero Liouvillian eigenvalues.
pub fn gamma_factor(nonzero: &[C64], tau: f64) -> f64 {
    let nu = nonzero.iter().map(|l| l.re.abs()).fold(f64::INFINITY, f64::min);
    let sum: f64 = nonzero.iter().map(|l| 1.0 / l.norm()).sum();
    (sum / tau).max((-nu * tau).exp())
}

pub fn qda_approximations(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    tau: f64,
) -> Result<Approximations> {
    qda_approximations_with(m, rho0, tau, &RefineConfig::default())
}

pub fn qda_approximations_with(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    tau: f64,
    cfg: &RefineConfig,
) -> Result<Approximations> {
    let a = refine_scalar(tau, cfg, |g| {
        let path = state_path(m, rho0, g)?;
        let w = trace_weights(&m.jump_rate_operator());
        let rate: Vec<f64> = path
            .iter()
            .map(|r| w.iter().zip(r).map(|(a, b)| (a * b).re).sum())
            .collect();
        Ok(trapezoid(&rate, g.dt()))
    })?
    .value;
    match drazin_inverse(m) {
        Ok(dz) => approximations_from(m, rho0, tau, a, Some(&dz)),
        Err(Error::DegenerateSteadyState { .. }) => approximations_from(m, rho0, tau, a, None),
        Err(e) => Err(e),
    }
}

pub(crate) fn approximations_from(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    tau: f64,
    a: f64,
    dz: Option<&DrazinData>,
) -> Result<Approximations> {
    let small_t = a + 4.0 * tau * tau * short_time_coefficient(m, rho0);
    let (large_t, gamma, nu) = match dz {
        Some(dz) => {
            let z = coherent_rate_with(m, dz)?.z;
            (
                Some(a + tau * z),
                Some(gamma_factor(dz.nonzero_eigenvalues(), tau)),
                Some(dz.slowest_relaxation()),
            )
        }
        None => (None, None, None),
    };
    Ok(Approximations {
        large_t,
        small_t,
        gamma,
        nu,
        a,
    })
}
