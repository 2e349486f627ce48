//! Double-integral evaluations of `B(τ)` on a uniform grid.

use rayon::prelude::*;

use super::quadrature::{cumulative_trapezoid, trapezoid};
use crate::error::{Error, Result};
use crate::liouville::{
    evolve_vec, heisenberg_vec, identity_vec, k1_superoperator, k2_superoperator, liouvillian,
    vectorize, TimeGrid,
};
use crate::model::{special_case_rate, DensityMatrix, LindbladModel};
use crate::numerics::matrix::{dot, C64};
use crate::numerics::{mat_exp, ComplexMatrix};

/// Below this `|r|τ` the special-case kernel uses its series expansion.
pub const SPECIAL_CASE_SERIES: f64 = 1e-6;

/// `vec(Oᵀ)`, so that `Tr[O X] = Σ_i w_i vec(X)_i`.
pub(crate) fn trace_weights(o: &ComplexMatrix) -> Vec<C64> {
    vectorize(&o.transpose())
}

pub(crate) fn state_path(m: &LindbladModel, rho0: &DensityMatrix, grid: &TimeGrid) -> Result<Vec<Vec<C64>>> {
    crate::liouville::check_dim(m, rho0)?;
    evolve_vec(
        liouvillian(m).matrix(),
        &vectorize(rho0.matrix()),
        grid.dt(),
        grid.steps(),
    )
}

pub(crate) fn expectations(o: &ComplexMatrix, path: &[Vec<C64>]) -> Vec<C64> {
    let w = trace_weights(o);
    path.iter().map(|r| dot(&w, r)).collect()
}

/// `∫_0^{s_1} ds_2 K(s_1 − s_2, s_2)` at every grid point `s_1`, where
/// `kernel(u, j)` evaluates the integrand at `u = (k − j)·h`, `s_2 = j·h`.
fn inner_integrals<K>(n: usize, h: f64, kernel: K) -> Vec<f64>
where
    K: Fn(usize, usize) -> f64 + Sync,
{
    (0..=n)
        .into_par_iter()
        .map(|k| {
            if k == 0 {
                return 0.0;
            }
            let mut s = 0.5 * (kernel(k, 0) + kernel(0, k));
            for j in 1..k {
                s += kernel(k - j, j);
            }
            h * s
        })
        .collect()
}

fn re_dot(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x.re * y.re - x.im * y.im).sum()
}

/// `A(t_k)` and `∫_0^{t_k} Tr[H_S ρ]` along the grid.
struct Accumulators {
    a: Vec<f64>,
    e: Vec<f64>,
}

fn accumulators(m: &LindbladModel, path: &[Vec<C64>], h: f64) -> Accumulators {
    let rate: Vec<f64> = expectations(&m.jump_rate_operator(), path)
        .iter()
        .map(|z| z.re)
        .collect();
    let energy: Vec<f64> = expectations(m.hamiltonian(), path).iter().map(|z| z.re).collect();
    Accumulators {
        a: cumulative_trapezoid(&rate, h),
        e: cumulative_trapezoid(&energy, h),
    }
}

/// Dynamical activity `A(τ) = ∫_0^τ Σ_m Tr[L_m ρ L_m†]`, trapezoid on the grid.
pub fn classical_activity(m: &LindbladModel, rho0: &DensityMatrix, grid: &TimeGrid) -> Result<f64> {
    if m.is_closed() {
        return Ok(0.0);
    }
    let path = state_path(m, rho0, grid)?;
    let rate: Vec<f64> = expectations(&m.jump_rate_operator(), &path)
        .iter()
        .map(|z| z.re)
        .collect();
    Ok(trapezoid(&rate, grid.dt()))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ActivityProfile {
    pub times: Vec<f64>,
    pub a: Vec<f64>,
    pub b: Vec<f64>,
}

/// `B(t_k)` for every grid point from
/// `A + 8∬ Re Tr[H_eff† Ȟ(s_1 − s_2) ρ(s_2)] − 4(∫ Tr[H_S ρ])²`.
pub fn exact_qda_profile(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
) -> Result<ActivityProfile> {
    let d = m.dim();
    let n = grid.steps();
    let h = grid.dt();
    let path = state_path(m, rho0, grid)?;
    let acc = accumulators(m, &path, h);

    let heff_dag = m.effective_hamiltonian().adjoint();
    let weights: Vec<Vec<C64>> = heisenberg_vec(m, grid)?
        .iter()
        .map(|hv| {
            let hc = ComplexMatrix::from_fn(d, d, |i, j| hv[i + j * d]);
            trace_weights(&(&heff_dag * &hc))
        })
        .collect();
    let inner = inner_integrals(n, h, |u, j| re_dot(&weights[u], &path[j]));
    let outer = cumulative_trapezoid(&inner, h);

    let b = (0..=n)
        .map(|k| acc.a[k] + 8.0 * outer[k] - 4.0 * acc.e[k] * acc.e[k])
        .collect();
    Ok(ActivityProfile {
        times: grid.times(),
        a: acc.a,
        b,
    })
}

pub fn exact_qda(m: &LindbladModel, rho0: &DensityMatrix, grid: &TimeGrid) -> Result<f64> {
    Ok(*exact_qda_profile(m, rho0, grid)?.b.last().expect("grid has points"))
}

/// `(B(τ), A(τ))` on one grid, sharing the state path.
pub(crate) fn exact_and_activity(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
) -> Result<(f64, f64)> {
    let p = exact_qda_profile(m, rho0, grid)?;
    Ok((*p.b.last().unwrap(), *p.a.last().unwrap()))
}

/// `A + 4(I₁ + I₂) − 4(∫ Tr[H_S ρ])²` with
/// `I₁ = ∬ ⟨⟨I|K₂ e^{L(s_1−s_2)} K₁|ρ(s_2)⟩⟩`, `I₂ = ∬ ⟨⟨I|K₁ e^{L(s_1−s_2)} K₂|ρ(s_2)⟩⟩`.
pub fn nakajima_qda(m: &LindbladModel, rho0: &DensityMatrix, grid: &TimeGrid) -> Result<f64> {
    let d = m.dim();
    let n = grid.steps();
    let h = grid.dt();
    let l = liouvillian(m);
    let step = mat_exp(&l.matrix().scale_real(h))?;
    let path = state_path(m, rho0, grid)?;
    let acc = accumulators(m, &path, h);

    let k1 = k1_superoperator(m);
    let k2 = k2_superoperator(m);
    let one = identity_vec(d);
    let rows = |k: &ComplexMatrix| -> Vec<Vec<C64>> {
        let mut out = Vec::with_capacity(n + 1);
        out.push(k.vecmat(&one));
        for u in 0..n {
            let next = step.vecmat(&out[u]);
            out.push(next);
        }
        out
    };
    let left2 = rows(k2.matrix());
    let left1 = rows(k1.matrix());
    let right1: Vec<Vec<C64>> = path.iter().map(|r| k1.apply_vec(r)).collect();
    let right2: Vec<Vec<C64>> = path.iter().map(|r| k2.apply_vec(r)).collect();

    let inner = inner_integrals(n, h, |u, j| {
        re_dot(&left2[u], &right1[j]) + re_dot(&left1[u], &right2[j])
    });
    let i12 = trapezoid(&inner, h);
    Ok(acc.a[n] + 4.0 * i12 - 4.0 * acc.e[n] * acc.e[n])
}

/// `(e^{r x} − 1)/r`, continuous through `r = 0`.
fn relaxation_kernel(r: f64, x: f64, series: bool) -> f64 {
    if series {
        x * (1.0 + 0.5 * r * x)
    } else {
        (r * x).exp_m1() / r
    }
}

/// Closed form for models with `Σ_m (G_m† L_m + L_m† G_m) = 2 r H_S`, where
/// `Ȟ(u) = e^{r u} H_S` collapses the double integral to a single one.
pub fn special_case_qda(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
    r: f64,
) -> Result<f64> {
    let info = special_case_rate(m)?;
    if !info.holds {
        return Err(Error::Precondition(format!(
            "special-case condition fails (residual {:.3e})",
            info.residual
        )));
    }
    let n = grid.steps();
    let h = grid.dt();
    let tau = grid.tau();
    let path = state_path(m, rho0, grid)?;
    let acc = accumulators(m, &path, h);
    let op = &m.effective_hamiltonian().adjoint() * m.hamiltonian();
    let series = (r * tau).abs() < SPECIAL_CASE_SERIES;
    let f: Vec<f64> = expectations(&op, &path)
        .iter()
        .enumerate()
        .map(|(k, z)| relaxation_kernel(r, tau - grid.time(k), series) * z.re)
        .collect();
    Ok(acc.a[n] + 8.0 * trapezoid(&f, h) - 4.0 * acc.e[n] * acc.e[n])
}
