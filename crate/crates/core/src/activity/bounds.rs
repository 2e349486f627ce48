//! Standard-deviation upper bounds on `B(τ)`.

use super::exact::{expectations, state_path};
use super::quadrature::{cumulative_trapezoid, trapezoid};
use crate::error::Result;
use crate::liouville::TimeGrid;
use crate::model::{DensityMatrix, LindbladModel};
use crate::numerics::matrix::C64;
use crate::numerics::ComplexMatrix;

/// `σ_O = √(Tr[O†O ρ] − |Tr[O ρ]|²)`, clamped at zero.
pub fn operator_deviation(o: &ComplexMatrix, rho: &DensityMatrix) -> f64 {
    let second = rho.expectation(&(&o.adjoint() * o)).re;
    let first = rho.expectation(o).norm_sqr();
    (second - first).max(0.0).sqrt()
}

fn deviations(o: &ComplexMatrix, path: &[Vec<C64>]) -> Vec<f64> {
    let second = expectations(&(&o.adjoint() * o), path);
    let first = expectations(o, path);
    second
        .iter()
        .zip(&first)
        .map(|(s, f)| (s.re - f.norm_sqr()).max(0.0).sqrt())
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct UpperBounds {
    /// `A + 8∫ds₁ σ_{H_S}(s₁) ∫_0^{s₁} ds₂ σ_{H_eff}(s₂)`.
    pub b_upper: f64,
    /// `A + 4(∫σ_{H_S})² + 4∫ds₁ σ_{H_S}(s₁) ∫_0^{s₁} ds₂ σ_{ΣL†L}(s₂)`.
    pub b_upper2: f64,
    pub a: f64,
}

pub fn qda_upper_bounds(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
) -> Result<UpperBounds> {
    let h = grid.dt();
    let path = state_path(m, rho0, grid)?;
    let rate: Vec<f64> = expectations(&m.jump_rate_operator(), &path)
        .iter()
        .map(|z| z.re)
        .collect();
    let a = trapezoid(&rate, h);

    let sigma_h = deviations(m.hamiltonian(), &path);
    let sigma_eff = deviations(&m.effective_hamiltonian(), &path);
    let sigma_k = deviations(&m.jump_rate_operator(), &path);
    let nested = |inner: &[f64]| -> f64 {
        let c = cumulative_trapezoid(inner, h);
        let f: Vec<f64> = sigma_h.iter().zip(&c).map(|(s, c)| s * c).collect();
        trapezoid(&f, h)
    };
    let total_h = trapezoid(&sigma_h, h);
    Ok(UpperBounds {
        b_upper: a + 8.0 * nested(&sigma_eff),
        b_upper2: a + 4.0 * total_h * total_h + 4.0 * nested(&sigma_k),
        a,
    })
}
