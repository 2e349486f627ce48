//! `B(τ)` from its definition as a Fisher information of the time-rescaled
//! dynamics, fidelity and Bures angle, and the speed-limit check.

mod qsl;

pub use qsl::{qsl_report, QslConfig, QslReport};

use crate::error::{Error, Result};
use crate::liouville::{
    left_multiplication, liouvillian, right_multiplication, sandwich, vec_trace, vectorize,
};
use crate::model::{DensityMatrix, LindbladModel};
use crate::numerics::hermitian::psd_sqrt;
use crate::numerics::matrix::{C64, I};
use crate::numerics::{mat_exp, ComplexMatrix};

/// Overlaps above `1 + OVERLAP_EXCESS` signal a propagation failure.
pub const OVERLAP_EXCESS: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FisherConfig {
    pub dtheta: f64,
    /// Combine `dθ` and `dθ/2` to cancel the leading bias.
    pub richardson: bool,
    pub theta: f64,
}

impl Default for FisherConfig {
    fn default() -> Self {
        Self {
            dtheta: 1e-4,
            richardson: true,
            theta: 1.0,
        }
    }
}

impl FisherConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.dtheta > 0.0 && self.dtheta < 0.1) {
            return Err(Error::Domain(format!("dθ must lie in (0, 0.1), got {}", self.dtheta)));
        }
        if !(self.theta.is_finite() && self.theta - self.dtheta > 0.0) {
            return Err(Error::Domain(format!(
                "θ must exceed dθ, got θ = {}",
                self.theta
            )));
        }
        Ok(())
    }
}

/// `G(θ_a, θ_b) − θ₀ L` for `θ_a = θ₀ + a`, `θ_b = θ₀ + b`, assembled from the
/// offsets so that nothing of order one cancels.
fn generator_offset(m: &LindbladModel, theta0: f64, a: f64, b: f64) -> ComplexMatrix {
    let heff = m.effective_hamiltonian();
    let left = left_multiplication(&heff).scale(-I * a);
    let right = right_multiplication(&heff.adjoint()).scale(I * b);
    let mut out = &left + &right;
    if !m.jumps().is_empty() {
        let (ta, tb) = (theta0 + a, theta0 + b);
        let excess = (theta0 * (a + b) + a * b) / ((ta * tb).sqrt() + theta0);
        for l in m.jumps() {
            out = &out + &sandwich(l, &l.adjoint()).scale_real(excess);
        }
    }
    out
}

/// `Tr ϱ(τ) − 1` for the two-sided evolution with scalings
/// `(θ₀ + a, θ₀ + b)`, from the off-diagonal block of
/// `exp([[θ₀L, Δ], [0, θ₀L + Δ]] τ)`, which equals `e^{Gτ} − e^{θ₀Lτ}`.
pub fn overlap_defect(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    tau: f64,
    theta0: f64,
    a: f64,
    b: f64,
) -> Result<C64> {
    crate::liouville::check_dim(m, rho0)?;
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::Domain(format!("horizon must be positive, got {tau}")));
    }
    if !(theta0 + a > 0.0 && theta0 + b > 0.0) {
        return Err(Error::Domain("two-sided scalings must be positive".into()));
    }
    let d = m.dim();
    let n = d * d;
    let base = liouvillian(m).matrix().scale_real(theta0 * tau);
    let delta = generator_offset(m, theta0, a, b).scale_real(tau);
    let top = &base + &delta;
    let block = ComplexMatrix::from_fn(2 * n, 2 * n, |i, j| match (i < n, j < n) {
        (true, true) => base[(i, j)],
        (true, false) => delta[(i, j - n)],
        (false, false) => top[(i - n, j - n)],
        (false, true) => C64::new(0.0, 0.0),
    });
    let e = mat_exp(&block)?;
    let diff = ComplexMatrix::from_fn(n, n, |i, j| e[(i, j + n)]);
    Ok(vec_trace(&diff.matvec(&vectorize(rho0.matrix())), d))
}

/// `|Tr ϱ(τ)|` under the generator with scalings `(θ + dθ, θ)`.
pub fn two_sided_overlap(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    tau: f64,
    cfg: &FisherConfig,
) -> Result<f64> {
    cfg.validate()?;
    let delta = overlap_defect(m, rho0, tau, cfg.theta, cfg.dtheta, 0.0)?;
    Ok((C64::new(1.0, 0.0) + delta).norm())
}

/// `1 − |1 + δ|` without cancellation.
fn infidelity(delta: C64) -> f64 {
    let modulus = (C64::new(1.0, 0.0) + delta).norm();
    -(2.0 * delta.re + delta.norm_sqr()) / (1.0 + modulus)
}

fn fisher_estimate(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    tau: f64,
    theta: f64,
    h: f64,
) -> Result<f64> {
    let delta = overlap_defect(m, rho0, tau, theta, -0.5 * h, 0.5 * h)?;
    let loss = infidelity(delta);
    if -loss > OVERLAP_EXCESS {
        return Err(Error::Numerical(format!(
            "two-sided overlap exceeds one by {:.3e}",
            -loss
        )));
    }
    Ok(8.0 * theta * theta * loss / (h * h))
}

/// `8θ²(1 − |⟨Ψ(τ; θ_a)|Ψ(τ; θ_b)⟩|)/dθ²` with the two scalings placed
/// symmetrically about `θ`, optionally Richardson-combined over `dθ, dθ/2`.
pub fn direct_qda(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    tau: f64,
    cfg: &FisherConfig,
) -> Result<f64> {
    cfg.validate()?;
    let coarse = fisher_estimate(m, rho0, tau, cfg.theta, cfg.dtheta)?;
    if !cfg.richardson {
        return Ok(coarse);
    }
    let fine = fisher_estimate(m, rho0, tau, cfg.theta, 0.5 * cfg.dtheta)?;
    Ok((4.0 * fine - coarse) / 3.0)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fidelity {
    /// `(Tr√(√ρ₁ ρ₂ √ρ₁))²`, clamped to `[0, 1]`.
    pub fidelity: f64,
    /// `arccos √F`.
    pub angle: f64,
}

pub fn fidelity_bures(rho1: &DensityMatrix, rho2: &DensityMatrix) -> Result<Fidelity> {
    if rho1.dim() != rho2.dim() {
        return Err(Error::Dimension(format!(
            "fidelity between dimensions {} and {}",
            rho1.dim(),
            rho2.dim()
        )));
    }
    let s = psd_sqrt(rho1.matrix())?;
    let inner = (&(&s * rho2.matrix()) * &s).hermitian_part();
    let root = psd_sqrt(&inner)?;
    let fidelity = root.trace().re.powi(2).clamp(0.0, 1.0);
    Ok(Fidelity {
        fidelity,
        angle: fidelity.sqrt().acos(),
    })
}
