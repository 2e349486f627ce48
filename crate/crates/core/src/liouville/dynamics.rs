use super::{adjoint_liouvillian, identity_vec, liouvillian, vec_trace, vectorize, Superoperator};
use crate::error::{Error, Result};
use crate::model::{DensityMatrix, LindbladModel};
use crate::numerics::hermitian::{min_eigenvalue, PSD_TOL};
use crate::numerics::matrix::{C64, ONE, ZERO};
use crate::numerics::{eigenvalues, lu, mat_exp, spectral_order, ComplexMatrix};

/// The second-smallest `|λ|` of the Liouvillian must exceed this fraction of
/// the spectral radius for the steady state to count as unique.
pub const UNIQUENESS_GAP: f64 = 1e-6;

const TRACE_TOL: f64 = 1e-8;

/// Uniform grid `t_k = k τ / n`, `k = 0..=n`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TimeGrid {
    tau: f64,
    steps: usize,
}

impl TimeGrid {
    pub fn new(tau: f64, steps: usize) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive, got {tau}")));
        }
        if steps < 2 {
            return Err(Error::Domain(format!("grid needs at least 2 steps, got {steps}")));
        }
        Ok(Self { tau, steps })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn dt(&self) -> f64 {
        self.tau / self.steps as f64
    }

    pub fn time(&self, k: usize) -> f64 {
        self.tau * k as f64 / self.steps as f64
    }

    pub fn times(&self) -> Vec<f64> {
        (0..=self.steps).map(|k| self.time(k)).collect()
    }
}

pub fn steady_state(m: &LindbladModel) -> Result<DensityMatrix> {
    steady_state_of(&liouvillian(m))
}

/// Unique zero mode of a Lindblad superoperator, as a density matrix.
pub fn steady_state_of(l: &Superoperator) -> Result<DensityMatrix> {
    let d = l.dim();
    let n = d * d;
    let mut ev = eigenvalues(l.matrix())?;
    ev.sort_by(spectral_order);
    let radius = ev.last().map(|z| z.norm()).unwrap_or(0.0);
    let gap = if n > 1 && radius > 0.0 {
        ev[1].norm() / radius
    } else {
        0.0
    };
    if gap <= UNIQUENESS_GAP {
        return Err(Error::DegenerateSteadyState { gap });
    }

    // L x = 0 with the first equation replaced by Tr x = 1. The rows of L at
    // diagonal indices sum to zero, so dropping one of them loses nothing.
    let mut a = l.matrix().clone();
    let trace_row = identity_vec(d);
    for (j, t) in trace_row.iter().enumerate() {
        a[(0, j)] = *t;
    }
    let mut rhs = vec![ZERO; n];
    rhs[0] = ONE;
    let x = lu::Lu::new(&a)
        .map_err(|_| Error::Numerical("steady-state linear system is singular".into()))?
        .solve_vec(&rhs);
    let rho = ComplexMatrix::from_fn(d, d, |i, j| x[i + j * d]).hermitian_part();
    let tr = rho.trace().re;
    let rho = rho.scale_real(1.0 / tr);
    let lmin = min_eigenvalue(&rho)?;
    if lmin < -PSD_TOL {
        return Err(Error::Numerical(format!(
            "steady state is not positive semidefinite (min eigenvalue {lmin:.3e})"
        )));
    }
    Ok(DensityMatrix::from_trusted(rho))
}

/// `[v0, P v0, P² v0, …]` with `P = exp(G dt)`, `n + 1` entries.
pub fn evolve_vec(generator: &ComplexMatrix, v0: &[C64], dt: f64, n: usize) -> Result<Vec<Vec<C64>>> {
    let step = mat_exp(&generator.scale_real(dt))?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(v0.to_vec());
    for k in 0..n {
        let next = step.matvec(&out[k]);
        out.push(next);
    }
    Ok(out)
}

/// `ρ(t_k)` on the grid.
pub fn evolve_density(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    grid: &TimeGrid,
) -> Result<Vec<DensityMatrix>> {
    check_dim(m, rho0)?;
    let d = m.dim();
    let l = liouvillian(m);
    let vs = evolve_vec(l.matrix(), &vectorize(rho0.matrix()), grid.dt(), grid.steps())?;
    vs.into_iter()
        .enumerate()
        .map(|(k, v)| {
            let tr = vec_trace(&v, d);
            if (tr - ONE).norm() > TRACE_TOL {
                return Err(Error::Numerical(format!(
                    "propagation broke the trace at t = {}: {tr}",
                    grid.time(k)
                )));
            }
            let rho = ComplexMatrix::from_fn(d, d, |i, j| v[i + j * d]).hermitian_part();
            Ok(DensityMatrix::from_trusted(rho))
        })
        .collect()
}

/// `vec(Ȟ(u_k))` with `Ȟ(u) = exp(L† u) H` on the grid.
pub fn heisenberg_vec(m: &LindbladModel, grid: &TimeGrid) -> Result<Vec<Vec<C64>>> {
    let la = adjoint_liouvillian(m);
    evolve_vec(la.matrix(), &vectorize(m.hamiltonian()), grid.dt(), grid.steps())
}

/// Heisenberg-picture Hamiltonian `Ȟ(u_k)` on the grid.
pub fn heisenberg_hamiltonian(m: &LindbladModel, grid: &TimeGrid) -> Result<Vec<ComplexMatrix>> {
    let d = m.dim();
    Ok(heisenberg_vec(m, grid)?
        .into_iter()
        .map(|v| ComplexMatrix::from_fn(d, d, |i, j| v[i + j * d]).hermitian_part())
        .collect())
}

pub(crate) fn check_dim(m: &LindbladModel, rho0: &DensityMatrix) -> Result<()> {
    if m.dim() != rho0.dim() {
        return Err(Error::Dimension(format!(
            "initial state has dimension {}, model has {}",
            rho0.dim(),
            m.dim()
        )));
    }
    Ok(())
}
