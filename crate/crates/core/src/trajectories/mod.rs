//! Quantum-jump unraveling: jump-count statistics and the uncertainty-relation
//! check `Var[N]/⟨N⟩² ≥ 1/B(τ)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::model::{DensityMatrix, LindbladModel};
use crate::numerics::hermitian::hermitian_eigen;
use crate::numerics::matrix::{C64, I};
use crate::numerics::{norm2, ComplexMatrix};

/// Upper limit on `dt·max_m ‖L_m†L_m‖`.
pub const MAX_JUMP_PROBABILITY: f64 = 0.05;
/// Bootstrap resamples for the relative-variance standard error.
pub const BOOTSTRAP_RESAMPLES: usize = 200;
const BOOTSTRAP_STREAM: u64 = u64::MAX;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountStats {
    pub tau: f64,
    pub n_traj: usize,
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Half-width of the 95% interval on the mean.
    pub mean_ci95: f64,
    /// Bootstrap standard error of `Var[N]/⟨N⟩²`; NaN when the mean vanishes.
    pub rel_var_se: f64,
    pub seed: u64,
    /// Step actually used, `τ / round(τ / dt)`.
    pub dt: f64,
}

impl CountStats {
    pub fn relative_variance(&self) -> Result<f64> {
        if self.mean <= 0.0 {
            return Err(Error::UndefinedRatio);
        }
        Ok(self.variance / (self.mean * self.mean))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TurReport {
    pub relative_variance: f64,
    /// `1/B`.
    pub floor: f64,
    pub standard_error: f64,
    pub pass: bool,
}

/// Passes when `Var[N]/⟨N⟩² ≥ 1/B − 3·SE`.
pub fn tur_verify(stats: &CountStats, b: f64) -> Result<TurReport> {
    let relative_variance = stats.relative_variance()?;
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::Domain(format!("activity must be positive, got {b}")));
    }
    let floor = 1.0 / b;
    let se = if stats.rel_var_se.is_finite() {
        stats.rel_var_se
    } else {
        0.0
    };
    Ok(TurReport {
        relative_variance,
        floor,
        standard_error: se,
        pass: relative_variance >= floor - 3.0 * se,
    })
}

struct Unraveling {
    no_jump: ComplexMatrix,
    jumps: Vec<ComplexMatrix>,
    rates: Vec<ComplexMatrix>,
    populations: Vec<f64>,
    branches: Vec<Vec<C64>>,
    steps: usize,
    dt: f64,
}

impl Unraveling {
    fn new(m: &LindbladModel, rho0: &DensityMatrix, tau: f64, dt: f64, n_traj: usize) -> Result<Self> {
        crate::liouville::check_dim(m, rho0)?;
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(Error::Domain(format!("horizon must be positive, got {tau}")));
        }
        if !(dt > 0.0 && dt <= tau / 100.0 * (1.0 + 1e-12)) {
            return Err(Error::Domain(format!("dt must lie in (0, τ/100], got {dt}")));
        }
        if n_traj == 0 {
            return Err(Error::Domain("need at least one trajectory".into()));
        }
        let rates: Vec<ComplexMatrix> = m.jumps().iter().map(|l| &l.adjoint() * l).collect();
        let mut largest = 0.0f64;
        for k in &rates {
            largest = largest.max(hermitian_eigen(&k.hermitian_part())?.values.last().copied().unwrap_or(0.0));
        }
        if dt * largest > MAX_JUMP_PROBABILITY {
            return Err(Error::Domain(format!(
                "dt·max‖L†L‖ = {:.3e} exceeds {MAX_JUMP_PROBABILITY}",
                dt * largest
            )));
        }
        let steps = (tau / dt).round().max(1.0) as usize;
        let dt = tau / steps as f64;
        let d = m.dim();
        let no_jump = &ComplexMatrix::identity(d) - &m.effective_hamiltonian().scale(I * dt);
        let eig = hermitian_eigen(rho0.matrix())?;
        let populations = eig.values.iter().map(|p| p.max(0.0)).collect();
        let branches = (0..d).map(|j| eig.vectors.column(j)).collect();
        Ok(Self {
            no_jump,
            jumps: m.jumps().to_vec(),
            rates,
            populations,
            branches,
            steps,
            dt,
        })
    }

    fn pick(weights: &[f64], u: f64) -> usize {
        let total: f64 = weights.iter().sum();
        let mut acc = 0.0;
        let target = u * total;
        for (i, w) in weights.iter().enumerate() {
            acc += w;
            if target < acc {
                return i;
            }
        }
        weights.iter().rposition(|w| *w > 0.0).unwrap_or(0)
    }

    /// Jump count and final state of trajectory `index`.
    fn run(&self, seed: u64, index: u64) -> (u64, Vec<C64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(index);
        let mut psi = self.branches[Self::pick(&self.populations, rng.random())].clone();
        let mut count = 0;
        let mut probs = vec![0.0; self.jumps.len()];
        for _ in 0..self.steps {
            let mut total = 0.0;
            for (p, k) in probs.iter_mut().zip(&self.rates) {
                *p = self.dt * expectation(k, &psi);
                total += *p;
            }
            let u: f64 = rng.random();
            psi = if u < total {
                count += 1;
                self.jumps[Self::pick(&probs, u / total)].matvec(&psi)
            } else {
                self.no_jump.matvec(&psi)
            };
            let n = norm2(&psi);
            psi.iter_mut().for_each(|z| *z /= n);
        }
        (count, psi)
    }
}

fn expectation(k: &ComplexMatrix, psi: &[C64]) -> f64 {
    let kp = k.matvec(psi);
    psi.iter().zip(&kp).map(|(a, b)| (a.conj() * b).re).sum()
}

fn moments(counts: &[u64]) -> (f64, f64) {
    let n = counts.len() as f64;
    let mean = counts.iter().sum::<u64>() as f64 / n;
    let ss: f64 = counts.iter().map(|&c| (c as f64 - mean).powi(2)).sum();
    let var = if counts.len() > 1 { ss / (n - 1.0) } else { 0.0 };
    (mean, var)
}

fn bootstrap_rel_var_se(counts: &[u64], seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(BOOTSTRAP_STREAM);
    let n = counts.len();
    let mut sample = vec![0u64; n];
    let mut stats = Vec::with_capacity(BOOTSTRAP_RESAMPLES);
    for _ in 0..BOOTSTRAP_RESAMPLES {
        for s in sample.iter_mut() {
            *s = counts[rng.random_range(0..n)];
        }
        let (mean, var) = moments(&sample);
        if mean > 0.0 {
            stats.push(var / (mean * mean));
        }
    }
    if stats.len() < 2 {
        return f64::NAN;
    }
    let mu = stats.iter().sum::<f64>() / stats.len() as f64;
    (stats.iter().map(|s| (s - mu).powi(2)).sum::<f64>() / (stats.len() - 1) as f64).sqrt()
}

/// Counts all jump events over `[0, τ]` in `n_traj` independent trajectories.
/// Trajectory `k` draws from stream `k` of a ChaCha8 generator seeded with
/// `seed`, so results do not depend on the thread count.
pub fn sample_jump_counts(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    tau: f64,
    dt: f64,
    n_traj: usize,
    seed: u64,
) -> Result<CountStats> {
    let un = Unraveling::new(m, rho0, tau, dt, n_traj)?;
    let counts: Vec<u64> = (0..n_traj as u64)
        .into_par_iter()
        .map(|k| un.run(seed, k).0)
        .collect();
    let (mean, variance) = moments(&counts);
    Ok(CountStats {
        tau,
        n_traj,
        mean,
        variance,
        mean_ci95: 1.96 * (variance / n_traj as f64).sqrt(),
        rel_var_se: bootstrap_rel_var_se(&counts, seed),
        seed,
        dt: un.dt,
    })
}

#[derive(Clone, Debug)]
pub struct EnsembleDensity {
    pub mean: ComplexMatrix,
    /// Standard errors of the real and imaginary parts, entry-wise.
    pub se_re: Vec<f64>,
    pub se_im: Vec<f64>,
    pub n_traj: usize,
}

/// `(1/n) Σ_k |ψ_k(τ)⟩⟨ψ_k(τ)|` over the same trajectories as
/// [`sample_jump_counts`].
pub fn ensemble_density(
    m: &LindbladModel,
    rho0: &DensityMatrix,
    tau: f64,
    dt: f64,
    n_traj: usize,
    seed: u64,
) -> Result<EnsembleDensity> {
    let un = Unraveling::new(m, rho0, tau, dt, n_traj)?;
    let d = m.dim();
    let states: Vec<ComplexMatrix> = (0..n_traj as u64)
        .into_par_iter()
        .map(|k| {
            let psi = un.run(seed, k).1;
            ComplexMatrix::outer(&psi, &psi)
        })
        .collect();
    let n = n_traj as f64;
    let mut mean = ComplexMatrix::zeros(d, d);
    for s in &states {
        mean = &mean + s;
    }
    let mean = mean.scale_real(1.0 / n);
    let mut var = vec![(0.0, 0.0); d * d];
    for s in &states {
        for i in 0..d {
            for j in 0..d {
                let dz: C64 = s[(i, j)] - mean[(i, j)];
                let v = &mut var[i * d + j];
                v.0 += dz.re * dz.re;
                v.1 += dz.im * dz.im;
            }
        }
    }
    let denom = (n - 1.0).max(1.0) * n;
    Ok(EnsembleDensity {
        mean,
        se_re: var.iter().map(|v| (v.0 / denom).sqrt()).collect(),
        se_im: var.iter().map(|v| (v.1 / denom).sqrt()).collect(),
        n_traj,
    })
}
