#![allow(dead_code)]

use qda_core::model::{driven_qubit, DensityMatrix, LindbladModel};
use qda_core::numerics::{ComplexMatrix, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| {
        C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)) * scale
    })
}

pub fn random_hermitian(rng: &mut ChaCha8Rng, d: usize, scale: f64) -> ComplexMatrix {
    random_matrix(rng, d, d, scale).hermitian_part()
}

/// Generic model: random Hamiltonian and `jumps` random jump operators.
pub fn random_model(rng: &mut ChaCha8Rng, d: usize, jumps: usize) -> LindbladModel {
    let h = random_hermitian(rng, d, 1.0);
    let ls = (0..jumps).map(|_| random_matrix(rng, d, d, 0.6)).collect();
    LindbladModel::new(h, ls, "random").unwrap()
}

pub fn random_state(rng: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    let g = random_matrix(rng, d, d, 1.0);
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    DensityMatrix::new(p.scale_real(1.0 / tr).hermitian_part()).unwrap()
}

/// Random non-negative rates with zero diagonal.
pub fn random_rates(rng: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| if i == j { 0.0 } else { rng.random_range(0.1..2.0) })
                .collect()
        })
        .collect()
}

/// Δ = 1, Ω = 1, κ = 0.5.
pub fn benchmark() -> LindbladModel {
    driven_qubit(1.0, 1.0, 0.5).unwrap()
}

/// `H = (Ω/2) σ_x` with no jumps.
pub fn closed_qubit(omega: f64) -> LindbladModel {
    let h = ComplexMatrix::from_real_rows(&[&[0.0, omega / 2.0], &[omega / 2.0, 0.0]]).unwrap();
    LindbladModel::new(h, vec![], "closed").unwrap()
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

pub fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp())
        .collect()
}
