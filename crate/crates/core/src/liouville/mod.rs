//! Superoperators on column-stacked operators.
//!
//! `vec(A)[i + j·d] = A[i, j]`, so that `vec(A X B) = (Bᵀ ⊗ A) vec(X)` and
//! `⟨⟨I|vec(X)⟩⟩ = Tr X`.

mod dynamics;

pub use dynamics::{
    evolve_density, evolve_vec, heisenberg_hamiltonian, heisenberg_vec, steady_state,
    steady_state_of, TimeGrid, UNIQUENESS_GAP,
};
pub(crate) use dynamics::check_dim;

use crate::error::{Error, Result};
use crate::model::LindbladModel;
use crate::numerics::matrix::{C64, I};
use crate::numerics::ComplexMatrix;

pub fn vectorize(a: &ComplexMatrix) -> Vec<C64> {
    let (r, c) = a.shape();
    let mut v = Vec::with_capacity(r * c);
    for j in 0..c {
        for i in 0..r {
            v.push(a[(i, j)]);
        }
    }
    v
}

pub fn devectorize(v: &[C64]) -> Result<ComplexMatrix> {
    let d = (v.len() as f64).sqrt().round() as usize;
    if d == 0 || d * d != v.len() {
        return Err(Error::Dimension(format!(
            "vector of length {} is not a vectorized square matrix",
            v.len()
        )));
    }
    Ok(ComplexMatrix::from_fn(d, d, |i, j| v[i + j * d]))
}

/// `vec(I_d)`, the row vector that takes traces.
pub fn identity_vec(d: usize) -> Vec<C64> {
    vectorize(&ComplexMatrix::identity(d))
}

/// `X ↦ A X`.
pub fn left_multiplication(a: &ComplexMatrix) -> ComplexMatrix {
    ComplexMatrix::identity(a.rows()).kron(a)
}

/// `X ↦ X A`.
pub fn right_multiplication(a: &ComplexMatrix) -> ComplexMatrix {
    a.transpose().kron(&ComplexMatrix::identity(a.rows()))
}

/// `X ↦ A X B`.
pub fn sandwich(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    b.transpose().kron(a)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SuperoperatorKind {
    Lindblad,
    Adjoint,
    TwoSided,
    K1,
    K2,
    Custom,
}

#[derive(Clone, Debug)]
pub struct Superoperator {
    dim: usize,
    matrix: ComplexMatrix,
    kind: SuperoperatorKind,
}

impl Superoperator {
    pub fn new(dim: usize, matrix: ComplexMatrix, kind: SuperoperatorKind) -> Result<Self> {
        if matrix.shape() != (dim * dim, dim * dim) {
            return Err(Error::Dimension(format!(
                "superoperator on d={dim} must be {0}x{0}, got {1:?}",
                dim * dim,
                matrix.shape()
            )));
        }
        Ok(Self { dim, matrix, kind })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn kind(&self) -> SuperoperatorKind {
        self.kind
    }

    pub fn apply_vec(&self, v: &[C64]) -> Vec<C64> {
        self.matrix.matvec(v)
    }

    pub fn apply(&self, x: &ComplexMatrix) -> ComplexMatrix {
        let v = self.matrix.matvec(&vectorize(x));
        ComplexMatrix::from_fn(self.dim, self.dim, |i, j| v[i + j * self.dim])
    }

    /// `max |⟨⟨I| S|`; zero for trace-preserving generators.
    pub fn trace_defect(&self) -> f64 {
        self.matrix
            .vecmat(&identity_vec(self.dim))
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max)
    }
}

fn dissipator_parts(m: &LindbladModel) -> (ComplexMatrix, ComplexMatrix) {
    let d = m.dim();
    let mut jump = ComplexMatrix::zeros(d * d, d * d);
    for l in m.jumps() {
        jump += &l.conj().kron(l);
    }
    let k = m.jump_rate_operator();
    let anti = &left_multiplication(&k) + &right_multiplication(&k);
    (jump, anti)
}

/// `ρ ↦ −i[H, ρ] + Σ_m (L_m ρ L_m† − ½{L_m†L_m, ρ})`.
pub fn liouvillian(m: &LindbladModel) -> Superoperator {
    let h = m.hamiltonian();
    let coherent = (&left_multiplication(h) - &right_multiplication(h)).scale(-I);
    let (jump, anti) = dissipator_parts(m);
    let mat = &(&coherent + &jump) - &anti.scale_real(0.5);
    Superoperator {
        dim: m.dim(),
        matrix: mat,
        kind: SuperoperatorKind::Lindblad,
    }
}

/// `O ↦ i[H, O] + Σ_m (L_m† O L_m − ½{L_m†L_m, O})`.
pub fn adjoint_liouvillian(m: &LindbladModel) -> Superoperator {
    let h = m.hamiltonian();
    let d = m.dim();
    let coherent = (&left_multiplication(h) - &right_multiplication(h)).scale(I);
    let mut jump = ComplexMatrix::zeros(d * d, d * d);
    for l in m.jumps() {
        jump += &sandwich(&l.adjoint(), l);
    }
    let k = m.jump_rate_operator();
    let anti = &left_multiplication(&k) + &right_multiplication(&k);
    let mat = &(&coherent + &jump) - &anti.scale_real(0.5);
    Superoperator {
        dim: d,
        matrix: mat,
        kind: SuperoperatorKind::Adjoint,
    }
}

/// `ϱ ↦ −iθ_a H_eff ϱ + iθ_b ϱ H_eff† + √(θ_a θ_b) Σ_m L_m ϱ L_m†`.
pub fn two_sided_generator(m: &LindbladModel, theta_a: f64, theta_b: f64) -> Result<Superoperator> {
    if !(theta_a > 0.0 && theta_b > 0.0 && theta_a.is_finite() && theta_b.is_finite()) {
        return Err(Error::Domain(format!(
            "two-sided scalings must be positive, got ({theta_a}, {theta_b})"
        )));
    }
    let heff = m.effective_hamiltonian();
    let left = left_multiplication(&heff).scale(-I * theta_a);
    let right = right_multiplication(&heff.adjoint()).scale(I * theta_b);
    let (jump, _) = dissipator_parts(m);
    let mat = &(&left + &right) + &jump.scale_real((theta_a * theta_b).sqrt());
    Ok(Superoperator {
        dim: m.dim(),
        matrix: mat,
        kind: SuperoperatorKind::TwoSided,
    })
}

/// `K₁ ϱ = −i H_eff ϱ + ½ Σ_m L_m ϱ L_m†`.
pub fn k1_superoperator(m: &LindbladModel) -> Superoperator {
    let heff = m.effective_hamiltonian();
    let (jump, _) = dissipator_parts(m);
    let mat = &left_multiplication(&heff).scale(-I) + &jump.scale_real(0.5);
    Superoperator {
        dim: m.dim(),
        matrix: mat,
        kind: SuperoperatorKind::K1,
    }
}

/// `K₂ ϱ = i ϱ H_eff† + ½ Σ_m L_m ϱ L_m†`, so that `K₁ + K₂` is the Liouvillian.
pub fn k2_superoperator(m: &LindbladModel) -> Superoperator {
    let heff = m.effective_hamiltonian();
    let (jump, _) = dissipator_parts(m);
    let mat = &right_multiplication(&heff.adjoint()).scale(I) + &jump.scale_real(0.5);
    Superoperator {
        dim: m.dim(),
        matrix: mat,
        kind: SuperoperatorKind::K2,
    }
}

/// Trace of a vectorized operator.
pub fn vec_trace(v: &[C64], d: usize) -> C64 {
    (0..d).map(|i| v[i + i * d]).sum()
}
