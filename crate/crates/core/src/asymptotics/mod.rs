//! Long-time behaviour: Drazin inverse of the Liouvillian, the activity rate
//! `𝔞`, the coherent correction `𝔟_c`, and `B∞(τ) = τ(𝔞 + 𝔟_c)`.

use crate::error::{Error, Result};
use crate::liouville::{
    identity_vec, k1_superoperator, k2_superoperator, left_multiplication, liouvillian,
    steady_state_of, vectorize, Superoperator,
};
use crate::model::{DensityMatrix, LindbladModel};
use crate::numerics::eigen::DEFECTIVE_CONDITION;
use crate::numerics::matrix::{dot, C64, ONE};
use crate::numerics::{
    eigenvalues, moore_penrose_pinv, spectral_decompose, ComplexMatrix, SpectralDecomposition,
};

/// Maximum relative mismatch between the spectral Drazin inverse and
/// `𝒫 L⁺ 𝒫` before the spectral result is rejected.
const DRAZIN_AGREEMENT: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DrazinMethod {
    /// `Σ_{j≠0} λ_j⁻¹ |x_j⟩⟩⟨⟨y_j|` from the eigendecomposition.
    Spectral,
    /// `𝒫 L⁺ 𝒫`, used when the eigenvector matrix is too ill-conditioned.
    MoorePenrose,
}

#[derive(Clone, Debug)]
pub struct DrazinData {
    pub liouvillian: Superoperator,
    pub drazin: ComplexMatrix,
    /// `𝒫 = I − |ρ_ss⟩⟩⟨⟨I|`.
    pub projector: ComplexMatrix,
    /// `L⁺`.
    pub pseudo_inverse: ComplexMatrix,
    pub steady: DensityMatrix,
    pub steady_vec: Vec<C64>,
    /// Present when the Liouvillian is diagonalizable within tolerance.
    pub spectrum: Option<SpectralDecomposition>,
    /// All eigenvalues, ascending by modulus; index 0 is the zero mode.
    pub eigenvalues: Vec<C64>,
    pub method: DrazinMethod,
}

impl DrazinData {
    pub fn dim(&self) -> usize {
        self.liouvillian.dim()
    }

    /// `𝒫 L⁺ 𝒫`.
    pub fn moore_penrose_form(&self) -> ComplexMatrix {
        &(&self.projector * &self.pseudo_inverse) * &self.projector
    }

    /// `max(|L L^D − 𝒫|, |L^D L − 𝒫|)`.
    pub fn projector_defect(&self) -> f64 {
        let l = self.liouvillian.matrix();
        let a = (l * &self.drazin).max_abs_diff(&self.projector);
        let b = (&self.drazin * l).max_abs_diff(&self.projector);
        a.max(b)
    }

    /// `|𝒫² − 𝒫|`.
    pub fn idempotency_defect(&self) -> f64 {
        (&self.projector * &self.projector).max_abs_diff(&self.projector)
    }

    /// Non-zero eigenvalues `λ_j`, `j ≥ 1`.
    pub fn nonzero_eigenvalues(&self) -> &[C64] {
        &self.eigenvalues[1..]
    }

    /// `ν = min_{j>0} |Re λ_j|`.
    pub fn slowest_relaxation(&self) -> f64 {
        self.nonzero_eigenvalues()
            .iter()
            .map(|l| l.re.abs())
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn drazin_inverse(m: &LindbladModel) -> Result<DrazinData> {
    drazin_of(&liouvillian(m))
}

pub fn drazin_of(l: &Superoperator) -> Result<DrazinData> {
    let d = l.dim();
    let n = d * d;
    let steady = steady_state_of(l)?;
    let steady_vec = vectorize(steady.matrix());
    let projector =
        &ComplexMatrix::identity(n) - &ComplexMatrix::outer(&steady_vec, &identity_vec(d));
    let pseudo_inverse = moore_penrose_pinv(l.matrix())?;
    let mp_form = &(&projector * &pseudo_inverse) * &projector;

    let (drazin, spectrum, eigs, method) = match spectral_decompose(l.matrix()) {
        Ok(sd) if sd.condition_estimate <= DEFECTIVE_CONDITION => {
            let dz = sd.spectral_sum(|j| j != 0, |lam| ONE / lam);
            let scale = mp_form.max_abs().max(1.0);
            let mismatch = dz.max_abs_diff(&mp_form);
            if mismatch > DRAZIN_AGREEMENT * scale {
                return Err(Error::Numerical(format!(
                    "spectral Drazin inverse disagrees with the projected pseudo-inverse by {mismatch:.3e}"
                )));
            }
            let eigs = sd.eigenvalues.clone();
            (dz, Some(sd), eigs, DrazinMethod::Spectral)
        }
        Ok(_) | Err(Error::Defective { .. }) => {
            (mp_form, None, eigenvalues(l.matrix())?, DrazinMethod::MoorePenrose)
        }
        Err(e) => return Err(e),
    };
    Ok(DrazinData {
        liouvillian: l.clone(),
        drazin,
        projector,
        pseudo_inverse,
        steady,
        steady_vec,
        spectrum,
        eigenvalues: eigs,
        method,
    })
}

/// `𝔞 = Σ_m Tr[L_m ρ_ss L_m†]`.
pub fn activity_rate(m: &LindbladModel) -> Result<f64> {
    let rho = crate::liouville::steady_state(m)?;
    Ok(activity_rate_at(m, &rho))
}

pub(crate) fn activity_rate_at(m: &LindbladModel, rho: &DensityMatrix) -> f64 {
    rho.expectation(&m.jump_rate_operator()).re
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CoherentRate {
    /// `𝒵₁`, `𝒵₂` with the projected Moore–Penrose inverse.
    pub z1_moore_penrose: f64,
    pub z2_moore_penrose: f64,
    /// `𝒵₁`, `𝒵₂` with the Drazin inverse.
    pub z1_drazin: f64,
    pub z2_drazin: f64,
    /// `𝒵 = −8 Re ⟨⟨I|Ĥ_S L^D Ĥ_eff|ρ_ss⟩⟩`.
    pub z: f64,
    /// `4𝒵₁ + 4𝒵₂`, Drazin route.
    pub b_c: f64,
    /// `4𝒵₁ + 4𝒵₂`, Moore–Penrose route.
    pub b_c_moore_penrose: f64,
}

pub fn coherent_rate(m: &LindbladModel) -> Result<CoherentRate> {
    coherent_rate_with(m, &drazin_inverse(m)?)
}

pub fn coherent_rate_with(m: &LindbladModel, dz: &DrazinData) -> Result<CoherentRate> {
    let d = m.dim();
    let one = identity_vec(d);
    let k1 = k1_superoperator(m);
    let k2 = k2_superoperator(m);
    let k1_rho = k1.apply_vec(&dz.steady_vec);
    let k2_rho = k2.apply_vec(&dz.steady_vec);
    let i_k1 = k1.matrix().vecmat(&one);
    let i_k2 = k2.matrix().vecmat(&one);

    // ⟨⟨I|K_a (I − |ρ⟩⟩⟨⟨I|) L⁺ (I − |ρ⟩⟩⟨⟨I|) K_b |ρ⟩⟩, projector kept explicit.
    let mp = |row: &[C64], col: &[C64]| -> C64 {
        let r = dz.projector.vecmat(row);
        let r = dz.pseudo_inverse.vecmat(&r);
        let r = dz.projector.vecmat(&r);
        -dot(&r, col)
    };
    let dr = |row: &[C64], col: &[C64]| -> C64 { -dot(&dz.drazin.vecmat(row), col) };

    let z1_moore_penrose = mp(&i_k1, &k2_rho).re;
    let z2_moore_penrose = mp(&i_k2, &k1_rho).re;
    let z1_drazin = dr(&i_k1, &k2_rho).re;
    let z2_drazin = dr(&i_k2, &k1_rho).re;

    let hs_row = left_multiplication(m.hamiltonian()).vecmat(&one);
    let heff_rho = left_multiplication(&m.effective_hamiltonian()).matvec(&dz.steady_vec);
    let z = -8.0 * dot(&dz.drazin.vecmat(&hs_row), &heff_rho).re;

    Ok(CoherentRate {
        z1_moore_penrose,
        z2_moore_penrose,
        z1_drazin,
        z2_drazin,
        z,
        b_c: 4.0 * (z1_drazin + z2_drazin),
        b_c_moore_penrose: 4.0 * (z1_moore_penrose + z2_moore_penrose),
    })
}

/// Long-time rates of a model with a unique steady state.
#[derive(Clone, Debug)]
pub struct AsymptoticRates {
    pub activity_rate: f64,
    pub coherent: CoherentRate,
}

impl AsymptoticRates {
    pub fn new(m: &LindbladModel) -> Result<Self> {
        Self::with_drazin(m, &drazin_inverse(m)?)
    }

    pub fn with_drazin(m: &LindbladModel, dz: &DrazinData) -> Result<Self> {
        Ok(Self {
            activity_rate: activity_rate_at(m, &dz.steady),
            coherent: coherent_rate_with(m, dz)?,
        })
    }

    /// `B∞(τ) = τ(𝔞 + 𝔟_c)`.
    pub fn qda(&self, tau: f64) -> f64 {
        tau * (self.activity_rate + self.coherent.b_c)
    }
}

pub fn asymptotic_qda(m: &LindbladModel, tau: f64) -> Result<f64> {
    Ok(AsymptoticRates::new(m)?.qda(tau))
}
