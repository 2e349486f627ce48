use crate::error::{Error, Result};
use crate::numerics::hermitian::{min_eigenvalue, PSD_TOL};
use crate::numerics::matrix::{C64, ONE};
use crate::numerics::ComplexMatrix;

const STATE_TOL: f64 = 1e-10;

/// A validated density matrix: Hermitian, unit trace, PSD.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::Dimension(format!("density matrix of shape {:?}", m.shape())));
        }
        let defect = m.hermiticity_defect();
        if defect > STATE_TOL {
            return Err(Error::Domain(format!(
                "density matrix not Hermitian (defect {defect:.3e})"
            )));
        }
        let tr = m.trace();
        if (tr - ONE).norm() > STATE_TOL {
            return Err(Error::Domain(format!("density matrix trace {tr} is not 1")));
        }
        let lmin = min_eigenvalue(&m.hermitian_part())?;
        if lmin < -PSD_TOL {
            return Err(Error::NotPsd {
                min_eigenvalue: lmin,
            });
        }
        Ok(Self(m))
    }

    /// Skips validation; callers guarantee the invariants to their own tolerance.
    pub(crate) fn from_trusted(m: ComplexMatrix) -> Self {
        Self(m)
    }

    /// `|ψ⟩⟨ψ|` after normalising `ψ`.
    pub fn pure(psi: &[C64]) -> Result<Self> {
        let n = crate::numerics::norm2(psi);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::Domain("state vector must be nonzero and finite".into()));
        }
        let v: Vec<C64> = psi.iter().map(|z| z / n).collect();
        Self::new(ComplexMatrix::outer(&v, &v))
    }

    /// `|k⟩⟨k|` in dimension `d`.
    pub fn basis(d: usize, k: usize) -> Result<Self> {
        if k >= d {
            return Err(Error::Dimension(format!("basis index {k} out of range for d={d}")));
        }
        let mut m = ComplexMatrix::zeros(d, d);
        m[(k, k)] = ONE;
        Ok(Self(m))
    }

    pub fn ground(d: usize) -> Result<Self> {
        Self::basis(d, 0)
    }

    pub fn maximally_mixed(d: usize) -> Self {
        Self(ComplexMatrix::identity(d).scale_real(1.0 / d as f64))
    }

    pub fn dim(&self) -> usize {
        self.0.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    /// `Tr[O ρ]`.
    pub fn expectation(&self, o: &ComplexMatrix) -> C64 {
        let d = self.dim();
        let mut s = C64::new(0.0, 0.0);
        for i in 0..d {
            for k in 0..d {
                s += o[(i, k)] * self.0[(k, i)];
            }
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::I;

    #[test]
    fn rejects_bad_trace_and_negative() {
        assert!(DensityMatrix::new(ComplexMatrix::identity(2)).is_err());
        let neg = ComplexMatrix::from_real_rows(&[&[1.1, 0.0], &[0.0, -0.1]]).unwrap();
        assert!(matches!(DensityMatrix::new(neg), Err(Error::NotPsd { .. })));
    }

    #[test]
    fn pure_state_expectation() {
        let rho = DensityMatrix::pure(&[ONE, I]).unwrap();
        let sy = ComplexMatrix::from_vec(2, 2, vec![C64::new(0.0, 0.0), -I, I, C64::new(0.0, 0.0)])
            .unwrap();
        assert!((rho.expectation(&sy) - ONE).norm() < 1e-15);
    }
}
