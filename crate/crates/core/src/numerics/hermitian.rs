//! Hermitian eigenproblems by cyclic complex Jacobi rotations, and functions
//! of PSD matrices built on top of them.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

/// Hermitian input is checked to this relative tolerance.
const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues below `-PSD_TOL` are rejected by [`psd_sqrt`].
pub const PSD_TOL: f64 = 1e-8;

#[derive(Clone, Debug)]
pub struct HermitianEigen {
    /// Ascending.
    pub values: Vec<f64>,
    /// Unitary; column `j` belongs to `values[j]`.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.values.len();
        let mut out = ComplexMatrix::zeros(n, n);
        for (j, &lam) in self.values.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = self.vectors[(r, j)] * w;
                for c in 0..n {
                    out[(r, c)] += vr * self.vectors[(c, j)].conj();
                }
            }
        }
        out
    }
}

pub fn hermitian_eigen(a: &ComplexMatrix) -> Result<HermitianEigen> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "Hermitian eigenproblem of non-square {:?}",
            a.shape()
        )));
    }
    let scale = a.max_abs().max(f64::MIN_POSITIVE);
    if a.hermiticity_defect() > HERMITIAN_TOL * scale.max(1.0) {
        return Err(Error::Domain("matrix is not Hermitian".into()));
    }
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);

    let mut converged = false;
    for _ in 0..100 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                rotated |= rotate(&mut m, &mut v, p, q);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence("Jacobi eigenvalue sweeps".into()));
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |r, c| v[(r, order[c])]);
    Ok(HermitianEigen { values, vectors })
}

/// Annihilates `m[(p, q)]` with a unitary rotation in the (p, q) plane.
/// Returns false when the entry is already negligible.
fn rotate(m: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) -> bool {
    let b = m[(p, q)];
    let babs = b.norm();
    let app = m[(p, p)].re;
    let aqq = m[(q, q)].re;
    if babs == 0.0 || babs <= 0.25 * f64::EPSILON * (app * aqq).abs().sqrt() {
        m[(p, q)] = ZERO;
        m[(q, p)] = ZERO;
        return false;
    }
    // Phase-strip the off-diagonal, then a real Jacobi rotation.
    let phase = b / babs;
    let theta = (aqq - app) / (2.0 * babs);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    // Columns: new_p = c·col_p − s·conj(phase)·col_q, new_q = s·phase·col_p + c·col_q.
    let sp = phase * s;
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = mkp * c - mkq * sp.conj();
        m[(k, q)] = mkp * sp + mkq * c;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = mpk * c - mqk * sp;
        m[(q, k)] = mpk * sp.conj() + mqk * c;
    }
    m[(p, q)] = ZERO;
    m[(q, p)] = ZERO;
    m[(p, p)] = C64::new(m[(p, p)].re, 0.0);
    m[(q, q)] = C64::new(m[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * c - vkq * sp.conj();
        v[(k, q)] = vkp * sp + vkq * c;
    }
    true
}

/// Principal square root of a Hermitian PSD matrix.
///
/// Eigenvalues in `(-1e-8, 0)` are clamped to zero, as are positive ones below
/// a relative cutoff of `64 ε λ_max` so that rank-deficient inputs (pure
/// states) come back exactly rank-deficient.
pub fn psd_sqrt(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = hermitian_eigen(a)?;
    let lmin = eig.values.first().copied().unwrap_or(0.0);
    if lmin < -PSD_TOL {
        return Err(Error::NotPsd {
            min_eigenvalue: lmin,
        });
    }
    let lmax = eig.values.last().copied().unwrap_or(0.0).max(0.0);
    let cutoff = 64.0 * f64::EPSILON * lmax;
    let s = eig.reconstruct_with(|l| if l > cutoff { l.sqrt() } else { 0.0 });
    Ok(s.hermitian_part())
}

/// Smallest eigenvalue of a Hermitian matrix.
pub fn min_eigenvalue(a: &ComplexMatrix) -> Result<f64> {
    Ok(hermitian_eigen(a)?.values.first().copied().unwrap_or(0.0))
}
