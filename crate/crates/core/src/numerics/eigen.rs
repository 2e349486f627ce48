//! Eigendecomposition of general complex matrices.
//!
//! Householder reduction to upper Hessenberg form, then single-shift complex
//! QR iteration with Wilkinson shifts down to a Schur form `A = Z T Z^H`.
//! Right eigenvectors come from back-substitution on `T`; the left vectors
//! are the rows of `X^{-1}`, which makes the pair biorthonormal by
//! construction.

use std::cmp::Ordering;

use super::lu;
use super::matrix::{inner, norm2, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Eigenvector-matrix condition estimate above which a matrix is treated as
/// defective.
pub const DEFECTIVE_CONDITION: f64 = 1e8;

#[derive(Clone, Debug)]
pub struct SpectralDecomposition {
    pub eigenvalues: Vec<C64>,
    /// Column `j` is the right eigenvector `x_j`.
    pub right: ComplexMatrix,
    /// Column `j` is the left eigenvector `y_j`, normalised so `y_i^H x_j = δ_ij`.
    pub left: ComplexMatrix,
    pub condition_estimate: f64,
}

impl SpectralDecomposition {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn right_vector(&self, j: usize) -> Vec<C64> {
        self.right.column(j)
    }

    pub fn left_vector(&self, j: usize) -> Vec<C64> {
        self.left.column(j)
    }

    /// `Σ_j f(λ_j) |x_j⟩⟨y_j|` over the indices accepted by `keep`.
    pub fn spectral_sum(
        &self,
        keep: impl Fn(usize) -> bool,
        f: impl Fn(C64) -> C64,
    ) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for j in (0..n).filter(|&j| keep(j)) {
            let w = f(self.eigenvalues[j]);
            if w == ZERO {
                continue;
            }
            for r in 0..n {
                let xr = self.right[(r, j)] * w;
                for c in 0..n {
                    out[(r, c)] += xr * self.left[(c, j)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.spectral_sum(|_| true, |l| l)
    }

    /// `max |Y^H X - I|`.
    pub fn biorthonormality_defect(&self) -> f64 {
        let gram = &self.left.adjoint() * &self.right;
        gram.max_abs_diff(&ComplexMatrix::identity(self.dim()))
    }
}

/// Eigenvalues only, in the same order as [`spectral_decompose`].
pub fn eigenvalues(a: &ComplexMatrix) -> Result<Vec<C64>> {
    if !a.is_square() {
        return Err(Error::Dimension(format!("eigenvalues of non-square {:?}", a.shape())));
    }
    let schur = Schur::new(a)?;
    let mut values = schur.t.diagonal();
    values.sort_by(spectral_order);
    Ok(values)
}

/// Sort key: ascending modulus, exact ties broken by argument.
pub fn spectral_order(a: &C64, b: &C64) -> Ordering {
    a.norm()
        .total_cmp(&b.norm())
        .then_with(|| a.arg().total_cmp(&b.arg()))
}

pub fn spectral_decompose(a: &ComplexMatrix) -> Result<SpectralDecomposition> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "spectral decomposition of non-square {:?}",
            a.shape()
        )));
    }
    let n = a.rows();
    let schur = Schur::new(a)?;
    let t = &schur.t;
    let tnorm = t.max_abs().max(f64::MIN_POSITIVE);
    let smin = (f64::EPSILON * tnorm).max(f64::MIN_POSITIVE * 1e3);

    // Eigenvectors of the triangular factor.
    let mut right = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lambda = t[(k, k)];
        let mut v = vec![ZERO; n];
        v[k] = ONE;
        for i in (0..k).rev() {
            let mut s = ZERO;
            for j in i + 1..=k {
                s += t[(i, j)] * v[j];
            }
            let mut denom = t[(i, i)] - lambda;
            if denom.norm() < smin {
                denom = C64::new(smin, 0.0);
            }
            v[i] = -s / denom;
        }
        let mut x = schur.z.matvec(&v);
        let nrm = norm2(&x);
        // Fix the phase so the largest component is real and positive; makes
        // the output deterministic for a given input.
        let pivot = x
            .iter()
            .copied()
            .max_by(|a, b| a.norm().total_cmp(&b.norm()))
            .unwrap_or(ONE);
        let phase = if pivot.norm() > 0.0 {
            pivot.conj() / pivot.norm()
        } else {
            ONE
        };
        for z in &mut x {
            *z = *z * phase / nrm;
        }
        right.set_column(k, &x);
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag = t.diagonal();
    order.sort_by(|&i, &j| spectral_order(&diag[i], &diag[j]));
    let eigenvalues: Vec<C64> = order.iter().map(|&i| diag[i]).collect();
    let right = ComplexMatrix::from_fn(n, n, |r, c| right[(r, order[c])]);

    let inv = match lu::inverse(&right) {
        Ok(inv) => inv,
        Err(Error::Singular) => {
            return Err(Error::Defective {
                condition: f64::INFINITY,
            })
        }
        Err(e) => return Err(e),
    };
    let condition_estimate = right.norm_one() * inv.norm_one();
    if !condition_estimate.is_finite() || condition_estimate > DEFECTIVE_CONDITION {
        return Err(Error::Defective {
            condition: condition_estimate,
        });
    }
    // Rows of X^{-1} are y_j^H.
    let left = inv.adjoint();
    Ok(SpectralDecomposition {
        eigenvalues,
        right,
        left,
        condition_estimate,
    })
}

/// Complex Schur form `A = Z T Z^H` with `T` upper triangular.
pub(crate) struct Schur {
    pub t: ComplexMatrix,
    pub z: ComplexMatrix,
}

impl Schur {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let n = a.rows();
        let (mut h, mut z) = hessenberg(a);
        if n > 1 {
            qr_iterate(&mut h, &mut z)?;
        }
        // Clean below the diagonal; entries there are below the deflation threshold.
        for i in 1..n {
            for j in 0..i {
                h[(i, j)] = ZERO;
            }
        }
        Ok(Self { t: h, z })
    }
}

fn hessenberg(a: &ComplexMatrix) -> (ComplexMatrix, ComplexMatrix) {
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::identity(n);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C64> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let alpha = norm2(&x);
        if alpha == 0.0 {
            continue;
        }
        let phase = if x[0].norm() > 0.0 { x[0] / x[0].norm() } else { ONE };
        let mut v = x.clone();
        v[0] += phase * alpha;
        let vn = norm2(&v);
        if vn == 0.0 {
            continue;
        }
        for z in &mut v {
            *z /= vn;
        }
        // H <- (I - 2vv^H) H (I - 2vv^H), acting on indices k+1..n.
        for j in 0..n {
            let col: Vec<C64> = (k + 1..n).map(|i| h[(i, j)]).collect();
            let s = inner(&v, &col) * 2.0;
            for (idx, i) in (k + 1..n).enumerate() {
                h[(i, j)] -= v[idx] * s;
            }
        }
        for m in [&mut h, &mut q] {
            for i in 0..n {
                let row: Vec<C64> = (k + 1..n).map(|j| m[(i, j)]).collect();
                let s: C64 = row.iter().zip(&v).map(|(r, vj)| r * vj).sum::<C64>() * 2.0;
                for (idx, j) in (k + 1..n).enumerate() {
                    m[(i, j)] -= s * v[idx].conj();
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = ZERO;
        }
    }
    (h, q)
}

/// Givens rotation `G = [[c̄, s̄], [-s, c]]` with `G [a; b] = [r; 0]`.
fn givens(a: C64, b: C64) -> (C64, C64) {
    let r = (a.norm_sqr() + b.norm_sqr()).sqrt();
    if r == 0.0 {
        (ONE, ZERO)
    } else {
        (a / r, b / r)
    }
}

fn wilkinson_shift(a: C64, b: C64, c: C64, d: C64) -> C64 {
    // Eigenvalue of [[a, b], [c, d]] closest to d.
    let tr_half = (a + d) * 0.5;
    let det = a * d - b * c;
    let disc = (tr_half * tr_half - det).sqrt();
    let l1 = tr_half + disc;
    let l2 = tr_half - disc;
    if (l1 - d).norm() <= (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn qr_iterate(h: &mut ComplexMatrix, z: &mut ComplexMatrix) -> Result<()> {
    let n = h.rows();
    let eps = f64::EPSILON;
    let hnorm = h.max_abs().max(f64::MIN_POSITIVE);
    let mut hi = n - 1;
    let mut iter_since_deflation = 0usize;
    let mut total = 0usize;
    let max_total = 100 * n.max(4);

    while hi > 0 {
        // Find the start of the unreduced block ending at `hi`.
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let mut scale = h[(lo, lo)].norm() + h[(lo - 1, lo - 1)].norm();
            if scale == 0.0 {
                scale = hnorm;
            }
            if sub <= eps * scale {
                h[(lo, lo - 1)] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            hi -= 1;
            iter_since_deflation = 0;
            continue;
        }
        total += 1;
        iter_since_deflation += 1;
        if total > max_total {
            return Err(Error::NoConvergence(format!(
                "complex QR iteration did not converge for a {n}x{n} matrix"
            )));
        }

        let mu = if iter_since_deflation % 11 == 10 {
            // Exceptional shift to break cycles.
            h[(hi, hi)] + C64::new(0.75 * h[(hi, hi - 1)].norm(), 0.4 * h[(hi, hi - 1)].norm())
        } else {
            wilkinson_shift(
                h[(hi - 1, hi - 1)],
                h[(hi - 1, hi)],
                h[(hi, hi - 1)],
                h[(hi, hi)],
            )
        };

        for k in lo..=hi {
            h[(k, k)] -= mu;
        }
        let mut rotations = Vec::with_capacity(hi - lo);
        for k in lo..hi {
            let (c, s) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let a = h[(k, j)];
                let b = h[(k + 1, j)];
                h[(k, j)] = c.conj() * a + s.conj() * b;
                h[(k + 1, j)] = -s * a + c * b;
            }
            rotations.push((k, c, s));
        }
        for &(k, c, s) in &rotations {
            // Right-multiply by G^H on columns k, k+1.
            let rows = (k + 2).min(hi + 1);
            for i in 0..rows {
                let a = h[(i, k)];
                let b = h[(i, k + 1)];
                h[(i, k)] = a * c + b * s;
                h[(i, k + 1)] = -a * s.conj() + b * c.conj();
            }
            for i in 0..n {
                let a = z[(i, k)];
                let b = z[(i, k + 1)];
                z[(i, k)] = a * c + b * s;
                z[(i, k + 1)] = -a * s.conj() + b * c.conj();
            }
        }
        for k in lo..=hi {
            h[(k, k)] += mu;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::I;

    fn pseudo_random(n: usize, seed: u64) -> ComplexMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(n, n, |_, _| C64::new(next(), next()))
    }

    #[test]
    fn diagonal_matrix() {
        let a = ComplexMatrix::from_real_rows(&[&[2.0, 0.0], &[0.0, 1.0]]).unwrap();
        let sd = spectral_decompose(&a).unwrap();
        assert!((sd.eigenvalues[0] - ONE).norm() < 1e-15);
        assert!((sd.eigenvalues[1] - 2.0 * ONE).norm() < 1e-15);
        // Basis vectors, up to the normalised phase.
        assert!((sd.right[(1, 0)].norm() - 1.0).abs() < 1e-15);
        assert!((sd.right[(0, 1)].norm() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_matrices_reconstruct_and_are_biorthonormal() {
        for (n, seed) in [(1, 1), (2, 2), (3, 3), (4, 4), (9, 5), (16, 6), (16, 7)] {
            let a = pseudo_random(n, seed);
            let sd = spectral_decompose(&a).unwrap();
            assert!(sd.biorthonormality_defect() < 1e-10, "n={n}");
            let rel = sd.reconstruct().distance(&a) / a.frobenius_norm();
            assert!(rel < 1e-12, "n={n} rel={rel}");
            for w in sd.eigenvalues.windows(2) {
                assert_ne!(spectral_order(&w[0], &w[1]), Ordering::Greater);
            }
        }
    }

    #[test]
    fn repeated_eigenvalues_of_normal_matrix() {
        // Rotation generator with a doubly degenerate zero eigenvalue.
        let a = ComplexMatrix::from_vec(
            3,
            3,
            vec![ZERO, ZERO, ZERO, ZERO, ZERO, I, ZERO, I, ZERO],
        )
        .unwrap();
        let sd = spectral_decompose(&a).unwrap();
        assert!(sd.reconstruct().distance(&a) < 1e-13);
    }

    #[test]
    fn jordan_block_is_defective() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 1.0], &[0.0, 1.0]]).unwrap();
        match spectral_decompose(&a) {
            Err(Error::Defective { condition }) => assert!(condition > DEFECTIVE_CONDITION),
            other => panic!("expected defective error, got {other:?}"),
        }
    }

    #[test]
    fn eigenvalues_match_decomposition() {
        let a = pseudo_random(5, 11);
        let ev = eigenvalues(&a).unwrap();
        let sd = spectral_decompose(&a).unwrap();
        for (x, y) in ev.iter().zip(&sd.eigenvalues) {
            assert!((x - y).norm() < 1e-13);
        }
    }
}
