//! Singular values and the Moore–Penrose pseudo-inverse via one-sided
//! (Hestenes) Jacobi orthogonalisation.

use super::matrix::{inner, ComplexMatrix, ZERO};
use crate::error::{Error, Result};

/// Singular values below this fraction of the largest are treated as zero.
pub const PINV_RCOND: f64 = 1e-11;

/// `A V = W` with mutually orthogonal columns of `W`; `σ_j = |w_j|`.
struct OneSided {
    w: ComplexMatrix,
    v: ComplexMatrix,
}

fn orthogonalise(a: &ComplexMatrix) -> Result<OneSided> {
    let n = a.cols();
    let m = a.rows();
    let mut w = a.clone();
    let mut v = ComplexMatrix::identity(n);
    // Columns at the roundoff floor belong to the null space; rotating them
    // against each other only reshuffles noise.
    let floor = (f64::EPSILON * a.frobenius_norm()).powi(2);
    for _ in 0..80 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let cp = w.column(p);
                let cq = w.column(q);
                let alpha: f64 = cp.iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = cq.iter().map(|z| z.norm_sqr()).sum();
                let gamma = inner(&cp, &cq);
                let g = gamma.norm();
                if g == 0.0
                    || g <= f64::EPSILON * (alpha * beta).sqrt()
                    || alpha.min(beta) <= floor
                {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (zeta * zeta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let sp = phase * (t * c);
                for k in 0..m {
                    let x = w[(k, p)];
                    let y = w[(k, q)];
                    w[(k, p)] = x * c - y * sp.conj();
                    w[(k, q)] = x * sp + y * c;
                }
                for k in 0..n {
                    let x = v[(k, p)];
                    let y = v[(k, q)];
                    v[(k, p)] = x * c - y * sp.conj();
                    v[(k, q)] = x * sp + y * c;
                }
            }
        }
        if !rotated {
            return Ok(OneSided { w, v });
        }
    }
    Err(Error::NoConvergence("one-sided Jacobi SVD".into()))
}

/// Singular values in descending order.
pub fn singular_values(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let os = orthogonalise(a)?;
    let mut s: Vec<f64> = (0..a.cols())
        .map(|j| os.w.column(j).iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt())
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    Ok(s)
}

pub fn moore_penrose_pinv(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let (m, n) = a.shape();
    let os = orthogonalise(a)?;
    let sq: Vec<f64> = (0..n)
        .map(|j| os.w.column(j).iter().map(|z| z.norm_sqr()).sum())
        .collect();
    let smax = sq.iter().copied().fold(0.0, f64::max).sqrt();
    let cutoff = PINV_RCOND * smax;
    // A⁺ = Σ_j v_j w_j^H / σ_j² over the retained singular triplets.
    let mut out = ComplexMatrix::zeros(n, m);
    if smax == 0.0 {
        return Ok(out);
    }
    for (j, &s2) in sq.iter().enumerate() {
        if s2.sqrt() <= cutoff {
            continue;
        }
        let inv = 1.0 / s2;
        for r in 0..n {
            let vr = os.v[(r, j)] * inv;
            if vr == ZERO {
                continue;
            }
            for c in 0..m {
                out[(r, c)] += vr * os.w[(c, j)].conj();
            }
        }
    }
    Ok(out)
}

/// Largest deviation across the four Penrose conditions.
pub fn penrose_defect(a: &ComplexMatrix, p: &ComplexMatrix) -> f64 {
    let ap = a * p;
    let pa = p * a;
    let d1 = (&ap * a).max_abs_diff(a);
    let d2 = (&pa * p).max_abs_diff(p);
    let d3 = ap.hermiticity_defect();
    let d4 = pa.hermiticity_defect();
    d1.max(d2).max(d3).max(d4)
}
