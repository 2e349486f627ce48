//! LU factorisation with partial pivoting.

use super::matrix::{ComplexMatrix, C64, ZERO};
use crate::error::{Error, Result};

pub struct Lu {
    factors: ComplexMatrix,
    perm: Vec<usize>,
}

impl Lu {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        if !a.is_square() {
            return Err(Error::Dimension(format!("LU of non-square {:?}", a.shape())));
        }
        let n = a.rows();
        let mut f = a.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        let scale = a.max_abs();
        for k in 0..n {
            let (p, pivot) = (k..n)
                .map(|i| (i, f[(i, k)].norm()))
                .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if pivot <= f64::EPSILON * scale * n as f64 || pivot == 0.0 {
                return Err(Error::Singular);
            }
            f.swap_rows(k, p);
            perm.swap(k, p);
            let inv = f[(k, k)].inv();
            for i in k + 1..n {
                let l = f[(i, k)] * inv;
                f[(i, k)] = l;
                if l == ZERO {
                    continue;
                }
                for j in k + 1..n {
                    let u = f[(k, j)];
                    f[(i, j)] -= l * u;
                }
            }
        }
        Ok(Self { factors: f, perm })
    }

    pub fn solve_vec(&self, b: &[C64]) -> Vec<C64> {
        let n = self.factors.rows();
        assert_eq!(b.len(), n);
        let mut x: Vec<C64> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let s: C64 = (0..i).map(|j| self.factors[(i, j)] * x[j]).sum();
            x[i] -= s;
        }
        for i in (0..n).rev() {
            let s = x[i] - (i + 1..n).map(|j| self.factors[(i, j)] * x[j]).sum::<C64>();
            x[i] = s / self.factors[(i, i)];
        }
        x
    }

    pub fn solve(&self, b: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(b.rows(), b.cols());
        for j in 0..b.cols() {
            out.set_column(j, &self.solve_vec(&b.column(j)));
        }
        out
    }
}

pub fn solve(a: &ComplexMatrix, b: &ComplexMatrix) -> Result<ComplexMatrix> {
    if a.rows() != b.rows() {
        return Err(Error::Dimension(format!(
            "solve: {:?} with right-hand side {:?}",
            a.shape(),
            b.shape()
        )));
    }
    Ok(Lu::new(a)?.solve(b))
}

pub fn inverse(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let lu = Lu::new(a)?;
    Ok(lu.solve(&ComplexMatrix::identity(a.rows())))
}
