//! Matrix exponential by scaling and squaring with diagonal Padé approximants
//! (degrees 3, 5, 7, 9, 13), following Higham's 2005 selection thresholds.

use super::lu;
use super::matrix::{ComplexMatrix, C64};
use crate::error::{Error, Result};

const THETA: [(usize, f64); 4] = [
    (3, 1.495585217958292e-2),
    (5, 2.53939833006323e-1),
    (7, 9.504178996162932e-1),
    (9, 2.097847961257068e0),
];
const THETA_13: f64 = 5.371920351148152;

const B3: [f64; 4] = [120.0, 60.0, 12.0, 1.0];
const B5: [f64; 6] = [30240.0, 15120.0, 3360.0, 420.0, 30.0, 1.0];
const B7: [f64; 8] = [
    17297280.0, 8648640.0, 1995840.0, 277200.0, 25200.0, 1512.0, 56.0, 1.0,
];
const B9: [f64; 10] = [
    17643225600.0,
    8821612800.0,
    2075673600.0,
    302702400.0,
    30270240.0,
    2162160.0,
    110880.0,
    3960.0,
    90.0,
    1.0,
];
const B13: [f64; 14] = [
    64764752532480000.0,
    32382376266240000.0,
    7771770303897600.0,
    1187353796428800.0,
    129060195264000.0,
    10559470521600.0,
    670442572800.0,
    33522128640.0,
    1323241920.0,
    40840800.0,
    960960.0,
    16380.0,
    182.0,
    1.0,
];

/// `e^A` for a square matrix.
pub fn mat_exp(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "matrix exponential of non-square {:?}",
            a.shape()
        )));
    }
    let n = a.rows();
    let norm = a.norm_one();
    if norm == 0.0 {
        return Ok(ComplexMatrix::identity(n));
    }
    for &(m, theta) in &THETA {
        if norm <= theta {
            return pade_low(a, m);
        }
    }
    let s = (norm / THETA_13).log2().ceil().max(0.0) as i32;
    let scaled = a.scale_real(0.5_f64.powi(s));
    let mut r = pade13(&scaled)?;
    for _ in 0..s {
        r = &r * &r;
    }
    Ok(r)
}

fn combine(a: &ComplexMatrix, u_inner: ComplexMatrix, v: ComplexMatrix) -> Result<ComplexMatrix> {
    let u = a * &u_inner;
    let p = &v + &u;
    let q = &v - &u;
    lu::solve(&q, &p)
}

fn axpy(acc: &mut ComplexMatrix, c: f64, x: &ComplexMatrix) {
    for (o, z) in acc.as_mut_slice().iter_mut().zip(x.as_slice()) {
        *o += z * c;
    }
}

fn pade_low(a: &ComplexMatrix, m: usize) -> Result<ComplexMatrix> {
    let b: &[f64] = match m {
        3 => &B3,
        5 => &B5,
        7 => &B7,
        9 => &B9,
        _ => unreachable!("unsupported Padé degree {m}"),
    };
    let n = a.rows();
    let a2 = a * a;
    // Even powers I, A^2, A^4, ... up to A^(m-1).
    let mut powers = vec![ComplexMatrix::identity(n), a2.clone()];
    while powers.len() < m.div_ceil(2) {
        let next = powers.last().unwrap() * &a2;
        powers.push(next);
    }
    let mut u = ComplexMatrix::zeros(n, n);
    let mut v = ComplexMatrix::zeros(n, n);
    for (k, p) in powers.iter().enumerate() {
        axpy(&mut u, b[2 * k + 1], p);
        axpy(&mut v, b[2 * k], p);
    }
    combine(a, u, v)
}

fn pade13(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let n = a.rows();
    let b = &B13;
    let ident = ComplexMatrix::identity(n);
    let a2 = a * a;
    let a4 = &a2 * &a2;
    let a6 = &a4 * &a2;

    let mut u_hi = ComplexMatrix::zeros(n, n);
    axpy(&mut u_hi, b[13], &a6);
    axpy(&mut u_hi, b[11], &a4);
    axpy(&mut u_hi, b[9], &a2);
    let mut u = &a6 * &u_hi;
    axpy(&mut u, b[7], &a6);
    axpy(&mut u, b[5], &a4);
    axpy(&mut u, b[3], &a2);
    axpy(&mut u, b[1], &ident);

    let mut v_hi = ComplexMatrix::zeros(n, n);
    axpy(&mut v_hi, b[12], &a6);
    axpy(&mut v_hi, b[10], &a4);
    axpy(&mut v_hi, b[8], &a2);
    let mut v = &a6 * &v_hi;
    axpy(&mut v, b[6], &a6);
    axpy(&mut v, b[4], &a4);
    axpy(&mut v, b[2], &a2);
    axpy(&mut v, b[0], &ident);

    combine(a, u, v)
}

/// `e^{A t}` applied cumulatively: returns `[I, P, P^2, ..., P^n]` with `P = e^{A dt}`.
pub fn propagator_powers(a: &ComplexMatrix, dt: f64, n: usize) -> Result<Vec<ComplexMatrix>> {
    let step = mat_exp(&a.scale(C64::new(dt, 0.0)))?;
    let mut out = Vec::with_capacity(n + 1);
    out.push(ComplexMatrix::identity(a.rows()));
    for k in 0..n {
        let next = &out[k] * &step;
        out.push(next);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::matrix::{I, ONE, ZERO};

    #[test]
    fn zero_matrix_gives_identity() {
        let e = mat_exp(&ComplexMatrix::zeros(2, 2)).unwrap();
        assert_eq!(e, ComplexMatrix::identity(2));
    }

    #[test]
    fn diagonal_case() {
        let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -2.0]]).unwrap();
        let e = mat_exp(&a).unwrap();
        assert!((e[(0, 0)].re - 1f64.exp()).abs() < 1e-14);
        assert!((e[(1, 1)].re - (-2f64).exp()).abs() < 1e-15);
        assert_eq!(e[(0, 1)], ZERO);
    }

    #[test]
    fn every_pade_degree_matches_series() {
        // Nilpotent-free 2x2 rotation generator: e^{iθσx} = cos θ + i sin θ σx.
        for theta in [1e-3, 0.1, 0.5, 1.5, 4.0, 30.0] {
            let a = ComplexMatrix::from_vec(2, 2, vec![ZERO, I * theta, I * theta, ZERO]).unwrap();
            let e = mat_exp(&a).unwrap();
            let expect = ComplexMatrix::from_vec(
                2,
                2,
                vec![
                    ONE * theta.cos(),
                    I * theta.sin(),
                    I * theta.sin(),
                    ONE * theta.cos(),
                ],
            )
            .unwrap();
            assert!(e.distance(&expect) < 1e-13 * (1.0 + theta), "theta={theta}");
        }
    }

    #[test]
    fn non_square_is_rejected() {
        assert!(matches!(
            mat_exp(&ComplexMatrix::zeros(2, 3)),
            Err(Error::Dimension(_))
        ));
    }
}
