mod common;

use common::{random_hermitian, random_matrix, rng};
use proptest::prelude::*;
use qda_core::numerics::svd::penrose_defect;
use qda_core::numerics::{
    hermitian_eigen, mat_exp, moore_penrose_pinv, psd_sqrt, spectral_decompose, ComplexMatrix, C64,
};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn pseudo_inverse_satisfies_penrose(seed in any::<u64>(), m in 1usize..6, n in 1usize..6, rank in 1usize..4) {
        let mut r = rng(seed);
        let k = rank.min(m).min(n);
        let a = &random_matrix(&mut r, m, k, 1.0) * &random_matrix(&mut r, k, n, 1.0);
        let p = moore_penrose_pinv(&a).unwrap();
        prop_assert!(penrose_defect(&a, &p) < 1e-9 * (1.0 + a.max_abs()).powi(3));
    }

    #[test]
    fn commuting_exponentials_multiply(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n, n, 1.0);
        let b = &a.scale_real(0.3) + &(&a * &a).scale_real(-0.2);
        let lhs = mat_exp(&(&a + &b)).unwrap();
        let rhs = &mat_exp(&a).unwrap() * &mat_exp(&b).unwrap();
        prop_assert!(lhs.distance(&rhs) <= 1e-11 * lhs.frobenius_norm().max(1.0));
    }

    #[test]
    fn anti_hermitian_exponential_matches_eigen_oracle(seed in any::<u64>(), n in 1usize..6) {
        let mut r = rng(seed);
        let h = random_hermitian(&mut r, n, 2.0);
        let u = mat_exp(&h.scale(C64::new(0.0, 1.0))).unwrap();
        let eig = hermitian_eigen(&h).unwrap();
        let mut oracle = ComplexMatrix::zeros(n, n);
        for (j, &lam) in eig.values.iter().enumerate() {
            let phase = C64::new(0.0, lam).exp();
            for a in 0..n {
                for b in 0..n {
                    oracle[(a, b)] += eig.vectors[(a, j)] * phase * eig.vectors[(b, j)].conj();
                }
            }
        }
        prop_assert!(u.max_abs_diff(&oracle) < 1e-10);
        prop_assert!((&u.adjoint() * &u).max_abs_diff(&ComplexMatrix::identity(n)) < 1e-12);
    }

    #[test]
    fn psd_square_root_squares_back(seed in any::<u64>(), n in 1usize..6, rank in 1usize..6) {
        let mut r = rng(seed);
        let g = random_matrix(&mut r, n, rank.min(n), 1.0);
        let p = &g * &g.adjoint();
        let s = psd_sqrt(&p).unwrap();
        prop_assert!((&s * &s).max_abs_diff(&p) < 1e-10 * p.max_abs().max(1.0));
        prop_assert!(hermitian_eigen(&s).unwrap().values[0] > -1e-10);
    }

    #[test]
    fn spectral_decomposition_reconstructs(seed in any::<u64>(), n in 1usize..8) {
        let mut r = rng(seed);
        let a = random_matrix(&mut r, n, n, 1.0);
        let sd = spectral_decompose(&a).unwrap();
        prop_assert!(sd.biorthonormality_defect() < 1e-10);
        prop_assert!(sd.reconstruct().distance(&a) <= 1e-8 * a.frobenius_norm());
        for w in sd.eigenvalues.windows(2) {
            prop_assert!(w[0].norm() <= w[1].norm() + 1e-12);
        }
    }
}

#[test]
fn exponential_of_diagonal() {
    let a = ComplexMatrix::from_real_rows(&[&[1.0, 0.0], &[0.0, -2.0]]).unwrap();
    let e = mat_exp(&a).unwrap();
    assert!((e[(0, 0)].re - 1f64.exp()).abs() < 1e-15 * 3.0);
    assert!((e[(1, 1)].re - (-2f64).exp()).abs() < 1e-16 * 2.0);
    assert_eq!(mat_exp(&ComplexMatrix::zeros(2, 2)).unwrap(), ComplexMatrix::identity(2));
}
