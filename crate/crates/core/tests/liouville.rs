mod common;

use common::{random_hermitian, random_model, random_state, rng};
use qda_core::liouville::{
    adjoint_liouvillian, devectorize, evolve_density, identity_vec, k1_superoperator, k2_superoperator,
    liouvillian, steady_state, two_sided_generator, vectorize, TimeGrid,
};
use qda_core::model::{classical_embedding, kraus_family, DensityMatrix};
use qda_core::numerics::{mat_exp, ComplexMatrix, C64};

fn lindblad_rhs(h: &ComplexMatrix, ls: &[ComplexMatrix], rho: &ComplexMatrix) -> ComplexMatrix {
    let mi = C64::new(0.0, -1.0);
    let mut out = h.commutator(rho).scale(mi);
    for l in ls {
        let ld = l.adjoint();
        let k = &ld * l;
        out = &out + &(&(l * rho) * &ld);
        out = &out - &k.anticommutator(rho).scale_real(0.5);
    }
    out
}

#[test]
fn liouvillian_matches_matrix_form() {
    let mut r = rng(11);
    for d in [2, 3, 4] {
        let m = random_model(&mut r, d, 2);
        let rho = random_state(&mut r, d);
        let l = liouvillian(&m);
        let direct = lindblad_rhs(m.hamiltonian(), m.jumps(), rho.matrix());
        assert!(l.apply(rho.matrix()).max_abs_diff(&direct) < 1e-13);
    }
}

#[test]
fn liouvillian_is_the_derivative_of_the_flow() {
    let mut r = rng(12);
    let m = random_model(&mut r, 3, 2);
    let rho = random_state(&mut r, 3);
    let l = liouvillian(&m);
    let v = vectorize(rho.matrix());
    let exact = l.apply_vec(&v);
    let mut errs = vec![];
    for h in [1e-3, 5e-4] {
        let plus = mat_exp(&l.matrix().scale_real(h)).unwrap().matvec(&v);
        let minus = mat_exp(&l.matrix().scale_real(-h)).unwrap().matvec(&v);
        let fd: Vec<C64> = plus.iter().zip(&minus).map(|(p, q)| (p - q) / (2.0 * h)).collect();
        errs.push(fd.iter().zip(&exact).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max));
    }
    assert!(errs[0] < 1e-5);
    let ratio = errs[0] / errs[1];
    assert!((3.5..4.5).contains(&ratio), "central difference ratio {ratio}");
}

#[test]
fn adjoint_is_dual_and_trace_is_preserved() {
    let mut r = rng(13);
    for d in [2, 3] {
        let m = random_model(&mut r, d, 2);
        let l = liouvillian(&m);
        let la = adjoint_liouvillian(&m);
        assert!(la.matrix().max_abs_diff(&l.matrix().adjoint()) < 1e-13);
        let o = random_hermitian(&mut r, d, 1.0);
        let x = random_state(&mut r, d);
        let lhs = (&o * &l.apply(x.matrix())).trace();
        let rhs = (&la.apply(&o).adjoint() * x.matrix()).trace();
        assert!((lhs - rhs).norm() < 1e-12);
        let row = l.matrix().vecmat(&identity_vec(d));
        assert!(row.iter().all(|z| z.norm() < 1e-13));
    }
}

#[test]
fn generator_pieces_are_consistent() {
    let mut r = rng(14);
    let m = random_model(&mut r, 3, 2);
    let l = liouvillian(&m);
    let sum = k1_superoperator(&m).matrix() + k2_superoperator(&m).matrix();
    assert!(sum.max_abs_diff(l.matrix()) < 1e-14);
    let g = two_sided_generator(&m, 1.0, 1.0).unwrap();
    assert!(g.matrix().max_abs_diff(l.matrix()) < 1e-14);
    assert!(two_sided_generator(&m, 0.0, 1.0).is_err());
}

#[test]
fn kraus_step_is_second_order_accurate() {
    let mut r = rng(15);
    let m = random_model(&mut r, 2, 2);
    let rho = random_state(&mut r, 2);
    let l = liouvillian(&m);
    let err = |dt: f64| {
        let ks = kraus_family(&m, dt).unwrap();
        let mut out = ComplexMatrix::zeros(2, 2);
        for k in &ks {
            out = &out + &(&(k * rho.matrix()) * &k.adjoint());
        }
        let exact = devectorize(&mat_exp(&l.matrix().scale_real(dt)).unwrap().matvec(&vectorize(rho.matrix()))).unwrap();
        out.max_abs_diff(&exact)
    };
    let ratio = err(1e-3) / err(5e-4);
    assert!((3.5..4.5).contains(&ratio), "Kraus error ratio {ratio}");
    let ks = kraus_family(&m, 1e-3).unwrap();
    let mut completeness = ComplexMatrix::zeros(2, 2);
    for k in &ks {
        completeness = &completeness + &(&k.adjoint() * k);
    }
    assert!(completeness.max_abs_diff(&ComplexMatrix::identity(2)) < 1e-5);
}

#[test]
fn classical_two_state_relaxation() {
    // 0 -> 1 at rate a, 1 -> 0 at rate b.
    let (a, b) = (0.7, 1.9);
    let m = classical_embedding(&[vec![0.0, b], vec![a, 0.0]]).unwrap();
    let rho0 = DensityMatrix::ground(2).unwrap();
    let grid = TimeGrid::new(4.0, 40).unwrap();
    let path = evolve_density(&m, &rho0, &grid).unwrap();
    let p1_ss = a / (a + b);
    for (k, rho) in path.iter().enumerate() {
        let p1 = p1_ss * (1.0 - (-(a + b) * grid.time(k)).exp());
        assert!((rho.matrix()[(1, 1)].re - p1).abs() < 1e-12);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-14);
    }
    let ss = steady_state(&m).unwrap();
    assert!((ss.matrix()[(1, 1)].re - p1_ss).abs() < 1e-13);
}

#[test]
fn random_models_have_valid_steady_states() {
    let mut r = rng(16);
    for d in [2, 3, 4] {
        let m = random_model(&mut r, d, 2);
        let ss = steady_state(&m).unwrap();
        assert!(liouvillian(&m).apply(ss.matrix()).max_abs() < 1e-11);
        assert!((ss.matrix().trace().re - 1.0).abs() < 1e-13);
    }
}
