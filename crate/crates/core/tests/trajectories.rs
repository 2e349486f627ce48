mod common;

use common::benchmark;
use qda_core::activity::{classical_activity, ActivityReport, RefineConfig, TimeGrid};
use qda_core::liouville::{evolve_density, steady_state};
use qda_core::model::{classical_embedding, DensityMatrix};
use qda_core::trajectories::{ensemble_density, sample_jump_counts, tur_verify};

#[test]
fn benchmark_counts_match_activity_and_respect_tur() {
    let m = benchmark();
    let rho = steady_state(&m).unwrap();
    let s = sample_jump_counts(&m, &rho, 10.0, 1e-3, 10_000, 2024).unwrap();
    assert!((s.mean - 0.8).abs() <= 3.0 * s.mean_ci95, "{s:?}");
    let b = ActivityReport::compute(&m, &rho, 10.0, &RefineConfig::default())
        .unwrap()
        .b_exact;
    assert!(tur_verify(&s, b).unwrap().pass);
}

#[test]
fn classical_counts_match_activity() {
    let m = classical_embedding(&[vec![0.0, 1.5], vec![0.5, 0.0]]).unwrap();
    let rho = steady_state(&m).unwrap();
    let tau = 4.0;
    let a = classical_activity(&m, &rho, &TimeGrid::new(tau, 64).unwrap()).unwrap();
    let s = sample_jump_counts(&m, &rho, tau, 1e-2, 4_000, 5).unwrap();
    assert!((s.mean - a).abs() <= 3.0 * s.mean_ci95);
    let report = tur_verify(&s, a).unwrap();
    assert!((report.floor - 1.0 / a).abs() < 1e-15);
    assert!(report.pass);
}

#[test]
fn halving_the_step_keeps_the_mean() {
    let m = benchmark();
    let rho = DensityMatrix::basis(2, 1).unwrap();
    let a = sample_jump_counts(&m, &rho, 5.0, 2e-3, 4_000, 9).unwrap();
    let b = sample_jump_counts(&m, &rho, 5.0, 1e-3, 4_000, 9).unwrap();
    assert!((a.mean - b.mean).abs() <= a.mean_ci95.max(b.mean_ci95) * 2.0);
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let m = benchmark();
    let rho = steady_state(&m).unwrap();
    let run = || sample_jump_counts(&m, &rho, 2.0, 1e-2, 300, 77).unwrap();
    let single = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap()
        .install(run);
    assert_eq!(single, run());
}

#[test]
fn ensemble_average_reproduces_the_master_equation() {
    let m = benchmark();
    let rho = DensityMatrix::basis(2, 1).unwrap();
    let tau = 2.0;
    let ens = ensemble_density(&m, &rho, tau, 1e-3, 10_000, 3).unwrap();
    let exact = evolve_density(&m, &rho, &TimeGrid::new(tau, 2).unwrap()).unwrap();
    let exact = exact.last().unwrap().matrix();
    for i in 0..2 {
        for j in 0..2 {
            let diff = ens.mean[(i, j)] - exact[(i, j)];
            assert!(diff.re.abs() <= 5.0 * ens.se_re[i * 2 + j] + 1e-12);
            assert!(diff.im.abs() <= 5.0 * ens.se_im[i * 2 + j] + 1e-12);
        }
    }
}
