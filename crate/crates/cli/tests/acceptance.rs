//! Acceptance suite: prints one line per criterion and exits non-zero if any
//! of them failed.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use qda_core::activity::{
    exact_qda, refine_scalar, short_time_coefficient, special_case_qda, ActivityReport,
    RefineConfig,
};
use qda_core::asymptotics::{activity_rate, asymptotic_qda, coherent_rate, drazin_inverse, DrazinMethod};
use qda_core::liouville::{identity_vec, steady_state};
use qda_core::metrology::{direct_qda, qsl_report, FisherConfig, QslConfig};
use qda_core::model::{classical_embedding, driven_qubit, special_case_rate, DensityMatrix, LindbladModel};
use qda_core::numerics::{ComplexMatrix, C64};
use qda_core::trajectories::{sample_jump_counts, tur_verify};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check);

fn ensure(ok: bool, detail: String) -> Check {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn log_space(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n)
        .map(|k| (lo.ln() + (hi.ln() - lo.ln()) * k as f64 / (n - 1) as f64).exp())
        .collect()
}

fn benchmark() -> LindbladModel {
    driven_qubit(1.0, 1.0, 0.5).unwrap()
}

fn report(m: &LindbladModel, rho: &DensityMatrix, tau: f64) -> ActivityReport {
    ActivityReport::compute(m, rho, tau, &RefineConfig::default()).unwrap()
}

fn random_matrix(r: &mut ChaCha8Rng, d: usize, scale: f64) -> ComplexMatrix {
    ComplexMatrix::from_fn(d, d, |_, _| {
        C64::new(r.random_range(-1.0..1.0), r.random_range(-1.0..1.0)) * scale
    })
}

fn random_model(r: &mut ChaCha8Rng, d: usize, jumps: usize) -> LindbladModel {
    let h = random_matrix(r, d, 1.0).hermitian_part();
    let ls = (0..jumps).map(|_| random_matrix(r, d, 0.6)).collect();
    LindbladModel::new(h, ls, "random").unwrap()
}

fn random_state(r: &mut ChaCha8Rng, d: usize) -> DensityMatrix {
    let g = random_matrix(r, d, 1.0);
    let p = &g * &g.adjoint();
    let tr = p.trace().re;
    DensityMatrix::new(p.scale_real(1.0 / tr).hermitian_part()).unwrap()
}

fn random_rates(r: &mut ChaCha8Rng, d: usize) -> Vec<Vec<f64>> {
    (0..d)
        .map(|i| (0..d).map(|j| if i == j { 0.0 } else { r.random_range(0.1..2.0) }).collect())
        .collect()
}

fn closed_qubit(omega: f64) -> LindbladModel {
    let h = ComplexMatrix::from_real_rows(&[&[0.0, omega / 2.0], &[omega / 2.0, 0.0]]).unwrap();
    LindbladModel::new(h, vec![], "closed").unwrap()
}

fn exact_vs_direct() -> Check {
    let m = benchmark();
    let rho = steady_state(&m).unwrap();
    let worst = log_space(1e-2, 1e2, 20)
        .into_iter()
        .map(|tau| {
            let b = report(&m, &rho, tau).b_exact;
            let d = direct_qda(&m, &rho, tau, &FisherConfig::default()).unwrap();
            rel(b, d)
        })
        .fold(0.0, f64::max);
    ensure(worst <= 1e-3, format!("max rel diff {worst:.2e} over 20 horizons"))
}

fn triple_oracle() -> Check {
    let mut worst = 0.0f64;
    let mut cases = Vec::new();
    let m = benchmark();
    let rho = steady_state(&m).unwrap();
    for tau in [0.5, 5.0, 50.0] {
        cases.push((m.clone(), rho.clone(), tau));
    }
    let mut r = ChaCha8Rng::seed_from_u64(2);
    for k in 0..20 {
        let d = 2 + k % 2;
        let m = random_model(&mut r, d, 1 + k % 2);
        let rho = random_state(&mut r, d);
        cases.push((m, rho, 1.0));
    }
    for (m, rho, tau) in &cases {
        let rep = report(m, rho, *tau);
        let nak = rep.b_nakajima.ok_or("Nakajima route missing")?;
        let vec = rep.b_vectorized.ok_or("vectorized route missing")?;
        worst = worst.max(rel(nak, rep.b_exact)).max(rel(vec, rep.b_exact));
    }
    ensure(worst <= 1e-6, format!("max rel spread {worst:.2e} over {} cases", cases.len()))
}

fn classical_limit() -> Check {
    let mut r = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for k in 0..5 {
        let d = 2 + k % 3;
        let m = classical_embedding(&random_rates(&mut r, d)).unwrap();
        let rho = random_state(&mut r, d);
        let rep = report(&m, &rho, 2.0);
        worst = worst.max((rep.b_exact - rep.a).abs());
    }
    ensure(worst < 1e-10, format!("max |B - A| {worst:.2e}"))
}

fn closed_limit() -> Check {
    let omega = 1.0;
    let m = closed_qubit(omega);
    let rho = DensityMatrix::ground(2).unwrap();
    let (mut eb, mut eq) = (0.0f64, 0.0f64);
    for tau in [0.1, 1.0] {
        eb = eb.max(rel(report(&m, &rho, tau).b_exact, tau * tau * omega * omega));
        let q = qsl_report(&m, &rho, tau, &QslConfig::default()).unwrap();
        eq = eq.max((q.rhs_integral - tau * omega / 2.0).abs());
    }
    ensure(eb <= 1e-4 && eq <= 1e-6, format!("B rel err {eb:.2e}, speed-limit integral err {eq:.2e}"))
}

fn bound_ordering() -> Check {
    use rayon::prelude::*;
    let m = benchmark();
    let rho = steady_state(&m).unwrap();
    let violations: usize = log_space(1e-2, 1e2, 60)
        .par_iter()
        .map(|&tau| {
            let rep = report(&m, &rho, tau);
            let slack = |x: f64| 1e-8 + 1e-6 * x.abs();
            usize::from(rep.b_exact > rep.b_upper + slack(rep.b_upper))
                + usize::from(rep.b_upper > rep.b_upper2 + slack(rep.b_upper2))
        })
        .sum();
    ensure(violations == 0, format!("{violations} violations over 60 rows"))
}

fn asymptotics() -> Check {
    let m = benchmark();
    let rho = steady_state(&m).unwrap();
    let long = report(&m, &rho, 1e3);
    let short = report(&m, &rho, 1e-2);
    let err = (asymptotic_qda(&m, 1e3).unwrap() / long.b_exact - 1.0).abs();
    let ratio = asymptotic_qda(&m, 1e-2).unwrap() / short.b_exact;
    // Optical Bloch: κ times the excited population Ω²/4 / (Δ² + κ²/4 + Ω²/2).
    let (delta, omega, kappa) = (1.0f64, 1.0f64, 0.5f64);
    let oracle = kappa * (omega * omega / 4.0) / (delta * delta + kappa * kappa / 4.0 + omega * omega / 2.0);
    let rate_err = (activity_rate(&m).unwrap() - oracle).abs();
    ensure(
        err <= 0.02 && ratio >= 5.0 && rate_err <= 1e-9,
        format!("err at 1e3 {err:.2e}, ratio at 1e-2 {ratio:.2}, rate err {rate_err:.2e}"),
    )
}

fn drazin_identities() -> Check {
    let mut models = vec![benchmark()];
    let mut r = ChaCha8Rng::seed_from_u64(7);
    models.extend((0..10).map(|k| random_model(&mut r, 2, 1 + k % 2)));
    let (mut ident, mut z12, mut z) = (0.0f64, 0.0f64, 0.0f64);
    for m in &models {
        let dz = drazin_inverse(m).unwrap();
        if dz.method != DrazinMethod::Spectral {
            return Err("non-spectral Drazin route".into());
        }
        let n = dz.dim() * dz.dim();
        let proj = &ComplexMatrix::identity(n) - &ComplexMatrix::outer(&dz.steady_vec, &identity_vec(dz.dim()));
        ident = ident
            .max(dz.projector_defect())
            .max(dz.idempotency_defect())
            .max(dz.drazin.max_abs_diff(&dz.moore_penrose_form()))
            .max(proj.max_abs_diff(&dz.projector));
        let cr = coherent_rate(m).unwrap();
        let scale = cr.b_c.abs().max(1.0);
        z12 = z12.max((cr.z1_drazin - cr.z2_drazin).abs() / scale);
        z = z.max((cr.z - cr.b_c).abs() / scale);
    }
    ensure(
        ident <= 1e-8 && z12 <= 1e-10 && z <= 1e-9,
        format!("identity defect {ident:.2e}, Z1-Z2 {z12:.2e}, Z-(4Z1+4Z2) {z:.2e}"),
    )
}

fn special_case() -> Check {
    let m = driven_qubit(1.0, 0.0, 0.5).unwrap();
    let info = special_case_rate(&m).unwrap();
    if !info.holds || (info.rate + 0.5).abs() > 1e-12 {
        return Err(format!("special-case rate {} (holds {})", info.rate, info.holds));
    }
    let rho = DensityMatrix::pure(&[C64::new(0.6, 0.0), C64::new(0.0, 0.8)]).unwrap();
    let cfg = RefineConfig::default();
    let mut worst = 0.0f64;
    for tau in [0.5, 2.0] {
        let e = refine_scalar(tau, &cfg, |g| exact_qda(&m, &rho, g)).unwrap().value;
        let s = refine_scalar(tau, &cfg, |g| special_case_qda(&m, &rho, g, info.rate))
            .unwrap()
            .value;
        worst = worst.max(rel(s, e));
    }
    ensure(worst <= 1e-7, format!("max rel diff {worst:.2e}"))
}

fn approximations() -> Check {
    let m = benchmark();
    let rho = steady_state(&m).unwrap();
    let c = short_time_coefficient(&m, &rho);
    let remainder = |t: f64| {
        let rep = report(&m, &rho, t);
        (rep.b_exact - rep.a) - 4.0 * t * t * c
    };
    let ratios: Vec<f64> = [1e-2, 2e-3].iter().map(|&t| remainder(t) / remainder(t / 2.0)).collect();
    let rep = report(&m, &rho, 100.0);
    let err = rel(rep.approx_large_t.ok_or("no large-t value")?, rep.b_exact);
    let gamma = rep.gamma.ok_or("no gamma")?;
    ensure(
        ratios.iter().all(|r| (6.0..=10.0).contains(r)) && err <= 10.0 * gamma,
        format!("small-t ratios {:.3} {:.3}, large-t err {err:.2e} vs gamma {gamma:.2e}", ratios[0], ratios[1]),
    )
}

fn tur() -> Check {
    let m = benchmark();
    let rho = steady_state(&m).unwrap();
    let tau = 10.0;
    let stats = sample_jump_counts(&m, &rho, tau, 1e-3, 10_000, 20_240_917).unwrap();
    let b = report(&m, &rho, tau).b_exact;
    let t = tur_verify(&stats, b).unwrap();
    let mean_ok = (stats.mean - 0.8).abs() <= 3.0 * stats.mean_ci95;
    ensure(
        mean_ok && t.pass,
        format!(
            "mean {:.4} (ci {:.4}), rel var {:.3} vs floor {:.3} (se {:.3})",
            stats.mean, stats.mean_ci95, t.relative_variance, t.floor, t.standard_error
        ),
    )
}

fn speed_limit() -> Check {
    let m = benchmark();
    let states = [DensityMatrix::basis(2, 1).unwrap(), steady_state(&m).unwrap()];
    let mut detail = Vec::new();
    let mut ok = true;
    for rho in &states {
        for tau in [0.5, 5.0] {
            let q = qsl_report(&m, rho, tau, &QslConfig::default()).unwrap();
            ok &= q.satisfied;
            detail.push(format!("{:.3}<={:.3}", q.bures_angle, q.rhs_integral));
        }
    }
    ensure(ok, detail.join(", "))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let run = |name: &str| -> Result<Vec<u8>, String> {
        let path = dir.path().join(name);
        let code = qda_cli::parse_and_run([
            "qda", "trajectories", "--builtin", "driven-qubit", "--tau", "2", "--dt", "1e-3",
            "--n-traj", "500", "--seed", "42", "-o", path.to_str().unwrap(),
        ]);
        if code != 0 {
            return Err(format!("exit code {code}"));
        }
        std::fs::read(path).map_err(|e| e.to_string())
    };
    let (a, b) = (run("first.csv")?, run("second.csv")?);
    ensure(!a.is_empty() && a == b, format!("{} bytes, identical {}", a.len(), a == b))
}

fn main() {
    let criteria: [Criterion; 12] = [
        ("exact vs direct", exact_vs_direct),
        ("triple oracle", triple_oracle),
        ("classical limit", classical_limit),
        ("closed limit", closed_limit),
        ("bound ordering", bound_ordering),
        ("asymptotics", asymptotics),
        ("Drazin identities", drazin_identities),
        ("special case", special_case),
        ("approximations", approximations),
        ("uncertainty relation", tur),
        ("speed limit", speed_limit),
        ("determinism", determinism),
    ];
    let mut failed = Vec::new();
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check))
            .unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("[{tag}] {:>2} {name}: {detail} ({secs:.1} s)", k + 1);
        if outcome.is_err() {
            failed.push(k + 1);
        }
    }
    if failed.is_empty() {
        println!("all {} criteria passed", criteria.len());
    } else {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
