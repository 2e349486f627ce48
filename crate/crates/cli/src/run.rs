use rayon::prelude::*;

use qda_core::activity::{exact_qda, refine_scalar, ActivityReport, RefineConfig};
use qda_core::asymptotics::asymptotic_qda;
use qda_core::liouville::steady_state;
use qda_core::metrology::{direct_qda, qsl_report, FisherConfig, QslConfig};
use qda_core::model::{driven_qubit, DensityMatrix, LindbladModel};
use qda_core::trajectories::{sample_jump_counts, tur_verify};
use qda_core::Error;

use crate::args::{Builtin, Command, Common, GridArgs, Initial, Spacing};
use crate::model_file::read_model;
use crate::output::{num, opt, Table};
use crate::CliError;

pub const COMPUTE_COLUMNS: [&str; 16] = [
    "tau",
    "A",
    "B_exact",
    "B_nakajima",
    "B_vectorized",
    "B_special",
    "B_direct",
    "B_asymptotic",
    "B_upper",
    "B_upper2",
    "approx_large_t",
    "approx_small_t",
    "gamma",
    "nu",
    "grid_steps",
    "converged",
];

pub const SWEEP_COLUMNS: [&str; 9] = [
    "tau",
    "A",
    "B_exact",
    "B_direct",
    "B_asymptotic",
    "B_upper",
    "B_upper2",
    "grid_steps",
    "converged",
];

pub const TRAJECTORY_COLUMNS: [&str; 7] =
    ["tau", "n_traj", "mean_N", "var_N", "rel_var", "tur_floor", "pass"];

pub const QSL_COLUMNS: [&str; 4] = ["tau", "bures_angle", "rhs_integral", "satisfied"];

struct Setup {
    model: LindbladModel,
    rho0: DensityMatrix,
}

fn setup(common: &Common) -> Result<Setup, CliError> {
    let (model, file_rho) = match (&common.model, common.builtin) {
        (Some(path), _) => {
            let f = read_model(path)?;
            (f.model, f.rho0)
        }
        (None, Some(Builtin::DrivenQubit)) => {
            (driven_qubit(common.delta, common.omega, common.kappa)?, None)
        }
        (None, None) => return Err(CliError::Invalid("either --model or --builtin is required".into())),
    };
    let rho0 = match common.initial {
        Initial::Steady => steady_state(&model)?,
        Initial::Ground => DensityMatrix::ground(model.dim())?,
        Initial::File => file_rho.ok_or_else(|| {
            CliError::Invalid("--initial file needs a rho0 entry in the model file".into())
        })?,
    };
    Ok(Setup { model, rho0 })
}

fn refine_config(g: &GridArgs) -> Result<RefineConfig, CliError> {
    if g.grid_steps < 2 {
        return Err(CliError::Invalid(format!(
            "--grid-steps must be at least 2, got {}",
            g.grid_steps
        )));
    }
    Ok(if g.no_refine {
        RefineConfig::fixed(g.grid_steps)
    } else {
        RefineConfig::default().with_start(g.grid_steps)
    })
}

fn fisher_config(g: &GridArgs) -> Result<FisherConfig, CliError> {
    let cfg = FisherConfig {
        dtheta: g.dtheta,
        ..FisherConfig::default()
    };
    cfg.validate()?;
    Ok(cfg)
}

fn check_tau(tau: f64) -> Result<(), CliError> {
    if tau > 0.0 && tau.is_finite() {
        Ok(())
    } else {
        Err(CliError::Invalid(format!("tau must be positive and finite, got {tau}")))
    }
}

fn optional_asymptote(m: &LindbladModel, tau: f64) -> Result<Option<f64>, CliError> {
    match asymptotic_qda(m, tau) {
        Ok(v) => Ok(Some(v)),
        Err(Error::DegenerateSteadyState { .. }) => Ok(None),
        Err(e) => Err(e.into()),
    }
}

fn flag(b: bool) -> String {
    b.to_string()
}

/// Horizons from `lo` to `hi`, both included.
pub fn tau_grid(lo: f64, hi: f64, points: usize, spacing: Spacing) -> Result<Vec<f64>, CliError> {
    check_tau(lo)?;
    check_tau(hi)?;
    if hi < lo || points < 2 {
        return Err(CliError::Invalid(format!(
            "sweep needs tau_min <= tau_max and at least 2 points (got {lo}, {hi}, {points})"
        )));
    }
    let last = (points - 1) as f64;
    Ok((0..points)
        .map(|k| {
            let s = k as f64 / last;
            match (k, spacing) {
                (0, _) => lo,
                (k, _) if k == points - 1 => hi,
                (_, Spacing::Log) => (lo.ln() + s * (hi.ln() - lo.ln())).exp(),
                (_, Spacing::Linear) => lo + s * (hi - lo),
            }
        })
        .collect())
}

struct Outcome {
    table: Table,
    unconverged: Vec<f64>,
}

fn compute(common: &Common, tau: f64, grid: &GridArgs) -> Result<Outcome, CliError> {
    check_tau(tau)?;
    let s = setup(common)?;
    let cfg = refine_config(grid)?;
    let fisher = fisher_config(grid)?;
    let rep = ActivityReport::compute(&s.model, &s.rho0, tau, &cfg)?;
    let direct = direct_qda(&s.model, &s.rho0, tau, &fisher)?;
    let asym = optional_asymptote(&s.model, tau)?;
    let mut table = Table::new(&COMPUTE_COLUMNS);
    table.rows.push(vec![
        num(tau),
        num(rep.a),
        num(rep.b_exact),
        opt(rep.b_nakajima),
        opt(rep.b_vectorized),
        opt(rep.b_special),
        num(direct),
        opt(asym),
        num(rep.b_upper),
        num(rep.b_upper2),
        opt(rep.approx_large_t),
        opt(rep.approx_small_t),
        opt(rep.gamma),
        opt(rep.nu),
        rep.grid_steps.to_string(),
        flag(rep.converged),
    ]);
    Ok(Outcome {
        table,
        unconverged: if rep.converged { vec![] } else { vec![tau] },
    })
}

fn sweep(common: &Common, taus: &[f64], grid: &GridArgs) -> Result<Outcome, CliError> {
    let s = setup(common)?;
    let cfg = refine_config(grid)?;
    let fisher = fisher_config(grid)?;
    let rows: Vec<(Vec<String>, bool)> = taus
        .par_iter()
        .map(|&tau| -> Result<_, CliError> {
            let rep = ActivityReport::compute(&s.model, &s.rho0, tau, &cfg)?;
            let direct = direct_qda(&s.model, &s.rho0, tau, &fisher)?;
            let asym = optional_asymptote(&s.model, tau)?;
            Ok((
                vec![
                    num(tau),
                    num(rep.a),
                    num(rep.b_exact),
                    num(direct),
                    opt(asym),
                    num(rep.b_upper),
                    num(rep.b_upper2),
                    rep.grid_steps.to_string(),
                    flag(rep.converged),
                ],
                rep.converged,
            ))
        })
        .collect::<Result<_, _>>()?;
    let mut table = Table::new(&SWEEP_COLUMNS);
    let mut unconverged = vec![];
    for ((row, ok), &tau) in rows.into_iter().zip(taus) {
        table.rows.push(row);
        if !ok {
            unconverged.push(tau);
        }
    }
    Ok(Outcome { table, unconverged })
}

fn trajectories(
    common: &Common,
    tau: f64,
    dt: f64,
    n_traj: usize,
    seed: u64,
    grid: &GridArgs,
) -> Result<Outcome, CliError> {
    check_tau(tau)?;
    let s = setup(common)?;
    let cfg = refine_config(grid)?;
    let stats = sample_jump_counts(&s.model, &s.rho0, tau, dt, n_traj, seed)?;
    let b = refine_scalar(tau, &cfg, |g| exact_qda(&s.model, &s.rho0, g))?;
    let (rel_var, pass) = match tur_verify(&stats, b.value) {
        Ok(r) => (Some(r.relative_variance), flag(r.pass)),
        Err(Error::UndefinedRatio) => (None, String::new()),
        Err(e) => return Err(e.into()),
    };
    let floor = (b.value > 0.0).then(|| 1.0 / b.value);
    let mut table = Table::new(&TRAJECTORY_COLUMNS);
    table.rows.push(vec![
        num(tau),
        stats.n_traj.to_string(),
        num(stats.mean),
        num(stats.variance),
        opt(rel_var),
        opt(floor),
        pass,
    ]);
    Ok(Outcome {
        table,
        unconverged: if b.converged { vec![] } else { vec![tau] },
    })
}

fn qsl(common: &Common, tau: f64, grid: &GridArgs) -> Result<Outcome, CliError> {
    check_tau(tau)?;
    let s = setup(common)?;
    let cfg = QslConfig {
        refine: refine_config(grid)?,
        ..QslConfig::default()
    };
    let q = qsl_report(&s.model, &s.rho0, tau, &cfg)?;
    let mut table = Table::new(&QSL_COLUMNS);
    table.rows.push(vec![
        num(tau),
        num(q.bures_angle),
        num(q.rhs_integral),
        flag(q.satisfied),
    ]);
    Ok(Outcome {
        table,
        unconverged: vec![],
    })
}

/// Runs one command and writes its CSV. Grid non-convergence still writes the
/// table and is then reported as a numerical failure.
pub fn execute(cmd: &Command) -> Result<(), CliError> {
    let (outcome, common) = match cmd {
        Command::Compute { common, tau, grid } => (compute(common, *tau, grid)?, common),
        Command::Sweep {
            common,
            tau_min,
            tau_max,
            points,
            spacing,
            grid,
        } => {
            let taus = tau_grid(*tau_min, *tau_max, *points, *spacing)?;
            (sweep(common, &taus, grid)?, common)
        }
        Command::Trajectories {
            common,
            tau,
            dt,
            n_traj,
            seed,
            grid,
        } => (trajectories(common, *tau, *dt, *n_traj, *seed, grid)?, common),
        Command::Qsl { common, tau, grid } => (qsl(common, *tau, grid)?, common),
    };
    outcome.table.write_to(common.output.as_deref())?;
    if !outcome.unconverged.is_empty() {
        return Err(CliError::Numerical(format!(
            "quadrature grid did not converge at tau = {:?}",
            outcome.unconverged
        )));
    }
    Ok(())
}
