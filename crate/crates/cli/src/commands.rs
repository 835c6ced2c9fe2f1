use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use thiserror::Error;

use rotorsim_core::hamjac::{check_solution, ConstantCandidate, HjReport, TabulatedCandidate};
use rotorsim_core::integrate::{integrate, Trajectory};
use rotorsim_core::poisson::{fd_gradient, HamiltonianField, NumericGradient, DEFAULT_FD_STEP};
use rotorsim_core::sampling::{oracle_batch, relative_deviation, GradientMode};
use rotorsim_core::systems::{self, ReducedState};
use rotorsim_core::Variant;

use crate::config::{self, Candidate, ConfigError, Scenario};
use crate::csv;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Runtime(String),
    /// The command ran but its verdict is negative.
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Failed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Runtime(_) => 3,
        }
    }
}

fn runtime(e: impl std::fmt::Display) -> CliError {
    CliError::Runtime(e.to_string())
}

fn run_scenario(sc: &Scenario) -> Result<Trajectory, CliError> {
    let initial = sc.initial()?;
    let spec = sc.spec()?;
    integrate(&initial, &sc.params, &sc.config.control, &spec).map_err(runtime)
}

#[derive(Debug, Serialize)]
struct Summary {
    variant: Variant,
    method: &'static str,
    step_count: usize,
    samples: usize,
    t_final: f64,
    initial_energy: f64,
    final_energy: f64,
    max_energy_drift: f64,
    max_casimir_drift: Vec<(String, f64)>,
    max_step_casimir_defect: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    midpoint_total_iterations: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    midpoint_max_iterations: Option<usize>,
    wall_time_s: f64,
}

pub fn simulate(config_path: &Path, out: &Path) -> Result<(), CliError> {
    let sc = config::load(config_path)?;
    let started = Instant::now();
    let tr = run_scenario(&sc)?;
    let wall = started.elapsed().as_secs_f64();

    let variant = sc.config.variant;
    let file = File::create(out).map_err(|e| runtime(format!("cannot create {}: {e}", out.display())))?;
    let mut w = BufWriter::new(file);
    csv::write_trajectory(&mut w, variant, &tr)
        .and_then(|_| w.flush())
        .map_err(|e| runtime(format!("writing {}: {e}", out.display())))?;

    let (first, last) = (tr.first(), tr.last());
    let summary = Summary {
        variant,
        method: tr.meta.spec.method.name(),
        step_count: tr.meta.step_count,
        samples: tr.samples.len(),
        t_final: last.t,
        initial_energy: first.energy,
        final_energy: last.energy,
        max_energy_drift: tr.max_energy_drift(),
        max_casimir_drift: tr
            .max_casimir_drifts()
            .into_iter()
            .map(|(k, d)| (k.column().to_owned(), d))
            .collect(),
        max_step_casimir_defect: tr.meta.max_step_casimir_defect,
        midpoint_total_iterations: tr.meta.midpoint.map(|m| m.total_iterations),
        midpoint_max_iterations: tr.meta.midpoint.map(|m| m.max_iterations),
        wall_time_s: wall,
    };
    let json_path = out.with_extension("json");
    let text = serde_json::to_string_pretty(&summary).expect("summary serializes");
    std::fs::write(&json_path, text + "\n")
        .map_err(|e| runtime(format!("writing {}: {e}", json_path.display())))?;
    println!(
        "wrote {} samples to {} (summary {})",
        tr.samples.len(),
        out.display(),
        json_path.display()
    );
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// Failure predicted by theory, e.g. Casimir drift under a lift acting on
    /// the coalgebra. Does not affect the exit status.
    FailExpected,
    Skip,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::FailExpected => "FAIL-EXPECTED",
            Status::Skip => "SKIP",
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckRow {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub status: Status,
    pub note: &'static str,
}

fn graded(name: impl Into<String>, value: f64, tolerance: f64) -> CheckRow {
    CheckRow {
        name: name.into(),
        value,
        tolerance,
        status: if value <= tolerance { Status::Pass } else { Status::Fail },
        note: "",
    }
}

/// Runs the invariant audit and returns its table.
pub fn audit(sc: &Scenario) -> Result<Vec<CheckRow>, CliError> {
    let tr = run_scenario(sc)?;
    let tol = &sc.config.check;
    let law = &sc.config.control;
    let mut rows = Vec::new();

    let h0 = tr.first().energy;
    let energy = tr.max_energy_drift() / h0.abs().max(1.0);
    if law.is_identically_zero() {
        rows.push(graded("energy drift (relative)", energy, tol.energy_rel_tol));
    } else {
        rows.push(CheckRow {
            name: "energy drift (relative)".into(),
            value: energy,
            tolerance: tol.energy_rel_tol,
            status: Status::Skip,
            note: "control law is not identically zero",
        });
    }

    for (kind, drift) in tr.max_casimir_drifts() {
        let mut row = graded(format!("Casimir drift {}", kind.symbol()), drift, tol.casimir_tol);
        if row.status == Status::Fail && law.acts_on_coalgebra() {
            row.status = Status::FailExpected;
            row.note = "control lift acts on the coalgebra";
        }
        rows.push(row);
    }

    let legendre = tr
        .samples
        .iter()
        .map(|s| legendre_defect(&s.state, sc))
        .fold(0.0f64, f64::max);
    rows.push(graded("Legendre roundtrip (relative)", legendre, tol.legendre_tol));

    let h = HamiltonianField::new(sc.params, sc.config.variant);
    let mut grad = 0.0f64;
    for s in [&tr.first().state, &tr.last().state] {
        let an = systems::grad_hamiltonian(s, &sc.params)
            .restricted_to(s.variant())
            .components();
        let fd = fd_gradient(&NumericGradient(h), s, DEFAULT_FD_STEP)
            .map_err(runtime)?
            .components();
        grad = grad.max(relative_deviation(&an, &fd));
    }
    rows.push(graded("gradient vs finite differences (relative)", grad, tol.gradient_tol));
    Ok(rows)
}

fn legendre_defect(state: &ReducedState, sc: &Scenario) -> f64 {
    let m = systems::legendre_forward(&systems::legendre_inverse(state, &sc.params), &sc.params);
    let back = [m.pi.x, m.pi.y, m.pi.z, m.p.x, m.p.y, m.p.z, m.l.a, m.l.b];
    let (pi, p, l) = (state.pi(), state.p(), state.l());
    relative_deviation(&back, &[pi.x, pi.y, pi.z, p.x, p.y, p.z, l.a, l.b])
}

pub fn check(config_path: &Path) -> Result<(), CliError> {
    let sc = config::load(config_path)?;
    let rows = audit(&sc)?;
    let width = rows.iter().map(|r| r.name.chars().count()).max().unwrap_or(0);
    println!("{:<width$}  {:>12}  {:>9}  status", "check", "value", "tolerance");
    for r in &rows {
        let pad = width - r.name.chars().count();
        print!(
            "{}{}  {:>12.3e}  {:>9.1e}  {}",
            r.name,
            " ".repeat(pad),
            r.value,
            r.tolerance,
            r.status.label()
        );
        if !r.note.is_empty() {
            print!(" ({})", r.note);
        }
        println!();
    }
    let failed = rows.iter().filter(|r| r.status == Status::Fail).count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::Failed(format!("{failed} check(s) failed")))
    }
}

pub fn hj_report(sc: &Scenario) -> Result<HjReport, CliError> {
    let setup = sc.hj()?;
    let result = match &setup.candidate {
        Candidate::Constant(v) => check_solution(
            setup.system,
            &ConstantCandidate(v.clone()),
            &setup.grid,
            &sc.params,
            setup.tolerance,
        ),
        Candidate::Table(t) => check_solution(
            setup.system,
            &TabulatedCandidate(t.clone()),
            &setup.grid,
            &sc.params,
            setup.tolerance,
        ),
    };
    result.map_err(runtime)
}

pub fn hj(config_path: &Path) -> Result<(), CliError> {
    let sc = config::load(config_path)?;
    let report = hj_report(&sc)?;
    println!("{}", serde_json::to_string_pretty(&report).expect("report serializes"));
    if report.is_solution {
        Ok(())
    } else {
        Err(CliError::Failed(format!(
            "not a solution: max |residual| {:e} at sample {}, row {}",
            report.max_abs_residual, report.worst_sample, report.worst_row
        )))
    }
}

pub fn oracle(n: usize, seed: u64, variant: Variant, fd: bool) -> Result<(), CliError> {
    let mode = if fd {
        GradientMode::FiniteDifference
    } else {
        GradientMode::Analytic
    };
    let report = oracle_batch(variant, n, seed, mode).map_err(runtime)?;
    println!(
        "variant={} mode={} n={} seed={} max_relative_deviation={:.6e} worst_sample={} threshold={:e} {}",
        variant,
        if fd { "fd" } else { "analytic" },
        n,
        seed,
        report.max_relative_deviation,
        report.worst_sample,
        report.threshold,
        if report.passed { "PASS" } else { "FAIL" }
    );
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Failed("oracle deviation above threshold".into()))
    }
}
