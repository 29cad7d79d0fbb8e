use rayon::prelude::*;

use qsl_core::distinguishability::{blp_measure, maximize_blp, StatePair};
use qsl_core::model::{trace, Amplitude};
use qsl_core::oracle::integrate_amplitude;
use qsl_core::speed_limit::{qslt_identity, qslt_pure};
use qsl_core::transition::{critical_drive_strength_with, sweep_omega, sweep_window, CriticalSearch};
use qsl_core::PhysicalParams;

use crate::config::{Command, RunConfig};
use crate::table::{Cell, Table};
use crate::CliError;

/// Grid of the built-in oracle check.
pub const VALIDATION_LAMBDAS: [f64; 5] = [0.05, 0.5, 3.0, 6.0, 9.0];
pub const VALIDATION_OMEGAS: [f64; 6] = [0.0, 2.0, 5.31, 8.0, 20.0, 50.0];
pub const VALIDATION_THRESHOLD: f64 = 1e-8;
const VALIDATION_SPAN: f64 = 10.0;

/// Runs the library operation behind `config.command`.
///
/// A `validate` run whose error exceeds the threshold still returns its
/// table, flagged by the second element.
pub fn execute(config: &RunConfig) -> Result<(Table, bool), CliError> {
    let params = || {
        PhysicalParams::new(config.lambda, config.drive_strength, config.qubit_freq, config.spectral_center)
    };
    let table = match config.command {
        Command::Evolve => evolve(&params()?, config)?,
        Command::Qslt => qslt(&params()?, config)?,
        Command::Nonmarkov => nonmarkov(&params()?, config)?,
        Command::CriticalOmega => critical_omega(config)?,
        Command::SweepOmega => omega_sweep(config)?,
        Command::SweepWindow => window_sweep(config)?,
        Command::Validate => return validate(config),
    };
    Ok((table, true))
}

fn evolve(params: &PhysicalParams, config: &RunConfig) -> Result<Table, CliError> {
    let tr = trace(params, config.t_end, config.points)?;
    let mut table = Table::new(&["t", "eps_re", "eps_im", "population", "sigma"]);
    for i in 0..tr.len() {
        table.push(vec![
            Cell::Num(tr.times[i]),
            Cell::Num(tr.amplitude[i].re),
            Cell::Num(tr.amplitude[i].im),
            Cell::Num(tr.population[i]),
            Cell::Num(tr.sigma[i]),
        ]);
    }
    Ok(table)
}

fn qslt(params: &PhysicalParams, config: &RunConfig) -> Result<Table, CliError> {
    let r = qslt_pure(params, config.tau_d)?;
    let blp = blp_measure(params, &StatePair::optimal(), config.tau_d)?.measure;
    let population = Amplitude::new(params).population(config.tau_d);
    let mut rows = vec![
        ("tau_d", Cell::Num(r.tau_d)),
        ("tau_qsl", Cell::Num(r.tau_qsl)),
        ("tau_qsl_ratio", Cell::Num(r.ratio)),
        ("bound_p1", Cell::Num(r.bound_p1)),
        ("bound_p2", Cell::Num(r.bound_p2)),
        ("bound_pinf", Cell::Num(r.bound_pinf)),
    ];
    if let Some(angle) = r.bures_angle {
        rows.push(("bures_angle", Cell::Num(angle)));
    }
    // The identity is undefined when nothing evolves; leave it out then.
    if let Ok(identity) = qslt_identity(params, config.tau_d) {
        rows.push(("tau_qsl_identity", Cell::Num(identity)));
    }
    rows.push(("blp", Cell::Num(blp)));
    rows.push(("population", Cell::Num(population)));
    Ok(Table::quantities(rows))
}

fn nonmarkov(params: &PhysicalParams, config: &RunConfig) -> Result<Table, CliError> {
    let optimal = blp_measure(params, &StatePair::optimal(), config.tau_d)?;
    let sampled = maximize_blp(params, config.tau_d, config.samples, config.seed)?;
    let [x1, y1, z1] = sampled.pair.first.bloch_vector();
    let [x2, y2, z2] = sampled.pair.second.bloch_vector();
    Ok(Table::quantities(vec![
        ("blp_optimal", Cell::Num(optimal.measure)),
        ("blp_sampled", Cell::Num(sampled.measure)),
        ("samples", Cell::Int(config.samples as u64)),
        ("growth_intervals", Cell::Int(optimal.growth_intervals.len() as u64)),
        ("best_first_x", Cell::Num(x1)),
        ("best_first_y", Cell::Num(y1)),
        ("best_first_z", Cell::Num(z1)),
        ("best_second_x", Cell::Num(x2)),
        ("best_second_y", Cell::Num(y2)),
        ("best_second_z", Cell::Num(z2)),
    ]))
}

fn critical_omega(config: &RunConfig) -> Result<Table, CliError> {
    let search = CriticalSearch { resolution: config.resolution, cap: config.cap };
    let omega_c = critical_drive_strength_with(config.lambda, config.tau_d, search)?;
    Ok(Table::quantities(vec![("omega_c", Cell::Num(omega_c))]))
}

fn omega_sweep(config: &RunConfig) -> Result<Table, CliError> {
    let rows = sweep_omega(config.lambda, config.tau_d, config.omega_min, config.omega_max, config.points)?;
    let mut table = Table::new(&["omega", "tau_qsl_ratio", "blp", "pop_deficit"]);
    for r in rows {
        table.push(vec![
            Cell::Num(r.drive_strength),
            Cell::Num(r.tau_qsl_ratio),
            Cell::Num(r.blp_measure),
            Cell::Num(r.population_deficit),
        ]);
    }
    Ok(table)
}

fn window_sweep(config: &RunConfig) -> Result<Table, CliError> {
    let rows = sweep_window(
        config.lambda,
        &config.omegas,
        config.tau_d,
        config.tau_min,
        config.tau_max,
        config.points,
    )?;
    let mut table = Table::new(&["omega", "tau", "tau_qsl", "tau_qsl_ratio", "blp", "population"]);
    for r in rows {
        table.push(vec![
            Cell::Num(r.drive_strength),
            Cell::Num(r.tau_window_start.unwrap_or(0.0)),
            Cell::Num(r.tau_qsl),
            Cell::Num(r.tau_qsl_ratio),
            Cell::Num(r.blp_measure),
            Cell::Num(r.population),
        ]);
    }
    Ok(table)
}

fn validate(config: &RunConfig) -> Result<(Table, bool), CliError> {
    let grid: Vec<(f64, f64)> = VALIDATION_LAMBDAS
        .iter()
        .flat_map(|&l| VALIDATION_OMEGAS.iter().map(move |&o| (l, o)))
        .collect();
    let errors = grid
        .par_iter()
        .map(|&(lambda, omega)| {
            let params = PhysicalParams::resonant(lambda, omega)?;
            let ode = integrate_amplitude(&params, VALIDATION_SPAN, config.tol)?;
            let amp = Amplitude::new(&params);
            Ok(ode
                .times
                .iter()
                .zip(&ode.amplitude)
                .map(|(&t, c)| (amp.value(t) - c).norm())
                .fold(0.0, f64::max))
        })
        .collect::<Result<Vec<f64>, qsl_core::Error>>()?;
    let mut table = Table::new(&["lambda", "omega", "max_abs_error"]);
    for (&(lambda, omega), &err) in grid.iter().zip(&errors) {
        table.push(vec![Cell::Num(lambda), Cell::Num(omega), Cell::Num(err)]);
    }
    let passed = errors.iter().all(|&e| e < VALIDATION_THRESHOLD);
    Ok((table, passed))
}
