//! Data behind each figure on a fixed grid.
//!
//! | id    | x-axis                   | columns                                              |
//! |-------|--------------------------|------------------------------------------------------|
//! | fig2  | t = 0.05, 0.10, …, 5     | coop/std spontaneous emission, γ = 0.5               |
//! | fig3  | t = 0.05, 0.10, …, 5     | coop/std dephasing, η = 0.5                          |
//! | fig4  | t = 0.05, 0.10, …, 5     | coop thermal bath at T_e = 0, std decay at rate γ₀   |
//! | fig5  | B_z = 0.5, 0.505, …, 1.5 | two spins at t = 1, \|d\| = 10                       |
//! | figA1 | B_z = 0.5, 0.505, …, 1.5 | exact and effective two-spin ground-state QFI        |
//!
//! All fields not on the x-axis use `B_x = 0.1`; the single-spin figures
//! use `B_z = 0.1` except fig4 (`B_z = 0.3`, `|d| = 2`).

use std::path::Path;

use coopmetro_core::scenarios::{
    effective_two_spin_ground_qfi, exact_two_spin_ground_qfi, heisenberg_limit, qfi_at,
    standard_limit_formulas, StandardNoise, ThermalRates,
};
use coopmetro_core::{Result as CoreResult, ScenarioKind, ScenarioSpec};
use rayon::prelude::*;

use crate::config::{FigureId, OutputFormat};
use crate::output::{Cell, Table};
use crate::Report;

const T_POINTS: usize = 100;
const B_Z_POINTS: usize = 201;

/// `t_i = (i + 1)/20`.
pub fn time_grid() -> Vec<f64> {
    (0..T_POINTS).map(|i| (i + 1) as f64 / 20.0).collect()
}

/// `B_z,i = (100 + i)/200`.
pub fn field_grid() -> Vec<f64> {
    (0..B_Z_POINTS).map(|i| (100 + i) as f64 / 200.0).collect()
}

fn cell(v: CoreResult<f64>, label: &str, x: f64, failures: &mut Vec<String>) -> Cell {
    match v {
        Ok(v) => Cell::Num(v),
        Err(e) => {
            failures.push(format!("{label} at {x}: {e}"));
            Cell::Empty
        }
    }
}

fn time_figure(coop: ScenarioSpec, std: ScenarioSpec, noise: StandardNoise, rate: f64) -> Report {
    let mut table = Table::new(&["t", "f_coop", "f_std_numeric", "f_std_formula", "f_heisenberg"]);
    let mut failures = Vec::new();
    let values: Vec<_> = time_grid()
        .into_par_iter()
        .map(|t| {
            let c = qfi_at(&coop, t).map(|q| q.value);
            let s = qfi_at(&std, t).map(|q| q.value);
            (t, c, s)
        })
        .collect();
    for (t, c, s) in values {
        let row = vec![
            Cell::Num(t),
            cell(c, "f_coop", t, &mut failures),
            cell(s, "f_std_numeric", t, &mut failures),
            cell(standard_limit_formulas(noise, rate, t), "f_std_formula", t, &mut failures),
            Cell::Num(heisenberg_limit(1, t)),
        ];
        table.push(row);
    }
    Report { table, failures }
}

fn fig5() -> Report {
    let spec = ScenarioSpec::new(ScenarioKind::TwoSpinCoop, 1.0).with_b_x(0.1).with_dipole(10.0);
    let t = 1.0;
    let mut table = Table::new(&["b_z", "f_coop", "f_heisenberg"]);
    let mut failures = Vec::new();
    let values: Vec<_> = field_grid()
        .into_par_iter()
        .map(|b| (b, qfi_at(&spec.with_b_z(b), t).map(|q| q.value)))
        .collect();
    for (b, f) in values {
        table.push(vec![Cell::Num(b), cell(f, "f_coop", b, &mut failures), Cell::Num(heisenberg_limit(2, t))]);
    }
    Report { table, failures }
}

fn fig_a1() -> Report {
    let b_x = 0.1;
    let mut table = Table::new(&["b_z", "f_ground_exact", "f_ground_effective"]);
    let mut failures = Vec::new();
    let values: Vec<_> =
        field_grid().into_par_iter().map(|b| (b, exact_two_spin_ground_qfi(b, b_x))).collect();
    for (b, exact) in values {
        table.push(vec![
            Cell::Num(b),
            cell(exact, "f_ground_exact", b, &mut failures),
            Cell::Num(effective_two_spin_ground_qfi(b, b_x)),
        ]);
    }
    Report { table, failures }
}

/// Computes the table for `id`.
pub fn figure_table(id: FigureId) -> Report {
    use ScenarioKind::*;
    match id {
        FigureId::Fig2 => time_figure(
            ScenarioSpec::new(CoopSpont, 0.1).with_b_x(0.1).with_gamma(0.5),
            ScenarioSpec::new(StdSpont, 0.1).with_gamma(0.5),
            StandardNoise::Spont,
            0.5,
        ),
        FigureId::Fig3 => time_figure(
            ScenarioSpec::new(CoopDeph, 0.1).with_b_x(0.1).with_eta(0.5),
            ScenarioSpec::new(StdDeph, 0.1).with_eta(0.5),
            StandardNoise::Deph,
            0.5,
        ),
        FigureId::Fig4 => {
            let (b_z, b_x, dipole) = (0.3, 0.1, 2.0);
            // the standard scheme decays at the zero-temperature rate of the
            // cooperative one, without the control field
            let gamma0 = ThermalRates::new(b_z, b_x, dipole, 0.0).gamma0;
            time_figure(
                ScenarioSpec::new(CoopThermal, b_z).with_b_x(b_x).with_dipole(dipole),
                ScenarioSpec::new(StdSpont, b_z).with_gamma(gamma0),
                StandardNoise::Spont,
                gamma0,
            )
        }
        FigureId::Fig5 => fig5(),
        FigureId::FigA1 => fig_a1(),
    }
}

/// Computes the table for `id` and writes it as CSV to `out`.
pub fn emit_figure(id: FigureId, out: &Path) -> anyhow::Result<Report> {
    let report = figure_table(id);
    report.table.write(OutputFormat::Csv, Some(out))?;
    Ok(report)
}
