//! Front end of the `coopmetro` executable: configuration, job planning,
//! execution and CSV/JSON emission.

pub mod config;
pub mod figures;
pub mod output;
pub mod plan;

use std::fmt;

use coopmetro_core::scenarios::{effective_two_spin_ground_qfi, qfi_at, tradeoff_width};
use coopmetro_core::sweep::{find_region, find_scenario_region, maximize_qfi, sweep, DEFAULT_REGION_TOL};
use coopmetro_core::{Error as CoreError, QfiResult, ScenarioSpec};

pub use config::{parse_config, Cli, Command, FigureId, Flags, OutputFormat, RunConfig, UsageError};
pub use figures::{emit_figure, figure_table};
pub use output::{fmt_g12, Cell, Table};
pub use plan::{Job, Plan};

/// Output of a job plus one diagnostic per point that could not be computed.
#[derive(Debug, Clone, PartialEq)]
pub struct Report {
    pub table: Table,
    pub failures: Vec<String>,
}

impl Report {
    pub fn is_complete(&self) -> bool {
        self.failures.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UndefinedBound(pub f64);

impl fmt::Display for UndefinedBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cramér-Rao bound undefined for F_Q = {}", self.0)
    }
}

impl std::error::Error for UndefinedBound {}

/// Quantum Cramér-Rao bound `1/√(m F_Q)` on the standard deviation of an
/// unbiased estimate of `B_z` from `m` repetitions.
pub fn report_bound(f_q: f64, m: u64) -> Result<f64, UndefinedBound> {
    if !(f_q > 0.0 && f_q.is_finite()) || m == 0 {
        return Err(UndefinedBound(f_q));
    }
    Ok(1.0 / (m as f64 * f_q).sqrt())
}

fn bound_cell(f_q: f64, m: u64) -> Cell {
    report_bound(f_q, m).map_or(Cell::Empty, Cell::Num)
}

fn qfi_cells(q: &Result<QfiResult, CoreError>, m: u64) -> Vec<Cell> {
    match q {
        Ok(q) => vec![
            Cell::Num(q.value),
            Cell::from(q.method.as_str()),
            Cell::opt(q.fd_step),
            Cell::Int(m),
            bound_cell(q.value, m),
            Cell::Empty,
        ],
        Err(e) => vec![Cell::Empty, Cell::Empty, Cell::Empty, Cell::Int(m), Cell::Empty, Cell::Text(e.to_string())],
    }
}

const QFI_COLUMNS: [&str; 6] = ["qfi", "method", "fd_step", "m", "bound", "diagnostic"];

fn scenario_cells(spec: &ScenarioSpec) -> Vec<Cell> {
    vec![
        Cell::from(spec.kind.as_str()),
        Cell::Num(spec.b_z),
        Cell::Num(spec.b_x),
        Cell::Num(spec.gamma),
        Cell::Num(spec.eta),
        Cell::Num(spec.dipole),
        Cell::Num(spec.t_e),
        Cell::Int(u64::from(spec.n_spins)),
    ]
}

const SCENARIO_COLUMNS: [&str; 8] = ["kind", "b_z", "b_x", "gamma", "eta", "dipole", "t_e", "n_spins"];

/// Runs a validated job. Per-point failures are collected in the report;
/// only failures that leave no meaningful output are returned as errors.
pub fn execute(job: &Job) -> anyhow::Result<Report> {
    let mut failures = Vec::new();
    let table = match job {
        Job::Run { spec, t, m } => {
            let mut columns = SCENARIO_COLUMNS.to_vec();
            columns.push("t");
            columns.extend(QFI_COLUMNS);
            let mut table = Table::new(&columns);
            let q = qfi_at(spec, *t);
            if let Err(e) = &q {
                failures.push(format!("t = {t}: {e}"));
            }
            let mut row = scenario_cells(spec);
            row.push(Cell::Num(*t));
            row.extend(qfi_cells(&q, *m));
            table.push(row);
            table
        }
        Job::Sweep { spec, t, grid, m } => {
            let mut columns = vec![grid.axis.as_str()];
            columns.extend(QFI_COLUMNS);
            let mut table = Table::new(&columns);
            for p in sweep(spec, *t, grid) {
                if let Some(d) = &p.diagnostic {
                    failures.push(format!("{} = {}: {d}", grid.axis, p.x));
                }
                let q = p.qfi.ok_or_else(|| CoreError::NumericalFailure(p.diagnostic.clone().unwrap_or_default()));
                let mut row = vec![Cell::Num(p.x)];
                row.extend(qfi_cells(&q, *m));
                table.push(row);
            }
            table
        }
        Job::Region { spec, t, bracket, threshold } => {
            let r = find_scenario_region(spec, *t, *threshold, *bracket, DEFAULT_REGION_TOL)?;
            let mut table = Table::new(&["lower", "upper", "width", "threshold", "resolved"]);
            let (lower, upper) = if r.resolved { (Cell::Num(r.lower), Cell::Num(r.upper)) } else { (Cell::Empty, Cell::Empty) };
            table.push(vec![lower, upper, Cell::Num(r.width()), Cell::Num(r.threshold), Cell::Bool(r.resolved)]);
            table
        }
        Job::Maximize { spec, t, axis, bounds, m } => {
            let best = maximize_qfi(spec, *t, &[(*axis, bounds.0, bounds.1)])?;
            let mut table = Table::new(&[axis.as_str(), "qfi", "coarse_qfi", "m", "bound"]);
            table.push(vec![
                Cell::Num(best.argmax[0]),
                Cell::Num(best.value),
                Cell::Num(best.coarse_value),
                Cell::Int(*m),
                bound_cell(best.value, *m),
            ]);
            table
        }
        Job::Tradeoff { t, b_x } => tradeoff_table(*t, b_x)?,
        Job::Figure(id) => return Ok(figure_table(*id)),
    };
    Ok(Report { table, failures })
}

/// Peak `F_max = 1/(2B_x²)` of the effective two-spin ground-state QFI, the
/// closed-form region width, and the width located numerically on the
/// effective model with threshold `16T²`. Both widths are blank when
/// `F_max ≤ 16T²`.
fn tradeoff_table(t: f64, b_x: &[f64]) -> anyhow::Result<Table> {
    let mut table =
        Table::new(&["b_x", "t", "f_max", "width", "region_lower", "region_upper", "region_width", "in_regime"]);
    let threshold = 16.0 * t * t;
    // centred on the peak at B_z = 1, wide enough for the largest width 1/(4T)
    let half = 0.25 + 1.0 / (8.0 * t);
    for &bx in b_x {
        let f_max = 1.0 / (2.0 * bx * bx);
        let width = match tradeoff_width(f_max, t) {
            Ok(w) => Some(w),
            Err(CoreError::OutOfRegime(_)) => None,
            Err(e) => return Err(e.into()),
        };
        let region =
            find_region(|b| Ok(effective_two_spin_ground_qfi(b, bx)), threshold, (1.0 - half, 1.0 + half), DEFAULT_REGION_TOL)?;
        let (lo, hi, w) = if region.resolved {
            (Cell::Num(region.lower), Cell::Num(region.upper), Cell::Num(region.width()))
        } else {
            (Cell::Empty, Cell::Empty, Cell::Empty)
        };
        table.push(vec![
            Cell::Num(bx),
            Cell::Num(t),
            Cell::Num(f_max),
            Cell::opt(width),
            lo,
            hi,
            w,
            Cell::Bool(width.is_some()),
        ]);
    }
    Ok(table)
}
