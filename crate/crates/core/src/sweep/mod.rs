//! Parameter sweeps, threshold-region detection and QFI maximization.

mod optimize;
mod region;

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::qfi::QfiResult;
use crate::scenarios::{qfi_at, ScenarioSpec};

pub use optimize::{golden_section_max, maximize, maximize_qfi, nelder_mead_max, Maximum, COARSE_POINTS};
pub use region::{find_region, find_scenario_region, RegionResult, DEFAULT_REGION_TOL, PRESCAN_POINTS};

/// Quantity varied along a sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SweepAxis {
    BZ,
    BX,
    T,
}

impl SweepAxis {
    pub fn as_str(self) -> &'static str {
        match self {
            SweepAxis::BZ => "b_z",
            SweepAxis::BX => "b_x",
            SweepAxis::T => "t",
        }
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "b_z" | "B_z" => Ok(SweepAxis::BZ),
            "b_x" | "B_x" => Ok(SweepAxis::BX),
            "t" | "T" => Ok(SweepAxis::T),
            other => Err(Error::InvalidArgument(format!("unknown sweep axis `{other}`"))),
        }
    }
}

/// Inclusive linear grid `from, …, to` with `points ≥ 2` entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepGrid {
    pub axis: SweepAxis,
    pub from: f64,
    pub to: f64,
    pub points: usize,
}

impl SweepGrid {
    pub fn new(axis: SweepAxis, from: f64, to: f64, points: usize) -> Result<Self> {
        if !(from.is_finite() && to.is_finite() && from < to) {
            return Err(Error::InvalidArgument(format!("grid needs finite from < to, got [{from}, {to}]")));
        }
        if points < 2 {
            return Err(Error::InvalidArgument(format!("grid needs at least 2 points, got {points}")));
        }
        Ok(Self { axis, from, to, points })
    }

    pub fn value(&self, i: usize) -> f64 {
        if i + 1 == self.points {
            return self.to;
        }
        self.from + (self.to - self.from) * i as f64 / (self.points - 1) as f64
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.points).map(|i| self.value(i)).collect()
    }
}

/// One evaluated grid point. Failed points keep their diagnostic instead of
/// a value.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepPoint {
    pub x: f64,
    pub qfi: Option<QfiResult>,
    pub diagnostic: Option<String>,
}

impl SweepPoint {
    fn from_result(x: f64, r: Result<QfiResult>) -> Self {
        match r {
            Ok(q) => Self { x, qfi: Some(q), diagnostic: None },
            Err(e) => Self { x, qfi: None, diagnostic: Some(e.to_string()) },
        }
    }

    pub fn value(&self) -> Option<f64> {
        self.qfi.map(|q| q.value)
    }
}

/// Scenario and evolution time with `axis` set to `x`.
pub fn apply_axis(spec: &ScenarioSpec, t: f64, axis: SweepAxis, x: f64) -> (ScenarioSpec, f64) {
    match axis {
        SweepAxis::BZ => (spec.with_b_z(x), t),
        SweepAxis::BX => (spec.with_b_x(x), t),
        SweepAxis::T => (*spec, x),
    }
}

fn evaluate(spec: &ScenarioSpec, t: f64, axis: SweepAxis, x: f64) -> SweepPoint {
    let (s, time) = apply_axis(spec, t, axis, x);
    SweepPoint::from_result(x, qfi_at(&s, time))
}

/// QFI at every grid point, evaluated concurrently on the current rayon
/// pool. `t` is the evolution time unless the grid runs over time.
pub fn sweep(spec: &ScenarioSpec, t: f64, grid: &SweepGrid) -> Vec<SweepPoint> {
    grid.values().into_par_iter().map(|x| evaluate(spec, t, grid.axis, x)).collect()
}

/// Single-threaded [`sweep`].
pub fn sweep_serial(spec: &ScenarioSpec, t: f64, grid: &SweepGrid) -> Vec<SweepPoint> {
    grid.values().into_iter().map(|x| evaluate(spec, t, grid.axis, x)).collect()
}
