//! Validation of a merged [`RunConfig`] into a concrete job.

use std::path::PathBuf;

use coopmetro_core::scenarios::heisenberg_limit;
use coopmetro_core::{ScenarioKind, ScenarioSpec, SweepAxis, SweepGrid};

use crate::config::{usage, Command, FigureId, OutputFormat, RunConfig, UsageError};

#[derive(Debug, Clone, PartialEq)]
pub enum Job {
    Run { spec: ScenarioSpec, t: f64, m: u64 },
    Sweep { spec: ScenarioSpec, t: f64, grid: SweepGrid, m: u64 },
    Region { spec: ScenarioSpec, t: f64, bracket: (f64, f64), threshold: f64 },
    Maximize { spec: ScenarioSpec, t: f64, axis: SweepAxis, bounds: (f64, f64), m: u64 },
    Tradeoff { t: f64, b_x: Vec<f64> },
    Figure(FigureId),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Plan {
    pub job: Job,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

/// Scenario keys a kind requires, and those it accepts optionally.
fn scenario_keys(kind: ScenarioKind) -> (&'static [&'static str], &'static [&'static str]) {
    use ScenarioKind::*;
    match kind {
        StdSpont => (&["b_z", "gamma"], &["n_spins"]),
        StdDeph => (&["b_z", "eta"], &["n_spins"]),
        CoopSpont => (&["b_z", "b_x", "gamma"], &["n_spins"]),
        CoopDeph => (&["b_z", "b_x", "eta"], &["n_spins"]),
        CoopThermal => (&["b_z", "b_x", "dipole"], &["t_e", "n_spins"]),
        TwoSpinCoop => (&["b_z", "b_x", "dipole"], &["n_spins"]),
        UnitaryBaseline => (&["b_z"], &["n_spins"]),
    }
}

struct Keys {
    required: Vec<&'static str>,
    allowed: Vec<&'static str>,
    context: String,
}

impl Keys {
    fn new(context: String) -> Self {
        Self { required: Vec::new(), allowed: vec!["command", "out", "format"], context }
    }

    fn require(&mut self, keys: &[&'static str]) {
        self.required.extend_from_slice(keys);
        self.allowed.extend_from_slice(keys);
    }

    fn allow(&mut self, keys: &[&'static str]) {
        self.allowed.extend_from_slice(keys);
    }

    /// `key` is supplied by a grid or bracket instead of the config.
    fn supplied(&mut self, key: &str) {
        self.required.retain(|k| *k != key);
    }

    fn check(&self, cfg: &RunConfig) -> Result<(), UsageError> {
        for key in cfg.present_keys() {
            if !self.allowed.contains(&key) {
                return usage(format!("key `{key}` does not apply to {}", self.context));
            }
        }
        let present = cfg.present_keys();
        for key in &self.required {
            if !present.contains(key) {
                return usage(format!("missing required key `{key}` for {}", self.context));
            }
        }
        Ok(())
    }
}

fn finite(key: &str, v: f64) -> Result<f64, UsageError> {
    if v.is_finite() {
        Ok(v)
    } else {
        usage(format!("key `{key}` must be finite, got {v}"))
    }
}

fn time(v: f64) -> Result<f64, UsageError> {
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        usage(format!("key `t` must be finite and ≥ 0, got {v}"))
    }
}

fn repetitions(m: Option<u64>) -> Result<u64, UsageError> {
    match m {
        Some(0) => usage("key `m` must be ≥ 1"),
        Some(m) => Ok(m),
        None => Ok(1),
    }
}

fn bracket(cfg: &RunConfig) -> Result<(f64, f64), UsageError> {
    let (from, to) = (finite("from", cfg.from.unwrap())?, finite("to", cfg.to.unwrap())?);
    if from < to {
        Ok((from, to))
    } else {
        usage(format!("key `from` ({from}) must be below `to` ({to})"))
    }
}

/// Scenario built from the config; fields swept by `axis` get a
/// placeholder so the remaining fields can be validated up front.
fn build_spec(cfg: &RunConfig, kind: ScenarioKind, axis: Option<SweepAxis>) -> Result<ScenarioSpec, UsageError> {
    let placeholder = |a: SweepAxis| if axis == Some(a) { Some(1.0) } else { None };
    let b_z = placeholder(SweepAxis::BZ).or(cfg.b_z).unwrap_or(0.0);
    let b_x = placeholder(SweepAxis::BX).or(cfg.b_x).unwrap_or(0.0);
    let mut spec = ScenarioSpec::new(kind, b_z)
        .with_b_x(b_x)
        .with_gamma(cfg.gamma.unwrap_or(0.0))
        .with_eta(cfg.eta.unwrap_or(0.0))
        .with_dipole(cfg.dipole.unwrap_or(0.0))
        .with_t_e(cfg.t_e.unwrap_or(0.0));
    if let Some(n) = cfg.n_spins {
        spec = spec.with_spins(n);
    }
    spec.validate().map_err(|e| UsageError(e.to_string()))?;
    // restore the configured values of swept fields
    spec.b_z = cfg.b_z.unwrap_or(b_z);
    spec.b_x = cfg.b_x.unwrap_or(b_x);
    Ok(spec)
}

impl Plan {
    pub fn from_config(cfg: &RunConfig) -> Result<Plan, UsageError> {
        let Some(command) = cfg.command else {
            return usage("missing required key `command`");
        };
        let job = match command {
            Command::Figure => {
                let mut keys = Keys::new("command figure".into());
                keys.require(&["figure"]);
                keys.check(cfg)?;
                Job::Figure(cfg.figure.unwrap())
            }
            Command::Tradeoff => tradeoff_job(cfg)?,
            _ => scenario_job(command, cfg)?,
        };
        Ok(Plan { job, out: cfg.out.clone(), format: cfg.format.unwrap_or_default() })
    }
}

fn tradeoff_job(cfg: &RunConfig) -> Result<Job, UsageError> {
    let mut keys = Keys::new("command tradeoff".into());
    keys.require(&["t"]);
    if cfg.b_x.is_some() {
        keys.require(&["b_x"]);
    } else {
        keys.require(&["axis", "from", "to", "points"]);
    }
    keys.check(cfg)?;
    let t = time(cfg.t.unwrap())?;
    if t == 0.0 {
        return usage("key `t` must be positive for tradeoff");
    }
    let b_x = match cfg.b_x {
        Some(b) => vec![finite("b_x", b)?],
        None => {
            if cfg.axis != Some(SweepAxis::BX) {
                return usage("tradeoff grids run over axis b_x");
            }
            let (from, to) = bracket(cfg)?;
            SweepGrid::new(SweepAxis::BX, from, to, cfg.points.unwrap())
                .map_err(|e| UsageError(e.to_string()))?
                .values()
        }
    };
    if let Some(b) = b_x.iter().find(|b| b.is_nan() || **b <= 0.0) {
        return usage(format!("key `b_x` must be positive for tradeoff, got {b}"));
    }
    Ok(Job::Tradeoff { t, b_x })
}

fn scenario_job(command: Command, cfg: &RunConfig) -> Result<Job, UsageError> {
    let Some(kind) = cfg.kind else {
        return usage(format!("missing required key `kind` for command {command}"));
    };
    let (req, opt) = scenario_keys(kind);
    let mut keys = Keys::new(format!("command {command} with kind {kind}"));
    keys.require(&["kind"]);
    keys.require(req);
    keys.allow(opt);
    keys.require(&["t"]);

    let axis = match command {
        Command::Run => {
            keys.allow(&["m"]);
            None
        }
        Command::Sweep => {
            keys.require(&["axis", "from", "to", "points"]);
            keys.allow(&["m"]);
            cfg.axis
        }
        Command::Region => {
            keys.require(&["from", "to"]);
            keys.allow(&["axis", "threshold"]);
            if cfg.axis.is_some_and(|a| a != SweepAxis::BZ) {
                return usage("regions are located over axis b_z");
            }
            Some(SweepAxis::BZ)
        }
        Command::Maximize => {
            keys.require(&["axis", "from", "to"]);
            keys.allow(&["m"]);
            cfg.axis
        }
        Command::Tradeoff | Command::Figure => unreachable!("handled separately"),
    };
    if let Some(a) = axis {
        let key = a.as_str();
        if a != SweepAxis::T && !req.contains(&key) {
            return usage(format!("axis {a} does not apply to kind {kind}"));
        }
        keys.supplied(key);
    }
    keys.check(cfg)?;

    let spec = build_spec(cfg, kind, axis)?;
    let t = match cfg.t {
        Some(t) => time(t)?,
        None => 0.0,
    };
    Ok(match command {
        Command::Run => Job::Run { spec, t, m: repetitions(cfg.m)? },
        Command::Sweep => {
            let (from, to) = bracket(cfg)?;
            let grid = SweepGrid::new(axis.unwrap(), from, to, cfg.points.unwrap())
                .map_err(|e| UsageError(e.to_string()))?;
            Job::Sweep { spec, t, grid, m: repetitions(cfg.m)? }
        }
        Command::Region => {
            let threshold = match cfg.threshold {
                Some(th) if th.is_finite() && th > 0.0 => th,
                Some(th) => return usage(format!("key `threshold` must be positive, got {th}")),
                None => heisenberg_limit(u32::from(spec.n_spins), t),
            };
            if threshold <= 0.0 {
                return usage("default threshold 4n²t² vanishes at t = 0; set `threshold`");
            }
            Job::Region { spec, t, bracket: bracket(cfg)?, threshold }
        }
        Command::Maximize => {
            Job::Maximize { spec, t, axis: axis.unwrap(), bounds: bracket(cfg)?, m: repetitions(cfg.m)? }
        }
        Command::Tradeoff | Command::Figure => unreachable!("handled separately"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(json: &str) -> RunConfig {
        RunConfig::from_json_str(json).unwrap()
    }

    #[test]
    fn documented_run() {
        let plan = Plan::from_config(&cfg(
            r#"{"command":"run","kind":"coop-spont","b_z":0.1,"b_x":0.1,"gamma":0.5,"t":1.0}"#,
        ))
        .unwrap();
        let expected = ScenarioSpec::new(ScenarioKind::CoopSpont, 0.1).with_b_x(0.1).with_gamma(0.5);
        assert_eq!(plan.job, Job::Run { spec: expected, t: 1.0, m: 1 });
        assert_eq!(plan.format, OutputFormat::Csv);
    }

    #[test]
    fn missing_field_is_named() {
        let e = Plan::from_config(&cfg(r#"{"command":"run","kind":"coop-spont","b_x":0.1,"gamma":0.5,"t":1}"#))
            .unwrap_err();
        assert!(e.0.contains("`b_z`"), "{e}");
        let e = Plan::from_config(&cfg(r#"{"kind":"std-deph"}"#)).unwrap_err();
        assert!(e.0.contains("`command`"), "{e}");
    }

    #[test]
    fn irrelevant_field_is_named() {
        let e = Plan::from_config(&cfg(r#"{"command":"run","kind":"std-deph","b_z":0.1,"eta":0.5,"gamma":1,"t":1}"#))
            .unwrap_err();
        assert!(e.0.contains("`gamma`"), "{e}");
    }

    #[test]
    fn sweep_axis_supplies_its_field() {
        let plan = Plan::from_config(&cfg(
            r#"{"command":"sweep","kind":"two-spin-coop","b_x":0.1,"dipole":10,"t":1,"axis":"b_z","from":0.5,"to":1.5,"points":11}"#,
        ))
        .unwrap();
        let Job::Sweep { grid, .. } = plan.job else { panic!() };
        assert_eq!(grid.points, 11);
        let e = Plan::from_config(&cfg(
            r#"{"command":"sweep","kind":"std-deph","b_z":0.1,"eta":0.5,"t":1,"axis":"b_x","from":0,"to":1,"points":3}"#,
        ))
        .unwrap_err();
        assert!(e.0.contains("axis b_x"), "{e}");
    }

    #[test]
    fn region_threshold_defaults_to_heisenberg_limit() {
        let plan = Plan::from_config(&cfg(
            r#"{"command":"region","kind":"two-spin-coop","b_x":0.1,"dipole":10,"t":1,"from":0.5,"to":1.5}"#,
        ))
        .unwrap();
        let Job::Region { threshold, bracket, .. } = plan.job else { panic!() };
        assert_eq!(threshold, 16.0);
        assert_eq!(bracket, (0.5, 1.5));
    }

    #[test]
    fn tradeoff_forms() {
        let plan = Plan::from_config(&cfg(r#"{"command":"tradeoff","b_x":0.1,"t":1}"#)).unwrap();
        assert_eq!(plan.job, Job::Tradeoff { t: 1.0, b_x: vec![0.1] });
        let plan =
            Plan::from_config(&cfg(r#"{"command":"tradeoff","axis":"b_x","from":0.05,"to":0.2,"points":4,"t":1}"#))
                .unwrap();
        let Job::Tradeoff { b_x, .. } = plan.job else { panic!() };
        assert_eq!(b_x.len(), 4);
        assert!(Plan::from_config(&cfg(r#"{"command":"tradeoff","b_x":0.1,"t":1,"kind":"std-deph"}"#)).is_err());
        assert!(Plan::from_config(&cfg(r#"{"command":"tradeoff","b_x":-0.1,"t":1}"#)).is_err());
    }

    #[test]
    fn invalid_values_rejected() {
        for json in [
            r#"{"command":"run","kind":"coop-spont","b_z":0,"b_x":0.1,"gamma":0.5,"t":1}"#,
            r#"{"command":"run","kind":"std-spont","b_z":0.1,"gamma":-0.5,"t":1}"#,
            r#"{"command":"run","kind":"std-spont","b_z":0.1,"gamma":0.5,"t":-1}"#,
            r#"{"command":"run","kind":"std-spont","b_z":0.1,"gamma":0.5,"t":1,"m":0}"#,
            r#"{"command":"sweep","kind":"std-spont","b_z":0.1,"gamma":0.5,"axis":"t","from":1,"to":0,"points":3}"#,
            r#"{"command":"sweep","kind":"std-spont","b_z":0.1,"gamma":0.5,"axis":"t","from":0,"to":1,"points":1}"#,
            r#"{"command":"region","kind":"std-spont","b_z":0.1,"gamma":0.5,"t":1,"from":0,"to":1,"axis":"t"}"#,
            r#"{"command":"figure"}"#,
        ] {
            assert!(Plan::from_config(&cfg(json)).is_err(), "{json}");
        }
    }
}
