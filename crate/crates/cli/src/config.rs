//! Run configuration: JSON files, command-line flags, and the merge between
//! them.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use coopmetro_core::{ScenarioKind, SweepAxis};
use serde::{Deserialize, Serialize};

/// Invalid or inconsistent input, reported before any computation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub(crate) fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Run,
    Sweep,
    Region,
    Maximize,
    Tradeoff,
    Figure,
}

impl Command {
    pub fn as_str(self) -> &'static str {
        match self {
            Command::Run => "run",
            Command::Sweep => "sweep",
            Command::Region => "region",
            Command::Maximize => "maximize",
            Command::Tradeoff => "tradeoff",
            Command::Figure => "figure",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum FigureId {
    #[serde(rename = "fig2")]
    Fig2,
    #[serde(rename = "fig3")]
    Fig3,
    #[serde(rename = "fig4")]
    Fig4,
    #[serde(rename = "fig5")]
    Fig5,
    #[serde(rename = "figA1")]
    FigA1,
}

impl FigureId {
    pub const ALL: [FigureId; 5] = [FigureId::Fig2, FigureId::Fig3, FigureId::Fig4, FigureId::Fig5, FigureId::FigA1];

    pub fn as_str(self) -> &'static str {
        match self {
            FigureId::Fig2 => "fig2",
            FigureId::Fig3 => "fig3",
            FigureId::Fig4 => "fig4",
            FigureId::Fig5 => "fig5",
            FigureId::FigA1 => "figA1",
        }
    }
}

impl fmt::Display for FigureId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for FigureId {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        FigureId::ALL
            .into_iter()
            .find(|f| f.as_str() == s)
            .ok_or_else(|| UsageError(format!("unknown figure `{s}` (expected fig2, fig3, fig4, fig5 or figA1)")))
    }
}

/// Serde adapter for optional values carried as their string tags.
mod tag {
    use std::fmt::Display;
    use std::str::FromStr;

    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<T: Display, S: Serializer>(v: &Option<T>, s: S) -> Result<S::Ok, S::Error> {
        match v {
            Some(v) => s.collect_str(v),
            None => s.serialize_none(),
        }
    }

    pub fn deserialize<'de, T, D>(d: D) -> Result<Option<T>, D::Error>
    where
        T: FromStr,
        T::Err: Display,
        D: Deserializer<'de>,
    {
        Option::<String>::deserialize(d)?
            .map(|s| s.parse().map_err(de::Error::custom))
            .transpose()
    }
}

/// Flat run configuration. Every key is optional here; which keys are
/// required or allowed depends on the command and scenario kind and is
/// checked by [`crate::plan::Plan::from_config`].
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default, with = "tag", skip_serializing_if = "Option::is_none")]
    pub kind: Option<ScenarioKind>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_z: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub b_x: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub eta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dipole: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_e: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n_spins: Option<u8>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Number of repetitions in the Cramér-Rao bound.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    #[serde(default, with = "tag", skip_serializing_if = "Option::is_none")]
    pub axis: Option<SweepAxis>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub from: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub to: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threshold: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub figure: Option<FigureId>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
}

impl RunConfig {
    pub fn from_json_str(text: &str) -> Result<Self, UsageError> {
        serde_json::from_str(text).map_err(|e| UsageError(format!("invalid config: {e}")))
    }

    pub fn from_path(path: &Path) -> Result<Self, UsageError> {
        let text = fs::read_to_string(path)
            .map_err(|e| UsageError(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json_str(&text).map_err(|e| UsageError(format!("{}: {}", path.display(), e.0)))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Values set in `overrides` replace those in `self`.
    pub fn merge(self, overrides: RunConfig) -> RunConfig {
        RunConfig {
            command: overrides.command.or(self.command),
            kind: overrides.kind.or(self.kind),
            b_z: overrides.b_z.or(self.b_z),
            b_x: overrides.b_x.or(self.b_x),
            gamma: overrides.gamma.or(self.gamma),
            eta: overrides.eta.or(self.eta),
            dipole: overrides.dipole.or(self.dipole),
            t_e: overrides.t_e.or(self.t_e),
            n_spins: overrides.n_spins.or(self.n_spins),
            t: overrides.t.or(self.t),
            m: overrides.m.or(self.m),
            axis: overrides.axis.or(self.axis),
            from: overrides.from.or(self.from),
            to: overrides.to.or(self.to),
            points: overrides.points.or(self.points),
            threshold: overrides.threshold.or(self.threshold),
            figure: overrides.figure.or(self.figure),
            out: overrides.out.or(self.out),
            format: overrides.format.or(self.format),
        }
    }

    /// Names of the keys that carry a value.
    pub fn present_keys(&self) -> Vec<&'static str> {
        let flags = [
            ("command", self.command.is_some()),
            ("kind", self.kind.is_some()),
            ("b_z", self.b_z.is_some()),
            ("b_x", self.b_x.is_some()),
            ("gamma", self.gamma.is_some()),
            ("eta", self.eta.is_some()),
            ("dipole", self.dipole.is_some()),
            ("t_e", self.t_e.is_some()),
            ("n_spins", self.n_spins.is_some()),
            ("t", self.t.is_some()),
            ("m", self.m.is_some()),
            ("axis", self.axis.is_some()),
            ("from", self.from.is_some()),
            ("to", self.to.is_some()),
            ("points", self.points.is_some()),
            ("threshold", self.threshold.is_some()),
            ("figure", self.figure.is_some()),
            ("out", self.out.is_some()),
            ("format", self.format.is_some()),
        ];
        flags.into_iter().filter(|&(_, set)| set).map(|(k, _)| k).collect()
    }
}

fn parse_tag<T>(s: &str) -> Result<T, String>
where
    T: FromStr,
    T::Err: fmt::Display,
{
    s.parse().map_err(|e: T::Err| e.to_string())
}

/// Flags shared by every subcommand. Each overrides the config-file key of
/// the same name.
#[derive(Debug, Clone, Default, Args)]
pub struct Flags {
    /// JSON config file with the same keys as the flags.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<OutputFormat>,
    /// Scenario kind: std-spont, std-deph, coop-spont, coop-deph,
    /// coop-thermal, two-spin-coop or unitary-baseline.
    #[arg(long, value_parser = parse_tag::<ScenarioKind>)]
    pub kind: Option<ScenarioKind>,
    #[arg(long = "b_z", allow_negative_numbers = true)]
    pub b_z: Option<f64>,
    #[arg(long = "b_x", allow_negative_numbers = true)]
    pub b_x: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub gamma: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub eta: Option<f64>,
    /// Dipole moment magnitude |d|.
    #[arg(long, allow_negative_numbers = true)]
    pub dipole: Option<f64>,
    /// Bath temperature.
    #[arg(long = "t_e", allow_negative_numbers = true)]
    pub t_e: Option<f64>,
    #[arg(long = "n_spins")]
    pub n_spins: Option<u8>,
    /// Evolution time.
    #[arg(long, allow_negative_numbers = true)]
    pub t: Option<f64>,
    /// Repetitions in the Cramér-Rao bound 1/√(m F_Q).
    #[arg(long)]
    pub m: Option<u64>,
    /// Grid or search axis: b_z, b_x or t.
    #[arg(long, value_parser = parse_tag::<SweepAxis>)]
    pub axis: Option<SweepAxis>,
    #[arg(long, allow_negative_numbers = true)]
    pub from: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub to: Option<f64>,
    #[arg(long)]
    pub points: Option<usize>,
    /// QFI threshold for `region` (default 4n²t²).
    #[arg(long, allow_negative_numbers = true)]
    pub threshold: Option<f64>,
    #[arg(long, value_parser = parse_tag::<FigureId>)]
    pub figure: Option<FigureId>,
}

impl From<&Flags> for RunConfig {
    fn from(f: &Flags) -> Self {
        RunConfig {
            command: None,
            kind: f.kind,
            b_z: f.b_z,
            b_x: f.b_x,
            gamma: f.gamma,
            eta: f.eta,
            dipole: f.dipole,
            t_e: f.t_e,
            n_spins: f.n_spins,
            t: f.t,
            m: f.m,
            axis: f.axis,
            from: f.from,
            to: f.to,
            points: f.points,
            threshold: f.threshold,
            figure: f.figure,
            out: f.out.clone(),
            format: f.format,
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "coopmetro", version, about = "Cooperative control and noise quantum metrology")]
#[command(args_conflicts_with_subcommands = true)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Option<Sub>,
    /// Without a subcommand the config file must name the command.
    #[command(flatten)]
    pub flags: Flags,
}

#[derive(Debug, Subcommand)]
pub enum Sub {
    /// QFI of one scenario at one time.
    Run(Flags),
    /// QFI over a linear grid in b_z, b_x or t.
    Sweep(Flags),
    /// B_z interval where the QFI exceeds a threshold.
    Region(Flags),
    /// Maximize the QFI over b_x, t or b_z.
    Maximize(Flags),
    /// Peak QFI versus surpassing-region width of the two-spin model.
    Tradeoff(Flags),
    /// Regenerate the data behind a figure.
    Figure(Flags),
}

impl Cli {
    pub fn into_parts(self) -> (Option<Command>, Flags) {
        match self.command {
            None => (None, self.flags),
            Some(Sub::Run(f)) => (Some(Command::Run), f),
            Some(Sub::Sweep(f)) => (Some(Command::Sweep), f),
            Some(Sub::Region(f)) => (Some(Command::Region), f),
            Some(Sub::Maximize(f)) => (Some(Command::Maximize), f),
            Some(Sub::Tradeoff(f)) => (Some(Command::Tradeoff), f),
            Some(Sub::Figure(f)) => (Some(Command::Figure), f),
        }
    }
}

/// Config file (if any) overridden by flags, then by the subcommand.
pub fn parse_config(command: Option<Command>, flags: &Flags) -> Result<RunConfig, UsageError> {
    let base = match &flags.config {
        Some(path) => RunConfig::from_path(path)?,
        None => RunConfig::default(),
    };
    let mut merged = base.merge(RunConfig::from(flags));
    if command.is_some() {
        merged.command = command;
    }
    Ok(merged)
}
