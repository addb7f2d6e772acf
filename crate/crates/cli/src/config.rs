//! Run configuration from `key=value` text, presets and command-line flags.
//!
//! Resolution order: preset, then config-file keys, then flags. Later values
//! win. Angles accept multiples of `pi` (`pi/2`, `3pi/2`, `-0.5*pi`).

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use phasechi::{DriveParams, PhaseConvention};
use serde::Serialize;

use crate::presets::{self, Preset};

pub const DEFAULT_NU_P: f64 = phasechi::group_velocity::DEFAULT_NU_P;
pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_ADJUDICATION_POINTS: usize = 100;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Location {
    Line(usize),
    Flag(String),
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Location::Line(n) => write!(f, "line {n}"),
            Location::Flag(name) => write!(f, "flag --{name}"),
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("parse error at {location}: {message}")]
    Parse { location: Location, message: String },
    #[error("invalid configuration: {0}")]
    Validation(String),
}

type Result<T> = std::result::Result<T, ConfigError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepKind {
    Phi,
    Delta,
    Kx,
}

impl SweepKind {
    pub fn label(self) -> &'static str {
        match self {
            SweepKind::Phi => "phi",
            SweepKind::Delta => "delta",
            SweepKind::Kx => "kx",
        }
    }
}

impl FromStr for SweepKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "phi" => Ok(SweepKind::Phi),
            "delta" => Ok(SweepKind::Delta),
            "kx" => Ok(SweepKind::Kx),
            other => Err(format!("unknown sweep kind `{other}` (expected phi, delta or kx)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub kind: SweepKind,
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl SweepSpec {
    pub const fn new(kind: SweepKind, start: f64, stop: f64, count: usize) -> Self {
        Self { kind, start, stop, count }
    }

    pub fn grid(&self) -> Vec<f64> {
        phasechi::group_velocity::linspace(self.start, self.stop, self.count)
    }

    pub fn validate(&self) -> Result<()> {
        if self.count < 2 {
            return Err(ConfigError::Validation(format!("sweep count must be at least 2, got {}", self.count)));
        }
        if !(self.start < self.stop) || !self.start.is_finite() || !self.stop.is_finite() {
            return Err(ConfigError::Validation(format!(
                "sweep start must be below stop, got {}..{}",
                self.start, self.stop
            )));
        }
        if self.kind == SweepKind::Kx && ((self.start + PI).abs() > 1e-9 || (self.stop - PI).abs() > 1e-9) {
            return Err(ConfigError::Validation("kx sweeps cover exactly one period, -pi:pi".into()));
        }
        Ok(())
    }
}

impl fmt::Display for SweepSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}:{}:{}", self.kind.label(), self.start, self.stop, self.count)
    }
}

fn parse_sweep(text: &str) -> std::result::Result<SweepSpec, String> {
    let fields: Vec<&str> = text.split(':').collect();
    let [kind, start, stop, count] = fields.as_slice() else {
        return Err(format!("sweep `{text}` must look like kind:start:stop:count"));
    };
    Ok(SweepSpec {
        kind: kind.trim().parse()?,
        start: parse_real(start)?,
        stop: parse_real(stop)?,
        count: count.trim().parse().map_err(|_| format!("sweep count `{count}` is not a non-negative integer"))?,
    })
}

/// Parses a real number or a rational multiple of `pi`.
pub fn parse_real(text: &str) -> std::result::Result<f64, String> {
    let s = text.trim();
    let bad = || format!("`{text}` is not a number");
    if s.is_empty() {
        return Err(bad());
    }
    if let Ok(v) = s.parse::<f64>() {
        return if v.is_finite() { Ok(v) } else { Err(bad()) };
    }
    let (numerator, denominator) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim().parse::<f64>().map_err(|_| bad())?),
        None => (s, 1.0),
    };
    let (sign, body) = match numerator.strip_prefix('-') {
        Some(rest) => (-1.0, rest),
        None => (1.0, numerator.strip_prefix('+').unwrap_or(numerator)),
    };
    let coefficient = body.strip_suffix("pi").ok_or_else(bad)?.trim_end_matches('*').trim();
    let coefficient = if coefficient.is_empty() { 1.0 } else { coefficient.parse::<f64>().map_err(|_| bad())? };
    let v = sign * coefficient * PI / denominator;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(bad())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub location: Location,
}

/// Splits config text into entries. A line may carry several
/// whitespace-separated `key=value` pairs; `#` starts a comment.
pub fn parse_entries(text: &str) -> Result<Vec<Entry>> {
    let mut entries = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or_default();
        for token in line.split_whitespace() {
            let location = Location::Line(idx + 1);
            let Some((key, value)) = token.split_once('=') else {
                return Err(ConfigError::Parse { location, message: format!("expected key=value, found `{token}`") });
            };
            if key.is_empty() || value.is_empty() {
                return Err(ConfigError::Parse { location, message: format!("empty key or value in `{token}`") });
            }
            entries.push(Entry { key: key.to_string(), value: value.to_string(), location });
        }
    }
    Ok(entries)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub params: DriveParams,
    pub convention: PhaseConvention,
    pub sweep: Option<SweepSpec>,
    pub nu_p: f64,
    pub out: PathBuf,
    pub preset: Option<String>,
    pub seed: u64,
    pub points: usize,
    /// Physical rate the dimensionless numbers are measured in.
    pub rate_unit: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            params: DriveParams::default(),
            convention: PhaseConvention::default(),
            sweep: None,
            nu_p: DEFAULT_NU_P,
            out: PathBuf::from("out"),
            preset: None,
            seed: DEFAULT_SEED,
            points: DEFAULT_ADJUDICATION_POINTS,
            rate_unit: "gamma".into(),
        }
    }
}

impl RunConfig {
    pub fn from_preset(preset: &Preset) -> Self {
        Self {
            params: preset.params,
            convention: preset.convention,
            sweep: preset.sweep,
            nu_p: preset.nu_p,
            preset: Some(preset.name.clone()),
            rate_unit: preset.rate_unit.to_string(),
            ..Self::default()
        }
    }

    /// Builds a configuration from file entries followed by flag entries.
    /// A `preset` key in either source selects the base; the flag wins.
    pub fn resolve(file: &[Entry], flags: &[Entry]) -> Result<Self> {
        let is_preset = |e: &&Entry| e.key == "preset";
        let preset_entry = flags.iter().rev().find(is_preset).or_else(|| file.iter().rev().find(is_preset));
        let mut config = match preset_entry {
            Some(e) => {
                let preset = presets::lookup(&e.value).ok_or_else(|| ConfigError::Parse {
                    location: e.location.clone(),
                    message: format!("unknown preset `{}`", e.value),
                })?;
                Self::from_preset(&preset)
            }
            None => Self::default(),
        };
        for entry in file.iter().chain(flags).filter(|e| e.key != "preset") {
            config.apply(entry)?;
        }
        config.validate()?;
        Ok(config)
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        Self::resolve(&parse_entries(text)?, &[])
    }

    pub fn apply(&mut self, entry: &Entry) -> Result<()> {
        let fail = |message: String| ConfigError::Parse { location: entry.location.clone(), message };
        let real = || parse_real(&entry.value).map_err(fail);
        let p = &mut self.params;
        match entry.key.as_str() {
            "omega1" => p.omega1 = real()?,
            "omega2" => p.omega2 = real()?,
            "omega3" => p.omega3 = real()?,
            "phi" => p.phi = real()?,
            "gamma1" => p.gamma1 = real()?,
            "gamma2" => p.gamma2 = real()?,
            "delta" => p.delta = real()?,
            "prefactor" => p.prefactor = real()?,
            "nu_p" => self.nu_p = real()?,
            "convention" => self.convention = entry.value.parse().map_err(|e: String| fail(e))?,
            "sweep" => self.sweep = Some(parse_sweep(&entry.value).map_err(fail)?),
            "out" => self.out = PathBuf::from(&entry.value),
            "seed" => self.seed = entry.value.parse().map_err(|_| fail(format!("seed `{}` is not an unsigned integer", entry.value)))?,
            "points" => self.points = entry.value.parse().map_err(|_| fail(format!("points `{}` is not an unsigned integer", entry.value)))?,
            "preset" => {}
            other => return Err(fail(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate().map_err(|e| ConfigError::Validation(e.to_string()))?;
        if !(self.nu_p.is_finite() && self.nu_p > 0.0) {
            return Err(ConfigError::Validation(format!("nu_p must be finite and positive, got {}", self.nu_p)));
        }
        if let Some(sweep) = &self.sweep {
            sweep.validate()?;
        }
        Ok(())
    }

    /// The configured sweep, or `default` when none was given. The kind must
    /// match what the command plots.
    pub fn sweep_or(&self, kind: SweepKind, default: SweepSpec) -> Result<SweepSpec> {
        let sweep = self.sweep.unwrap_or(default);
        if sweep.kind != kind {
            return Err(ConfigError::Validation(format!(
                "this command sweeps {}, got a {} sweep",
                kind.label(),
                sweep.kind.label()
            )));
        }
        sweep.validate()?;
        Ok(sweep)
    }
}

pub const DEFAULT_DELTA_SWEEP: SweepSpec = SweepSpec::new(SweepKind::Delta, -6.0, 6.0, 1201);
pub const DEFAULT_PHI_SWEEP: SweepSpec = SweepSpec::new(SweepKind::Phi, 0.0, TAU, 721);
pub const DEFAULT_KX_SWEEP: SweepSpec =
    SweepSpec::new(SweepKind::Kx, -PI, PI, phasechi::localization::DEFAULT_PROFILE_POINTS);
