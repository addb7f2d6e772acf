//! Run manifest: what was run, with which convention, and every file written.
//!
//! Fields serialize in declaration order and maps are ordered, so two runs
//! of the same configuration differ only in `timings_ms`, which comes last.

use std::collections::BTreeMap;

use phasechi::group_velocity::{Propagation, SignCrossing};
use phasechi::{AdjudicationReport, AdjudicationStatus, Confinement, ConfinementReport, DriveParams, Peak, RootPair};
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::round_sig;
use crate::presets::PanelKind;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RunStatus {
    Ok,
    Failed,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfigEcho {
    pub preset: Option<String>,
    pub params: DriveParams,
    pub convention: String,
    pub sweep: Option<String>,
    pub nu_p: f64,
    pub seed: u64,
    pub points: usize,
    pub rate_unit: String,
}

impl From<&RunConfig> for ConfigEcho {
    fn from(c: &RunConfig) -> Self {
        Self {
            preset: c.preset.clone(),
            params: c.params,
            convention: c.convention.tag().to_string(),
            sweep: c.sweep.map(|s| s.to_string()),
            nu_p: c.nu_p,
            seed: c.seed,
            points: c.points,
            rate_unit: c.rate_unit.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdjudicationSummary {
    pub seed: Option<u64>,
    pub points: usize,
    pub counted_points: usize,
    pub excluded_points: usize,
    pub skipped_points: usize,
    pub status: AdjudicationStatus,
    pub winner: Option<String>,
    pub max_relative_error: BTreeMap<String, f64>,
}

impl From<&AdjudicationReport> for AdjudicationSummary {
    fn from(r: &AdjudicationReport) -> Self {
        Self {
            seed: r.seed,
            points: r.grid_size,
            counted_points: r.counted_points,
            excluded_points: r.excluded_points,
            skipped_points: r.skipped_points,
            status: r.status,
            winner: r.winning_convention.map(|c| c.tag().to_string()),
            max_relative_error: r.max_relative_error.iter().map(|(c, e)| (c.tag().to_string(), *e)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConventionRecord {
    /// Library default; the convention the density-matrix oracle confirms.
    pub default: String,
    pub used: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adjudication: Option<AdjudicationSummary>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CrossingRecord {
    pub lower: f64,
    pub upper: f64,
    pub root: f64,
    pub converged: bool,
    pub below: Propagation,
    pub above: Propagation,
}

impl From<&SignCrossing> for CrossingRecord {
    fn from(c: &SignCrossing) -> Self {
        Self {
            lower: round_sig(c.lower),
            upper: round_sig(c.upper),
            root: round_sig(c.root),
            converged: c.converged,
            below: c.below,
            above: c.above,
        }
    }
}

/// Extremes of `n_g − 1` over a sweep, with the absorption where the group
/// index is most negative.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GroupIndexSummary {
    pub min: f64,
    pub max: f64,
    pub max_abs: f64,
    pub argmin: f64,
    pub chi_double_prime_at_min: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeakRecord {
    pub position: f64,
    pub height: f64,
    pub fwhm: f64,
    pub left_edge: f64,
    pub right_edge: f64,
}

impl From<&Peak> for PeakRecord {
    fn from(p: &Peak) -> Self {
        Self {
            position: round_sig(p.position),
            height: round_sig(p.height),
            fwhm: round_sig(p.fwhm),
            left_edge: round_sig(p.left_edge),
            right_edge: round_sig(p.right_edge),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RootRecord {
    pub r1: f64,
    pub r2: f64,
    pub discriminant: f64,
    pub reachable: [bool; 2],
}

impl From<&RootPair> for RootRecord {
    fn from(r: &RootPair) -> Self {
        Self {
            r1: round_sig(r.r1),
            r2: round_sig(r.r2),
            discriminant: round_sig(r.discriminant),
            reachable: r.reachable,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LocalizationRecord {
    pub peak_count: usize,
    pub classification: Confinement,
    pub mean_fwhm: Option<f64>,
    pub peaks: Vec<PeakRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub roots: Option<Option<RootRecord>>,
}

impl LocalizationRecord {
    pub fn new(report: &ConfinementReport, roots: Option<Option<RootRecord>>) -> Self {
        let mean_fwhm = (!report.peaks.is_empty())
            .then(|| round_sig(report.peaks.iter().map(|p| p.fwhm).sum::<f64>() / report.peaks.len() as f64));
        Self {
            peak_count: report.peak_count,
            classification: report.classification,
            mean_fwhm,
            peaks: report.peaks.iter().map(PeakRecord::from).collect(),
            roots,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PanelRecord {
    pub name: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub figure: Option<String>,
    pub kind: PanelKind,
    pub convention: String,
    pub rate_unit: String,
    pub params: DriveParams,
    pub sweep: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nu_p: Option<f64>,
    pub files: Vec<String>,
    pub gaps: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub group_index: Option<GroupIndexSummary>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sign_crossings: Option<Vec<CrossingRecord>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub localization: Option<LocalizationRecord>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReproManifest {
    pub tool: String,
    pub command: String,
    pub status: RunStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub config: ConfigEcho,
    pub conventions: ConventionRecord,
    /// Unit of every rate and detuning, per figure or command.
    pub rate_units: BTreeMap<String, String>,
    pub panels: Vec<PanelRecord>,
    pub files: Vec<String>,
    pub timings_ms: BTreeMap<String, f64>,
}

impl ReproManifest {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        Self {
            tool: format!("phasechi {}", env!("CARGO_PKG_VERSION")),
            command: command.to_string(),
            status: RunStatus::Ok,
            error: None,
            config: config.into(),
            conventions: ConventionRecord {
                default: phasechi::PhaseConvention::default().tag().to_string(),
                used: Vec::new(),
                adjudication: None,
            },
            rate_units: BTreeMap::new(),
            panels: Vec::new(),
            files: Vec::new(),
            timings_ms: BTreeMap::new(),
        }
    }

    pub fn add_panel(&mut self, panel: PanelRecord) {
        if !self.conventions.used.contains(&panel.convention) {
            self.conventions.used.push(panel.convention.clone());
            self.conventions.used.sort();
        }
        let key = panel.figure.clone().unwrap_or_else(|| self.command.clone());
        self.rate_units.insert(key, panel.rate_unit.clone());
        self.panels.push(panel);
    }

    pub fn fail(&mut self, error: String) {
        self.status = RunStatus::Failed;
        self.error = Some(error);
    }
}
