use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use phasechi::group_velocity::{find_sign_crossings, phase_sweep};
use phasechi::localization::{find_peaks, scan_profile};
use phasechi::suscept::delta_sweep;
use phasechi::{adjudicate_convention, classify_confinement, roots_r, AdjudicationStatus};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{
    ConfigError, Entry, RunConfig, SweepKind, DEFAULT_DELTA_SWEEP, DEFAULT_KX_SWEEP, DEFAULT_PHI_SWEEP,
};
use crate::manifest::{
    AdjudicationSummary, CrossingRecord, GroupIndexSummary, LocalizationRecord, PanelRecord, ReproManifest,
    RootRecord, MANIFEST_FILE,
};
use crate::output::{round_sig, to_json, CsvTable, OutputDir};
use crate::presets::{self, PanelKind, Preset, FIGURES};

pub const CHI_HEADER: [&str; 3] = ["delta", "chi_prime", "chi_double_prime"];
pub const GROUP_INDEX_HEADER: [&str; 3] = ["phi", "ng_minus_one", "chi_double_prime"];
pub const PROFILE_HEADER: [&str; 2] = ["kx", "chi_double_prime"];
pub const ADJUDICATION_FILE: &str = "adjudication.json";

/// One panel to evaluate: a resolved configuration plus naming.
#[derive(Debug, Clone)]
pub struct PanelSpec {
    pub name: String,
    pub figure: Option<String>,
    pub kind: PanelKind,
    pub config: RunConfig,
    /// Prepended to every file name the panel writes.
    pub file_prefix: String,
    pub with_roots: bool,
}

#[derive(Debug, Clone)]
pub struct PanelOutput {
    pub record: PanelRecord,
    pub files: Vec<(String, String)>,
}

fn base_record(spec: &PanelSpec, sweep: String, nu_p: Option<f64>) -> PanelRecord {
    PanelRecord {
        name: spec.name.clone(),
        figure: spec.figure.clone(),
        kind: spec.kind,
        convention: spec.config.convention.tag().to_string(),
        rate_unit: spec.config.rate_unit.clone(),
        params: spec.config.params,
        sweep,
        nu_p,
        files: Vec::new(),
        gaps: 0,
        group_index: None,
        sign_crossings: None,
        localization: None,
        error: None,
    }
}

pub fn run_panel(spec: &PanelSpec) -> Result<PanelOutput> {
    match spec.kind {
        PanelKind::Chi => chi_panel(spec),
        PanelKind::GroupIndex => group_index_panel(spec),
        PanelKind::Localize => localize_panel(spec),
    }
}

fn chi_panel(spec: &PanelSpec) -> Result<PanelOutput> {
    let cfg = &spec.config;
    let sweep = cfg.sweep_or(SweepKind::Delta, DEFAULT_DELTA_SWEEP)?;
    let grid = sweep.grid();
    let values = delta_sweep(&cfg.params, &grid, cfg.convention);

    let mut table = CsvTable::new(CHI_HEADER.to_vec());
    for (x, v) in grid.iter().zip(&values) {
        table.push(vec![Some(*x), v.map(|c| c.chi_prime), v.map(|c| c.chi_double_prime)]);
    }
    let file = format!("{}chi.csv", spec.file_prefix);
    let mut record = base_record(spec, sweep.to_string(), None);
    record.gaps = values.iter().filter(|v| v.is_none()).count();
    record.files.push(file.clone());
    Ok(PanelOutput { record, files: vec![(file, table.render())] })
}

fn group_index_panel(spec: &PanelSpec) -> Result<PanelOutput> {
    let cfg = &spec.config;
    let sweep = cfg.sweep_or(SweepKind::Phi, DEFAULT_PHI_SWEEP)?;
    let series = phase_sweep(&cfg.params, cfg.nu_p, &sweep.grid(), cfg.convention)?;

    let mut table = CsvTable::new(GROUP_INDEX_HEADER.to_vec());
    for point in &series.points {
        let v = point.value();
        table.push(vec![Some(point.sweep_value()), v.map(|p| p.ng_minus_one), v.map(|p| p.chi_double_prime)]);
    }

    let summary = series
        .values()
        .min_by(|a, b| a.ng_minus_one.total_cmp(&b.ng_minus_one))
        .map(|most_negative| {
            let max = series.values().map(|p| p.ng_minus_one).fold(f64::NEG_INFINITY, f64::max);
            let max_abs = series.values().map(|p| p.ng_minus_one.abs()).fold(0.0, f64::max);
            GroupIndexSummary {
                min: round_sig(most_negative.ng_minus_one),
                max: round_sig(max),
                max_abs: round_sig(max_abs),
                argmin: round_sig(most_negative.sweep_value),
                chi_double_prime_at_min: round_sig(most_negative.chi_double_prime),
            }
        });

    let file = format!("{}group_index.csv", spec.file_prefix);
    let mut record = base_record(spec, sweep.to_string(), Some(cfg.nu_p));
    record.gaps = series.gap_count();
    record.group_index = summary;
    record.sign_crossings = Some(find_sign_crossings(&series).iter().map(CrossingRecord::from).collect());
    record.files.push(file.clone());
    Ok(PanelOutput { record, files: vec![(file, table.render())] })
}

#[derive(Serialize)]
struct PeakReport<'a> {
    name: &'a str,
    convention: &'a str,
    rate_unit: &'a str,
    params: &'a phasechi::DriveParams,
    points: usize,
    #[serde(flatten)]
    localization: &'a LocalizationRecord,
}

fn localize_panel(spec: &PanelSpec) -> Result<PanelOutput> {
    let cfg = &spec.config;
    let sweep = cfg.sweep_or(SweepKind::Kx, DEFAULT_KX_SWEEP)?;
    let roots = if spec.with_roots {
        Some(roots_r(&cfg.params, cfg.convention)?.as_ref().map(RootRecord::from))
    } else {
        None
    };
    let profile = scan_profile(&cfg.params, sweep.count, cfg.convention)?;

    let mut table = CsvTable::new(PROFILE_HEADER.to_vec());
    for (x, v) in profile.kx.iter().zip(&profile.chi_double_prime) {
        table.push(vec![Some(*x), *v]);
    }
    let report = classify_confinement(&find_peaks(&profile)?);
    let localization = LocalizationRecord::new(&report, roots);

    let csv = format!("{}profile.csv", spec.file_prefix);
    let json = format!("{}peaks.json", spec.file_prefix);
    let peak_json = to_json(&PeakReport {
        name: &spec.name,
        convention: cfg.convention.tag(),
        rate_unit: &cfg.rate_unit,
        params: &cfg.params,
        points: sweep.count,
        localization: &localization,
    })?;

    let mut record = base_record(spec, sweep.to_string(), None);
    record.gaps = profile.gap_count();
    record.localization = Some(localization);
    record.files = vec![csv.clone(), json.clone()];
    Ok(PanelOutput { record, files: vec![(csv, table.render()), (json, peak_json)] })
}

fn elapsed_ms(start: Instant) -> f64 {
    (start.elapsed().as_secs_f64() * 1e6).round() / 1e3
}

fn finish(out: &mut OutputDir, manifest: &mut ReproManifest, started: Instant) -> Result<()> {
    manifest.timings_ms.insert("total".into(), elapsed_ms(started));
    let mut files = out.files();
    files.push(MANIFEST_FILE.to_string());
    files.sort();
    manifest.files = files;
    out.write(MANIFEST_FILE, &to_json(manifest)?)
}

fn single_panel(command: &str, kind: PanelKind, cfg: &RunConfig, with_roots: bool) -> Result<ReproManifest> {
    let started = Instant::now();
    let mut out = OutputDir::create(&cfg.out)?;
    let mut manifest = ReproManifest::new(command, cfg);
    let spec = PanelSpec {
        name: cfg.preset.clone().unwrap_or_else(|| command.to_string()),
        figure: None,
        kind,
        config: cfg.clone(),
        file_prefix: String::new(),
        with_roots,
    };
    match run_panel(&spec) {
        Ok(panel) => {
            for (name, contents) in &panel.files {
                out.write(name, contents)?;
            }
            manifest.add_panel(panel.record);
            finish(&mut out, &mut manifest, started)?;
            Ok(manifest)
        }
        Err(err) => {
            manifest.fail(format!("{err:#}"));
            finish(&mut out, &mut manifest, started)?;
            Err(err)
        }
    }
}

/// `χ′, χ″` over a detuning sweep.
pub fn cmd_chi(cfg: &RunConfig) -> Result<ReproManifest> {
    single_panel("chi", PanelKind::Chi, cfg, false)
}

/// `n_g − 1, χ″` over a phase sweep, with sign crossings in the manifest.
pub fn cmd_group_index(cfg: &RunConfig) -> Result<ReproManifest> {
    single_panel("group-index", PanelKind::GroupIndex, cfg, false)
}

/// Standing-wave absorption profile plus a peak report. With `with_roots`
/// the report also carries the closed-form peak positions, which need
/// `gamma2 = 0`.
pub fn cmd_localize(cfg: &RunConfig, with_roots: bool) -> Result<ReproManifest> {
    single_panel("localize", PanelKind::Localize, cfg, with_roots)
}

/// Panels for `fig2`..`fig5`, or all four for `all`, with user overrides
/// applied on top of each preset.
pub fn repro_panels(target: &str, overrides: &[Entry]) -> Result<Vec<PanelSpec>> {
    let figures: Vec<&str> = match target {
        "all" => FIGURES.to_vec(),
        f if FIGURES.contains(&f) => vec![f],
        other => bail!("unknown figure `{other}` (expected one of {} or all)", FIGURES.join(", ")),
    };
    if let Some(e) = overrides.iter().find(|e| e.key == "sweep" || e.key == "preset") {
        return Err(ConfigError::Parse {
            location: e.location.clone(),
            message: format!("repro panels fix their own {}", e.key),
        }
        .into());
    }
    let mut specs = Vec::new();
    for figure in figures {
        for preset in presets::figure_panels(figure).expect("known figure") {
            specs.push(panel_from_preset(&preset, overrides)?);
        }
    }
    Ok(specs)
}

fn panel_from_preset(preset: &Preset, overrides: &[Entry]) -> Result<PanelSpec> {
    let mut config = RunConfig::from_preset(preset);
    for entry in overrides {
        config.apply(entry)?;
    }
    config.validate()?;
    Ok(PanelSpec {
        name: preset.name.clone(),
        figure: Some(preset.figure.to_string()),
        kind: preset.kind,
        config,
        file_prefix: format!("{}_", preset.name),
        with_roots: preset.kind == PanelKind::Localize && preset.params.gamma2 == 0.0,
    })
}

/// Runs every panel of the requested figures, writes their files, the
/// adjudication report and the manifest. A failing panel stops the bundle
/// after the panels before it are written.
pub fn cmd_repro(target: &str, cfg: &RunConfig, overrides: &[Entry]) -> Result<ReproManifest> {
    let started = Instant::now();
    let specs = repro_panels(target, overrides)?;
    let mut out = OutputDir::create(&cfg.out)?;
    let mut manifest = ReproManifest::new(&format!("repro {target}"), cfg);

    let adjudication_started = Instant::now();
    let report = adjudicate_convention(cfg.seed, cfg.points)?;
    out.write(ADJUDICATION_FILE, &to_json(&report)?)?;
    manifest.conventions.adjudication = Some(AdjudicationSummary::from(&report));
    manifest.timings_ms.insert("adjudication".into(), elapsed_ms(adjudication_started));

    let results: Vec<(Result<PanelOutput>, f64)> = specs
        .par_iter()
        .map(|spec| {
            let t = Instant::now();
            let r = run_panel(spec).with_context(|| format!("panel {}", spec.name));
            (r, elapsed_ms(t))
        })
        .collect();

    for (spec, (result, ms)) in specs.iter().zip(results) {
        manifest.timings_ms.insert(spec.name.clone(), ms);
        match result {
            Ok(panel) => {
                for (name, contents) in &panel.files {
                    out.write(name, contents)?;
                }
                manifest.add_panel(panel.record);
            }
            Err(err) => {
                let mut record = base_record(spec, String::new(), None);
                record.error = Some(format!("{err:#}"));
                manifest.add_panel(record);
                manifest.fail(format!("{err:#}"));
                finish(&mut out, &mut manifest, started)?;
                return Err(err);
            }
        }
    }
    finish(&mut out, &mut manifest, started)?;
    Ok(manifest)
}

/// Ranks the two phase conventions against the density-matrix oracle and
/// records the winner as the default.
pub fn cmd_adjudicate(cfg: &RunConfig) -> Result<ReproManifest> {
    let started = Instant::now();
    let report = adjudicate_convention(cfg.seed, cfg.points)?;
    let mut out = OutputDir::create(&cfg.out)?;
    out.write(ADJUDICATION_FILE, &to_json(&report)?)?;
    let mut manifest = ReproManifest::new("adjudicate", cfg);
    let summary = AdjudicationSummary::from(&report);
    if let Some(winner) = &summary.winner {
        manifest.conventions.default = winner.clone();
    }
    manifest.conventions.adjudication = Some(summary);
    if report.status == AdjudicationStatus::Inconclusive {
        let err = anyhow!(report.winner().expect_err("inconclusive report"));
        manifest.fail(format!("{err:#}"));
        finish(&mut out, &mut manifest, started)?;
        return Err(err);
    }
    finish(&mut out, &mut manifest, started)?;
    Ok(manifest)
}
