//! Command-line driver for `phasechi`.
//!
//! Every command resolves a [`config::RunConfig`] from an optional preset,
//! an optional `key=value` config file and flags, then writes CSV/JSON files
//! plus a `manifest.json` into the output directory.

pub mod commands;
pub mod config;
pub mod manifest;
pub mod output;
pub mod presets;

use std::fs;
use std::path::PathBuf;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};

use crate::config::{parse_entries, Entry, Location, RunConfig};
use crate::manifest::ReproManifest;

#[derive(Debug, Parser)]
#[command(name = "phasechi", version, about = "Phase-controlled probe susceptibility, group index and localization")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// χ′ and χ″ over a detuning sweep.
    Chi(CommonArgs),
    /// Group index n_g − 1 over a phase sweep.
    GroupIndex(CommonArgs),
    /// Standing-wave absorption profile and peak report.
    Localize {
        #[command(flatten)]
        common: CommonArgs,
        /// Include closed-form peak positions (needs gamma2 = 0).
        #[arg(long)]
        roots: bool,
    },
    /// Regenerate every panel of a figure: fig2, fig3, fig4, fig5 or all.
    Repro {
        figure: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Rank the phase conventions against the density-matrix oracle.
    Adjudicate(CommonArgs),
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// key=value file; `#` starts a comment.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub preset: Option<String>,
    /// eq6 (loop coefficient 2) or eq9 (loop coefficient 1).
    #[arg(long)]
    pub convention: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// kind:start:stop:count with kind one of phi, delta, kx.
    #[arg(long)]
    pub sweep: Option<String>,
    #[arg(long = "nu-p", allow_hyphen_values = true)]
    pub nu_p: Option<String>,
    #[arg(long)]
    pub seed: Option<String>,
    #[arg(long)]
    pub points: Option<String>,
    /// Any config key, e.g. `--set omega1=2 --set phi=pi/2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    pub set: Vec<String>,
}

impl CommonArgs {
    /// Flags as config entries, in a fixed order so `--set` wins last.
    pub fn entries(&self) -> Result<Vec<Entry>> {
        let mut entries = Vec::new();
        let named = [
            ("preset", "preset", &self.preset),
            ("convention", "convention", &self.convention),
            ("out", "out", &self.out),
            ("sweep", "sweep", &self.sweep),
            ("nu_p", "nu-p", &self.nu_p),
            ("seed", "seed", &self.seed),
            ("points", "points", &self.points),
        ];
        for (key, flag, value) in named {
            if let Some(value) = value {
                entries.push(Entry { key: key.into(), value: value.clone(), location: Location::Flag(flag.into()) });
            }
        }
        for item in &self.set {
            let (key, value) = item.split_once('=').ok_or_else(|| config::ConfigError::Parse {
                location: Location::Flag("set".into()),
                message: format!("expected key=value, found `{item}`"),
            })?;
            entries.push(Entry { key: key.into(), value: value.into(), location: Location::Flag("set".into()) });
        }
        Ok(entries)
    }

    fn file_entries(&self) -> Result<Vec<Entry>> {
        match &self.config {
            Some(path) => {
                let text = fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
                parse_entries(&text).with_context(|| format!("in config {}", path.display()))
            }
            None => Ok(Vec::new()),
        }
    }

    pub fn resolve(&self) -> Result<RunConfig> {
        let file = self.file_entries()?;
        let config = RunConfig::resolve(&file, &self.entries()?);
        match &self.config {
            Some(path) => config.with_context(|| format!("in config {}", path.display())),
            None => Ok(config?),
        }
    }
}

pub fn run(cli: Cli) -> Result<ReproManifest> {
    match cli.command {
        Command::Chi(args) => commands::cmd_chi(&args.resolve()?),
        Command::GroupIndex(args) => commands::cmd_group_index(&args.resolve()?),
        Command::Localize { common, roots } => commands::cmd_localize(&common.resolve()?, roots),
        Command::Repro { figure, common } => {
            // Panels take their physics from presets; only output location
            // and adjudication settings configure the run itself.
            let is_run_setting = |e: &Entry| matches!(e.key.as_str(), "out" | "seed" | "points");
            let all: Vec<Entry> = common.file_entries()?.into_iter().chain(common.entries()?).collect();
            let (run_settings, overrides): (Vec<Entry>, Vec<Entry>) = all.into_iter().partition(is_run_setting);
            let cfg = RunConfig::resolve(&[], &run_settings)?;
            commands::cmd_repro(&figure, &cfg, &overrides)
        }
        Command::Adjudicate(args) => commands::cmd_adjudicate(&args.resolve()?),
    }
}

/// One line per panel for the terminal.
pub fn summarize(manifest: &ReproManifest) -> Vec<String> {
    let mut lines = Vec::new();
    if let Some(adj) = &manifest.conventions.adjudication {
        let errors: Vec<String> = adj.max_relative_error.iter().map(|(c, e)| format!("{c} {e:.2e}")).collect();
        lines.push(format!(
            "adjudication: winner {} ({}; {} ranked points)",
            adj.winner.as_deref().unwrap_or("none"),
            errors.join(", "),
            adj.counted_points
        ));
    }
    for panel in &manifest.panels {
        let mut line = format!("{} [{}]", panel.name, panel.convention);
        if let Some(g) = &panel.group_index {
            line += &format!(" ng-1 in [{}, {}]", g.min, g.max);
        }
        if let Some(c) = &panel.sign_crossings {
            line += &format!(", {} sign crossing(s)", c.len());
        }
        if let Some(l) = &panel.localization {
            line += &format!(" {} peak(s), {:?}", l.peak_count, l.classification);
        }
        if panel.gaps > 0 {
            line += &format!(", {} gap(s)", panel.gaps);
        }
        line += &format!(" -> {}", panel.files.join(", "));
        lines.push(line);
    }
    lines
}
