//! Figure presets: drive parameters, sweeps and conventions for every panel.
//!
//! Group-velocity figures measure rates in units of a common decay rate
//! `gamma`; localization figures use the upper-level decay rate `gamma1`.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use phasechi::{coincidence_detunings, CoincidenceCase, DriveParams, PhaseConvention};
use serde::Serialize;

use crate::config::{SweepKind, SweepSpec, DEFAULT_NU_P};

pub const FIGURES: [&str; 4] = ["fig2", "fig3", "fig4", "fig5"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PanelKind {
    Chi,
    GroupIndex,
    Localize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Preset {
    pub name: String,
    pub figure: &'static str,
    pub kind: PanelKind,
    pub params: DriveParams,
    pub convention: PhaseConvention,
    pub sweep: Option<SweepSpec>,
    pub nu_p: f64,
    pub rate_unit: &'static str,
}

const PROFILE_POINTS: usize = phasechi::localization::DEFAULT_PROFILE_POINTS;

fn group_velocity_panel(name: &str, figure: &'static str, kind: PanelKind, params: DriveParams, sweep: SweepSpec) -> Preset {
    Preset {
        name: name.to_string(),
        figure,
        kind,
        params,
        convention: PhaseConvention::Full,
        sweep: Some(sweep),
        nu_p: DEFAULT_NU_P,
        rate_unit: "gamma",
    }
}

fn fig2_params() -> DriveParams {
    DriveParams::symmetric(2.0, 2.0)
}

fn fig3_params() -> DriveParams {
    DriveParams { omega1: 10.0, omega2: 1.0, omega3: 1.0, gamma1: 0.2, gamma2: 0.2, ..DriveParams::default() }
}

/// `(omega, omega1, coincident detuning)` for the two localization figures.
fn localization_regime(figure: &str) -> (f64, f64, f64) {
    let (omega, omega1, index) = match figure {
        "fig4" => (20.0, 30.0, 2),
        _ => (50.0, 60.0, 3),
    };
    let detuning = coincidence_detunings(omega, CoincidenceCase::InPhase).expect("positive drive")[index];
    (omega, omega1, detuning)
}

fn localization_panel(name: &str, figure: &'static str, phi: f64, detuning_sign: f64) -> Preset {
    let (omega, omega1, detuning) = localization_regime(figure);
    let params = DriveParams {
        omega1,
        omega2: omega,
        omega3: omega,
        gamma1: 1.0,
        gamma2: 0.0,
        phi,
        delta: detuning_sign * detuning,
        prefactor: 1.0,
    };
    Preset {
        name: name.to_string(),
        figure,
        kind: PanelKind::Localize,
        params,
        // The coincident-root detunings assume the unit loop coefficient.
        convention: PhaseConvention::Halved,
        sweep: Some(SweepSpec::new(SweepKind::Kx, -PI, PI, PROFILE_POINTS)),
        nu_p: DEFAULT_NU_P,
        rate_unit: "gamma1",
    }
}

/// Panels of one figure, in label order.
pub fn figure_panels(figure: &str) -> Option<Vec<Preset>> {
    let delta = |start, stop, count| SweepSpec::new(SweepKind::Delta, start, stop, count);
    let phi = SweepSpec::new(SweepKind::Phi, 0.0, TAU, 721);
    let panels = match figure {
        "fig2" => {
            let mut v: Vec<Preset> = [("fig2a", 0.0), ("fig2b", FRAC_PI_2), ("fig2c", PI), ("fig2d", 3.0 * FRAC_PI_2)]
                .into_iter()
                .map(|(name, p)| group_velocity_panel(name, "fig2", PanelKind::Chi, fig2_params().with_phi(p), delta(-6.0, 6.0, 1201)))
                .collect();
            v.push(group_velocity_panel("fig2e", "fig2", PanelKind::GroupIndex, fig2_params(), phi));
            v
        }
        "fig3" => {
            let mut v: Vec<Preset> = [("fig3a", 0.1), ("fig3b", 0.0), ("fig3c", -0.1)]
                .into_iter()
                .map(|(name, d)| group_velocity_panel(name, "fig3", PanelKind::GroupIndex, fig3_params().with_delta(d), phi))
                .collect();
            v.push(group_velocity_panel("fig3d", "fig3", PanelKind::Chi, fig3_params(), delta(-10.0, 10.0, 2001)));
            v.push(group_velocity_panel("fig3e", "fig3", PanelKind::Chi, fig3_params(), delta(-0.5, 0.5, 1001)));
            v
        }
        "fig4" | "fig5" => {
            let figure: &'static str = if figure == "fig4" { "fig4" } else { "fig5" };
            [("a", 0.0, 1.0), ("b", FRAC_PI_2, 1.0), ("c", PI, 1.0), ("d", 0.0, -1.0), ("e", FRAC_PI_2, -1.0), ("f", PI, -1.0)]
                .into_iter()
                .map(|(box_label, phi, sign)| localization_panel(&format!("{figure}{box_label}"), figure, phi, sign))
                .collect()
        }
        _ => return None,
    };
    Some(panels)
}

/// A single panel by name (`fig4c`) or a figure's base parameters (`fig3`).
pub fn lookup(name: &str) -> Option<Preset> {
    if let Some(panels) = figure_panels(name) {
        let first = panels.into_iter().next()?;
        let mut base = Preset { name: name.to_string(), sweep: None, ..first };
        if name == "fig3" {
            base.params.delta = 0.0;
        }
        return Some(base);
    }
    let figure = name.get(..4)?;
    figure_panels(figure)?.into_iter().find(|p| p.name == name)
}

pub fn names() -> Vec<String> {
    FIGURES
        .iter()
        .flat_map(|f| std::iter::once(f.to_string()).chain(figure_panels(f).unwrap().into_iter().map(|p| p.name)))
        .collect()
}
