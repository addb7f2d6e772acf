//! Weak-probe response of a four-level atom whose three drive fields form a
//! closed loop.
//!
//! The loop makes the probe susceptibility depend on the collective phase
//! `φ = φ₂ + φ₃ − φ₁` of the drives. This crate provides:
//!
//! - [`suscept`]: closed-form susceptibility `χ = χ′ + iχ″` and its exact
//!   detuning derivative.
//! - [`oracle`]: an independent steady-state solver built directly from the
//!   Hamiltonian and the anticommutator decay model, plus a time-domain
//!   integrator of the full density matrix for diagnostics.
//! - [`group_velocity`]: group index `n_g − 1`, phase and detuning sweeps and
//!   subluminal/superluminal sign crossings.
//! - [`localization`]: standing-wave absorption profiles `χ″(κx)`, peak
//!   detection and half-wavelength confinement classification.
//! - [`kramers_kronig`]: a dispersion-from-absorption consistency check.
//!
//! All rates and detunings are dimensionless multiples of a reference rate,
//! and the susceptibility is reported in units of `2N|℘|²/ε₀ħ` scaled by
//! [`DriveParams::prefactor`].

pub mod error;
pub mod group_velocity;
pub mod kramers_kronig;
mod linalg;
pub mod localization;
pub mod oracle;
pub mod params;
pub mod suscept;

pub use error::{Error, Result};
pub use group_velocity::{
    find_sign_crossings, group_index, phase_sweep, GroupIndexPoint, Propagation, SignCrossing,
    SweepAxis, SweepPoint, SweepSeries,
};
pub use localization::{
    chi_pp_standing, classify_confinement, coincidence_detunings, find_peaks, roots_r,
    scan_profile, CoincidenceCase, Confinement, ConfinementReport, Half, LocalizationProfile,
    Peak, RootPair, StandingWaveParams,
};
pub use oracle::{
    adjudicate_convention, build_first_order_system, solve_chi_oracle, time_domain_check,
    AdjudicationReport, AdjudicationStatus, CoherenceSystem, FieldPhases,
};
pub use params::{DriveParams, PhaseConvention};
pub use suscept::{compute_chi, compute_y, d_chi_d_delta, ComplexSusceptibility, Source};

pub use num_complex::Complex64;
