//! Independent density-matrix route to the probe susceptibility.
//!
//! Everything here is built from the four-level Hamiltonian and the decay
//! model `ρ̇ = −i[H, ρ] − ½{Γ, ρ}` rather than from the closed form in
//! [`crate::suscept`], so the two can check each other.
//!
//! Levels are ordered `|a₁⟩, |a₂⟩, |b⟩, |c⟩`. Drives couple `a₁–b` (Ω₁),
//! `a₂–b` (Ω₂) and `a₁–a₂` (Ω₃); the probe couples `a₁–c`. Under the loop
//! condition `ν₁ = ν₂ + ν₃` there is a frame in which every drive term is
//! static and, with all drives resonant, each of `|a₁⟩, |a₂⟩, |b⟩` sits at
//! energy `Δ` above `|c⟩`.
//!
//! Each drive carries a phase through `Ωᵢ = |Ωᵢ| e^{−iφᵢ}`. Only the loop
//! combination `φ₂ + φ₃ − φ₁` is observable.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;
use crate::params::{DriveParams, PhaseConvention};
use crate::suscept::{compute_chi, ComplexSusceptibility, Source};

const I: Complex64 = Complex64::new(0.0, 1.0);
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Largest probe Rabi frequency accepted, relative to the largest rate.
pub const PROBE_LIMIT_FRACTION: f64 = 1e-3;

/// Individual phases of the three drives.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct FieldPhases {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
}

impl FieldPhases {
    /// All of the loop phase carried by the `a₁–a₂` drive.
    pub fn from_collective(phi: f64) -> Self {
        Self { phi1: 0.0, phi2: 0.0, phi3: phi }
    }

    pub fn collective(&self) -> f64 {
        self.phi2 + self.phi3 - self.phi1
    }
}

fn rabi(magnitude: f64, phase: f64) -> Complex64 {
    Complex64::from_polar(magnitude, -phase)
}

/// First-order equations for `(ρ̃_{a₁c}, ρ̃_{a₂c}, ρ̃_{bc})` in steady state,
/// written as `matrix · x = rhs`.
///
/// Only `ρ_cc = 1` is populated at zeroth order, so the probe enters through
/// `rhs` alone.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherenceSystem {
    pub matrix: [[Complex64; 3]; 3],
    pub rhs: [Complex64; 3],
    pub probe_rabi: f64,
}

impl CoherenceSystem {
    pub fn solve(&self) -> Result<[Complex64; 3]> {
        linalg::solve(self.matrix, self.rhs)
    }
}

fn probe_limit(params: &DriveParams) -> f64 {
    PROBE_LIMIT_FRACTION * params.rate_scale()
}

fn check_probe(params: &DriveParams, probe_rabi: f64) -> Result<()> {
    let limit = probe_limit(params);
    if !(probe_rabi > 0.0 && probe_rabi <= limit) {
        return Err(Error::ProbeTooStrong { probe: probe_rabi, limit });
    }
    Ok(())
}

pub fn build_first_order_system(params: &DriveParams, probe_rabi: f64) -> Result<CoherenceSystem> {
    build_first_order_system_with_phases(params, FieldPhases::from_collective(params.phi), probe_rabi)
}

/// Like [`build_first_order_system`] but with explicit per-drive phases;
/// `params.phi` is ignored.
pub fn build_first_order_system_with_phases(
    params: &DriveParams,
    phases: FieldPhases,
    probe_rabi: f64,
) -> Result<CoherenceSystem> {
    params.validate()?;
    check_probe(params, probe_rabi)?;

    let o1 = rabi(params.omega1, phases.phi1);
    let o2 = rabi(params.omega2, phases.phi2);
    let o3 = rabi(params.omega3, phases.phi3);
    let d = params.delta;

    let matrix = [
        [-(I * d + params.gamma1 / 2.0), I * o3 / 2.0, I * o1 / 2.0],
        [I * o3.conj() / 2.0, -(I * d + params.gamma2 / 2.0), I * o2 / 2.0],
        [I * o1.conj() / 2.0, I * o2.conj() / 2.0, -I * d],
    ];
    let rhs = [-I * probe_rabi / 2.0, ZERO, ZERO];
    Ok(CoherenceSystem { matrix, rhs, probe_rabi })
}

fn chi_at_probe(params: &DriveParams, phases: FieldPhases, probe_rabi: f64) -> Result<Complex64> {
    let system = build_first_order_system_with_phases(params, phases, probe_rabi)?;
    let x = system.solve()?;
    Ok(params.prefactor * x[0] / probe_rabi)
}

pub fn solve_chi_oracle(params: &DriveParams) -> Result<ComplexSusceptibility> {
    solve_chi_oracle_with_phases(params, FieldPhases::from_collective(params.phi))
}

/// Oracle susceptibility with explicit per-drive phases.
///
/// Solves at two probe amplitudes a decade apart and rejects the result if
/// they disagree by more than `1e-9` relative.
pub fn solve_chi_oracle_with_phases(
    params: &DriveParams,
    phases: FieldPhases,
) -> Result<ComplexSusceptibility> {
    let strong = probe_limit(params);
    let a = chi_at_probe(params, phases, strong)?;
    let b = chi_at_probe(params, phases, strong / 10.0)?;
    let spread = (a - b).norm();
    if spread > 1e-9 * a.norm().max(b.norm()) + 1e-12 * params.prefactor {
        return Err(Error::ProbeDependent { spread });
    }
    Ok(ComplexSusceptibility::new(a, Source::Oracle))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjudicationStatus {
    Decided,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjudicationReport {
    pub seed: Option<u64>,
    pub grid_size: usize,
    /// Points where the conventions differ enough to rank them.
    pub counted_points: usize,
    /// Points where both conventions give the same χ (loop term negligible).
    pub excluded_points: usize,
    /// Points where either route was singular.
    pub skipped_points: usize,
    /// Worst `|χ_analytic − χ_oracle| / |χ_oracle|` over all usable points.
    pub max_relative_error: BTreeMap<PhaseConvention, f64>,
    pub status: AdjudicationStatus,
    pub winning_convention: Option<PhaseConvention>,
}

impl AdjudicationReport {
    pub fn winner(&self) -> Result<PhaseConvention> {
        match (self.status, self.winning_convention) {
            (AdjudicationStatus::Decided, Some(c)) => Ok(c),
            _ => Err(Error::Inconclusive {
                full: self.max_relative_error[&PhaseConvention::Full],
                halved: self.max_relative_error[&PhaseConvention::Halved],
            }),
        }
    }
}

/// Relative gap between the two conventions below which a point cannot rank
/// them.
const COINCIDENCE_TOLERANCE: f64 = 1e-8;

/// Random parameter points: rates log-uniform in `[0.1, 100]`, `φ` uniform
/// in `[0, 2π)`, `Δ` uniform in `[−10, 10]`.
pub fn random_params(seed: u64, n_points: usize) -> Vec<DriveParams> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rate = |rng: &mut ChaCha8Rng| 10f64.powf(rng.gen_range(-1.0..2.0));
    (0..n_points)
        .map(|_| DriveParams {
            omega1: rate(&mut rng),
            omega2: rate(&mut rng),
            omega3: rate(&mut rng),
            gamma1: rate(&mut rng),
            gamma2: rate(&mut rng),
            phi: rng.gen_range(0.0..std::f64::consts::TAU),
            delta: rng.gen_range(-10.0..10.0),
            prefactor: 1.0,
        })
        .collect()
}

pub fn adjudicate_convention(seed: u64, n_points: usize) -> Result<AdjudicationReport> {
    if n_points < 50 {
        return Err(Error::InvalidGrid(format!("adjudication needs at least 50 points, got {n_points}")));
    }
    let mut report = adjudicate_points(&random_params(seed, n_points));
    report.seed = Some(seed);
    Ok(report)
}

enum PointOutcome {
    Skipped,
    Coincident([f64; 2]),
    Ranked([f64; 2]),
}

fn evaluate_point(p: &DriveParams) -> PointOutcome {
    let Ok(oracle) = solve_chi_oracle(p) else { return PointOutcome::Skipped };
    let oracle = oracle.as_complex();
    let analytic: Vec<Complex64> = PhaseConvention::ALL
        .iter()
        .filter_map(|&c| compute_chi(p, c).ok().map(|x| x.as_complex()))
        .collect();
    let [full, halved] = analytic[..] else { return PointOutcome::Skipped };

    let denom = oracle.norm().max(1e-30);
    let errors = [(full - oracle).norm() / denom, (halved - oracle).norm() / denom];
    if (full - halved).norm() <= COINCIDENCE_TOLERANCE * full.norm().max(halved.norm()) {
        PointOutcome::Coincident(errors)
    } else {
        PointOutcome::Ranked(errors)
    }
}

/// Compares both conventions with the oracle on the given points.
pub fn adjudicate_points(points: &[DriveParams]) -> AdjudicationReport {
    let outcomes: Vec<PointOutcome> = points.par_iter().map(evaluate_point).collect();

    let mut max_err = [0.0f64; 2];
    let (mut counted, mut excluded, mut skipped) = (0, 0, 0);
    let mut full_wins_all = true;
    let mut halved_wins_all = true;
    for outcome in &outcomes {
        match outcome {
            PointOutcome::Skipped => skipped += 1,
            PointOutcome::Coincident(e) | PointOutcome::Ranked(e) => {
                max_err[0] = max_err[0].max(e[0]);
                max_err[1] = max_err[1].max(e[1]);
                if let PointOutcome::Ranked(_) = outcome {
                    counted += 1;
                    full_wins_all &= e[0] < e[1];
                    halved_wins_all &= e[1] < e[0];
                } else {
                    excluded += 1;
                }
            }
        }
    }

    let winning_convention = match (counted > 0, full_wins_all, halved_wins_all) {
        (true, true, false) => Some(PhaseConvention::Full),
        (true, false, true) => Some(PhaseConvention::Halved),
        _ => None,
    };
    AdjudicationReport {
        seed: None,
        grid_size: points.len(),
        counted_points: counted,
        excluded_points: excluded,
        skipped_points: skipped,
        max_relative_error: BTreeMap::from([
            (PhaseConvention::Full, max_err[0]),
            (PhaseConvention::Halved, max_err[1]),
        ]),
        status: if winning_convention.is_some() {
            AdjudicationStatus::Decided
        } else {
            AdjudicationStatus::Inconclusive
        },
        winning_convention,
    }
}

/// Full 4×4 density matrix, indexed `a₁, a₂, b, c`.
pub type DensityMatrix = [[Complex64; 4]; 4];

const A1: usize = 0;
const C: usize = 3;

fn hamiltonian(params: &DriveParams, phases: FieldPhases, probe_rabi: f64) -> DensityMatrix {
    let o1 = rabi(params.omega1, phases.phi1);
    let o2 = rabi(params.omega2, phases.phi2);
    let o3 = rabi(params.omega3, phases.phi3);
    let op = Complex64::new(probe_rabi, 0.0);
    let d = Complex64::new(params.delta, 0.0);

    let mut h = [[ZERO; 4]; 4];
    h[0][0] = d;
    h[1][1] = d;
    h[2][2] = d;
    let mut couple = |i: usize, j: usize, omega: Complex64| {
        h[i][j] = -omega / 2.0;
        h[j][i] = -omega.conj() / 2.0;
    };
    couple(0, 2, o1);
    couple(1, 2, o2);
    couple(0, 1, o3);
    couple(0, 3, op);
    h
}

fn liouville_rhs(h: &DensityMatrix, decay: &[f64; 4], rho: &DensityMatrix) -> DensityMatrix {
    let mut out = [[ZERO; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            let mut comm = ZERO;
            for k in 0..4 {
                comm += h[i][k] * rho[k][j] - rho[i][k] * h[k][j];
            }
            out[i][j] = -I * comm - 0.5 * (decay[i] + decay[j]) * rho[i][j];
        }
    }
    out
}

fn axpy(rho: &DensityMatrix, k: &DensityMatrix, scale: f64) -> DensityMatrix {
    let mut out = *rho;
    for i in 0..4 {
        for j in 0..4 {
            out[i][j] += scale * k[i][j];
        }
    }
    out
}

/// Integrates the density matrix from `ρ_cc = 1` with classical fixed-step
/// RK4, calling `observe(t, ρ)` after every step (and once at `t = 0`).
pub fn integrate_density_matrix(
    params: &DriveParams,
    phases: FieldPhases,
    probe_rabi: f64,
    t_max: f64,
    dt: f64,
    mut observe: impl FnMut(f64, &DensityMatrix),
) -> Result<DensityMatrix> {
    params.validate()?;
    if !(dt > 0.0 && t_max > 0.0 && dt.is_finite() && t_max.is_finite()) {
        return Err(Error::InvalidStep(format!("t_max = {t_max}, dt = {dt}")));
    }
    let h = hamiltonian(params, phases, probe_rabi);
    let decay = [params.gamma1, params.gamma2, 0.0, 0.0];
    let mut rho = [[ZERO; 4]; 4];
    rho[C][C] = Complex64::new(1.0, 0.0);
    observe(0.0, &rho);

    let steps = (t_max / dt).round() as usize;
    for step in 1..=steps {
        let k1 = liouville_rhs(&h, &decay, &rho);
        let k2 = liouville_rhs(&h, &decay, &axpy(&rho, &k1, dt / 2.0));
        let k3 = liouville_rhs(&h, &decay, &axpy(&rho, &k2, dt / 2.0));
        let k4 = liouville_rhs(&h, &decay, &axpy(&rho, &k3, dt));
        for i in 0..4 {
            for j in 0..4 {
                rho[i][j] += dt / 6.0 * (k1[i][j] + 2.0 * k2[i][j] + 2.0 * k3[i][j] + k4[i][j]);
            }
        }
        observe(step as f64 * dt, &rho);
    }
    Ok(rho)
}

/// Quasi-steady χ from direct time integration.
///
/// `ρ̃_{a₁c}` is averaged over the last 10% of the trajectory. The trace is
/// not conserved (no repopulation), which only matters at second order in
/// the probe.
pub fn time_domain_check(
    params: &DriveParams,
    probe_rabi: f64,
    t_max: f64,
    dt: f64,
) -> Result<ComplexSusceptibility> {
    params.validate()?;
    check_probe(params, probe_rabi)?;
    let max_rate = [params.omega1, params.omega2, params.omega3, params.gamma1, params.gamma2, params.delta.abs(), probe_rabi]
        .into_iter()
        .fold(0.0, f64::max)
        .max(1.0);
    if dt > 1e-2 / max_rate {
        return Err(Error::InvalidStep(format!("dt = {dt} exceeds 1e-2 / {max_rate}")));
    }
    let min_decay = [params.gamma1, params.gamma2]
        .into_iter()
        .filter(|&g| g > 0.0)
        .fold(f64::INFINITY, f64::min);
    if !min_decay.is_finite() {
        return Err(Error::InvalidStep("time-domain check needs a positive decay rate".into()));
    }
    if t_max < 50.0 / min_decay {
        return Err(Error::InvalidStep(format!("t_max = {t_max} is shorter than 50 / {min_decay}")));
    }

    let window_start = 0.9 * t_max;
    let mut window = Vec::new();
    integrate_density_matrix(params, FieldPhases::from_collective(params.phi), probe_rabi, t_max, dt, |t, rho| {
        if t >= window_start {
            window.push(rho[A1][C]);
        }
    })?;

    let mean = settled_mean(&window)?;
    Ok(ComplexSusceptibility::new(params.prefactor * mean / probe_rabi, Source::Oracle))
}

/// Mean of the window, rejected if its RMS spread exceeds 1% of the mean.
fn settled_mean(window: &[Complex64]) -> Result<Complex64> {
    let n = window.len() as f64;
    let mean = window.iter().sum::<Complex64>() / n;
    let spread = (window.iter().map(|z| (z - mean).norm_sqr()).sum::<f64>() / n).sqrt();
    if !(spread <= 0.01 * mean.norm()) {
        return Err(Error::NotConverged { spread, mean: mean.norm() });
    }
    Ok(mean)
}
