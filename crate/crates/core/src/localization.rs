//! Probe absorption along a standing-wave drive and the peak structure that
//! localizes the atom.
//!
//! The `|a₁⟩–|b⟩` drive is a cavity mode, so its Rabi frequency becomes
//! `Ω₁ sin κx`. The absorption `χ″` then depends on position only through
//! `s = sin κx`, and for a metastable `|a₂⟩` (`γ₂ = 0`) it peaks where the
//! real part of the denominator vanishes:
//!
//! ```text
//! A(s) = 2ΔΩ₁² s² + c·Ω₁Ω₂Ω₃ cos φ · s + 2Δ(Ω₂² + Ω₃²) − 8Δ³ = 0
//! ```
//!
//! Two coincident roots give two peaks per period that can both sit in one
//! half-wavelength; distinct reachable roots give four.

use std::f64::consts::{FRAC_1_SQRT_2, PI, TAU};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{DriveParams, PhaseConvention};
use crate::suscept::{chi_from_parts, parts};

/// Default number of samples per period.
pub const DEFAULT_PROFILE_POINTS: usize = 10_001;

/// Distance from `κx = 0` or `π` within which a maximum counts as centered
/// on a node or antinode boundary.
pub const BOUNDARY_TOLERANCE: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StandingWaveParams {
    /// `base.omega1` is the standing-wave amplitude.
    pub base: DriveParams,
    /// Position `κx`, radians.
    pub kx: f64,
}

/// `χ″` at one position along the standing wave.
pub fn chi_pp_standing(sw: &StandingWaveParams, convention: PhaseConvention) -> Result<f64> {
    sw.base.validate()?;
    chi_pp_at(&sw.base, sw.kx, convention)
}

fn chi_pp_at(base: &DriveParams, kx: f64, convention: PhaseConvention) -> Result<f64> {
    let local = parts(base, base.omega1 * kx.sin(), convention);
    Ok(chi_from_parts(local, base.prefactor)?.im)
}

/// Maps an angle to `(−π, π]`.
pub fn wrap_angle(x: f64) -> f64 {
    let y = (x + PI).rem_euclid(TAU) - PI;
    if y <= -PI {
        PI
    } else {
        y
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LocalizationProfile {
    /// Strictly increasing positions covering `(−π, π]` once.
    pub kx: Vec<f64>,
    /// `None` marks a singular point.
    pub chi_double_prime: Vec<Option<f64>>,
    pub params: DriveParams,
    pub convention: PhaseConvention,
}

impl LocalizationProfile {
    pub fn gap_count(&self) -> usize {
        self.chi_double_prime.iter().filter(|v| v.is_none()).count()
    }

    pub fn spacing(&self) -> f64 {
        TAU / self.kx.len() as f64
    }
}

/// Uniform samples `κx_j = −π + 2π(j + 1)/n`, `j = 0..n`.
pub fn scan_profile(
    base: &DriveParams,
    n_points: usize,
    convention: PhaseConvention,
) -> Result<LocalizationProfile> {
    base.validate()?;
    if n_points < 64 {
        return Err(Error::InvalidGrid(format!("profile needs at least 64 points, got {n_points}")));
    }
    let kx: Vec<f64> = (0..n_points)
        .map(|j| if j + 1 == n_points { PI } else { -PI + TAU * (j + 1) as f64 / n_points as f64 })
        .collect();
    let chi_double_prime = kx
        .par_iter()
        .map(|&x| chi_pp_at(base, x, convention).ok())
        .collect();
    Ok(LocalizationProfile { kx, chi_double_prime, params: *base, convention })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    /// Position, wrapped to `(−π, π]`.
    pub position: f64,
    pub height: f64,
    /// Full width at half maximum; `2π` if the profile never drops to half.
    pub fwhm: f64,
    /// Half-maximum crossings on either side, unwrapped so that
    /// `left_edge < position < right_edge`.
    pub left_edge: f64,
    pub right_edge: f64,
}

/// Maxima of a gap-free profile, refined against the profile's own `χ″`.
pub fn find_peaks(profile: &LocalizationProfile) -> Result<Vec<Peak>> {
    let gaps = profile.gap_count();
    if gaps > 0 {
        return Err(Error::GappedProfile { gaps });
    }
    let values: Vec<f64> = profile.chi_double_prime.iter().map(|v| v.unwrap_or_default()).collect();
    let (base, convention) = (profile.params, profile.convention);
    Ok(find_peaks_by(&profile.kx, &values, |x| {
        chi_pp_at(&base, x, convention).unwrap_or(f64::NEG_INFINITY)
    }))
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Periodic peak finding on samples `values` at uniformly spaced positions
/// `kx` spanning one period. `f` must be the `2π`-periodic function the
/// samples came from; it is used to polish positions and half-height
/// crossings.
pub fn find_peaks_by(kx: &[f64], values: &[f64], f: impl Fn(f64) -> f64) -> Vec<Peak> {
    let n = values.len();
    if n < 3 || kx.len() != n {
        return Vec::new();
    }
    let h = TAU / n as f64;
    let at = |i: isize| values[i.rem_euclid(n as isize) as usize];

    let mut peaks: Vec<Peak> = Vec::new();
    for i in 0..n {
        let (prev, here, next) = (at(i as isize - 1), values[i], at(i as isize + 1));
        if !(here > prev && here >= next && here > 0.0) {
            continue;
        }

        // Parabola through the three samples, then golden-section polish
        // inside the bracketing cell pair.
        let curvature = prev - 2.0 * here + next;
        let offset = if curvature < 0.0 { (0.5 * (prev - next) / curvature).clamp(-1.0, 1.0) } else { 0.0 };
        let parabolic = kx[i] + offset * h;
        let polished = golden_max(&f, kx[i] - h, kx[i] + h);
        let position = [polished, parabolic, kx[i]]
            .into_iter()
            .max_by(|a, b| f(*a).total_cmp(&f(*b)))
            .expect("three candidates");
        let height = f(position);
        let half = 0.5 * height;

        let walk = |dir: isize| -> Option<f64> {
            for k in 1..=n as isize {
                if at(i as isize + dir * k) <= half {
                    let inner = kx[i] + dir as f64 * (k - 1) as f64 * h;
                    let outer = kx[i] + dir as f64 * k as f64 * h;
                    return Some(bisect_level(&f, half, inner, outer));
                }
            }
            None
        };
        let (left_edge, right_edge) = match (walk(-1), walk(1)) {
            (Some(l), Some(r)) => (l, r),
            _ => (position - PI, position + PI),
        };
        let candidate = Peak {
            position: wrap_angle(position),
            height,
            fwhm: right_edge - left_edge,
            left_edge: left_edge - position + wrap_angle(position),
            right_edge: right_edge - position + wrap_angle(position),
        };

        match peaks.iter_mut().find(|p| circular_distance(p.position, candidate.position) < h) {
            Some(existing) if existing.height < candidate.height => *existing = candidate,
            Some(_) => {}
            None => peaks.push(candidate),
        }
    }
    peaks.sort_by(|a, b| a.position.total_cmp(&b.position));
    peaks
}

fn circular_distance(a: f64, b: f64) -> f64 {
    wrap_angle(a - b).abs()
}

fn golden_max(f: &impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let mut x1 = hi - GOLDEN * (hi - lo);
    let mut x2 = lo + GOLDEN * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..100 {
        if hi - lo <= 1e-13 {
            break;
        }
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + GOLDEN * (hi - lo);
            f2 = f(x2);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - GOLDEN * (hi - lo);
            f1 = f(x1);
        }
    }
    0.5 * (lo + hi)
}

/// Point between `inner` (above `level`) and `outer` (at or below) where `f`
/// crosses `level`.
fn bisect_level(f: &impl Fn(f64) -> f64, level: f64, mut inner: f64, mut outer: f64) -> f64 {
    for _ in 0..64 {
        let mid = 0.5 * (inner + outer);
        if f(mid) > level {
            inner = mid;
        } else {
            outer = mid;
        }
    }
    0.5 * (inner + outer)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Half {
    /// `κx ∈ (0, π)`
    PositiveHalf,
    /// `κx ∈ (−π, 0)`
    NegativeHalf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Confinement {
    /// Every peak, including its half-maximum interval, lies strictly inside
    /// one half-period.
    SubHalfWavelength { half: Half },
    /// A maximum sits on `κx = 0` or `κx = π`.
    BoundaryCentered,
    FullWavelength,
    NoPeaks,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfinementReport {
    pub peak_count: usize,
    pub classification: Confinement,
    pub peaks: Vec<Peak>,
}

pub fn classify_confinement(peaks: &[Peak]) -> ConfinementReport {
    let inside = |lo: f64, hi: f64| peaks.iter().all(|p| p.left_edge > lo && p.right_edge < hi);
    let on_boundary = |p: &Peak| {
        circular_distance(p.position, 0.0) <= BOUNDARY_TOLERANCE
            || circular_distance(p.position, PI) <= BOUNDARY_TOLERANCE
    };

    let classification = if peaks.is_empty() {
        Confinement::NoPeaks
    } else if inside(0.0, PI) {
        Confinement::SubHalfWavelength { half: Half::PositiveHalf }
    } else if inside(-PI, 0.0) {
        Confinement::SubHalfWavelength { half: Half::NegativeHalf }
    } else if peaks.iter().any(on_boundary) {
        Confinement::BoundaryCentered
    } else {
        Confinement::FullWavelength
    };
    ConfinementReport { peak_count: peaks.len(), classification, peaks: peaks.to_vec() }
}

/// Roots `s = sin κx` of the real part of the denominator at `γ₂ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RootPair {
    /// The `+√D` branch.
    pub r1: f64,
    /// The `−√D` branch.
    pub r2: f64,
    pub discriminant: f64,
    /// `|R| ≤ 1`, i.e. some real `κx` reaches the root.
    pub reachable: [bool; 2],
}

/// Discriminant `(cΩ₂Ω₃ cos φ)² − 16Δ²(Ω₂² + Ω₃² − 4Δ²)` of `A(s) = 0`.
pub fn root_discriminant(base: &DriveParams, convention: PhaseConvention) -> f64 {
    let (d2, o2s, o3s) = (base.delta * base.delta, base.omega2 * base.omega2, base.omega3 * base.omega3);
    let beta = convention.loop_coefficient() * base.omega2 * base.omega3 * base.phi.cos();
    beta * beta - 16.0 * d2 * (o2s + o3s - 4.0 * d2)
}

/// Positions where `χ″` peaks, as values of `sin κx`.
///
/// Returns `None` when the discriminant is negative or `A` does not depend on
/// position. At `Δ = 0` the quadratic degenerates to a linear equation whose
/// single root is returned as both `r1` and `r2`.
pub fn roots_r(base: &DriveParams, convention: PhaseConvention) -> Result<Option<RootPair>> {
    base.validate()?;
    if base.gamma2 != 0.0 {
        return Err(Error::RequiresMetastable { gamma2: base.gamma2 });
    }
    if base.omega1 == 0.0 {
        return Ok(None);
    }
    let d = base.delta;
    let (o2s, o3s) = (base.omega2 * base.omega2, base.omega3 * base.omega3);
    // A / Ω₁ in terms of t = Ω₁ s: 2Δ t² + β t + γ₀.
    let beta = convention.loop_coefficient() * base.omega2 * base.omega3 * base.phi.cos();
    let gamma0 = 2.0 * d * (o2s + o3s) - 8.0 * d * d * d;
    let reach = |r: f64| r.abs() <= 1.0;

    if d == 0.0 {
        if beta == 0.0 {
            return Ok(None);
        }
        let r = -gamma0 / beta / base.omega1;
        return Ok(Some(RootPair { r1: r, r2: r, discriminant: beta * beta, reachable: [reach(r); 2] }));
    }

    let mut disc = root_discriminant(base, convention);
    let disc_scale = beta * beta + 16.0 * d * d * (o2s + o3s) + 64.0 * d.powi(4);
    if disc < 0.0 {
        if disc < -1e-12 * disc_scale {
            return Ok(None);
        }
        disc = 0.0;
    }
    let sq = disc.sqrt();
    let q = -0.5 * (beta + beta.signum() * sq);
    let (plus, minus) = if q == 0.0 {
        (0.0, 0.0)
    } else if beta >= 0.0 {
        (gamma0 / q, q / (2.0 * d))
    } else {
        (q / (2.0 * d), gamma0 / q)
    };
    let (r1, r2) = (plus / base.omega1, minus / base.omega1);
    Ok(Some(RootPair { r1, r2, discriminant: disc, reachable: [reach(r1), reach(r2)] }))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CoincidenceCase {
    /// `φ = 0` or `φ = π`.
    InPhase,
    /// `φ = π/2`.
    Quadrature,
}

/// Detunings at which the two roots coincide for `Ω₂ = Ω₃ = Ω` with the
/// `cos φ` loop term, in increasing order.
pub fn coincidence_detunings(omega: f64, case: CoincidenceCase) -> Result<Vec<f64>> {
    if !(omega > 0.0 && omega.is_finite()) {
        return Err(Error::InvalidParams { field: "omega", reason: format!("{omega} must be positive") });
    }
    let s3 = 3f64.sqrt();
    Ok(match case {
        CoincidenceCase::InPhase => {
            let (d1, d2) = (omega / 4.0 * (s3 - 1.0), omega / 4.0 * (s3 + 1.0));
            vec![-d2, -d1, d1, d2]
        }
        CoincidenceCase::Quadrature => {
            let d3 = omega * FRAC_1_SQRT_2;
            vec![-d3, 0.0, d3]
        }
    })
}
