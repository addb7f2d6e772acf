//! Group index of the probe and its dependence on the loop phase.
//!
//! ```text
//! n_g − 1 = 2πχ′ + 2πν_p ∂χ′/∂ν_p,    ∂/∂ν_p = −∂/∂Δ
//! ```
//!
//! Values are in the same units as χ. Positive `n_g − 1` is subluminal,
//! negative is superluminal.

use std::f64::consts::TAU;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{DriveParams, PhaseConvention};
use crate::suscept::{compute_chi, d_chi_d_delta};

/// Probe frequency used throughout the phase-control presets.
pub const DEFAULT_NU_P: f64 = 1000.0;

const BISECTION_TOLERANCE: f64 = 1e-9;
const BISECTION_MAX_ITER: usize = 200;

pub fn group_index(params: &DriveParams, nu_p: f64, convention: PhaseConvention) -> Result<f64> {
    check_nu_p(nu_p)?;
    let chi = compute_chi(params, convention)?;
    let slope = d_chi_d_delta(params, convention)?;
    Ok(TAU * chi.chi_prime - TAU * nu_p * slope.re)
}

fn check_nu_p(nu_p: f64) -> Result<()> {
    if !(nu_p > 0.0 && nu_p.is_finite()) {
        return Err(Error::InvalidParams { field: "nu_p", reason: format!("{nu_p} must be positive") });
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepAxis {
    Phi,
    Delta,
}

impl SweepAxis {
    fn apply(self, params: &DriveParams, value: f64) -> DriveParams {
        match self {
            SweepAxis::Phi => params.with_phi(value),
            SweepAxis::Delta => params.with_delta(value),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            SweepAxis::Phi => "phi",
            SweepAxis::Delta => "delta",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GroupIndexPoint {
    pub sweep_value: f64,
    pub ng_minus_one: f64,
    pub chi_double_prime: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SweepPoint {
    Value(GroupIndexPoint),
    /// The response is singular here; nothing is interpolated across it.
    Gap { sweep_value: f64 },
}

impl SweepPoint {
    pub fn sweep_value(&self) -> f64 {
        match self {
            SweepPoint::Value(p) => p.sweep_value,
            SweepPoint::Gap { sweep_value } => *sweep_value,
        }
    }

    pub fn value(&self) -> Option<&GroupIndexPoint> {
        match self {
            SweepPoint::Value(p) => Some(p),
            SweepPoint::Gap { .. } => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSeries {
    pub axis: SweepAxis,
    pub points: Vec<SweepPoint>,
    pub params: DriveParams,
    pub nu_p: f64,
    pub convention: PhaseConvention,
}

impl SweepSeries {
    /// Group index at an arbitrary axis value, with the series' other
    /// parameters.
    pub fn evaluate(&self, value: f64) -> Result<f64> {
        group_index(&self.axis.apply(&self.params, value), self.nu_p, self.convention)
    }

    pub fn values(&self) -> impl Iterator<Item = &GroupIndexPoint> {
        self.points.iter().filter_map(SweepPoint::value)
    }

    pub fn gap_count(&self) -> usize {
        self.points.iter().filter(|p| p.value().is_none()).count()
    }
}

pub(crate) fn check_grid(grid: &[f64], min_len: usize) -> Result<()> {
    if grid.len() < min_len {
        return Err(Error::InvalidGrid(format!("need at least {min_len} points, got {}", grid.len())));
    }
    if grid.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidGrid("grid contains non-finite values".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidGrid("grid must be strictly increasing".into()));
    }
    Ok(())
}

fn sweep(
    axis: SweepAxis,
    params: &DriveParams,
    nu_p: f64,
    grid: &[f64],
    convention: PhaseConvention,
) -> Result<SweepSeries> {
    params.validate()?;
    check_nu_p(nu_p)?;
    check_grid(grid, 2)?;
    let points = grid
        .par_iter()
        .map(|&x| {
            let p = axis.apply(params, x);
            match (group_index(&p, nu_p, convention), compute_chi(&p, convention)) {
                (Ok(ng), Ok(chi)) => SweepPoint::Value(GroupIndexPoint {
                    sweep_value: x,
                    ng_minus_one: ng,
                    chi_double_prime: chi.chi_double_prime,
                }),
                _ => SweepPoint::Gap { sweep_value: x },
            }
        })
        .collect();
    Ok(SweepSeries { axis, points, params: *params, nu_p, convention })
}

/// `n_g − 1` and `χ″` over a phase grid, everything else fixed.
pub fn phase_sweep(
    params: &DriveParams,
    nu_p: f64,
    phi_grid: &[f64],
    convention: PhaseConvention,
) -> Result<SweepSeries> {
    sweep(SweepAxis::Phi, params, nu_p, phi_grid, convention)
}

/// `n_g − 1` and `χ″` over a detuning grid.
pub fn detuning_sweep(
    params: &DriveParams,
    nu_p: f64,
    delta_grid: &[f64],
    convention: PhaseConvention,
) -> Result<SweepSeries> {
    sweep(SweepAxis::Delta, params, nu_p, delta_grid, convention)
}

/// `n` evenly spaced points from `start` to `stop` inclusive.
pub fn linspace(start: f64, stop: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![start],
        _ => {
            let step = (stop - start) / (n - 1) as f64;
            (0..n).map(|k| if k == n - 1 { stop } else { start + step * k as f64 }).collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Propagation {
    Subluminal,
    Superluminal,
}

impl Propagation {
    fn of(ng_minus_one: f64) -> Self {
        if ng_minus_one > 0.0 {
            Propagation::Subluminal
        } else {
            Propagation::Superluminal
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SignCrossing {
    /// Grid values bracketing the sign change.
    pub lower: f64,
    pub upper: f64,
    /// Bisection estimate of the zero of `n_g − 1`.
    pub root: f64,
    /// `n_g − 1` at `root`.
    pub residual: f64,
    pub converged: bool,
    pub below: Propagation,
    pub above: Propagation,
}

/// Sign changes of `n_g − 1` between adjacent, gap-free samples, refined by
/// bisection on the series' own group index.
pub fn find_sign_crossings(series: &SweepSeries) -> Vec<SignCrossing> {
    let samples: Vec<(f64, Option<f64>)> = series
        .points
        .iter()
        .map(|p| (p.sweep_value(), p.value().map(|v| v.ng_minus_one)))
        .collect();
    find_sign_crossings_by(&samples, |x| series.evaluate(x).ok())
}

/// Sign crossings of an arbitrary sampled function `f`.
pub fn find_sign_crossings_by(
    samples: &[(f64, Option<f64>)],
    f: impl Fn(f64) -> Option<f64>,
) -> Vec<SignCrossing> {
    samples
        .windows(2)
        .filter_map(|w| {
            let ((x0, Some(y0)), (x1, Some(y1))) = (w[0], w[1]) else { return None };
            if (y0 < 0.0) == (y1 < 0.0) {
                return None;
            }
            let (root, residual, converged) = bisect(&f, (x0, y0), (x1, y1));
            Some(SignCrossing {
                lower: x0,
                upper: x1,
                root,
                residual,
                converged,
                below: Propagation::of(y0),
                above: Propagation::of(y1),
            })
        })
        .collect()
}

fn bisect(f: &impl Fn(f64) -> Option<f64>, lo: (f64, f64), hi: (f64, f64)) -> (f64, f64, bool) {
    let (mut a, mut fa) = lo;
    let (mut b, mut fb) = hi;
    for _ in 0..BISECTION_MAX_ITER {
        let best = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
        if best.1.abs() <= BISECTION_TOLERANCE {
            return (best.0, best.1, true);
        }
        let mid = 0.5 * (a + b);
        if mid <= a || mid >= b {
            return (best.0, best.1, false);
        }
        let Some(fm) = f(mid) else { return (best.0, best.1, false) };
        if (fm < 0.0) == (fa < 0.0) {
            (a, fa) = (mid, fm);
        } else {
            (b, fb) = (mid, fm);
        }
    }
    let best = if fa.abs() <= fb.abs() { (a, fa) } else { (b, fb) };
    (best.0, best.1, best.1.abs() <= BISECTION_TOLERANCE)
}
