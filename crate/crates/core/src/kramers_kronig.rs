//! Dispersion reconstructed from absorption by a principal-value Hilbert
//! transform.
//!
//! As a function of detuning `Δ = ω − ν` the susceptibility is analytic in
//! the lower half-plane and falls off as `1/Δ`, so
//!
//! ```text
//! χ′(Δ) = −(1/π) P∫ χ″(Δ′) / (Δ′ − Δ) dΔ′
//! ```
//!
//! The integral is truncated to a finite window and the pole is removed by
//! subtracting `χ″(Δ)`, whose contribution is then added back analytically.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{DriveParams, PhaseConvention};
use crate::suscept::{compute_chi, d_chi_d_delta};

pub const DEFAULT_HALF_WIDTH: f64 = 500.0;

/// Coarse panels laid over the window before adaptive refinement, so that
/// narrow transparency windows are not stepped over.
const INITIAL_PANELS: usize = 4000;
const PANEL_TOLERANCE: f64 = 1e-12;
const MAX_DEPTH: u32 = 40;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KramersKronigReport {
    pub delta: f64,
    pub half_width: f64,
    pub direct: f64,
    pub reconstructed: f64,
    pub abs_error: f64,
}

/// Compares `χ′(Δ)` with its reconstruction from `χ″` over
/// `[−half_width, half_width]`.
pub fn kramers_kronig_check(
    params: &DriveParams,
    convention: PhaseConvention,
    half_width: f64,
) -> Result<KramersKronigReport> {
    params.validate()?;
    let x = params.delta;
    if !(half_width > x.abs() && half_width.is_finite()) {
        return Err(Error::InvalidGrid(format!("window half-width {half_width} must exceed |Δ| = {}", x.abs())));
    }
    let at = |d: f64| compute_chi(&params.with_delta(d), convention).map(|c| c.chi_double_prime);
    let gx = at(x)?;
    let slope = d_chi_d_delta(params, convention)?.im;

    // Evaluation failures poison the sum rather than silently dropping mass.
    let integrand = |d: f64| {
        if d == x {
            slope
        } else {
            at(d).map_or(f64::NAN, |g| (g - gx) / (d - x))
        }
    };

    let (lo, hi) = (-half_width, half_width);
    let step = (hi - lo) / INITIAL_PANELS as f64;
    let mut sum = 0.0;
    for k in 0..INITIAL_PANELS {
        let a = lo + step * k as f64;
        let b = if k + 1 == INITIAL_PANELS { hi } else { a + step };
        sum += adaptive_simpson(&integrand, a, b, PANEL_TOLERANCE, MAX_DEPTH);
    }
    if !sum.is_finite() {
        return Err(Error::InvalidGrid("χ″ is singular inside the integration window".into()));
    }
    let pole = gx * ((hi - x) / (x - lo)).ln();
    let reconstructed = -(sum + pole) / PI;
    let direct = compute_chi(params, convention)?.chi_prime;
    Ok(KramersKronigReport {
        delta: x,
        half_width,
        direct,
        reconstructed,
        abs_error: (reconstructed - direct).abs(),
    })
}

fn adaptive_simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let m = 0.5 * (a + b);
    let fm = f(m);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, b, fa, fm, fb, whole, tol, depth)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step(
    f: &impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let delta = left + right - whole;
    if depth == 0 || delta.abs() <= 15.0 * tol || !delta.is_finite() {
        return left + right + delta / 15.0;
    }
    simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
}
