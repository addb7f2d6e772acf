//! Closed-form weak-probe susceptibility.
//!
//! With `N = Ω₂² − 4Δ² + 2iγ₂Δ` and `Y = A + iB`,
//!
//! ```text
//! A = −8Δ³ + 2Δ(Ω₁² + Ω₂² + Ω₃²) + 2γ₁γ₂Δ + c·Ω₁Ω₂Ω₃·cos φ
//! B = 4Δ²(γ₁ + γ₂) − (γ₁Ω₂² + γ₂Ω₁²)
//! χ = K·N / Y
//! ```
//!
//! where `c` is the [`PhaseConvention`] loop coefficient.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{DriveParams, PhaseConvention};

/// Guard on `|Y|²` below which the response is reported as singular.
pub const EPSILON_DENOMINATOR: f64 = 1e-30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Analytic,
    Oracle,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexSusceptibility {
    pub chi_prime: f64,
    pub chi_double_prime: f64,
    pub source: Source,
}

impl ComplexSusceptibility {
    pub fn new(chi: Complex64, source: Source) -> Self {
        Self { chi_prime: chi.re, chi_double_prime: chi.im, source }
    }

    pub fn as_complex(&self) -> Complex64 {
        Complex64::new(self.chi_prime, self.chi_double_prime)
    }
}

/// Denominator pieces evaluated with an explicit (possibly negative) `Ω₁`.
///
/// The standing-wave profile substitutes `Ω₁ sin κx` here, which is why the
/// first drive is passed separately instead of read from `p`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Parts {
    pub numerator: Complex64,
    pub y: Complex64,
}

pub(crate) fn parts(p: &DriveParams, omega1: f64, convention: PhaseConvention) -> Parts {
    let d = p.delta;
    let d2 = d * d;
    let (o1s, o2s, o3s) = (omega1 * omega1, p.omega2 * p.omega2, p.omega3 * p.omega3);

    let a = -8.0 * d2 * d
        + 2.0 * d * (o1s + o2s + o3s)
        + 2.0 * p.gamma1 * p.gamma2 * d
        + convention.loop_coefficient() * omega1 * p.omega2 * p.omega3 * p.phi.cos();
    // Grouped per decay channel so that at γ₂ = 0 the sign of B is exactly
    // the negated sign of Re N, which keeps χ″ ≥ 0 in floating point.
    let b = p.gamma1 * (4.0 * d2 - o2s) + p.gamma2 * (4.0 * d2 - o1s);

    Parts {
        numerator: Complex64::new(o2s - 4.0 * d2, 2.0 * p.gamma2 * d),
        y: Complex64::new(a, b),
    }
}

/// χ from numerator and denominator using the `Z = |Y|²` split, so that the
/// real and imaginary parts are each a single quotient.
pub(crate) fn chi_from_parts(parts: Parts, prefactor: f64) -> Result<Complex64> {
    let Parts { numerator: n, y } = parts;
    let z = y.norm_sqr();
    if !(z > EPSILON_DENOMINATOR) {
        return Err(Error::DegenerateDenominator { norm_sqr: z });
    }
    let re = (n.re * y.re + n.im * y.im) / z;
    let im = (n.im * y.re - n.re * y.im) / z;
    Ok(Complex64::new(prefactor * re, prefactor * im))
}

/// `Y = A + iB` for the given parameters.
pub fn compute_y(params: &DriveParams, convention: PhaseConvention) -> Complex64 {
    parts(params, params.omega1, convention).y
}

pub fn compute_chi(params: &DriveParams, convention: PhaseConvention) -> Result<ComplexSusceptibility> {
    params.validate()?;
    let chi = chi_from_parts(parts(params, params.omega1, convention), params.prefactor)?;
    Ok(ComplexSusceptibility::new(chi, Source::Analytic))
}

/// Exact `dχ/dΔ` of the closed form (quotient rule).
pub fn d_chi_d_delta(params: &DriveParams, convention: PhaseConvention) -> Result<Complex64> {
    params.validate()?;
    let p = params;
    let Parts { numerator: n, y } = parts(p, p.omega1, convention);
    let z = y.norm_sqr();
    if !(z > EPSILON_DENOMINATOR) {
        return Err(Error::DegenerateDenominator { norm_sqr: z });
    }
    let d = p.delta;
    let dn = Complex64::new(-8.0 * d, 2.0 * p.gamma2);
    let dy = Complex64::new(
        -24.0 * d * d
            + 2.0 * (p.omega1 * p.omega1 + p.omega2 * p.omega2 + p.omega3 * p.omega3)
            + 2.0 * p.gamma1 * p.gamma2,
        8.0 * d * (p.gamma1 + p.gamma2),
    );
    Ok(p.prefactor * (dn * y - n * dy) / (y * y))
}

/// χ over a detuning grid; singular points come back as `None`.
pub fn delta_sweep(
    params: &DriveParams,
    deltas: &[f64],
    convention: PhaseConvention,
) -> Vec<Option<ComplexSusceptibility>> {
    use rayon::prelude::*;
    deltas
        .par_iter()
        .map(|&d| compute_chi(&params.with_delta(d), convention).ok())
        .collect()
}
