use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Physical inputs for one evaluation of the probe response.
///
/// Rates and detunings are in units of a reference rate. `delta` is
/// `ω_{a₁c} − ν_p`, so a positive value means the probe is tuned below the
/// `|a₁⟩–|c⟩` resonance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    /// Rabi frequency of the `|a₁⟩–|b⟩` drive.
    pub omega1: f64,
    /// Rabi frequency of the `|a₂⟩–|b⟩` drive.
    pub omega2: f64,
    /// Rabi frequency magnitude of the `|a₁⟩–|a₂⟩` drive.
    pub omega3: f64,
    /// Collective loop phase, radians.
    pub phi: f64,
    /// Decay rate of `|a₁⟩`.
    pub gamma1: f64,
    /// Decay rate of `|a₂⟩`.
    pub gamma2: f64,
    /// Probe detuning.
    pub delta: f64,
    /// Overall susceptibility scale `2N|℘|²/ε₀ħ`.
    pub prefactor: f64,
}

impl Default for DriveParams {
    fn default() -> Self {
        Self {
            omega1: 0.0,
            omega2: 0.0,
            omega3: 0.0,
            phi: 0.0,
            gamma1: 0.0,
            gamma2: 0.0,
            delta: 0.0,
            prefactor: 1.0,
        }
    }
}

impl DriveParams {
    /// Equal drives `Ω₁ = Ω₂ = Ω₃ = omega` and equal decays `γ₁ = γ₂ = gamma`.
    pub fn symmetric(omega: f64, gamma: f64) -> Self {
        Self {
            omega1: omega,
            omega2: omega,
            omega3: omega,
            gamma1: gamma,
            gamma2: gamma,
            ..Self::default()
        }
    }

    pub fn with_delta(self, delta: f64) -> Self {
        Self { delta, ..self }
    }

    pub fn with_phi(self, phi: f64) -> Self {
        Self { phi, ..self }
    }

    pub fn with_omega1(self, omega1: f64) -> Self {
        Self { omega1, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        let nonneg = [
            ("omega1", self.omega1),
            ("omega2", self.omega2),
            ("omega3", self.omega3),
            ("gamma1", self.gamma1),
            ("gamma2", self.gamma2),
        ];
        for (field, value) in nonneg {
            if !value.is_finite() {
                return Err(Error::InvalidParams { field, reason: format!("{value} is not finite") });
            }
            if value < 0.0 {
                return Err(Error::InvalidParams { field, reason: format!("{value} is negative") });
            }
        }
        for (field, value) in [("phi", self.phi), ("delta", self.delta)] {
            if !value.is_finite() {
                return Err(Error::InvalidParams { field, reason: format!("{value} is not finite") });
            }
        }
        if !(self.prefactor.is_finite() && self.prefactor > 0.0) {
            return Err(Error::InvalidParams {
                field: "prefactor",
                reason: format!("{} must be positive", self.prefactor),
            });
        }
        Ok(())
    }

    /// Largest rate in the problem, floored at 1.
    pub(crate) fn rate_scale(&self) -> f64 {
        [self.omega1, self.omega2, self.omega3, self.gamma1, self.gamma2, self.delta.abs(), 1.0]
            .into_iter()
            .fold(0.0, f64::max)
    }
}

/// How the closed-loop term enters the real part `A` of the denominator.
///
/// The loop contributes `c·Ω₁Ω₂Ω₃·cos φ` to `A`. `Full` takes `c = 2`, the
/// sum `e^{iφ} + e^{−iφ}` that a Hermitian loop Hamiltonian produces. `Halved`
/// takes `c = 1`, which is the coefficient the closed-form localization roots
/// and the coincident-root detunings `(Ω/4)(√3 ∓ 1)` are built on.
///
/// The default is `Full`: the density-matrix oracle reproduces it to solver
/// precision and rejects `Halved` (see [`crate::oracle::adjudicate_convention`]).
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhaseConvention {
    #[default]
    Full,
    Halved,
}

impl PhaseConvention {
    pub const ALL: [PhaseConvention; 2] = [PhaseConvention::Full, PhaseConvention::Halved];

    /// Coefficient of `Ω₁Ω₂Ω₃·cos φ` in `A`.
    pub fn loop_coefficient(self) -> f64 {
        match self {
            PhaseConvention::Full => 2.0,
            PhaseConvention::Halved => 1.0,
        }
    }

    /// Short name used on the command line and in output files.
    pub fn tag(self) -> &'static str {
        match self {
            PhaseConvention::Full => "eq6",
            PhaseConvention::Halved => "eq9",
        }
    }
}

impl fmt::Display for PhaseConvention {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for PhaseConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "eq6" | "full" => Ok(PhaseConvention::Full),
            "eq9" | "halved" => Ok(PhaseConvention::Halved),
            other => Err(format!("unknown phase convention `{other}` (expected eq6 or eq9)")),
        }
    }
}
