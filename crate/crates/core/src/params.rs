//! Physical inputs and the composite rates shared by every response formula.
//!
//! Natural units throughout: `ħ = ε₀ = c = 1`, so frequencies and wave numbers
//! coincide. The g–e dipole projection `μ∥` is not an input; it is fixed by the
//! free-space relation `γ₀ = μ∥²ω₀³/(3π)` so that the configured `γ₀` is the
//! radiative linewidth of the transition.

use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::greens;

/// Atomic level structure and linewidths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AtomParams {
    /// g→e transition frequency.
    pub omega0: f64,
    /// e→u level spacing.
    pub omega_u: f64,
    /// Natural radiative linewidth of e→g.
    pub gamma0: f64,
    /// Nonradiative contribution to the e→g decay.
    pub gamma_nr: f64,
    /// Natural linewidth of the auxiliary upper level u.
    pub gamma_u: f64,
}

impl Default for AtomParams {
    fn default() -> Self {
        Self {
            omega0: 1.0e4,
            omega_u: 3.0e4,
            gamma0: 1.0,
            gamma_nr: 0.0,
            gamma_u: 1.0e3,
        }
    }
}

impl AtomParams {
    pub fn validate(&self) -> Result<()> {
        positive("omega0", self.omega0)?;
        positive("gamma0", self.gamma0)?;
        positive("gamma_u", self.gamma_u)?;
        if !(self.gamma_nr >= 0.0) || !self.gamma_nr.is_finite() {
            return Err(Error::invalid(
                "gamma_nr",
                self.gamma_nr,
                "must be finite and ≥ 0",
            ));
        }
        if !self.omega_u.is_finite() {
            return Err(Error::invalid("omega_u", self.omega_u, "must be finite"));
        }
        Ok(())
    }

    /// `γ = γ_nr + γ₀`.
    pub fn gamma(&self) -> f64 {
        self.gamma_nr + self.gamma0
    }

    /// Squared dipole projection `μ∥²` that reproduces `γ₀` at `ω₀`.
    pub fn dipole_sq(&self) -> f64 {
        dipole_sq_for_rate(self.gamma0, self.omega0)
    }

    /// Squared u–e dipole that reproduces `γ_u` at the emission frequency
    /// `ω_u − ω₀`.
    pub fn upper_dipole_sq(&self) -> Result<f64> {
        let omega = self.upper_emission_frequency();
        if !(omega > 0.0) {
            return Err(Error::invalid(
                "omega_u",
                self.omega_u,
                "u→e emission frequency ω_u − ω₀ must be positive",
            ));
        }
        Ok(dipole_sq_for_rate(self.gamma_u, omega))
    }

    pub fn upper_emission_frequency(&self) -> f64 {
        self.omega_u - self.omega0
    }

    /// Resonant normalization cross-section `σ₀ = 2ω₀μ∥²/γ₀ = 6π/k₀²`.
    pub fn sigma0(&self) -> f64 {
        2.0 * self.omega0 * self.dipole_sq() / self.gamma0
    }
}

/// Dipole squared for which the free-space rate at `omega` equals `rate`.
pub fn dipole_sq_for_rate(rate: f64, omega: f64) -> f64 {
    rate / (-2.0 * omega * omega * greens::im_green_coincident(omega))
}

/// Probe and pump fields.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DriveParams {
    /// Probe angular frequency ω.
    pub omega_probe: f64,
    /// Probe Rabi frequency Ω₀.
    pub rabi_probe: f64,
    /// Pump Rabi frequency Ω_p.
    pub rabi_pump: f64,
}

impl DriveParams {
    pub fn at_detuning(atom: &AtomParams, detuning: f64, rabi_probe: f64, rabi_pump: f64) -> Self {
        Self {
            omega_probe: atom.omega0 + detuning,
            rabi_probe,
            rabi_pump,
        }
    }

    /// Pump Rabi frequency that yields the effective pump rate `pump_rate`.
    pub fn rabi_pump_for_rate(atom: &AtomParams, pump_rate: f64) -> f64 {
        (pump_rate * atom.gamma_u).sqrt()
    }

    pub fn with_pump_rate(mut self, atom: &AtomParams, pump_rate: f64) -> Self {
        self.rabi_pump = Self::rabi_pump_for_rate(atom, pump_rate);
        self
    }

    pub fn detuning(&self, atom: &AtomParams) -> f64 {
        self.omega_probe - atom.omega0
    }

    pub fn validate(&self) -> Result<()> {
        non_negative("rabi_probe", self.rabi_probe)?;
        non_negative("rabi_pump", self.rabi_pump)?;
        if !self.omega_probe.is_finite() {
            return Err(Error::invalid(
                "omega_probe",
                self.omega_probe,
                "must be finite",
            ));
        }
        Ok(())
    }
}

/// How the radiative rate at the probe frequency is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaOmegaMode {
    /// Quasi-resonant: `γ_ω = γ₀`, and every slowly varying `ω` prefactor is
    /// taken at `ω₀`.
    #[default]
    Flat,
    /// Free-space: `γ_ω = γ₀(ω/ω₀)³`, prefactors evaluated at the probe `ω`.
    #[serde(alias = "cubic")]
    CubicFreeSpace,
}

/// Rates derived once from the inputs and shared by every formula.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedRates {
    pub gamma0: f64,
    pub gamma_nr: f64,
    /// `γ = γ_nr + γ₀`.
    pub gamma: f64,
    /// `P = Ω_p²/γ_u`.
    pub pump_rate: f64,
    /// `Γ = γ + P`.
    pub big_gamma: f64,
    /// Radiative rate at the probe frequency.
    pub gamma_omega: f64,
    pub omega0: f64,
    /// Probe frequency ω.
    pub omega: f64,
    /// Frequency used for slowly varying `ħω` prefactors (ω₀ in flat mode).
    pub carrier: f64,
    pub mode: GammaOmegaMode,
}

pub fn derive_rates(
    atom: &AtomParams,
    drive: &DriveParams,
    mode: GammaOmegaMode,
) -> Result<DerivedRates> {
    atom.validate()?;
    drive.validate()?;
    let pump_rate = drive.rabi_pump * drive.rabi_pump / atom.gamma_u;
    let (gamma_omega, carrier) = match mode {
        GammaOmegaMode::Flat => (atom.gamma0, atom.omega0),
        GammaOmegaMode::CubicFreeSpace => {
            if !(drive.omega_probe > 0.0) {
                return Err(Error::invalid(
                    "omega_probe",
                    drive.omega_probe,
                    "must be positive for the free-space γ_ω",
                ));
            }
            let ratio = drive.omega_probe / atom.omega0;
            (atom.gamma0 * ratio * ratio * ratio, drive.omega_probe)
        }
    };
    let gamma = atom.gamma();
    Ok(DerivedRates {
        gamma0: atom.gamma0,
        gamma_nr: atom.gamma_nr,
        gamma,
        pump_rate,
        big_gamma: gamma + pump_rate,
        gamma_omega,
        omega0: atom.omega0,
        omega: drive.omega_probe,
        carrier,
        mode,
    })
}

impl DerivedRates {
    /// `δ = ω − ω₀`.
    pub fn detuning(&self) -> f64 {
        self.omega - self.omega0
    }

    /// `δ² + Γ²/4`.
    pub fn lorentzian_denominator(&self) -> f64 {
        let d = self.detuning();
        d * d + 0.25 * self.big_gamma * self.big_gamma
    }

    /// Steady ground-state population `γ/Γ`.
    pub fn ground_fraction(&self) -> f64 {
        self.gamma / self.big_gamma
    }

    /// Steady excited-state population `P/Γ`.
    pub fn excited_fraction(&self) -> f64 {
        self.pump_rate / self.big_gamma
    }

    /// Same atom and probe, different pump rate.
    pub fn with_pump_rate(mut self, pump_rate: f64) -> Self {
        self.pump_rate = pump_rate;
        self.big_gamma = self.gamma + pump_rate;
        self
    }

    /// Same atom and pump, probe moved to exact resonance.
    pub fn at_resonance(mut self) -> Self {
        self.omega = self.omega0;
        self.carrier = self.omega0;
        self.gamma_omega = self.gamma0;
        self
    }

    /// Same atom and pump, probe at detuning `delta` under the current mode.
    pub fn at_detuning(mut self, delta: f64) -> Self {
        self.omega = self.omega0 + delta;
        match self.mode {
            GammaOmegaMode::Flat => {}
            GammaOmegaMode::CubicFreeSpace => {
                let ratio = self.omega / self.omega0;
                self.gamma_omega = self.gamma0 * ratio * ratio * ratio;
                self.carrier = self.omega;
            }
        }
        self
    }
}

/// Thresholds for the asymptotic regime conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RegimeThresholds {
    /// Incoherent pumping requires `γ_u ≥ min_upper_width_ratio · γ₀`.
    pub min_upper_width_ratio: f64,
    /// Weak probing requires `Ω₀ ≤ max_probe_ratio · Γ`.
    pub max_probe_ratio: f64,
}

impl Default for RegimeThresholds {
    fn default() -> Self {
        Self {
            min_upper_width_ratio: 100.0,
            max_probe_ratio: 0.1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum RegimeWarning {
    UpperLevelTooNarrow { ratio: f64, required: f64 },
    ProbeTooStrong { ratio: f64, allowed: f64 },
}

impl std::fmt::Display for RegimeWarning {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RegimeWarning::UpperLevelTooNarrow { ratio, required } => write!(
                f,
                "γ_u/γ₀ = {ratio} < {required}: incoherent-pump elimination is not justified"
            ),
            RegimeWarning::ProbeTooStrong { ratio, allowed } => write!(
                f,
                "Ω₀/Γ = {ratio} > {allowed}: probe is not weak, saturation is neglected"
            ),
        }
    }
}

/// Regime conditions are asymptotic; violations are reported, not rejected.
pub fn regime_warnings(
    atom: &AtomParams,
    drive: &DriveParams,
    rates: &DerivedRates,
    thresholds: &RegimeThresholds,
) -> Vec<RegimeWarning> {
    let mut out = Vec::new();
    let ratio = atom.gamma_u / atom.gamma0;
    if ratio < thresholds.min_upper_width_ratio {
        out.push(RegimeWarning::UpperLevelTooNarrow {
            ratio,
            required: thresholds.min_upper_width_ratio,
        });
    }
    let ratio = drive.rabi_probe / rates.big_gamma;
    if ratio > thresholds.max_probe_ratio {
        out.push(RegimeWarning::ProbeTooStrong {
            ratio,
            allowed: thresholds.max_probe_ratio,
        });
    }
    out
}

/// `σ₀` in natural units from `ω₀` alone.
pub fn sigma0_from_wavenumber(omega0: f64) -> f64 {
    6.0 * PI / (omega0 * omega0)
}

fn positive(name: &'static str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, value, "must be finite and > 0"))
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<()> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(name, value, "must be finite and ≥ 0"))
    }
}
