//! Semiclassical comparator: the induced dipole of the pumped atom, its
//! effective polarizability, and the power it radiates into its own field.
//!
//! The classical expression treats ground and excited contributions to the
//! dipole as if they were mutually coherent, which produces a factor
//! `(P − γ)²/Γ²` relative to the quantum scattered power.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::greens;
use crate::params::{dipole_sq_for_rate, DerivedRates, DriveParams};

/// Common axis of the dipole moment and the probe polarization.
pub const PROBE_AXIS: [f64; 3] = [0.0, 0.0, 1.0];

/// `α∥(ω)` in units of `μ∥²/(ħγ₀)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Polarizability(pub Complex64);

/// `α∥ = (P − γ)/Γ · μ∥²/(ħ(δ + iΓ/2))`.
pub fn polarizability(rates: &DerivedRates) -> Polarizability {
    let inversion = (rates.pump_rate - rates.gamma) / rates.big_gamma;
    let denom = Complex64::new(rates.detuning(), 0.5 * rates.big_gamma) / rates.gamma0;
    Polarizability(inversion / denom)
}

/// Steady dipole phasor `⟨d(ω)⟩ = (P − γ)/Γ · iΩ₀μ∥/(δ + iΓ/2)` in units of μ∥.
pub fn dipole_phasor(rates: &DerivedRates, drive: &DriveParams) -> Complex64 {
    let inversion = (rates.pump_rate - rates.gamma) / rates.big_gamma;
    let denom = Complex64::new(rates.detuning(), 0.5 * rates.big_gamma);
    Complex64::i() * drive.rabi_probe * inversion / denom
}

/// Complex probe amplitude in units of `ħγ₀/μ∥` for which
/// `⟨d(ω)⟩ = α∥ · E`. The dipole phasor carries a factor `i` relative to a
/// real field amplitude `E₀ = Ω₀/μ∥`, so the matching phasor is `iE₀`.
pub fn probe_field_phasor(rates: &DerivedRates, drive: &DriveParams) -> Complex64 {
    Complex64::i() * drive.rabi_probe / rates.gamma0
}

/// `⟨d(t)⟩ = ⟨d(ω)⟩ e^{−iωt}` along [`PROBE_AXIS`], in units of μ∥.
pub fn dipole_expectation(rates: &DerivedRates, drive: &DriveParams, t: f64) -> [Complex64; 3] {
    let d = dipole_phasor(rates, drive) * Complex64::from_polar(1.0, -rates.omega * t);
    PROBE_AXIS.map(|u| d * u)
}

/// Power the induced dipole delivers to its own field,
/// `W_coh = −(ω/2) Im{⟨d⟩ · E*(r_A)}` with `E = −k² G(0⁺) ⟨d⟩`, in units of
/// `ħω₀γ₀`.
///
/// Only the finite `Im G` survives at the dipole position; the divergent
/// `Re G` self-field is dropped.
pub fn coherent_power(rates: &DerivedRates, drive: &DriveParams) -> f64 {
    let omega = rates.carrier;
    let mu = dipole_sq_for_rate(rates.gamma0, rates.omega0).sqrt();
    let d = dipole_phasor(rates, drive) * mu;
    let g_self = Complex64::new(0.0, greens::im_green_coincident(omega));
    let field = -omega * omega * g_self * d;
    let w = -0.5 * omega * (d * field.conj()).im;
    w / (rates.omega0 * rates.gamma0)
}

/// `(P − γ)²/Γ²`, the ratio `W_coh/W_sc`.
pub fn discrepancy_factor(rates: &DerivedRates) -> f64 {
    let x = (rates.pump_rate - rates.gamma) / rates.big_gamma;
    x * x
}
