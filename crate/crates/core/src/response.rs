//! Steady-state powers and cross-sections of the pumped atom.
//!
//! All spectra share the Lorentzian denominator `L = δ² + Γ²/4`:
//!
//! ```text
//! W_sc  = ħω Ω₀² γ_ω / 4L
//! W_abs = ħω Ω₀² [(γ/Γ)γ_nr − (P/Γ)P] / 4L
//! σ_x   = μ∥² ω N_x / (2ħε₀c L),  N_sc = γ_ω,  N_abs = (γ/Γ)γ_nr − (P/Γ)P
//! W_inc = (P/Γ){ħω₀γ₀ − (Ω₀²Γ²/8L²)[ħωγ_ω − ħω₀γ₀/2 + 2ħω₀γ₀δ²/Γ²]}
//! ```
//!
//! Cross-sections are returned in units of `σ₀` and powers in units of
//! `ħω₀γ₀`; `Ω₀` enters in the same units as the rates. Absorption is not
//! clamped: it turns negative once stimulated emission dominates.

use serde::{Deserialize, Serialize};

use crate::params::{AtomParams, DerivedRates, DriveParams};

/// One sample of the response at a given detuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponsePoint {
    /// `δ/γ₀`.
    pub detuning: f64,
    pub sigma_sc: f64,
    pub sigma_abs: f64,
    pub sigma_ext: f64,
    pub w_sc: f64,
    pub w_abs: f64,
    pub w_inc: f64,
}

// (ω/ω₀)·γ₀/(4L): converts a rate numerator into σ/σ₀.
fn sigma_factor(rates: &DerivedRates) -> f64 {
    rates.carrier / rates.omega0 * rates.gamma0 / (4.0 * rates.lorentzian_denominator())
}

// (ω/ω₀)·Ω₀²/(4Lγ₀): converts a rate numerator into W/(ħω₀γ₀).
fn power_factor(rates: &DerivedRates, drive: &DriveParams) -> f64 {
    let rabi = drive.rabi_probe;
    rates.carrier / rates.omega0 * rabi * rabi
        / (4.0 * rates.lorentzian_denominator() * rates.gamma0)
}

/// Numerator of the absorption spectra, `(γ/Γ)γ_nr − (P/Γ)P`.
pub fn absorption_numerator(rates: &DerivedRates) -> f64 {
    rates.ground_fraction() * rates.gamma_nr - rates.excited_fraction() * rates.pump_rate
}

pub fn scattered_power(rates: &DerivedRates, drive: &DriveParams) -> f64 {
    power_factor(rates, drive) * rates.gamma_omega
}

pub fn scattering_cross_section(rates: &DerivedRates) -> f64 {
    sigma_factor(rates) * rates.gamma_omega
}

/// Scattering cross-section in absolute natural units, `μ∥²ωγ_ω/(2L)`,
/// without going through `σ₀`.
pub fn scattering_cross_section_absolute(atom: &AtomParams, rates: &DerivedRates) -> f64 {
    atom.dipole_sq() * rates.carrier * rates.gamma_omega / (2.0 * rates.lorentzian_denominator())
}

pub fn absorbed_power(rates: &DerivedRates, drive: &DriveParams) -> f64 {
    power_factor(rates, drive) * absorption_numerator(rates)
}

pub fn absorption_cross_section(rates: &DerivedRates) -> f64 {
    sigma_factor(rates) * absorption_numerator(rates)
}

/// `σ_ext` with numerator `γ_ω + (γ/Γ)γ_nr − (P/Γ)P`, i.e. exactly
/// `σ_sc + σ_abs`.
pub fn extinction_cross_section(rates: &DerivedRates) -> f64 {
    sigma_factor(rates) * (rates.gamma_omega + absorption_numerator(rates))
}

/// `σ_ext` written as `γ − (P/Γ)(γ_nr + P)`, which makes the pump's reduction
/// of extinction explicit. Coincides with [`extinction_cross_section`]
/// whenever `γ_ω = γ₀`.
pub fn extinction_cross_section_pump_form(rates: &DerivedRates) -> f64 {
    let n = rates.gamma - rates.excited_fraction() * (rates.gamma_nr + rates.pump_rate);
    sigma_factor(rates) * n
}

/// Extinguished power `W_sc + W_abs`.
pub fn extinguished_power(rates: &DerivedRates, drive: &DriveParams) -> f64 {
    power_factor(rates, drive) * (rates.gamma_omega + absorption_numerator(rates))
}

/// Full incoherent (spontaneously emitted) power including the probe
/// correction.
pub fn incoherent_power(rates: &DerivedRates, drive: &DriveParams) -> f64 {
    let l = rates.lorentzian_denominator();
    let g = rates.big_gamma;
    let d = rates.detuning();
    let rabi2 = drive.rabi_probe * drive.rabi_probe;
    // Everything below is in units of ħω₀γ₀.
    let bracket = rates.carrier / rates.omega0 * rates.gamma_omega / rates.gamma0 - 0.5
        + 2.0 * d * d / (g * g);
    rates.excited_fraction() * (1.0 - rabi2 * g * g / (8.0 * l * l) * bracket)
}

/// Resonant approximation `(ħω₀γ₀P/Γ)[1 − Ω₀²Γ²/(16L²)]`.
pub fn incoherent_power_resonant(rates: &DerivedRates, drive: &DriveParams) -> f64 {
    let l = rates.lorentzian_denominator();
    let g = rates.big_gamma;
    let rabi2 = drive.rabi_probe * drive.rabi_probe;
    rates.excited_fraction() * (1.0 - rabi2 * g * g / (16.0 * l * l))
}

pub fn response_point(rates: &DerivedRates, drive: &DriveParams) -> ResponsePoint {
    let sigma_sc = scattering_cross_section(rates);
    let sigma_abs = absorption_cross_section(rates);
    ResponsePoint {
        detuning: rates.detuning() / rates.gamma0,
        sigma_sc,
        sigma_abs,
        sigma_ext: extinction_cross_section(rates),
        w_sc: scattered_power(rates, drive),
        w_abs: absorbed_power(rates, drive),
        w_inc: incoherent_power(rates, drive),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive_rates, GammaOmegaMode};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    const RABI: f64 = 0.01;

    fn setup(
        gamma_nr: f64,
        pump: f64,
        delta: f64,
        mode: GammaOmegaMode,
    ) -> (DerivedRates, DriveParams) {
        let atom = AtomParams {
            gamma_nr,
            ..AtomParams::default()
        };
        let drive = DriveParams::at_detuning(&atom, delta, RABI, 0.0).with_pump_rate(&atom, pump);
        let rates = derive_rates(&atom, &drive, mode).unwrap();
        (rates, drive)
    }

    fn flat(gamma_nr: f64, pump: f64, delta: f64) -> (DerivedRates, DriveParams) {
        setup(gamma_nr, pump, delta, GammaOmegaMode::Flat)
    }

    #[test]
    fn scattered_power_free_atom_on_resonance() {
        let (r, d) = flat(0.0, 0.0, 0.0);
        // ħω₀Ω₀²/γ₀ in units of ħω₀γ₀.
        assert_relative_eq!(scattered_power(&r, &d), RABI * RABI, max_relative = 1e-14);
        let dark = DriveParams {
            rabi_probe: 0.0,
            ..d
        };
        assert_eq!(scattered_power(&r, &dark), 0.0);
        let (half, d) = flat(0.0, 0.0, 0.5);
        assert_relative_eq!(
            scattered_power(&half, &d),
            0.5 * RABI * RABI,
            max_relative = 1e-14
        );
    }

    #[test]
    fn resonant_cross_sections_with_losses() {
        // Arithmetic oracle: Γ = 1.2, so L = 0.36 and σ/σ₀ = N/1.44.
        let (r, _) = flat(0.2, 0.0, 0.0);
        assert_relative_eq!(
            scattering_cross_section(&r),
            1.0 / 1.44,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            absorption_cross_section(&r),
            0.2 / 1.44,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            extinction_cross_section(&r),
            1.2 / 1.44,
            max_relative = 1e-14
        );
        assert!((scattering_cross_section(&r) - 0.6944).abs() < 1e-4);
        assert!((absorption_cross_section(&r) - 0.13889).abs() < 1e-5);
        assert!((extinction_cross_section(&r) - 0.8333).abs() < 1e-4);
    }

    #[test]
    fn free_atom_peak_is_sigma0() {
        let atom = AtomParams::default();
        let (r, _) = flat(0.0, 0.0, 0.0);
        assert_relative_eq!(scattering_cross_section(&r), 1.0, max_relative = 1e-14);
        assert_relative_eq!(extinction_cross_section(&r), 1.0, max_relative = 1e-14);
        let abs = scattering_cross_section_absolute(&atom, &r);
        let k0 = atom.omega0;
        assert_relative_eq!(
            abs,
            6.0 * std::f64::consts::PI / (k0 * k0),
            max_relative = 1e-13
        );
    }

    #[test]
    fn absorbed_power_cases() {
        let (r, d) = flat(0.0, 0.0, 0.0);
        assert_eq!(absorbed_power(&r, &d), 0.0);
        let (r, d) = flat(0.2, 0.0, 0.0);
        // Ω₀²·(1·0.2)/(4·0.36).
        assert_relative_eq!(
            absorbed_power(&r, &d),
            RABI * RABI * 0.2 / 1.44,
            max_relative = 1e-14
        );
    }

    #[test]
    fn absorption_vanishes_at_balance_pump() {
        let gnr: f64 = 0.2;
        let p = (gnr * gnr + gnr).sqrt();
        assert_relative_eq!(p, 0.24f64.sqrt(), max_relative = 1e-15);
        for delta in [0.0, 1.3] {
            let (r, d) = flat(gnr, p, delta);
            assert!(absorption_cross_section(&r).abs() < 1e-15);
            assert!(absorbed_power(&r, &d).abs() < 1e-18);
        }
    }

    #[test]
    fn extinction_zero_at_one_point_eight() {
        let (r, _) = flat(0.2, 1.8, 0.0);
        assert!(extinction_cross_section(&r).abs() < 1e-15);
        assert!(extinction_cross_section_pump_form(&r).abs() < 1e-15);
    }

    #[test]
    fn pump_form_agrees_at_quasi_resonance() {
        for (gnr, p, delta) in [(0.2, 0.8, 0.0), (1.0, 3.0, 2.0), (0.0, 10.0, -4.0)] {
            let (r, _) = flat(gnr, p, delta);
            assert_relative_eq!(
                extinction_cross_section(&r),
                extinction_cross_section_pump_form(&r),
                max_relative = 1e-12,
                epsilon = 1e-15
            );
        }
    }

    #[test]
    fn large_pump_scaling() {
        let s = |p: f64| {
            let (r, _) = flat(0.2, p, 0.0);
            (scattering_cross_section(&r), absorption_cross_section(&r))
        };
        let (sc3, ab3) = s(1e3);
        let (sc4, ab4) = s(1e4);
        assert_relative_eq!(sc3 * 1e6, sc4 * 1e8, max_relative = 1e-2);
        assert!(ab3 < 0.0 && ab4 < 0.0);
        assert_relative_eq!(ab3 * 1e3, ab4 * 1e4, max_relative = 1e-2);
    }

    #[test]
    fn incoherent_power_limits() {
        let (r, d) = flat(0.2, 1.5, 0.7);
        let dark = DriveParams {
            rabi_probe: 0.0,
            ..d
        };
        assert_relative_eq!(incoherent_power(&r, &dark), 1.5 / 2.7, max_relative = 1e-14);
        let (r, d) = flat(0.2, 0.0, 0.7);
        assert_eq!(incoherent_power(&r, &d), 0.0);
        // δ = 0 gives P/Γ (1 − Ω₀²/Γ²) in both the full and the resonant form.
        let (r, d) = flat(0.2, 1.5, 0.0);
        let expected = 1.5 / 2.7 * (1.0 - RABI * RABI / (2.7 * 2.7));
        assert_relative_eq!(incoherent_power(&r, &d), expected, max_relative = 1e-14);
        assert_relative_eq!(
            incoherent_power_resonant(&r, &d),
            expected,
            max_relative = 1e-14
        );
    }

    #[test]
    fn response_point_columns() {
        let (r, d) = setup(0.2, 1.9, 0.25, GammaOmegaMode::CubicFreeSpace);
        let p = response_point(&r, &d);
        assert_eq!(p.detuning, r.detuning());
        assert_eq!(p.sigma_sc, scattering_cross_section(&r));
        assert_eq!(p.w_inc, incoherent_power(&r, &d));
        assert!(p.sigma_ext < 0.0);
    }

    proptest! {
        #[test]
        fn extinction_decomposes(
            gnr in 0.0..10.0f64,
            pump in 0.0..20.0f64,
            delta in -30.0..30.0f64,
            cubic in any::<bool>(),
        ) {
            let mode = if cubic { GammaOmegaMode::CubicFreeSpace } else { GammaOmegaMode::Flat };
            let (r, d) = setup(gnr, pump, delta, mode);
            let sc = scattering_cross_section(&r);
            let ab = absorption_cross_section(&r);
            let ext = extinction_cross_section(&r);
            prop_assert!(sc > 0.0);
            prop_assert!((ext - (sc + ab)).abs() <= 1e-12 * (sc.abs() + ab.abs()));
            let wsum = scattered_power(&r, &d) + absorbed_power(&r, &d);
            prop_assert!((extinguished_power(&r, &d) - wsum).abs() <= 1e-12 * wsum.abs().max(1e-300));
        }

        #[test]
        fn lorentzian_shape(
            gnr in 0.0..5.0f64,
            pump in 0.0..10.0f64,
            deltas in proptest::collection::vec(-20.0..20.0f64, 5),
        ) {
            let (r0, _) = flat(gnr, pump, 0.0);
            let base = [scattering_cross_section(&r0), absorption_cross_section(&r0), extinction_cross_section(&r0)];
            let l0 = r0.lorentzian_denominator();
            for delta in deltas {
                let (r, _) = flat(gnr, pump, delta);
                let l = r.lorentzian_denominator();
                let vals = [scattering_cross_section(&r), absorption_cross_section(&r), extinction_cross_section(&r)];
                for (v, b) in vals.iter().zip(base) {
                    prop_assert!((v * l - b * l0).abs() <= 1e-12 * (b * l0).abs().max(1e-300));
                }
            }
        }

        #[test]
        fn power_to_cross_section_ratio_is_flux(
            gnr in 0.0..5.0f64,
            pump in 0.0..10.0f64,
            delta in -20.0..20.0f64,
        ) {
            let (r, d) = flat(gnr, pump, delta);
            let ratio = scattered_power(&r, &d) / scattering_cross_section(&r);
            prop_assert!((ratio - RABI * RABI).abs() <= 1e-12 * RABI * RABI);
        }

        #[test]
        fn absorption_sign_follows_balance_pump(
            gnr in 0.01..5.0f64,
            pump in 0.0..20.0f64,
            delta in -5.0..5.0f64,
        ) {
            let (r, _) = flat(gnr, pump, delta);
            let threshold = (gnr * gnr + gnr * r.gamma_omega).sqrt();
            prop_assume!((pump - threshold).abs() > 1e-9);
            prop_assert_eq!(absorption_cross_section(&r) < 0.0, pump > threshold);
        }
    }
}
