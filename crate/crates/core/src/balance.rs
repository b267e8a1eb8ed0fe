//! Gain/loss balance: pump rates at which absorption and extinction vanish,
//! and the probability-conservation audit at order `Ω₀²/Γ`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::{DerivedRates, DriveParams};
use crate::response;

/// Upper end of the pump bracket searched by the root solver, in units of γ₀.
pub const PUMP_BRACKET_MAX: f64 = 1.0e3;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CriticalPumps {
    /// Pump rate at which `σ_abs = 0`.
    pub p_abs_zero: f64,
    /// Pump rate at which `σ_ext = 0`.
    pub p_ext_zero: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Crossing {
    Absorption,
    Extinction,
}

/// Closed forms
/// `P_abs = √(γ_nr² + γ_nr γ_ω)` and
/// `P_ext = [γ_ω + √(4γ_nr² + 8γ_nr γ_ω + 5γ_ω²)]/2`.
pub fn critical_pumps_closed_form(gamma_nr: f64, gamma_omega: f64) -> Result<CriticalPumps> {
    if !(gamma_nr >= 0.0) {
        return Err(Error::invalid("gamma_nr", gamma_nr, "must be ≥ 0"));
    }
    if !(gamma_omega > 0.0) {
        return Err(Error::invalid("gamma_omega", gamma_omega, "must be > 0"));
    }
    let (n, w) = (gamma_nr, gamma_omega);
    Ok(CriticalPumps {
        p_abs_zero: (n * n + n * w).sqrt(),
        p_ext_zero: 0.5 * (w + (4.0 * n * n + 8.0 * n * w + 5.0 * w * w).sqrt()),
    })
}

/// Bisection on `[lo, hi]`. Requires `f(lo)` and `f(hi)` of strictly
/// opposite sign; stops when the bracket is no wider than `xtol` or `f`
/// hits zero exactly.
pub fn bisect<F>(f: F, mut lo: f64, mut hi: f64, xtol: f64, max_iter: usize) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    let f_lo = f(lo);
    let f_hi = f(hi);
    if !(f_lo * f_hi < 0.0) {
        return Err(Error::NoBracket { lo, hi, f_lo, f_hi });
    }
    let lo_positive = f_lo > 0.0;
    for _ in 0..max_iter {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi || hi - lo <= xtol {
            return Ok(mid);
        }
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if (fm > 0.0) == lo_positive {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Numerical root of `σ_abs(P) = 0` or `σ_ext(P) = 0` on resonance, with the
/// atom taken from `template` and the pump varied over `[0, PUMP_BRACKET_MAX·γ₀]`.
pub fn critical_pump_root(template: &DerivedRates, which: Crossing) -> Result<f64> {
    let base = template.at_resonance();
    let sigma = move |p: f64| {
        let r = base.with_pump_rate(p);
        match which {
            Crossing::Absorption => response::absorption_cross_section(&r),
            Crossing::Extinction => response::extinction_cross_section(&r),
        }
    };
    let hi = PUMP_BRACKET_MAX * base.gamma0;
    bisect(sigma, 0.0, hi, 1e-15 * hi, 400)
}

/// Both critical pumps from the root solver.
pub fn critical_pumps_numeric(template: &DerivedRates) -> Result<CriticalPumps> {
    let p_abs_zero = if template.gamma_nr == 0.0 {
        0.0
    } else {
        critical_pump_root(template, Crossing::Absorption)?
    };
    Ok(CriticalPumps {
        p_abs_zero,
        p_ext_zero: critical_pump_root(template, Crossing::Extinction)?,
    })
}

/// The two sides of the probability balance at order `Ω₀²/Γ`, as rates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct UnitarityBalance {
    /// Outflow to states other than the steady ones,
    /// `Ω₀²(γ + P + (P/Γ)γ_ω − (P/Γ)γ₀)/4L`.
    pub outflow: f64,
    /// Renormalization of the steady states, `−Ω₀²(γ + P)/4L`.
    pub renormalization: f64,
    pub residual: f64,
}

pub fn unitarity_balance(rates: &DerivedRates, drive: &DriveParams) -> UnitarityBalance {
    let scale = drive.rabi_probe * drive.rabi_probe / (4.0 * rates.lorentzian_denominator());
    let x = rates.excited_fraction();
    let outflow =
        scale * (rates.gamma + rates.pump_rate) + scale * x * (rates.gamma_omega - rates.gamma0);
    let renormalization = -scale * (rates.gamma + rates.pump_rate);
    UnitarityBalance {
        outflow,
        renormalization,
        residual: outflow + renormalization,
    }
}

/// Sum of outflow and renormalization rates; `Ω₀²(P/Γ)(γ_ω − γ₀)/4L`.
pub fn unitarity_residual(rates: &DerivedRates, drive: &DriveParams) -> f64 {
    let scale = drive.rabi_probe * drive.rabi_probe / (4.0 * rates.lorentzian_denominator());
    scale * rates.excited_fraction() * (rates.gamma_omega - rates.gamma0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive_rates, AtomParams, GammaOmegaMode};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn template(gamma_nr: f64) -> DerivedRates {
        let atom = AtomParams {
            gamma_nr,
            ..AtomParams::default()
        };
        let drive = DriveParams::at_detuning(&atom, 0.0, 0.01, 0.0);
        derive_rates(&atom, &drive, GammaOmegaMode::Flat).unwrap()
    }

    #[test]
    fn golden_ratio_without_losses() {
        let c = critical_pumps_closed_form(0.0, 1.0).unwrap();
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert_relative_eq!(c.p_ext_zero, phi, max_relative = 1e-15);
        assert!((c.p_ext_zero - 1.6180339887).abs() < 1e-10);
        assert_eq!(c.p_abs_zero, 0.0);
    }

    #[test]
    fn one_fifth_loss_gives_one_point_eight() {
        let c = critical_pumps_closed_form(0.2, 1.0).unwrap();
        // √6.76 = 2.6, so (1 + 2.6)/2.
        assert_relative_eq!(c.p_ext_zero, 1.8, max_relative = 1e-15);
        assert_relative_eq!(c.p_abs_zero, 0.24f64.sqrt(), max_relative = 1e-15);
    }

    #[test]
    fn root_solver_matches_closed_form() {
        let r = critical_pump_root(&template(0.2), Crossing::Extinction).unwrap();
        assert!((r - 1.8).abs() < 1e-9);
        let r = critical_pump_root(&template(0.2), Crossing::Absorption).unwrap();
        assert!((r - 0.489898).abs() < 1e-6);
        assert!((r - 0.24f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn no_absorption_root_without_losses() {
        assert!(matches!(
            critical_pump_root(&template(0.0), Crossing::Absorption),
            Err(Error::NoBracket { .. })
        ));
    }

    #[test]
    fn bisect_rejects_same_sign() {
        assert!(bisect(|x| x * x + 1.0, -1.0, 1.0, 1e-12, 100).is_err());
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-15, 200).unwrap();
        assert_relative_eq!(r, 2f64.sqrt(), max_relative = 1e-14);
    }

    #[test]
    fn closed_form_guards() {
        assert!(critical_pumps_closed_form(-0.1, 1.0).is_err());
        assert!(critical_pumps_closed_form(0.1, 0.0).is_err());
    }

    #[test]
    fn grid_agreement() {
        for gnr in [0.0, 0.1, 0.2, 1.0, 5.0] {
            let t = template(gnr);
            let c = critical_pumps_closed_form(gnr, t.gamma0).unwrap();
            let n = critical_pumps_numeric(&t).unwrap();
            assert_relative_eq!(n.p_ext_zero, c.p_ext_zero, max_relative = 1e-9);
            assert_relative_eq!(n.p_abs_zero, c.p_abs_zero, max_relative = 1e-9);
            assert!(c.p_ext_zero > c.p_abs_zero);
        }
    }

    #[test]
    fn extinction_sign_flips_upward() {
        for gnr in [0.0, 0.2, 1.0] {
            let t = template(gnr);
            let p = critical_pumps_closed_form(gnr, 1.0).unwrap().p_ext_zero;
            let eps = 1e-6;
            assert!(response::extinction_cross_section(&t.with_pump_rate(p - eps)) > 0.0);
            assert!(response::extinction_cross_section(&t.with_pump_rate(p + eps)) < 0.0);
        }
    }

    #[test]
    fn golden_ratio_limit() {
        let gnr = 1e-6;
        let p = critical_pumps_closed_form(gnr, 1.0).unwrap().p_ext_zero;
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((p - phi).abs() < 10.0 * gnr);
    }

    #[test]
    fn residual_zero_on_resonance() {
        let atom = AtomParams::default();
        let drive = DriveParams::at_detuning(&atom, 0.0, 0.05, 3.0);
        for mode in [GammaOmegaMode::Flat, GammaOmegaMode::CubicFreeSpace] {
            let r = derive_rates(&atom, &drive, mode).unwrap();
            assert_eq!(unitarity_residual(&r, &drive), 0.0);
            let b = unitarity_balance(&r, &drive);
            assert_eq!(b.residual, 0.0);
        }
    }

    #[test]
    fn residual_suppressed_off_resonance() {
        let atom = AtomParams {
            gamma_nr: 0.2,
            ..AtomParams::default()
        };
        let drive = DriveParams::at_detuning(&atom, 0.1, 0.05, 0.0).with_pump_rate(&atom, 1.5);
        let r = derive_rates(&atom, &drive, GammaOmegaMode::CubicFreeSpace).unwrap();
        let b = unitarity_balance(&r, &drive);
        assert!(b.residual > 0.0);
        assert!(b.residual / b.outflow <= 3e-5);
        assert_relative_eq!(
            b.residual,
            unitarity_residual(&r, &drive),
            max_relative = 1e-6
        );
    }

    proptest! {
        #[test]
        fn flat_mode_balances_exactly(
            gnr in 0.0..5.0f64,
            pump in 0.0..20.0f64,
            delta in -20.0..20.0f64,
            rabi in 0.0..0.1f64,
        ) {
            let atom = AtomParams { gamma_nr: gnr, ..AtomParams::default() };
            let drive = DriveParams::at_detuning(&atom, delta, rabi, 0.0).with_pump_rate(&atom, pump);
            let r = derive_rates(&atom, &drive, GammaOmegaMode::Flat).unwrap();
            prop_assert_eq!(unitarity_residual(&r, &drive), 0.0);
            prop_assert_eq!(unitarity_balance(&r, &drive).residual, 0.0);
        }
    }
}
