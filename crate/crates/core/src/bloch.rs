//! Effective two-level dynamics after adiabatic elimination of the upper level.
//!
//! ```text
//! ∂t ρee = −γ ρee + P ρgg
//! ∂t ρgg =  γ ρee − P ρgg
//! ∂t ρeg = −Γ ρeg / 2 − i ω₀ ρeg
//! ```

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::params::DerivedRates;

/// Largest allowed `dt·Γ` for the fixed-step integrator.
pub const MAX_STEP_GAMMA: f64 = 1.0e-2;

/// `Γt` at which the populations are treated as stationary.
pub const STEADY_GAMMA_T: f64 = 50.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlochState {
    pub rho_gg: f64,
    pub rho_ee: f64,
    pub rho_eg: Complex64,
}

impl BlochState {
    /// Populations `(1 − Ne, Ne)` with the largest coherence they admit,
    /// `ρeg = √(Ne − Ne²)`.
    pub fn with_excited_population(ne: f64) -> Result<Self> {
        check_population(ne)?;
        Ok(Self {
            rho_gg: 1.0 - ne,
            rho_ee: ne,
            rho_eg: Complex64::new((ne - ne * ne).max(0.0).sqrt(), 0.0),
        })
    }

    pub fn trace(&self) -> f64 {
        self.rho_gg + self.rho_ee
    }

    /// Positivity of the 2×2 density matrix, `|ρeg|² ≤ ρee ρgg`, to `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        let bound = (self.rho_ee * self.rho_gg).max(0.0).sqrt();
        (self.trace() - 1.0).abs() <= tol && self.rho_eg.norm() <= bound + tol
    }

    fn axpy(&self, k: &Derivative, h: f64) -> Self {
        Self {
            rho_gg: self.rho_gg + h * k.gg,
            rho_ee: self.rho_ee + h * k.ee,
            rho_eg: self.rho_eg + k.eg * h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SteadyState {
    /// `γ/Γ`.
    pub rho_gg: f64,
    /// `P/Γ`.
    pub rho_ee: f64,
    /// Amplitude weights `(√(γ/Γ), √(P/Γ))` of the steady mixture.
    pub weights: (f64, f64),
}

pub fn steady_state(rates: &DerivedRates) -> Result<SteadyState> {
    if !(rates.big_gamma > 0.0) {
        return Err(Error::invalid(
            "big_gamma",
            rates.big_gamma,
            "steady state needs Γ > 0",
        ));
    }
    let rho_gg = rates.gamma / rates.big_gamma;
    let rho_ee = rates.pump_rate / rates.big_gamma;
    Ok(SteadyState {
        rho_gg,
        rho_ee,
        weights: (rho_gg.sqrt(), rho_ee.sqrt()),
    })
}

/// Closed-form solution from a state with excited population `ne` and
/// maximal coherence.
pub fn analytic_evolution(rates: &DerivedRates, ne: f64, t: f64) -> Result<BlochState> {
    check_population(ne)?;
    if !(t >= 0.0) {
        return Err(Error::invalid("t", t, "must be ≥ 0"));
    }
    let g = rates.big_gamma;
    let decay = (-g * t).exp();
    let rho_ee = rates.pump_rate / g * (1.0 - decay) + ne * decay;
    let rho_gg = rates.gamma / g * (1.0 - decay) + decay * (1.0 - ne);
    let amp = (ne - ne * ne).max(0.0).sqrt() * (-0.5 * g * t).exp();
    Ok(BlochState {
        rho_gg,
        rho_ee,
        rho_eg: Complex64::from_polar(amp, -rates.omega0 * t),
    })
}

#[derive(Debug, Clone, Copy)]
struct Derivative {
    gg: f64,
    ee: f64,
    eg: Complex64,
}

// The coherence is carried in the frame rotating at ω₀, where it only decays;
// the optical phase is restored exactly on output.
fn rhs(rates: &DerivedRates, s: &BlochState) -> Derivative {
    let flow = rates.gamma * s.rho_ee - rates.pump_rate * s.rho_gg;
    Derivative {
        ee: -flow,
        gg: flow,
        eg: s.rho_eg * (-0.5 * rates.big_gamma),
    }
}

fn rk4_step(rates: &DerivedRates, s: &BlochState, h: f64) -> BlochState {
    let k1 = rhs(rates, s);
    let k2 = rhs(rates, &s.axpy(&k1, 0.5 * h));
    let k3 = rhs(rates, &s.axpy(&k2, 0.5 * h));
    let k4 = rhs(rates, &s.axpy(&k3, h));
    BlochState {
        rho_gg: s.rho_gg + h / 6.0 * (k1.gg + 2.0 * k2.gg + 2.0 * k3.gg + k4.gg),
        rho_ee: s.rho_ee + h / 6.0 * (k1.ee + 2.0 * k2.ee + 2.0 * k3.ee + k4.ee),
        rho_eg: s.rho_eg + (k1.eg + k2.eg * 2.0 + k3.eg * 2.0 + k4.eg) * (h / 6.0),
    }
}

fn check_step(rates: &DerivedRates, dt: f64) -> Result<()> {
    if !(dt > 0.0) {
        return Err(Error::invalid("dt", dt, "must be positive"));
    }
    if dt * rates.big_gamma > MAX_STEP_GAMMA {
        return Err(Error::StepTooLarge {
            dt,
            big_gamma: rates.big_gamma,
            limit: MAX_STEP_GAMMA,
        });
    }
    Ok(())
}

/// Fixed-step RK4 integration of the Bloch equations up to `t_end`.
///
/// The step is shrunk to `t_end / ceil(t_end / dt)` so the last step lands on
/// `t_end`.
pub fn integrate_bloch(
    rates: &DerivedRates,
    initial: &BlochState,
    t_end: f64,
    dt: f64,
) -> Result<BlochState> {
    let traj = integrate_trajectory(rates, initial, t_end, dt, usize::MAX)?;
    Ok(traj.last().map(|(_, s)| *s).unwrap_or(*initial))
}

/// Like [`integrate_bloch`] but records `(t, state)` every `every` steps,
/// always including the initial and final points.
pub fn integrate_trajectory(
    rates: &DerivedRates,
    initial: &BlochState,
    t_end: f64,
    dt: f64,
    every: usize,
) -> Result<Vec<(f64, BlochState)>> {
    check_step(rates, dt)?;
    if !(t_end >= 0.0) {
        return Err(Error::invalid("t_end", t_end, "must be ≥ 0"));
    }
    let mut out = vec![(0.0, *initial)];
    if t_end == 0.0 {
        return Ok(out);
    }
    let steps = (t_end / dt).ceil() as usize;
    let h = t_end / steps as f64;
    let every = every.max(1);
    let mut s = *initial;
    for n in 1..=steps {
        s = rk4_step(rates, &s, h);
        if n % every == 0 || n == steps {
            let t = h * n as f64;
            out.push((
                t,
                BlochState {
                    rho_eg: s.rho_eg * Complex64::from_polar(1.0, -rates.omega0 * t),
                    ..s
                },
            ));
        }
    }
    Ok(out)
}

fn check_population(ne: f64) -> Result<()> {
    if (0.0..=1.0).contains(&ne) {
        Ok(())
    } else {
        Err(Error::invalid("ne", ne, "population must lie in [0, 1]"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::{derive_rates, AtomParams, DriveParams, GammaOmegaMode};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn rates(gamma_nr: f64, pump: f64) -> DerivedRates {
        let atom = AtomParams {
            gamma_nr,
            ..AtomParams::default()
        };
        let drive = DriveParams::at_detuning(&atom, 0.0, 0.0, 0.0);
        derive_rates(&atom, &drive, GammaOmegaMode::Flat)
            .unwrap()
            .with_pump_rate(pump)
    }

    #[test]
    fn fully_excited_has_no_coherence() {
        let r = rates(0.2, 1.0);
        for t in [0.0, 0.3, 2.0] {
            assert_eq!(analytic_evolution(&r, 1.0, t).unwrap().rho_eg.norm(), 0.0);
        }
    }

    #[test]
    fn symmetric_rates_half_filled() {
        let r = rates(0.0, 1.0);
        let s = analytic_evolution(&r, 0.0, STEADY_GAMMA_T / r.big_gamma).unwrap();
        assert!((s.rho_ee - 0.5).abs() < 1e-12);
    }

    #[test]
    fn strong_pump_steady_population() {
        let r = rates(0.2, 4.0);
        let s = analytic_evolution(&r, 0.0, STEADY_GAMMA_T / r.big_gamma).unwrap();
        assert!((s.rho_ee - 4.0 / 5.2).abs() < 1e-12);
        let n = integrate_bloch(
            &r,
            &BlochState::with_excited_population(0.0).unwrap(),
            STEADY_GAMMA_T / r.big_gamma,
            1e-3 / r.big_gamma,
        )
        .unwrap();
        assert!((n.rho_ee - 0.7692307692307693).abs() < 1e-10);
    }

    #[test]
    fn steady_values() {
        let s = steady_state(&rates(0.0, 0.0)).unwrap();
        assert_eq!((s.rho_gg, s.rho_ee), (1.0, 0.0));
        let s = steady_state(&rates(0.0, 1.0)).unwrap();
        assert_eq!((s.rho_gg, s.rho_ee), (0.5, 0.5));
        let s = steady_state(&rates(0.2, 1.8)).unwrap();
        assert_relative_eq!(s.rho_ee, 0.6, max_relative = 1e-15);
        assert_eq!(s.rho_gg + s.rho_ee, 1.0);
        assert_relative_eq!(s.weights.0 * s.weights.0, s.rho_gg, max_relative = 1e-15);

        let mut bad = rates(0.0, 0.0);
        bad.big_gamma = 0.0;
        assert!(steady_state(&bad).is_err());
    }

    #[test]
    fn zero_duration_returns_initial() {
        let r = rates(0.2, 1.0);
        let s0 = BlochState::with_excited_population(0.3).unwrap();
        assert_eq!(integrate_bloch(&r, &s0, 0.0, 1e-3).unwrap(), s0);
    }

    #[test]
    fn free_decay_at_one_lifetime() {
        let r = rates(0.0, 0.0);
        let s0 = BlochState::with_excited_population(1.0).unwrap();
        let s = integrate_bloch(&r, &s0, 1.0, 1e-3).unwrap();
        assert!((s.rho_ee - (-1.0f64).exp()).abs() < 1e-12);
        assert!((s.rho_ee - 0.367879).abs() < 1e-6);
    }

    #[test]
    fn step_guard() {
        let r = rates(0.2, 4.0);
        let s0 = BlochState::with_excited_population(0.0).unwrap();
        assert!(matches!(
            integrate_bloch(&r, &s0, 1.0, 0.1),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn population_range_checked() {
        let r = rates(0.2, 4.0);
        assert!(analytic_evolution(&r, 1.5, 1.0).is_err());
        assert!(analytic_evolution(&r, 0.5, -1.0).is_err());
        assert!(BlochState::with_excited_population(-0.1).is_err());
    }

    #[test]
    fn trace_preserved_along_trajectory() {
        let r = rates(0.7, 2.3);
        let s0 = BlochState::with_excited_population(0.35).unwrap();
        let traj =
            integrate_trajectory(&r, &s0, 50.0 / r.big_gamma, 1e-3 / r.big_gamma, 10).unwrap();
        assert!(traj.len() > 100);
        for (_, s) in &traj {
            assert!((s.trace() - 1.0).abs() <= 1e-10);
            assert!(s.is_physical(1e-12));
        }
    }

    proptest! {
        #[test]
        fn coherence_decays_at_half_gamma(
            gnr in 0.0..3.0f64,
            pump in 0.0..6.0f64,
            ne in 0.05..0.95f64,
            t1 in 0.0..3.0f64,
            dt in 0.01..3.0f64,
        ) {
            let r = rates(gnr, pump);
            let a = analytic_evolution(&r, ne, t1).unwrap().rho_eg.norm();
            let b = analytic_evolution(&r, ne, t1 + dt).unwrap().rho_eg.norm();
            let expected = (-0.5 * r.big_gamma * dt).exp();
            prop_assert!((b / a - expected).abs() <= 1e-12 * expected.max(1e-300) + 1e-15);
        }

        #[test]
        fn converges_after_fifty_lifetimes(
            gnr in 0.0..3.0f64,
            pump in 0.0..6.0f64,
            ne in 0.0..1.0f64,
            extra in 0.0..20.0f64,
        ) {
            let r = rates(gnr, pump);
            let t = (STEADY_GAMMA_T + extra) / r.big_gamma;
            let s = analytic_evolution(&r, ne, t).unwrap();
            prop_assert!((s.rho_ee - r.pump_rate / r.big_gamma).abs() <= (-50.0f64).exp() + 1e-12);
            prop_assert!(s.is_physical(1e-12));
        }
    }
}
