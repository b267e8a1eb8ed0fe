//! Fixed workloads shared by the criterion benches.

use gainatom_core::params::{derive_rates, AtomParams, DerivedRates, DriveParams, GammaOmegaMode};
use gainatom_core::{response, ResponsePoint};

/// Detuning sweep over `[-span, span]·γ₀` with `n` points.
pub fn spectrum(atom: &AtomParams, pump: f64, span: f64, n: usize) -> Vec<ResponsePoint> {
    (0..n)
        .map(|i| {
            let delta = -span + 2.0 * span * i as f64 / (n - 1) as f64;
            let (r, d) = probe(atom, pump, delta * atom.gamma0);
            response::response_point(&r, &d)
        })
        .collect()
}

/// Rates and drive for a weak probe at detuning `delta` and pump rate `pump`.
pub fn probe(atom: &AtomParams, pump: f64, delta: f64) -> (DerivedRates, DriveParams) {
    let drive =
        DriveParams::at_detuning(atom, delta, 0.01 * atom.gamma0, 0.0).with_pump_rate(atom, pump);
    let rates = derive_rates(atom, &drive, GammaOmegaMode::CubicFreeSpace)
        .expect("benchmark parameters are valid");
    (rates, drive)
}
