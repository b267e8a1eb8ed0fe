//! Steady-state optical response of a three-level atom under incoherent
//! pumping and weak, quasi-resonant probing.
//!
//! The upper level is eliminated adiabatically, leaving an effective two-level
//! atom with decay rate `γ = γ_nr + γ₀`, pump rate `P = Ω_p²/γ_u` and total
//! incoherence rate `Γ = γ + P`. On top of that atom the crate evaluates
//! scattered, absorbed, stimulated and incoherent powers, the scattering,
//! absorption and extinction cross-sections, the pump rates at which gain
//! compensates loss, and a semiclassical comparator.
//!
//! Internally everything is expressed in natural units (`ħ = ε₀ = c = 1`).
//! Reported quantities are normalized: rates by `γ₀`, cross-sections by
//! `σ₀ = 2ω₀μ∥²/(cε₀ħγ₀)` and powers by `ħω₀γ₀`.
//!
//! The [`oracle`] module re-derives the closed forms by brute-force quadrature
//! of the underlying time integrals and is kept independent of [`response`].

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod balance;
pub mod bloch;
pub mod error;
pub mod greens;
pub mod oracle;
pub mod params;
pub mod quadrature;
pub mod response;
pub mod semiclassical;

pub use balance::{CriticalPumps, Crossing, UnitarityBalance};
pub use bloch::{BlochState, SteadyState};
pub use error::{Error, Result};
pub use greens::GreenTensor;
pub use num_complex::Complex64;
pub use oracle::{GoldenRuleSpec, OracleCheck, QuadratureSpec};
pub use params::{AtomParams, DerivedRates, DriveParams, GammaOmegaMode, RegimeThresholds};
pub use response::ResponsePoint;
pub use semiclassical::Polarizability;
