use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("Green dyadic requested at zero separation; use the coincidence limit instead")]
    CoincidentPoints,

    #[error("integration step dt = {dt} violates dt·Γ ≤ {limit} (Γ = {big_gamma})")]
    StepTooLarge { dt: f64, big_gamma: f64, limit: f64 },

    #[error("no sign change of the target in [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoBracket {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("quadrature guard `{guard}` failed: {detail}")]
    Quadrature { guard: &'static str, detail: String },
}

impl Error {
    pub(crate) fn invalid(name: &'static str, value: f64, reason: &'static str) -> Self {
        Error::InvalidParameter {
            name,
            value,
            reason,
        }
    }

    pub(crate) fn guard(guard: &'static str, detail: impl Into<String>) -> Self {
        Error::Quadrature {
            guard,
            detail: detail.into(),
        }
    }
}
