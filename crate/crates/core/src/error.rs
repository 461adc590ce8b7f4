use thiserror::Error;

/// Errors raised by the centrefall library.
///
/// Variants split into two families: input that violates a precondition
/// ([`Error::Validation`], [`Error::Lookup`], [`Error::Parse`]) and well-formed
/// input for which the physics has no answer ([`Error::Domain`],
/// [`Error::BelowFallingLimit`], [`Error::Grid`], [`Error::Propagation`],
/// [`Error::SingularIntegral`]). See [`Error::is_domain`].
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    Validation(String),

    #[error("unknown particle '{0}' (built-in: Li7, H1, He3)")]
    Lookup(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(
        "below quantum falling limit: <H> = {energy:e} J >= 0; this state falls only above \
         {threshold_voltage:.3} V, and no state falls below the critical voltage \
         U_c = {critical_voltage:.3} V (critical charge {critical_charge_pc_per_m:.3} pC/m)"
    )]
    BelowFallingLimit {
        energy: f64,
        /// Voltage at which the chosen trial state reaches ⟨H⟩ = 0.
        threshold_voltage: f64,
        /// Voltage at which the coupling equals ħ²/8m.
        critical_voltage: f64,
        critical_charge_pc_per_m: f64,
    },

    #[error("grid error: {reason}; suggested grid: n = {suggested_n}, r_max = {suggested_r_max:e}")]
    Grid {
        reason: String,
        suggested_n: usize,
        suggested_r_max: f64,
    },

    #[error("propagation error: {0}")]
    Propagation(String),

    #[error("singular integral: {0}")]
    SingularIntegral(String),
}

impl Error {
    /// True for errors where the input was well formed but describes a
    /// physically excluded situation.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::Domain(_)
                | Error::BelowFallingLimit { .. }
                | Error::Grid { .. }
                | Error::Propagation(_)
                | Error::SingularIntegral(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::Validation(msg()))
    }
}
