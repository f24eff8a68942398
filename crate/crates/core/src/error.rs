use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A configuration value is outside its valid range.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// A numeric argument is outside the domain of the function.
    #[error("domain error: {0}")]
    Domain(String),

    /// No blocklength up to the search cap reaches the requested error target.
    #[error("infeasible sizing: k = {k_bits} bits cannot reach eps = {target_eps:e} at SINR {sinr} within {cap} channel uses")]
    Infeasible {
        k_bits: u32,
        target_eps: f64,
        sinr: f64,
        cap: u64,
    },

    /// The load search did not find a certified crossing inside its bracket.
    #[error("supported load not found in [{lo}, {hi}]: PLR {plr_lo:e} at lo, {plr_hi:e} at hi")]
    LoadNotFound { lo: f64, hi: f64, plr_lo: f64, plr_hi: f64 },

    /// Writing results failed.
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn config_err(msg: impl Into<String>) -> Error {
    Error::Config(msg.into())
}
