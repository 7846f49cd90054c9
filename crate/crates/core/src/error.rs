use thiserror::Error;

/// Errors raised by parameter validation and the analytic, simulation and
/// sweep layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{field} = {value} is not a probability in [0, 1]")]
    ProbabilityOutOfRange { field: &'static str, value: f64 },

    #[error("{field} = {value} violates {constraint}")]
    InvalidParameter {
        field: &'static str,
        value: f64,
        constraint: &'static str,
    },

    #[error("{field} has {len} entries, expected n_relays = {expected}")]
    LengthMismatch {
        field: &'static str,
        len: usize,
        expected: usize,
    },

    #[error("{what}: {size} elements exceeds the subset enumeration guard of {max}")]
    EnumerationGuard {
        what: &'static str,
        size: usize,
        max: usize,
    },

    #[error("sensed-idle event has zero probability (p0(1-pf) + (1-p0)(1-pd) = 0)")]
    DegenerateSensing,

    #[error("gamma_s = 0 gives an infinite rate threshold")]
    ZeroTransmitSnr,

    #[error("{scheme} requires at least {min} relays, got {got}")]
    TooFewRelays {
        scheme: &'static str,
        min: usize,
        got: usize,
    },

    #[error(
        "closed-form MRS outage needs identically distributed relay->SD channels; \
         sigma2.id is heterogeneous, use simulation instead"
    )]
    NonIidRelayChannels,

    #[error("empty decoding set passed to {0}")]
    EmptyDecodingSet(&'static str),

    #[error("quadrature did not converge: estimated error {achieved:e} > tolerance {tolerance:e}")]
    QuadratureNonConvergence { achieved: f64, tolerance: f64 },

    #[error("target OP {target:e} outside curve range [{min:e}, {max:e}]")]
    TargetOutOfRange { target: f64, min: f64, max: f64 },

    #[error("curve is not monotone in OP between gamma_s = {from_db} dB and {to_db} dB")]
    NonMonotoneCurve { from_db: f64, to_db: f64 },

    #[error("invalid sweep: {0}")]
    InvalidSweep(String),

    #[error("config: {0}")]
    Config(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
