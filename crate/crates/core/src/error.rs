use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// The reduced frequency ω̄ = ω − ω_AC/2 vanishes; every formula that
    /// divides by ω̄ is undefined.
    #[error("degenerate frequency: omega_bar = {omega_bar} (operation requires omega_bar > 0)")]
    DegenerateFrequency { omega_bar: f64 },

    #[error("operation `{operation}` requires a {expected} configuration")]
    WrongSpacetime {
        operation: &'static str,
        expected: &'static str,
    },

    #[error("disk variable |xi| = {modulus} is outside the allowed region (must be < {limit})")]
    OutsideUnitDisk { modulus: f64, limit: f64 },

    #[error("radial grid cannot resolve the requested functions: {0}")]
    GridResolution(String),

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("unknown operator label `{0}`")]
    UnknownLabel(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
