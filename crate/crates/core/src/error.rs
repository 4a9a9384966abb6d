use thiserror::Error;

/// Errors raised by the solver and its numerical oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("elliptic parameter m = {0} outside [0, 1)")]
    InvalidModulus(f64),

    #[error("invalid potential parameters: {0}")]
    InvalidParams(String),

    #[error("mixed integer/half-integer case unsupported (a = {a}, b = {b})")]
    MixedCase { a: String, b: String },

    /// The even/odd degree bookkeeping disagrees with the degree obtained from the
    /// residue sum. Surfaced as-is instead of being renormalized.
    #[error("set {set_id}: tabulated degree {tabulated} disagrees with residue degree {derived}")]
    TableMismatch {
        set_id: u8,
        tabulated: i64,
        derived: i64,
    },

    #[error("derivation fault: {0}")]
    DerivationFault(String),

    #[error("coefficient system is {rows}x{cols}, expected square")]
    NonSquare { rows: usize, cols: usize },

    #[error("defective pencil: determinant has degree {degree}, expected {expected}")]
    DefectivePencil { degree: usize, expected: usize },

    #[error("found {found} real roots of the pencil determinant, expected {expected}")]
    RootCount { found: usize, expected: usize },

    #[error("non-finite integrator state at E = {0}")]
    NonFinite(f64),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
