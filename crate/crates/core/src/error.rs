use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension {0}: must be at least 1")]
    InvalidDimension(usize),

    #[error("index {index} out of range (bound {bound})")]
    IndexOutOfRange { index: usize, bound: usize },

    #[error("port multiset must be sorted non-decreasing")]
    UnsortedPorts,

    #[error("matrix is {rows}x{cols}, expected a square matrix")]
    NotSquare { rows: usize, cols: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix dimension {dim} exceeds the oracle limit {limit}")]
    OracleScale { dim: usize, limit: usize },

    #[error("multiplicity list is empty")]
    EmptyMultiplicities,

    #[error("multiplicity at column {0} is zero")]
    ZeroMultiplicity(usize),

    #[error("output configuration has no bosons")]
    EmptyConfiguration,

    #[error("boson counts differ: input carries {input}, output carries {output}")]
    SumMismatch { input: usize, output: usize },

    #[error("invalid boson count {0}")]
    InvalidBosonCount(usize),

    #[error("unsupported regime: {bosons} bosons on {modes} modes (requires N <= M)")]
    UnsupportedRegime { bosons: usize, modes: usize },

    #[error("{name} = {value} is outside its domain {domain}")]
    OutOfDomain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("{count} configurations exceed the enumeration limit {limit}")]
    TooManyConfigurations { count: u128, limit: u128 },

    #[error("input is not a permutation of 0..{0}")]
    InvalidPermutation(usize),

    #[error("infeasible size N={bosons}: estimated {log2_cost:.1} log2 op-units exceeds the cap {log2_cap:.1}")]
    Infeasible {
        bosons: usize,
        log2_cost: f64,
        log2_cap: f64,
    },

    #[error("malformed matrix file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
