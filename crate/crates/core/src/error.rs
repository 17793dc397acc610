use thiserror::Error;

#[derive(Debug, Error)]
pub enum CasimirError {
    #[error("permittivity diverges at xi = {xi} eV for the {model} model")]
    Domain { model: &'static str, xi: f64 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("modified TM coefficient requires a screening parameter (kappa)")]
    MissingScreening,

    #[error(
        "modified TM coefficient requires a free-carrier permittivity (drude or dc-conductivity)"
    )]
    NoFreeCarriers,

    #[error("quadrature did not converge on [{lower}, {upper}] (estimated error {error:e}, value {value:e})")]
    QuadratureNonConvergence {
        lower: f64,
        upper: f64,
        value: f64,
        error: f64,
    },

    #[error(
        "Matsubara sum not converged by l = {l} at a = {separation_nm} nm, T = {temperature_k} K"
    )]
    TruncationFailure {
        l: usize,
        separation_nm: f64,
        temperature_k: f64,
    },

    #[error("numerical failure at l = {l}, a = {separation_nm} nm: {source}")]
    AtPoint {
        l: usize,
        separation_nm: f64,
        #[source]
        source: Box<CasimirError>,
    },

    #[error("series did not converge: {0}")]
    SeriesNonConvergence(String),

    #[error("temperature derivative did not converge at T = {temperature_k} K (estimate {value:e} +/- {error:e})")]
    DerivativeNonConvergence {
        temperature_k: f64,
        value: f64,
        error: f64,
    },

    #[error("empty table")]
    EmptyTable,

    #[error("line {line}: {message}")]
    MalformedRow { line: u64, message: String },

    #[error("line {line}: frequency {omega} eV is not above the previous row ({previous} eV)")]
    NonMonotone {
        line: u64,
        omega: f64,
        previous: f64,
    },

    #[error("lateral force is only defined here for plates of identical material")]
    DissimilarPlates,

    #[error("no extrema found in the sampled curve")]
    NoExtrema,

    #[error("abscissa {0} lies outside the theory sweep range")]
    OutOfRange(f64),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl CasimirError {
    /// Attaches the failing Matsubara index and separation to an error.
    pub(crate) fn at(self, l: usize, separation_nm: f64) -> Self {
        match self {
            e @ (CasimirError::AtPoint { .. } | CasimirError::TruncationFailure { .. }) => e,
            other => CasimirError::AtPoint {
                l,
                separation_nm,
                source: Box::new(other),
            },
        }
    }
}

pub type Result<T> = std::result::Result<T, CasimirError>;
