use thiserror::Error;

/// Errors produced anywhere in the simulator.
#[derive(Debug, Error)]
pub enum QcaError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("invalid layout: {0}")]
    Validation(String),

    #[error("unknown built-in layout `{0}`")]
    UnknownLayout(String),

    #[error("cell {0} is not part of the layout")]
    UnknownCell(usize),

    #[error("functional pair ({0}, {1}) is not declared in the layout")]
    UndeclaredPair(usize, usize),

    #[error("point charges coincide (separation {0:e} nm)")]
    CoincidentCharges(f64),

    #[error("Hilbert-space dimension 3^{cells} exceeds the configured limit of {limit}")]
    DimensionOverflow { cells: usize, limit: usize },

    #[error("eigensolver did not converge after {iterations} iterations (best residual {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("mean-field iteration did not converge after {iterations} iterations (residual {residual:e})")]
    IchaNonConvergence {
        iterations: usize,
        residual: f64,
        /// Polarization of every cell at each iteration.
        trace: Vec<Vec<f64>>,
    },

    #[error("invalid sweep: {0}")]
    Sweep(String),

    #[error("sweep failed at grid point {index} ({point}): {source}")]
    SweepPoint {
        index: usize,
        point: String,
        #[source]
        source: Box<QcaError>,
    },

    #[error("layout file: {0}")]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl QcaError {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            QcaError::NonConvergence { .. } | QcaError::IchaNonConvergence { .. } => 2,
            QcaError::SweepPoint { source, .. } => source.exit_code(),
            QcaError::Io(_) => 3,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, QcaError>;
