use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error)]
pub enum Error {
    /// An input lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Distance below the 1 m reference distance of the CI/FI laws.
    #[error("distance {distance_m} m is below the 1 m reference distance")]
    BelowReferenceDistance { distance_m: f64 },

    /// A fit was requested on data that cannot determine its parameters.
    #[error("degenerate fit: {0}")]
    DegenerateFit(String),

    /// A fit inside a grouped analysis failed.
    #[error("group {group}: {source}")]
    Group {
        group: String,
        #[source]
        source: Box<Error>,
    },

    /// A filter selected no points.
    #[error("empty selection: {0}")]
    EmptySelection(String),

    /// Input records violate a structural requirement.
    #[error("validation error: {0}")]
    Validation(String),

    /// A CSV row could not be parsed or validated.
    #[error("row {row}, column {column}: {message}")]
    Parse {
        row: usize,
        column: String,
        message: String,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
