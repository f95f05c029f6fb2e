use thiserror::Error;

/// Errors shared across the toolkit.
///
/// Geometry queries distinguish "the object can never be reached" from
/// invalid input because callers treat the former as a normal outcome
/// (no contact constraint) rather than a failure.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum CoreError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Markers are collinear (or coincident); no circumcircle exists.
    #[error("degenerate marker configuration: collinear or coincident points")]
    DegenerateMarkers,

    /// No bending in [0, 180) brings the finger arc into contact with the object.
    #[error("object unreachable: no bending achieves contact")]
    NoContactPossible,

    /// Regressor matrix is rank deficient; the data cannot identify the model.
    #[error("unidentifiable: regressor condition {0:.3e} exceeds usable range")]
    Unidentifiable(f64),

    /// The final value theorem does not apply (closed loop not stable).
    #[error("final value theorem inapplicable: {0}")]
    FvtInapplicable(String),

    /// A scenario failed to reach a required phase in its allotted duration.
    #[error("scenario timeout: {0}")]
    Timeout(String),
}

pub type Result<T> = std::result::Result<T, CoreError>;
