use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("malformed input: {0}")]
    Parse(String),
    #[error("unglued face: tetrahedron {tet}, face {face}")]
    UngluedFace { tet: usize, face: usize },
    #[error("inconsistent gluing: {0}")]
    InconsistentGluing(String),
    #[error("orientation inconsistency: gluing of tetrahedron {tet}, face {face} preserves orientation")]
    Orientation { tet: usize, face: usize },
    #[error("cusp {cusp} is not a torus (Euler characteristic {euler})")]
    NonTorusCusp { cusp: usize, euler: i64 },
    #[error("shape data rejected: {0}")]
    Shape(String),
    #[error("equation residual {residual:e} exceeds tolerance {tolerance:e} ({what})")]
    Residual { what: String, residual: f64, tolerance: f64 },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("not a cocycle: {0}")]
    NotCocycle(String),
    #[error("internal inconsistency: {0}")]
    Inconsistency(String),
}

impl Error {
    /// Whether the failure is attributable to the input rather than to a violated assertion.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Inconsistency(_) | Error::NotCocycle(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
