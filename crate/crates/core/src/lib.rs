//! Circle-valued angle structures on ideal triangulations.

pub mod angles;
pub mod complex;
pub mod error;
pub mod fixtures;
pub mod linalg;
pub mod obstruction;
pub mod par;
pub mod shapes;
pub mod tol;
pub mod triangulation;

pub use error::{Error, Result};
pub use par::Exec;
pub use tol::Tolerances;
