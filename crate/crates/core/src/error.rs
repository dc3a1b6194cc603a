use thiserror::Error;

use crate::geometry::SiteId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A predicate hit a cocyclic or collinear configuration.
    #[error("degenerate input: {0}")]
    Degeneracy(String),
    #[error("duplicate site at ({x}, {y}) (already present as site {existing})")]
    DuplicateSite { x: i64, y: i64, existing: SiteId },
    #[error("coordinate ({x}, {y}) outside the bound {bound}")]
    OutOfBounds { x: i64, y: i64, bound: i64 },
    #[error("nearest-neighbor index is empty")]
    EmptyIndex,
    /// An internal consistency violation. Seeing one of these means the
    /// engine has a bug; user input can never trigger it.
    #[error("structure error: {0}")]
    Structure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

macro_rules! structure_err {
    ($($arg:tt)*) => {
        $crate::error::Error::Structure(format!($($arg)*))
    };
}
pub(crate) use structure_err;
