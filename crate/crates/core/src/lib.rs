pub mod boundary;
pub mod diagram;
pub mod error;
pub mod geometry;
pub mod oracle;
pub mod nn;
pub mod bigcell;
pub mod engine;
pub mod export;
pub mod harness;

pub use engine::{InsertionStats, Voronoi};
pub use error::{Error, Result};
pub use geometry::{Site, SiteId, COORD_BOUND};
