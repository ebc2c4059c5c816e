//! Monotone simultaneous embeddings of directed spanning paths.
//!
//! Every coordinate, slope and LP value is an exact rational ([`Rat`]).

pub mod digraphs;
pub mod duality;
pub mod embedder;
pub mod error;
pub mod format;
pub mod generators;
pub mod geom;
pub mod lp;
pub mod rat;
pub mod sequences;

pub use error::{Error, Result};
pub use geom::{Direction, DualLine, PathPerm, Point2};
pub use rat::Rat;
