//! Exact and randomized verification of set-theoretical Yang-Baxter maps and
//! reflection maps for the quadrirational families `F_I`..`F_V`.

pub mod algebra;
pub mod error;
pub mod expr;
pub mod folding;
pub mod transfer;
pub mod ybmaps;

pub use error::{Error, Result};
