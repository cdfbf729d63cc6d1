pub mod cli;
pub mod complexes;
pub mod error;
pub mod ground;
pub mod io;
pub mod lp;
pub mod matroid;
pub mod operad;
pub mod oriented;
pub mod orval;
#[cfg(test)]
mod properties;
pub mod sampling;
pub mod sums_sliding;
pub mod valuated;

pub use error::{Error, Result};
