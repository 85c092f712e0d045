pub mod analysis;
pub mod cli;
pub mod error;
pub mod graph;
pub mod linalg;
pub mod partition;
pub mod system;

pub use error::{Error, Result};
