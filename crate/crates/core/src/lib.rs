pub mod config;
pub mod diagnostics;
pub mod error;
pub mod exec;
pub mod flux;
pub mod harness;
pub mod initial;
pub mod integrator;
pub mod oracle;
pub mod spectral;

pub use error::{Error, Result};
