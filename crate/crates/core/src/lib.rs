//! Maxmin Bayesian persuasion when the Receiver's threshold type is
//! ambiguous: closed forms for binary priors, double-truncated uniform
//! search for continuous priors, and a grid-game oracle to check both.

pub mod binary;
pub mod cli;
pub mod dist;
pub mod dtu;
pub mod error;
pub mod numeric;
pub mod oracle;

pub use error::{Error, Result};
