pub mod cli;
pub mod entanglement;
pub mod error;
pub mod functional;
pub mod io;
pub mod localpoly;
pub mod lp;
pub mod model;
pub mod monogamy;
pub mod optimize;
pub mod polytope;
pub mod quantum;
pub mod sharing;

pub use error::{Error, Result};
