pub mod cli;
pub mod detailed_balance;
pub mod divergence;
pub mod dynamics;
pub mod error;
pub mod fisher;
pub mod io;
pub mod linalg;
pub mod monotone;
pub mod recovery;

pub use error::{Error, Result};
