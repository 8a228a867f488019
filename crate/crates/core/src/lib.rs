pub mod cartier;
pub mod cli;
pub mod completion;
pub mod error;
pub mod kernel;
pub mod rings;
pub mod fpmod;
pub mod koszul;
pub mod regularity;
pub mod serial;
pub mod towers;

pub use error::{Error, Result};
