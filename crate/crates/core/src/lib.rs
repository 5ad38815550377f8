pub mod characters;
pub mod error;
pub mod geometry;
pub mod hardy;
pub mod harness;
pub mod lie;
pub mod numeric;
pub mod predictor;

pub use error::{Error, ErrorClass, Result};
