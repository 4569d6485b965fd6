pub mod allocation;
pub mod bounds;
pub mod channel;
pub mod codec;
pub mod error;
pub mod matching;
pub mod sim;

pub use error::{Error, Result};
