pub mod atone;
pub mod brick;
pub mod error;
pub mod exact;
pub mod generic;
pub mod negexp;
pub mod numeval;
pub mod parse;
pub mod pfd;
pub mod polylog;
pub mod series;
pub mod sorokin;

pub use error::{Error, Result};
