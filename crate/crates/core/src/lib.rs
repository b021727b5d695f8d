pub mod cli;
pub mod elementary;
pub mod error;
pub mod exactmat;
pub mod finite;
pub mod formring;
pub mod report;
pub mod rings;
pub mod sampling;
pub mod steinberg;
pub mod unitary;
pub mod word;

pub use error::{Error, Result};
