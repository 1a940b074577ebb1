pub mod borelcodes;
pub mod error;
pub mod fronts;
pub mod ideals;
pub mod literals;
pub mod selectors;
pub mod streams;
pub mod workbench;

pub use error::{Error, Result};
