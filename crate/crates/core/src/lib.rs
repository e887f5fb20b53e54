pub mod certify;
pub mod classification;
pub mod coordinates;
pub mod error;
pub mod group;
pub mod hhs;
pub mod space;

pub use error::{LabError, Result};
