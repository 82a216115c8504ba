pub mod caps;
pub mod certificate;
pub mod codes;
pub mod constants;
pub mod error;
pub mod field;
pub mod geometry;
pub mod graphs;
pub mod integrity;
pub mod reduction;
pub mod sbs;
pub mod spectral;
pub mod subfield;

pub use error::{Error, Result};
