pub mod banded;
pub mod bvp;
pub mod cheb;
pub mod cli;
pub mod error;
pub mod fields;
pub mod jet;
pub mod levelset;
pub mod special;
pub mod spectral;
pub mod verify;

pub use error::{Error, Result};

pub type Vec3 = [f64; 3];
