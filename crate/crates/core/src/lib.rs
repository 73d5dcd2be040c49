//! Staggered finite-volume / finite-element solver for incompressible flow
//! with k-epsilon turbulence and species transport.

pub mod closure;
pub mod driver;
pub mod error;
pub mod fields;
pub mod geometry;
pub mod lader1d;
pub mod mesh;
pub mod projection;
pub mod schemes;
pub mod verification;

pub use error::{Error, Result};
