// Row reduction reads more clearly with explicit indices.
#![allow(clippy::needless_range_loop)]

pub mod agcodes;
pub mod algebra;
pub mod bounds;
pub mod error;
pub mod galois;
pub mod registry;
pub mod rrspace;
pub mod sxcodes;
pub mod tower;
pub mod verify;

pub use error::{Error, Result};
