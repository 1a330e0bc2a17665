#![no_std]

extern crate alloc;

pub mod component_bounds;
pub mod dense;
pub mod error;
pub mod hierarchies;
pub mod kernels;
pub mod krawtchouk;
pub mod linalg;
pub mod pauli;
pub mod polynomial;
pub mod random;
pub mod reduction;
pub mod sdp;

pub use error::{Error, Result};
