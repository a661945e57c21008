pub mod cli;
pub mod error;
pub mod geometry;
pub mod special_fn;
pub mod spectral;
pub mod symbols;
pub mod verify;
