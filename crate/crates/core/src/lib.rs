pub mod ainfty;
pub mod commands;
pub mod error;
pub mod graded;
pub mod hodge;
pub mod matrix;
pub mod multilinear;
pub mod samples;
pub mod scalar;
pub mod spec_file;
pub mod transfer;
pub mod tree;

pub use error::{Error, Result};
