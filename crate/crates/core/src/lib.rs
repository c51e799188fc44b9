//! Exact computation of dynamical degrees of rational self-maps of projective space.

pub mod error;
pub mod fab;
pub mod irrational;
pub mod json;
pub mod linalg;
pub mod matinv;
pub mod monomial;
pub mod oracle;
pub mod poly;
pub mod spec_file;

pub use error::{Error, Result};
