//! Exact computation and verification of unramified relative characters for
//! strongly tempered spherical varieties.

pub mod error;
pub mod lattice;
pub mod matverify;
pub mod models;
pub mod padic;
pub mod ratfun;
pub mod weylsum;

pub use error::{Error, Result};
