//! Orbifold fundamental groups and orbifold braid groups: presentations,
//! center decisions and injectivity certificates with replayable proof
//! traces.

pub mod braid;
pub mod center;
pub mod error;
pub mod free_product;
pub mod orbifold;
pub mod presentation;
pub mod snf;
pub mod trace;
pub mod word;

pub use error::{Error, Result};
