//! Decision engine for universal theories of hereditary classes of finite
//! relational structures given by forbidden substructures.

pub mod classes;
pub mod cli;
pub mod error;
pub mod logic;
pub mod sample;
pub mod store;
pub mod structure;
pub mod transform;

pub use error::{Error, Result};
