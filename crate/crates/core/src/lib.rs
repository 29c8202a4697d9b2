#![no_std]

extern crate alloc;

pub mod budget;
pub mod completion;
pub mod corpus;
pub mod display;
pub mod error;
pub mod fibration;
pub mod kernel;
pub mod logic;
pub mod structure;

pub use budget::Budget;
pub use error::{Error, Result};
