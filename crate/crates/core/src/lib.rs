pub mod analysis;
pub mod automata;
pub mod corpus;
pub mod difftest;
pub mod engines;
pub mod error;
pub mod examples;
pub mod logic;
pub mod project;
pub mod semantics;
pub mod translate;
pub mod word;

pub use error::{Error, Result};
