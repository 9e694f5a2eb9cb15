//! Compiles algebraic power series over finite fields into minimal automata.

pub mod automaton;
pub mod bounds;
pub mod cartier;
#[cfg(feature = "cli")]
pub mod cli;
pub mod error;
pub mod gf;
pub mod pipeline;
pub mod polynomial;
pub mod prep;
pub mod series;

pub use error::{Error, Result};
