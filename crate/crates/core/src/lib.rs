//! Tools for avoidability of additive and abelian powers in rich words.

pub mod cli;
pub mod eertree;
pub mod error;
pub mod fixed_point;
pub mod manifest;
pub mod matrix;
pub mod morphism;
pub mod power;
pub mod search;
pub mod templates;
pub mod verify;
pub mod word;

pub use error::{Error, Result};
pub use word::{Alphabet, Letter, PsiVector, Word};
