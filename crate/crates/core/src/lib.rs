//! Exact combinatorics for characteristic cycles of non-confluent GKZ
//! hypergeometric sheaves.
//!
//! All arithmetic is exact: integers are arbitrary precision, rationals are
//! big-integer fractions, and nothing is ever rounded.

pub mod conormal;
pub mod cycle;
pub mod divisor;
pub mod error;
pub mod fan;
pub mod json;
pub mod lp;
pub mod matrix;

pub use error::{Error, Result};
pub use matrix::{CharacterVector, IntMatrix, Prime, ThetaSubset};
