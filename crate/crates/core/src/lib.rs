//! Self-reciprocal and self-conjugate-reciprocal factors of `x^n ± 1` over
//! finite fields, their counting formulas, and complementary-dual
//! negacyclic codes.

pub mod cosets;
pub mod counting;
pub mod error;
pub mod factorization;
pub mod finitefield;
pub mod negacyclic;
pub mod numtheory;
pub mod polyring;
pub mod selftest;

pub use error::{Error, Result};
