//! Exact combinatorics of the surjection categories `Epi_d`, their slices
//! `Epi_{d,r}`, pullbacks in the finite-coproduct completion, span
//! composition, Goodwillie-Burnside rings with their marks, integer-valued
//! Mackey functors, and right Kan extensions of rational diagrams over
//! subdivided cubes.
//!
//! Everything is computed exactly: counts use arbitrary-precision integers
//! where they can grow, Mackey data uses integer matrices and cube diagrams
//! use rational matrices. Sets are always the standard `[n] = {1, ..., n}`.

pub mod burnside;
pub mod cube;
pub mod epi_cat;
mod error;
pub mod fin_coprod;
pub mod finset;
pub mod linalg;
pub mod mackey;
pub mod matrix;
pub mod par;
pub mod span_cat;
pub mod suites;

pub use error::{Error, Result};
pub use par::Exec;
