//! Grid posets and rational diagrams over them: the subdivided cubes and
//! their truncations, the box filtration, right Kan extensions tested cube by
//! cube, and the pigeonhole arithmetic on degree profiles.
//!
//! Arrows in a subdivided cube point from larger tuples to smaller ones, so
//! `(1, ..., 1)` is terminal. Boxes use the opposite, ascending convention.

pub mod diagram;
pub mod kan;
pub mod pigeonhole;
pub mod poset;
pub mod random;

pub use diagram::VectDiagram;
pub use poset::{CubePoset, Shape, SubPoset, SubShape};
