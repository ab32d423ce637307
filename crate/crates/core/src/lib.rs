//! Numerical algebraic geometry on products of projective spaces.
//!
//! The crate computes witness set collections of multihomogeneous polynomial
//! systems by multiregeneration, tests membership, and decomposes pure
//! dimensional collections into irreducible pieces with monodromy and a
//! multiprojective trace test.

pub mod catalog;
pub mod decompose;
pub mod error;
pub mod linalg;
pub mod poly;
pub mod regeneration;
pub mod rng;
pub mod sysio;
pub mod tracker;
pub mod witness;

pub use num_complex::Complex64;

pub use error::{Error, ParseError, PolyError, Result};
pub use poly::{LinearForm, Polynomial, PolynomialSystem, VariableStructure};
pub use tracker::{Homotopy, PathOutcome, PathStatus, TrackerSettings};
pub use witness::{Chart, LinearSlice, SliceType, WitnessCollection, WitnessSet};
