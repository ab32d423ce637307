//! Sparse multihomogeneous polynomials over complex coefficients.

mod compiled;
mod linear;
mod polynomial;
mod structure;
mod system;

pub use compiled::{CompiledPoly, Equation};
pub use linear::{product_polynomial, LinearForm};
pub use polynomial::{Monomial, MultiDegree, Polynomial};
pub use structure::{VariableGroup, VariableStructure};
pub use system::{
    chart_power, dehomogenize, generic_combination, homogenize, randomize, PolynomialSystem,
};

#[cfg(test)]
mod proptests;
