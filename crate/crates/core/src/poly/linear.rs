use std::sync::Arc;

use num_complex::Complex64;

use super::polynomial::{Monomial, Polynomial};
use super::structure::VariableStructure;
use crate::error::PolyError;

/// A linear form in the homogeneous coordinates of one group.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    pub group: usize,
    /// Global index of the group's first variable.
    pub offset: usize,
    pub coeffs: Vec<Complex64>,
}

impl LinearForm {
    pub fn new(
        structure: &VariableStructure,
        group: usize,
        coeffs: Vec<Complex64>,
    ) -> Result<Self, PolyError> {
        if group >= structure.group_count() {
            return Err(PolyError::MalformedChart(format!(
                "group {group} out of range"
            )));
        }
        if coeffs.len() != structure.group_size(group) {
            return Err(PolyError::DimensionMismatch {
                expected: structure.group_size(group),
                got: coeffs.len(),
            });
        }
        Ok(Self {
            group,
            offset: structure.offset(group),
            coeffs,
        })
    }

    pub fn from_real(
        structure: &VariableStructure,
        group: usize,
        coeffs: &[f64],
    ) -> Result<Self, PolyError> {
        Self::new(
            structure,
            group,
            coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect(),
        )
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.norm() == 0.0)
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.coeffs
            .iter()
            .zip(&point[self.offset..self.offset + self.coeffs.len()])
            .map(|(a, x)| a * x)
            .sum()
    }

    /// Value on a group-local coordinate slice.
    pub fn eval_local(&self, coords: &[Complex64]) -> Complex64 {
        self.coeffs.iter().zip(coords).map(|(a, x)| a * x).sum()
    }

    pub fn scale(&self, s: Complex64) -> LinearForm {
        LinearForm {
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
            ..self.clone()
        }
    }

    pub fn to_polynomial(&self, structure: &Arc<VariableStructure>) -> Polynomial {
        let n = structure.total_vars();
        Polynomial::from_terms(
            structure.clone(),
            self.coeffs
                .iter()
                .enumerate()
                .map(|(j, &c)| (Monomial::var(n, self.offset + j), c)),
        )
    }
}

/// Product of linear forms, as a polynomial.
pub fn product_polynomial(structure: &Arc<VariableStructure>, forms: &[LinearForm]) -> Polynomial {
    forms.iter().fold(
        Polynomial::constant(structure.clone(), Complex64::new(1.0, 0.0)),
        |acc, f| acc.mul(&f.to_polynomial(structure)),
    )
}
