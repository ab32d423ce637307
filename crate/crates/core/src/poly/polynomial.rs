use std::collections::BTreeMap;
use std::fmt;
use std::sync::{Arc, OnceLock};

use num_complex::Complex64;

use super::structure::VariableStructure;
use crate::error::PolyError;

/// Exponent row of a term, one entry per variable of the structure.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub Vec<u32>);

impl Monomial {
    pub fn one(nvars: usize) -> Self {
        Monomial(vec![0; nvars])
    }

    pub fn var(nvars: usize, v: usize) -> Self {
        let mut e = vec![0; nvars];
        e[v] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn group_degrees(&self, structure: &VariableStructure) -> Vec<u32> {
        (0..structure.group_count())
            .map(|g| self.0[structure.range(g)].iter().sum())
            .collect()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        let mut acc = Complex64::new(1.0, 0.0);
        for (&e, &x) in self.0.iter().zip(point) {
            if e > 0 {
                acc *= ipow(x, e);
            }
        }
        acc
    }
}

pub(crate) fn ipow(mut base: Complex64, mut e: u32) -> Complex64 {
    let mut acc = Complex64::new(1.0, 0.0);
    while e > 0 {
        if e & 1 == 1 {
            acc *= base;
        }
        e >>= 1;
        if e > 0 {
            base *= base;
        }
    }
    acc
}

/// Per-group degree vector `(g_1, ..., g_k)`.
pub type MultiDegree = Vec<u32>;

/// Sparse polynomial over complex coefficients.
///
/// Zero coefficients are never stored.
#[derive(Clone)]
pub struct Polynomial {
    structure: Arc<VariableStructure>,
    terms: BTreeMap<Monomial, Complex64>,
    degree_cache: OnceLock<Result<MultiDegree, PolyError>>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.structure == other.structure && self.terms == other.terms
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Polynomial")
            .field("terms", &self.terms)
            .finish()
    }
}

impl Polynomial {
    pub fn zero(structure: Arc<VariableStructure>) -> Self {
        Self {
            structure,
            terms: BTreeMap::new(),
            degree_cache: OnceLock::new(),
        }
    }

    pub fn constant(structure: Arc<VariableStructure>, c: Complex64) -> Self {
        let n = structure.total_vars();
        Self::from_terms(structure, [(Monomial::one(n), c)])
    }

    pub fn variable(structure: Arc<VariableStructure>, v: usize) -> Self {
        let n = structure.total_vars();
        Self::from_terms(structure, [(Monomial::var(n, v), Complex64::new(1.0, 0.0))])
    }

    /// Builds a polynomial, summing repeated monomials and dropping zeros.
    pub fn from_terms(
        structure: Arc<VariableStructure>,
        terms: impl IntoIterator<Item = (Monomial, Complex64)>,
    ) -> Self {
        let mut map: BTreeMap<Monomial, Complex64> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(
                m.0.len(),
                structure.total_vars(),
                "monomial length must match structure"
            );
            *map.entry(m).or_insert(Complex64::new(0.0, 0.0)) += c;
        }
        map.retain(|_, c| *c != Complex64::new(0.0, 0.0));
        Self {
            structure,
            terms: map,
            degree_cache: OnceLock::new(),
        }
    }

    pub fn structure(&self) -> &Arc<VariableStructure> {
        &self.structure
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Complex64)> {
        self.terms.iter()
    }

    pub fn term_map(&self) -> &BTreeMap<Monomial, Complex64> {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn total_degree(&self) -> u32 {
        self.terms
            .keys()
            .map(Monomial::total_degree)
            .max()
            .unwrap_or(0)
    }

    /// Largest degree of any term in each group.
    pub fn group_max_degrees(&self) -> Vec<u32> {
        let mut out = vec![0; self.structure.group_count()];
        for m in self.terms.keys() {
            for (o, d) in out.iter_mut().zip(m.group_degrees(&self.structure)) {
                *o = (*o).max(d);
            }
        }
        out
    }

    /// Multidegree `(g_1, ..., g_k)` if every term has group degree `g_i` in group `i`.
    pub fn multidegree(&self) -> Result<MultiDegree, PolyError> {
        self.degree_cache
            .get_or_init(|| {
                let mut it = self.terms.keys();
                let Some(first) = it.next() else {
                    return Ok(vec![0; self.structure.group_count()]);
                };
                let d0 = first.group_degrees(&self.structure);
                for m in it {
                    if m.group_degrees(&self.structure) != d0 {
                        return Err(PolyError::NotMultihomogeneous {
                            first: first.clone(),
                            second: m.clone(),
                        });
                    }
                }
                Ok(d0)
            })
            .clone()
    }

    pub fn is_multihomogeneous(&self) -> bool {
        self.multidegree().is_ok()
    }

    /// Value at `point` by direct term summation.
    pub fn eval(&self, point: &[Complex64]) -> Complex64 {
        self.terms.iter().map(|(m, c)| c * m.eval(point)).sum()
    }

    /// Sum over terms of `|c|` times the product of group norms raised to the
    /// term's group degrees; the natural scale for residuals.
    ///
    /// Unlike the sum of term values this stays meaningful at points where
    /// every term is tiny, such as near coordinate subspaces.
    pub fn term_scale(&self, point: &[Complex64]) -> f64 {
        let s = &self.structure;
        let norms: Vec<f64> = (0..s.group_count())
            .map(|g| {
                point[s.range(g)]
                    .iter()
                    .map(|z| z.norm())
                    .fold(0.0, f64::max)
            })
            .collect();
        self.terms
            .iter()
            .map(|(m, c)| {
                let d = m.group_degrees(s);
                c.norm()
                    * d.iter()
                        .zip(&norms)
                        .map(|(&k, n)| n.powi(k as i32))
                        .product::<f64>()
            })
            .sum()
    }

    pub fn derivative(&self, v: usize) -> Polynomial {
        let terms = self.terms.iter().filter(|(m, _)| m.0[v] > 0).map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[v];
            e[v] -= 1;
            (Monomial(e), c * k as f64)
        });
        Polynomial::from_terms(self.structure.clone(), terms)
    }

    pub fn scale(&self, s: Complex64) -> Polynomial {
        Polynomial::from_terms(
            self.structure.clone(),
            self.terms.iter().map(|(m, c)| (m.clone(), c * s)),
        )
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.structure, other.structure);
        Polynomial::from_terms(
            self.structure.clone(),
            self.terms
                .iter()
                .chain(other.terms.iter())
                .map(|(m, c)| (m.clone(), *c)),
        )
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.scale(Complex64::new(-1.0, 0.0)))
    }

    pub fn mul(&self, other: &Polynomial) -> Polynomial {
        debug_assert_eq!(self.structure, other.structure);
        let mut out = Vec::with_capacity(self.terms.len() * other.terms.len());
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.push((ma.mul(mb), ca * cb));
            }
        }
        Polynomial::from_terms(self.structure.clone(), out)
    }

    pub fn pow(&self, e: u32) -> Polynomial {
        let mut acc = Polynomial::constant(self.structure.clone(), Complex64::new(1.0, 0.0));
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    /// Same terms, reinterpreted over another structure with identical variable count.
    pub fn with_structure(&self, structure: Arc<VariableStructure>) -> Polynomial {
        assert_eq!(structure.total_vars(), self.structure.total_vars());
        Polynomial::from_terms(structure, self.terms.iter().map(|(m, c)| (m.clone(), *c)))
    }

    /// Replaces variable `v` by the constant `value`.
    pub fn substitute(&self, v: usize, value: Complex64) -> Polynomial {
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = m.0.clone();
            let k = e[v];
            e[v] = 0;
            (Monomial(e), c * ipow(value, k))
        });
        Polynomial::from_terms(self.structure.clone(), terms)
    }

    /// Largest coefficient magnitude.
    pub fn coefficient_scale(&self) -> f64 {
        self.terms.values().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::structure::VariableGroup;

    fn p1p1() -> Arc<VariableStructure> {
        Arc::new(
            VariableStructure::new(vec![
                VariableGroup::homogeneous(["x0", "x1"]),
                VariableGroup::homogeneous(["y0", "y1"]),
            ])
            .unwrap(),
        )
    }

    fn c(re: f64) -> Complex64 {
        Complex64::new(re, 0.0)
    }

    #[test]
    fn parabola_multidegree() {
        let s = p1p1();
        let p = Polynomial::from_terms(
            s.clone(),
            [
                (Monomial(vec![0, 2, 1, 0]), c(1.0)),
                (Monomial(vec![2, 0, 0, 1]), c(-1.0)),
            ],
        );
        assert_eq!(p.multidegree().unwrap(), vec![2, 1]);
        let m = Polynomial::from_terms(s.clone(), [(Monomial(vec![1, 0, 1, 0]), c(1.0))]);
        assert_eq!(m.multidegree().unwrap(), vec![1, 1]);
    }

    #[test]
    fn mixed_group_degrees_rejected() {
        let s = p1p1();
        let p = Polynomial::from_terms(
            s,
            [
                (Monomial(vec![1, 0, 0, 0]), c(1.0)),
                (Monomial(vec![0, 0, 1, 0]), c(1.0)),
            ],
        );
        match p.multidegree() {
            Err(PolyError::NotMultihomogeneous { first, second }) => assert_ne!(first, second),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn cancellation_leaves_zero() {
        let s = p1p1();
        let x = Polynomial::variable(s, 0);
        assert!(x.sub(&x).is_zero());
    }

    #[test]
    fn ipow_matches_repeated_product() {
        let z = Complex64::new(0.3, -1.1);
        let mut acc = c(1.0);
        for e in 0..9 {
            assert!((ipow(z, e) - acc).norm() < 1e-12);
            acc *= z;
        }
    }
}
