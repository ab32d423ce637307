use num_complex::Complex64;

use super::linear::LinearForm;
use super::polynomial::{ipow, Polynomial};

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

#[derive(Debug, Clone)]
struct CompiledTerm {
    coef: Complex64,
    factors: Vec<(usize, u32)>,
}

/// Sparse evaluator for a polynomial with value-and-gradient in one pass.
#[derive(Debug, Clone)]
pub struct CompiledPoly {
    terms: Vec<CompiledTerm>,
}

impl CompiledPoly {
    pub fn new(p: &Polynomial) -> Self {
        let terms = p
            .terms()
            .map(|(m, &coef)| CompiledTerm {
                coef,
                factors: m
                    .0
                    .iter()
                    .enumerate()
                    .filter(|(_, &e)| e > 0)
                    .map(|(v, &e)| (v, e))
                    .collect(),
            })
            .collect();
        Self { terms }
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        self.terms
            .iter()
            .map(|t| {
                t.factors
                    .iter()
                    .fold(t.coef, |acc, &(v, e)| acc * ipow(x[v], e))
            })
            .sum()
    }

    /// Returns the value and adds `scale * gradient` into `grad`.
    pub fn eval_grad(
        &self,
        x: &[Complex64],
        scale: Complex64,
        grad: &mut [Complex64],
    ) -> Complex64 {
        let mut value = ZERO;
        let mut pows: Vec<Complex64> = Vec::new();
        let mut prefix: Vec<Complex64> = Vec::new();
        for t in &self.terms {
            let m = t.factors.len();
            pows.clear();
            pows.extend(t.factors.iter().map(|&(v, e)| ipow(x[v], e)));
            prefix.clear();
            let mut acc = ONE;
            for p in &pows {
                prefix.push(acc);
                acc *= p;
            }
            value += t.coef * acc;
            let mut suffix = ONE;
            for k in (0..m).rev() {
                let (v, e) = t.factors[k];
                let d = if e == 1 {
                    ONE
                } else {
                    ipow(x[v], e - 1) * e as f64
                };
                grad[v] += scale * t.coef * prefix[k] * suffix * d;
                suffix *= pows[k];
            }
        }
        value
    }
}

/// An equation as used inside a homotopy.
///
/// `Products` is a sum of scaled products of linear forms, which covers slices,
/// hyperplane unions and Segre slices without expanding them.
#[derive(Debug, Clone)]
pub enum Equation {
    Poly(CompiledPoly),
    Products(Vec<(Complex64, Vec<LinearForm>)>),
}

impl Equation {
    pub fn poly(p: &Polynomial) -> Self {
        Equation::Poly(CompiledPoly::new(p))
    }

    pub fn linear(l: &LinearForm) -> Self {
        Equation::Products(vec![(ONE, vec![l.clone()])])
    }

    pub fn product(forms: Vec<LinearForm>) -> Self {
        Equation::Products(vec![(ONE, forms)])
    }

    pub fn eval(&self, x: &[Complex64]) -> Complex64 {
        match self {
            Equation::Poly(p) => p.eval(x),
            Equation::Products(terms) => terms
                .iter()
                .map(|(c, fs)| fs.iter().fold(*c, |acc, f| acc * f.eval(x)))
                .sum(),
        }
    }

    /// Returns the value and adds `scale * gradient` into `grad`.
    pub fn eval_grad(
        &self,
        x: &[Complex64],
        scale: Complex64,
        grad: &mut [Complex64],
    ) -> Complex64 {
        match self {
            Equation::Poly(p) => p.eval_grad(x, scale, grad),
            Equation::Products(terms) => {
                let mut value = ZERO;
                for (c, fs) in terms {
                    let vals: Vec<Complex64> = fs.iter().map(|f| f.eval(x)).collect();
                    let mut prefix = Vec::with_capacity(vals.len());
                    let mut acc = ONE;
                    for v in &vals {
                        prefix.push(acc);
                        acc *= v;
                    }
                    value += c * acc;
                    let mut suffix = ONE;
                    for k in (0..fs.len()).rev() {
                        let w = scale * c * prefix[k] * suffix;
                        if w != ZERO {
                            for (j, a) in fs[k].coeffs.iter().enumerate() {
                                grad[fs[k].offset + j] += w * a;
                            }
                        }
                        suffix *= vals[k];
                    }
                }
                value
            }
        }
    }
}
