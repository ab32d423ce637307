//! Small dense complex linear algebra used by the tracker and certifiers.

use nalgebra::{DMatrix, DVector, Dyn, LU};
use num_complex::Complex64;

pub type CMat = DMatrix<Complex64>;
pub type CVec = DVector<Complex64>;

pub fn norm_inf(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn norm2(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// LU factorization with a cheap condition estimate.
pub struct Factored {
    lu: LU<Complex64, Dyn, Dyn>,
    norm: f64,
}

impl Factored {
    pub fn new(a: CMat) -> Option<Self> {
        let norm = a.iter().map(|z| z.norm()).fold(0.0, f64::max) * (a.ncols() as f64).sqrt();
        let lu = a.lu();
        if !lu.is_invertible() {
            return None;
        }
        Some(Self { lu, norm })
    }

    pub fn solve(&self, b: &CVec) -> Option<CVec> {
        let x = self.lu.solve(b)?;
        if x.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            Some(x)
        } else {
            None
        }
    }

    /// Inverse-power estimate on a fixed probe: `||A||` times the larger of
    /// `||A^{-1} p|| / ||p||` and `||A^{-1} y||` with `y = A^{-1} p / ||A^{-1} p||`.
    ///
    /// The second step alone misses a singular direction whose left and right
    /// null vectors are orthogonal, so both are kept.
    pub fn condition_estimate(&self) -> f64 {
        let n = self.lu.l().nrows();
        let probe = CVec::from_iterator(
            n,
            (0..n).map(|i| {
                let s = (i as f64 + 1.0) * 0.754_877_666;
                Complex64::new(s.fract() - 0.5, (s * 1.618_034).fract() - 0.5)
            }),
        );
        let pn = probe.norm();
        let Some(y) = self.solve(&probe) else {
            return f64::INFINITY;
        };
        let yn = y.norm();
        match self.solve(&(y / Complex64::new(yn, 0.0))) {
            Some(z) => self.norm * z.norm().max(yn / pn),
            None => f64::INFINITY,
        }
    }
}

pub fn solve(a: CMat, b: &CVec) -> Option<CVec> {
    Factored::new(a)?.solve(b)
}

/// Singular values in decreasing order.
pub fn singular_values(a: &CMat) -> Vec<f64> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Vec::new();
    }
    let mut s: Vec<f64> = a
        .clone()
        .svd(false, false)
        .singular_values
        .iter()
        .copied()
        .collect();
    s.sort_by(|x, y| y.total_cmp(x));
    s
}

/// Ratio of largest to smallest singular value (infinite when rank deficient).
pub fn condition_number(a: &CMat) -> f64 {
    let s = singular_values(a);
    match (s.first(), s.last()) {
        (Some(&hi), Some(&lo)) if lo > 0.0 && s.len() == a.nrows().min(a.ncols()) => hi / lo,
        _ => f64::INFINITY,
    }
}

/// Numerical rank relative to the largest singular value.
pub fn rank(a: &CMat, rel_tol: f64) -> usize {
    let s = singular_values(a);
    let Some(&hi) = s.first() else { return 0 };
    s.iter()
        .filter(|&&x| x > rel_tol * hi.max(f64::MIN_POSITIVE))
        .count()
}
