use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMat, CVec};
use crate::poly::{Equation, LinearForm};

const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// `fixed ∪ {γ t A_j + (1 − t) B_j} ∪ {H_i = 1}`, square in the homogeneous coordinates.
#[derive(Debug, Clone)]
pub struct Homotopy {
    nvars: usize,
    fixed: Vec<Equation>,
    start: Vec<Equation>,
    target: Vec<Equation>,
    chart: Vec<LinearForm>,
    gamma: Complex64,
}

impl Homotopy {
    pub fn new(
        nvars: usize,
        fixed: Vec<Equation>,
        start: Vec<Equation>,
        target: Vec<Equation>,
        chart: Vec<LinearForm>,
    ) -> Result<Self> {
        if start.len() != target.len() {
            return Err(Error::MovingMismatch {
                index: start.len().min(target.len()),
            });
        }
        let equations = fixed.len() + start.len() + chart.len();
        if equations != nvars {
            return Err(Error::NotSquare {
                equations,
                variables: nvars,
            });
        }
        Ok(Self {
            nvars,
            fixed,
            start,
            target,
            chart,
            gamma: ONE,
        })
    }

    /// A square system with no moving part.
    pub fn fixed_only(nvars: usize, fixed: Vec<Equation>, chart: Vec<LinearForm>) -> Result<Self> {
        Self::new(nvars, fixed, Vec::new(), Vec::new(), chart)
    }

    /// Multiplies the start side by `gamma`.
    pub fn with_gamma(mut self, gamma: Complex64) -> Self {
        self.gamma = gamma;
        self
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn chart(&self) -> &[LinearForm] {
        &self.chart
    }

    pub fn fixed(&self) -> &[Equation] {
        &self.fixed
    }

    pub fn moving_count(&self) -> usize {
        self.start.len()
    }

    /// Values at `(x, t)`.
    pub fn eval(&self, x: &[Complex64], t: Complex64) -> CVec {
        let mut out = CVec::zeros(self.nvars);
        let mut r = 0;
        for e in &self.fixed {
            out[r] = e.eval(x);
            r += 1;
        }
        for (a, b) in self.start.iter().zip(&self.target) {
            out[r] = self.gamma * t * a.eval(x) + (ONE - t) * b.eval(x);
            r += 1;
        }
        for h in &self.chart {
            out[r] = h.eval(x) - ONE;
            r += 1;
        }
        out
    }

    /// Values, x-Jacobian and optionally the t-derivative at `(x, t)`.
    pub fn eval_jac(
        &self,
        x: &[Complex64],
        t: Complex64,
        want_dt: bool,
    ) -> (CVec, CMat, Option<CVec>) {
        let n = self.nvars;
        let mut val = CVec::zeros(n);
        let mut jac = CMat::zeros(n, n);
        let mut dt = if want_dt { Some(CVec::zeros(n)) } else { None };
        let mut row = vec![Complex64::new(0.0, 0.0); n];
        let put_row = |jac: &mut CMat, r: usize, row: &mut [Complex64]| {
            for (c, v) in row.iter_mut().enumerate() {
                jac[(r, c)] = *v;
                *v = Complex64::new(0.0, 0.0);
            }
        };
        let mut r = 0;
        for e in &self.fixed {
            val[r] = e.eval_grad(x, ONE, &mut row);
            put_row(&mut jac, r, &mut row);
            r += 1;
        }
        let a_scale = self.gamma * t;
        let b_scale = ONE - t;
        for (a, b) in self.start.iter().zip(&self.target) {
            let av = a.eval_grad(x, a_scale, &mut row);
            let bv = b.eval_grad(x, b_scale, &mut row);
            val[r] = a_scale * av + b_scale * bv;
            if let Some(d) = dt.as_mut() {
                d[r] = self.gamma * av - bv;
            }
            put_row(&mut jac, r, &mut row);
            r += 1;
        }
        for h in &self.chart {
            val[r] = h.eval(x) - ONE;
            for (j, a) in h.coeffs.iter().enumerate() {
                jac[(r, h.offset + j)] = *a;
            }
            r += 1;
        }
        (val, jac, dt)
    }

    /// Infinity norm of the values at `(x, t)`.
    pub fn residual(&self, x: &[Complex64], t: Complex64) -> f64 {
        self.eval(x, t).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Rescales each group so that `H_i(x) = 1`. Returns `None` if some `H_i(x)` vanishes.
    pub fn normalize(&self, x: &[Complex64]) -> Option<Vec<Complex64>> {
        normalize_to_chart(&self.chart, x)
    }
}

/// Rescales each group's coordinates so that its chart form takes the value one.
pub fn normalize_to_chart(chart: &[LinearForm], x: &[Complex64]) -> Option<Vec<Complex64>> {
    let mut y = x.to_vec();
    for h in chart {
        let v = h.eval(x);
        let scale: f64 = x[h.offset..h.offset + h.coeffs.len()]
            .iter()
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        if v.norm() <= 1e-300 || v.norm() < 1e-14 * scale {
            return None;
        }
        for z in &mut y[h.offset..h.offset + h.coeffs.len()] {
            *z /= v;
        }
    }
    Some(y)
}
