use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::poly::{product_polynomial, Equation, LinearForm, VariableStructure};
use crate::tracker::{newton_polish, track_segment, Homotopy, TrackerSettings};
use crate::witness::{Chart, LinearSlice, SegreSlice};

/// Parameter values at which traces are sampled.
pub const TRACE_TIMES: [f64; 3] = [1.0, 0.5, 0.0];

/// `ρ = prod_i r_i(x)`, one random form per group, read in chart coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneralCoordinate {
    pub factors: Vec<LinearForm>,
}

impl GeneralCoordinate {
    pub fn new(structure: &VariableStructure, factors: Vec<LinearForm>) -> Result<Self> {
        if factors.len() != structure.group_count() {
            return Err(Error::Invalid(
                "a general coordinate needs one factor per group".into(),
            ));
        }
        for (i, f) in factors.iter().enumerate() {
            if f.group != i || f.is_zero() {
                return Err(Error::Invalid(format!(
                    "factor {i} must be a nonzero form in group {i}"
                )));
            }
        }
        Ok(Self { factors })
    }

    pub fn random<R: Rng + ?Sized>(structure: &VariableStructure, rng: &mut R) -> Self {
        Self {
            factors: SegreSlice::random(structure, rng).factors,
        }
    }

    /// Value at `x` after rescaling every group to `H_i = 1`.
    pub fn eval(&self, x: &[Complex64], chart: &Chart) -> Option<Complex64> {
        let y = chart.normalize(x)?;
        Some(self.factors.iter().map(|f| f.eval(&y)).product())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceSample {
    pub t: f64,
    pub value: Complex64,
}

/// `V ∪ L^e ∪ {R_j + (1 − t) H}` with `H` the product of the chart forms.
///
/// `tracking` must be square for the codimension of `V`.
pub fn build_trace_homotopy(
    structure: &Arc<VariableStructure>,
    tracking: &[Equation],
    slice: &LinearSlice,
    segre: &[SegreSlice],
    chart: &Chart,
) -> Result<Homotopy> {
    if segre.is_empty() {
        return Err(Error::Invalid(
            "the trace homotopy needs at least one Segre slice".into(),
        ));
    }
    let h = product_polynomial(structure, &chart.forms);
    let mut fixed = tracking.to_vec();
    fixed.extend(slice.equations());
    let start: Vec<Equation> = segre.iter().map(|r| r.equation()).collect();
    let target: Vec<Equation> = segre
        .iter()
        .map(|r| Equation::poly(&product_polynomial(structure, &r.factors).add(&h)))
        .collect();
    Homotopy::new(
        structure.total_vars(),
        fixed,
        start,
        target,
        chart.forms.clone(),
    )
}

/// `ρ` along the path of each point at [`TRACE_TIMES`]; `None` marks a failed path.
///
/// Traces of subsets are means of these rows, so one tracking run serves
/// every candidate subset.
pub fn point_traces(
    h: &Homotopy,
    points: &[Vec<Complex64>],
    rho: &GeneralCoordinate,
    chart: &Chart,
    settings: &TrackerSettings,
) -> Vec<Option<[Complex64; 3]>> {
    points
        .par_iter()
        .map(|p| point_trace(h, p, rho, chart, settings))
        .collect()
}

fn point_trace(
    h: &Homotopy,
    p: &[Complex64],
    rho: &GeneralCoordinate,
    chart: &Chart,
    settings: &TrackerSettings,
) -> Option<[Complex64; 3]> {
    let mut out = [Complex64::new(0.0, 0.0); 3];
    let mut x = p.to_vec();
    let mut t_prev = Complex64::new(TRACE_TIMES[0], 0.0);
    for (slot, &t) in out.iter_mut().zip(&TRACE_TIMES) {
        let t = Complex64::new(t, 0.0);
        if t != t_prev {
            x = track_segment(h, &x, t_prev, t, settings).ok()?.0;
            t_prev = t;
        }
        let (polished, ok) = newton_polish(h, t, &x, settings.tol_final, 8);
        if !ok {
            return None;
        }
        x = polished;
        *slot = rho.eval(&x, chart)?;
    }
    Some(out)
}

/// Mean of the rows in `subset`; `None` if any of them failed.
pub fn subset_trace(rows: &[Option<[Complex64; 3]>], subset: &[usize]) -> Option<Vec<TraceSample>> {
    if subset.is_empty() {
        return None;
    }
    let mut sum = [Complex64::new(0.0, 0.0); 3];
    for &j in subset {
        let r = rows.get(j)?.as_ref()?;
        for (s, v) in sum.iter_mut().zip(r) {
            *s += v;
        }
    }
    let n = subset.len() as f64;
    Some(
        TRACE_TIMES
            .iter()
            .zip(sum)
            .map(|(&t, s)| TraceSample { t, value: s / n })
            .collect(),
    )
}

/// Tracks `points` and returns the trace samples at [`TRACE_TIMES`].
pub fn trace_values(
    h: &Homotopy,
    points: &[Vec<Complex64>],
    rho: &GeneralCoordinate,
    chart: &Chart,
    settings: &TrackerSettings,
) -> Result<Vec<TraceSample>> {
    let rows = point_traces(h, points, rho, chart, settings);
    let failed = rows.iter().filter(|r| r.is_none()).count();
    if failed > 0 {
        return Err(Error::PathFailures {
            failed,
            total: rows.len(),
        });
    }
    let all: Vec<usize> = (0..rows.len()).collect();
    subset_trace(&rows, &all).ok_or_else(|| Error::Invalid("no points to trace".into()))
}

/// Second difference test on samples at `t = 1, 1/2, 0`.
pub fn is_affine_linear(samples: &[TraceSample], tol_rel: f64) -> bool {
    let [a, b, c] = match samples {
        [a, b, c] => [a.value, b.value, c.value],
        _ => return false,
    };
    let scale = 1f64.max((a - c).norm()).max(a.norm());
    (a - 2.0 * b + c).norm() <= tol_rel * scale
}

/// Whether `points` are the Segre-slice points of a union of components.
pub fn trace_test(
    h: &Homotopy,
    points: &[Vec<Complex64>],
    rho: &GeneralCoordinate,
    chart: &Chart,
    settings: &TrackerSettings,
) -> Result<bool> {
    Ok(is_affine_linear(
        &trace_values(h, points, rho, chart, settings)?,
        TRACE_TOL,
    ))
}

/// Relative tolerance of the linearity test.
pub const TRACE_TOL: f64 = 1e-6;
