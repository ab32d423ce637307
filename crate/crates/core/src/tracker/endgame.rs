use std::f64::consts::TAU;

use num_complex::Complex64;

use super::path::segment;
use super::{FailureReason, Homotopy, TrackerSettings};
use crate::linalg::norm_inf;

fn dist(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Loops once or more around `t = 0` at radius `r`, starting from `x` at `t = r`.
/// Returns the Cauchy estimate and the number of loops until the path closed.
fn circle(
    h: &Homotopy,
    x: &[Complex64],
    r: f64,
    settings: &TrackerSettings,
) -> Result<(Vec<Complex64>, usize), FailureReason> {
    let settings = &scaled(settings, r);
    let m = settings.endgame_samples_per_loop;
    let tol = settings.tol_track * 1e-3;
    let mut cur = x.to_vec();
    let mut sum = vec![Complex64::new(0.0, 0.0); x.len()];
    let mut count = 0usize;
    let point = |j: usize| Complex64::from_polar(r, TAU * (j % m) as f64 / m as f64);
    for loops in 1..=settings.endgame_cycle_max {
        for j in 0..m {
            cur = segment(h, &cur, point(j), point(j + 1), settings, tol)?.x;
            for (s, c) in sum.iter_mut().zip(&cur) {
                *s += c;
            }
            count += 1;
        }
        if dist(&cur, x) <= 1e-5 * (1.0 + norm_inf(x)) {
            let est = sum.iter().map(|s| s / count as f64).collect();
            return Ok((est, loops));
        }
    }
    Err(FailureReason::CycleExceeded)
}

/// Steps near `t = 0` are kept proportional to `|t|` so the tracker cannot
/// hop between the nearly coincident branches of a singular endpoint.
fn scaled(settings: &TrackerSettings, r: f64) -> TrackerSettings {
    let mut s = settings.clone();
    s.step_initial = s.step_initial.min(r * 0.25);
    s
}

/// Cauchy endgame from a point on the path at `t = endgame_start`.
///
/// Circles of shrinking radius are traversed until two consecutive estimates agree.
pub fn cauchy_endgame(
    h: &Homotopy,
    point_at_t0: &[Complex64],
    settings: &TrackerSettings,
) -> Result<(Vec<Complex64>, usize), FailureReason> {
    let mut r = settings.endgame_start;
    let mut x = point_at_t0.to_vec();
    let mut prev: Option<(Vec<Complex64>, usize)> = None;
    let agree = settings.tol_final * 10.0;
    let mut last_err = FailureReason::NonConvergent;
    for _ in 0..settings.endgame_levels_max {
        match circle(h, &x, r, settings) {
            Ok((est, cycle)) => {
                let size = 1.0 + norm_inf(&est);
                // Branch points off `t = 0` whose monodromy cancels can close the
                // loop without the mean being a root, so the residual is checked too.
                let root = h.residual(&est, Complex64::new(0.0, 0.0)) <= settings.tol_track * size;
                if let Some((p, c)) = &prev {
                    if root && *c == cycle && dist(p, &est) <= agree * size {
                        return Ok((est, cycle));
                    }
                }
                prev = Some((est, cycle));
            }
            // Open loops mean a branch point still lies inside the circle.
            Err(FailureReason::CycleExceeded) => {
                prev = None;
                last_err = FailureReason::CycleExceeded;
            }
            Err(e) => return Err(e),
        }
        let next = r * settings.endgame_radius_ratio;
        let radial = scaled(settings, next);
        x = segment(
            h,
            &x,
            Complex64::new(r, 0.0),
            Complex64::new(next, 0.0),
            &radial,
            settings.tol_track * 1e-3,
        )?
        .x;
        r = next;
    }
    Err(last_err)
}
