use num_complex::Complex64;
use rayon::prelude::*;

use super::endgame::cauchy_endgame;
use super::{FailureReason, Homotopy, PathOutcome, PathStatus, TrackerSettings};
use crate::linalg::{norm_inf, CVec, Factored};

/// Tangent `dx/dt = -J^{-1} dH/dt`.
fn tangent(h: &Homotopy, x: &[Complex64], t: Complex64) -> Option<CVec> {
    let (_, jac, dt) = h.eval_jac(x, t, true);
    let f = Factored::new(jac)?;
    f.solve(&-dt.unwrap())
}

fn axpy(x: &[Complex64], a: Complex64, v: &CVec) -> Vec<Complex64> {
    x.iter().zip(v.iter()).map(|(xi, vi)| xi + a * vi).collect()
}

fn rk4(h: &Homotopy, x: &[Complex64], t: Complex64, dt: Complex64) -> Option<Vec<Complex64>> {
    let half = dt * 0.5;
    let k1 = tangent(h, x, t)?;
    let k2 = tangent(h, &axpy(x, half, &k1), t + half)?;
    let k3 = tangent(h, &axpy(x, half, &k2), t + half)?;
    let k4 = tangent(h, &axpy(x, dt, &k3), t + dt)?;
    let sixth = dt / 6.0;
    Some(
        x.iter()
            .enumerate()
            .map(|(i, xi)| xi + sixth * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
            .collect(),
    )
}

pub(crate) struct NewtonResult {
    pub x: Vec<Complex64>,
    pub converged: bool,
    /// Converged with the final update much smaller than the one before it.
    pub quadratic: bool,
    pub cond: f64,
}

/// Newton iterations at fixed `t`, stopping once an update falls below `tol`
/// relative to the point's size or the updates stop shrinking.
pub(crate) fn newton(
    h: &Homotopy,
    t: Complex64,
    x: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> NewtonResult {
    let mut x = x.to_vec();
    let mut prev = f64::INFINITY;
    let mut cond = f64::INFINITY;
    let stop = |x: Vec<Complex64>, converged: bool, quadratic: bool, cond: f64| NewtonResult {
        x,
        converged,
        quadratic,
        cond,
    };
    for _ in 0..max_iter {
        let (val, jac, _) = h.eval_jac(&x, t, false);
        let Some(f) = Factored::new(jac) else {
            return stop(x, false, false, f64::INFINITY);
        };
        cond = f.condition_estimate();
        let Some(dx) = f.solve(&-val) else {
            return stop(x, false, false, cond);
        };
        let step = dx.iter().map(|z| z.norm()).fold(0.0, f64::max);
        for (xi, d) in x.iter_mut().zip(dx.iter()) {
            *xi += d;
        }
        let size = 1.0 + norm_inf(&x);
        if step <= tol * size {
            let quadratic = prev == f64::INFINITY || step <= 0.05 * prev || step <= 1e-14 * size;
            return stop(x, true, quadratic, cond);
        }
        if step >= prev {
            return stop(x, false, false, cond);
        }
        prev = step;
    }
    stop(x, false, false, cond)
}

/// Newton's method on `h` at parameter `t`; the flag reports convergence to `tol`
/// (update and residual) with contracting steps.
pub fn newton_polish(
    h: &Homotopy,
    t: Complex64,
    point: &[Complex64],
    tol: f64,
    max_iter: usize,
) -> (Vec<Complex64>, bool) {
    let r = newton(h, t, point, tol, max_iter);
    let ok = r.converged && r.quadratic && h.residual(&r.x, t) <= tol * (1.0 + norm_inf(&r.x));
    (r.x, ok)
}

pub(crate) struct SegmentEnd {
    pub x: Vec<Complex64>,
    pub steps: usize,
    pub cond: f64,
}

/// Tracks from `t_from` to `t_to` along the straight segment in the complex plane.
pub fn track_segment(
    h: &Homotopy,
    x: &[Complex64],
    t_from: Complex64,
    t_to: Complex64,
    settings: &TrackerSettings,
) -> Result<(Vec<Complex64>, usize), FailureReason> {
    segment(h, x, t_from, t_to, settings, settings.tol_track).map(|s| (s.x, s.steps))
}

pub(crate) fn segment(
    h: &Homotopy,
    x: &[Complex64],
    t_from: Complex64,
    t_to: Complex64,
    settings: &TrackerSettings,
    tol: f64,
) -> Result<SegmentEnd, FailureReason> {
    segment_partial(h, x, t_from, t_to, settings, tol).map_err(|(r, _)| r)
}

/// Like [`segment`], but a failure also returns the last accepted point.
fn segment_partial(
    h: &Homotopy,
    x: &[Complex64],
    t_from: Complex64,
    t_to: Complex64,
    settings: &TrackerSettings,
    tol: f64,
) -> Result<SegmentEnd, (FailureReason, SegmentEnd)> {
    let delta = t_to - t_from;
    let len = delta.norm();
    let mut x = x.to_vec();
    if len == 0.0 {
        return Ok(SegmentEnd {
            x,
            steps: 0,
            cond: 1.0,
        });
    }
    let ds_max = (settings.step_initial * 4.0 / len).min(1.0);
    let mut ds = (settings.step_initial / len).min(1.0);
    let mut s = 0.0f64;
    let mut streak = 0usize;
    let mut steps = 0usize;
    let mut cond = 1.0;
    while s < 1.0 {
        if steps >= settings.max_steps {
            return Err((FailureReason::MaxSteps, SegmentEnd { x, steps, cond }));
        }
        steps += 1;
        let last = s + ds >= 1.0 - 1e-15;
        let s_next = if last { 1.0 } else { s + ds };
        let t0 = t_from + delta * s;
        let t1 = if last { t_to } else { t_from + delta * s_next };
        let accepted = rk4(h, &x, t0, t1 - t0).and_then(|pred| {
            let r = newton(h, t1, &pred, tol, settings.newton_iterations_max);
            r.converged.then_some((r.x, r.cond))
        });
        match accepted {
            Some((xc, c)) => {
                x = xc;
                cond = c;
                s = s_next;
                if norm_inf(&x) > settings.divergence_norm {
                    return Err((FailureReason::Diverging, SegmentEnd { x, steps, cond }));
                }
                if cond > settings.path_failure_condition_max {
                    return Err((FailureReason::IllConditioned, SegmentEnd { x, steps, cond }));
                }
                streak += 1;
                if streak >= settings.growth_after {
                    ds = (ds * settings.step_growth).min(ds_max);
                    streak = 0;
                }
            }
            None => {
                ds *= 0.5;
                streak = 0;
                if ds * len < settings.step_min {
                    return Err((FailureReason::StepMin, SegmentEnd { x, steps, cond }));
                }
            }
        }
    }
    Ok(SegmentEnd { x, steps, cond })
}

fn outcome(
    h: &Homotopy,
    x: Vec<Complex64>,
    status: PathStatus,
    cond: f64,
    steps: usize,
) -> PathOutcome {
    let x = h.normalize(&x).unwrap_or(x);
    let residual = h.residual(&x, Complex64::new(0.0, 0.0));
    PathOutcome {
        endpoint: x,
        status,
        residual,
        last_condition_estimate: cond,
        steps_taken: steps,
    }
}

fn nonsingular(h: &Homotopy, r: &NewtonResult, settings: &TrackerSettings) -> bool {
    r.converged
        && r.quadratic
        && r.cond < settings.singular_condition
        && h.residual(&r.x, Complex64::new(0.0, 0.0)) <= settings.tol_final * (1.0 + norm_inf(&r.x))
}

/// Tracks one path from `t = 1` to `t = 0`.
pub fn track_path(h: &Homotopy, start: &[Complex64], settings: &TrackerSettings) -> PathOutcome {
    let zero = Complex64::new(0.0, 0.0);
    let one = Complex64::new(1.0, 0.0);
    let fail = |x: &[Complex64], r: FailureReason, steps: usize| {
        outcome(h, x.to_vec(), PathStatus::Failure(r), f64::INFINITY, steps)
    };
    if start.len() != h.nvars() {
        return fail(start, FailureReason::BadStart, 0);
    }
    let scale = 1.0 + norm_inf(start);
    let start = if h.residual(start, one) > settings.tol_track * scale {
        let r = newton(h, one, start, settings.tol_track, 5);
        if !r.converged || h.residual(&r.x, one) > settings.tol_track * scale {
            return fail(start, FailureReason::BadStart, 0);
        }
        r.x
    } else {
        start.to_vec()
    };

    let teg = Complex64::new(settings.endgame_start, 0.0);
    let eg = match segment(h, &start, one, teg, settings, settings.tol_track) {
        Ok(s) => s,
        Err(r) => return fail(&start, r, 0),
    };
    let mut steps = eg.steps;

    if let Ok(end) = segment(h, &eg.x, teg, zero, settings, settings.tol_track) {
        steps += end.steps;
        let r = newton(h, zero, &end.x, settings.tol_final, 6);
        if nonsingular(h, &r, settings) {
            return outcome(h, r.x, PathStatus::Success, r.cond, steps);
        }
    }

    match cauchy_endgame(h, &eg.x, settings) {
        Ok((est, cycle)) => {
            let r = newton(h, zero, &est, settings.tol_final, 6);
            if cycle == 1 && nonsingular(h, &r, settings) {
                outcome(h, r.x, PathStatus::Success, r.cond, steps)
            } else {
                outcome(h, est, PathStatus::SingularEndpoint(cycle), r.cond, steps)
            }
        }
        Err(reason) => {
            let mut tight = settings.clone();
            tight.tol_track = settings.tol_track * 1e-2;
            let tf = Complex64::new(settings.fallback_t, 0.0);
            match segment_partial(h, &eg.x, teg, tf, &tight, tight.tol_track) {
                Ok(end) => outcome(
                    h,
                    end.x,
                    PathStatus::Failure(reason),
                    end.cond,
                    steps + end.steps,
                ),
                Err((r, last)) => outcome(
                    h,
                    last.x,
                    PathStatus::Failure(r),
                    last.cond,
                    steps + last.steps,
                ),
            }
        }
    }
}

/// Tracks every start; element `j` of the result belongs to `starts[j]`.
pub fn track_all(
    h: &Homotopy,
    starts: &[Vec<Complex64>],
    settings: &TrackerSettings,
) -> Vec<PathOutcome> {
    starts
        .par_iter()
        .map(|s| track_path(h, s, settings))
        .collect()
}
