//! Predictor-corrector path tracking with a Cauchy endgame.

mod endgame;
mod homotopy;
mod path;

pub use endgame::cauchy_endgame;
pub use homotopy::{normalize_to_chart, Homotopy};
pub use path::{newton_polish, track_all, track_path, track_segment};

use num_complex::Complex64;

#[derive(Debug, Clone, PartialEq)]
pub struct TrackerSettings {
    pub step_initial: f64,
    pub step_min: f64,
    pub step_growth: f64,
    pub growth_after: usize,
    pub newton_iterations_max: usize,
    pub tol_track: f64,
    pub tol_final: f64,
    pub endgame_start: f64,
    pub endgame_cycle_max: usize,
    pub endgame_samples_per_loop: usize,
    pub endgame_radius_ratio: f64,
    pub endgame_levels_max: usize,
    pub path_failure_condition_max: f64,
    pub divergence_norm: f64,
    /// Endpoints with a condition estimate above this are reported singular.
    pub singular_condition: f64,
    pub max_steps: usize,
    /// Last `t` reached by the fallback when the endgame does not settle.
    pub fallback_t: f64,
}

impl Default for TrackerSettings {
    fn default() -> Self {
        Self {
            step_initial: 0.1,
            step_min: 1e-14,
            step_growth: 2.0,
            growth_after: 5,
            newton_iterations_max: 3,
            tol_track: 1e-7,
            tol_final: 1e-11,
            endgame_start: 0.1,
            endgame_cycle_max: 8,
            endgame_samples_per_loop: 16,
            endgame_radius_ratio: 0.25,
            endgame_levels_max: 8,
            path_failure_condition_max: 1e13,
            divergence_norm: 1e12,
            singular_condition: 1e9,
            max_steps: 200_000,
            fallback_t: 1e-8,
        }
    }
}

impl TrackerSettings {
    pub fn validate(&self) -> Result<(), String> {
        if !(0.0 < self.step_min && self.step_min < self.step_initial && self.step_initial <= 1.0) {
            return Err("need 0 < step_min < step_initial <= 1".into());
        }
        if !(self.tol_track > 0.0 && self.tol_final > 0.0) {
            return Err("tolerances must be positive".into());
        }
        if !(self.endgame_start > 0.0 && self.endgame_start < 1.0) {
            return Err("endgame_start must lie in (0, 1)".into());
        }
        if self.endgame_cycle_max == 0 || self.endgame_samples_per_loop < 4 {
            return Err("endgame needs at least one cycle and four samples per loop".into());
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FailureReason {
    BadStart,
    StepMin,
    IllConditioned,
    Diverging,
    CycleExceeded,
    NonConvergent,
    MaxSteps,
}

impl std::fmt::Display for FailureReason {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            FailureReason::BadStart => "start point off the homotopy",
            FailureReason::StepMin => "step size below minimum",
            FailureReason::IllConditioned => "ill-conditioned Jacobian",
            FailureReason::Diverging => "path diverging",
            FailureReason::CycleExceeded => "cycle number above limit",
            FailureReason::NonConvergent => "endgame estimates did not settle",
            FailureReason::MaxSteps => "step budget exhausted",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathStatus {
    Success,
    SingularEndpoint(usize),
    Failure(FailureReason),
}

#[derive(Debug, Clone, PartialEq)]
pub struct PathOutcome {
    /// Chart-normalized coordinates at `t = 0` (best estimate on failure).
    pub endpoint: Vec<Complex64>,
    pub status: PathStatus,
    pub residual: f64,
    pub last_condition_estimate: f64,
    pub steps_taken: usize,
}

impl PathOutcome {
    pub fn is_success(&self) -> bool {
        self.status == PathStatus::Success
    }

    pub fn is_failure(&self) -> bool {
        matches!(self.status, PathStatus::Failure(_))
    }

    /// Success or a singular endpoint.
    pub fn reached_end(&self) -> bool {
        !self.is_failure()
    }

    pub fn cycle_number(&self) -> usize {
        match self.status {
            PathStatus::SingularEndpoint(c) => c,
            _ => 1,
        }
    }
}
