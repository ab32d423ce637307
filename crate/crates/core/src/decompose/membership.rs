use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::tracker::{PathOutcome, TrackerSettings};
use crate::witness::{point_equal, slice_through_point, SliceType, WitnessCollection, WitnessSet};

/// Outcome of tracking one witness set to a slice through the test point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SliceVerdict {
    /// The point is among the endpoints.
    Member,
    /// Every endpoint certified isolated and none equals the point.
    NotMember,
    /// Some endpoint is singular or two endpoints coincide.
    Uncertified,
    /// Some path failed.
    Failed,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Membership {
    Member(SliceType),
    NotMember,
    Inconclusive,
}

/// Per slice type diagnostics of a membership run.
#[derive(Debug, Clone)]
pub struct MembershipTrace {
    pub e: SliceType,
    pub verdict: SliceVerdict,
    pub endpoints: Vec<PathOutcome>,
}

/// Tracks `w` to a generic slice of its type through `alpha` and classifies the endpoints.
pub fn test_slice_type<R: Rng + ?Sized>(
    w: &WitnessSet,
    alpha: &[Complex64],
    rng: &mut R,
    settings: &TrackerSettings,
    tol: f64,
) -> Result<MembershipTrace> {
    let e = w.slice_type();
    let structure = w.system.structure();
    let target = slice_through_point(&e, alpha, structure, rng)?;
    let endpoints = w.track_to(&target, settings)?;
    let verdict = classify(&endpoints, alpha, w, tol);
    Ok(MembershipTrace {
        e,
        verdict,
        endpoints,
    })
}

fn classify(
    endpoints: &[PathOutcome],
    alpha: &[Complex64],
    w: &WitnessSet,
    tol: f64,
) -> SliceVerdict {
    if endpoints
        .iter()
        .any(|o| o.reached_end() && point_equal(&o.endpoint, alpha, &w.chart, tol))
    {
        return SliceVerdict::Member;
    }
    if endpoints.iter().any(|o| o.is_failure()) {
        return SliceVerdict::Failed;
    }
    if endpoints.iter().any(|o| !o.is_success()) {
        return SliceVerdict::Uncertified;
    }
    for (a, p) in endpoints.iter().enumerate() {
        for q in &endpoints[a + 1..] {
            if point_equal(&p.endpoint, &q.endpoint, &w.chart, 1e-6) {
                return SliceVerdict::Uncertified;
            }
        }
    }
    SliceVerdict::NotMember
}

/// Membership of `alpha` in the variety represented by `collection`.
///
/// Each dimension is tested separately. Within a dimension, slice types are
/// tried in order: a certified non-member verdict ends that dimension, while
/// types whose endpoints fail the isolation checks are skipped. A dimension
/// with no certifying type is inconclusive.
pub fn membership_test<R: Rng + ?Sized>(
    collection: &WitnessCollection,
    alpha: &[Complex64],
    rng: &mut R,
    settings: &TrackerSettings,
) -> Result<(Membership, Vec<MembershipTrace>)> {
    let mut traces = Vec::new();
    let mut inconclusive = false;
    for dim in collection.dimensions() {
        let mut settled = false;
        for (e, w) in collection.sets() {
            if w.is_empty() || e.abs() != dim {
                continue;
            }
            let tr = test_slice_type(w, alpha, rng, settings, 1e-6)?;
            let verdict = tr.verdict.clone();
            traces.push(tr);
            match verdict {
                SliceVerdict::Member => return Ok((Membership::Member(e.clone()), traces)),
                SliceVerdict::NotMember => {
                    settled = true;
                    break;
                }
                SliceVerdict::Uncertified | SliceVerdict::Failed => {}
            }
        }
        inconclusive |= !settled;
    }
    let verdict = if inconclusive {
        Membership::Inconclusive
    } else {
        Membership::NotMember
    };
    Ok((verdict, traces))
}

/// Whether some set places `alpha` among its endpoints; the second flag is
/// `false` when some path failed along the way.
pub fn member_of_any<R: Rng + ?Sized>(
    sets: &[&WitnessSet],
    alpha: &[Complex64],
    rng: &mut R,
    settings: &TrackerSettings,
    tol: f64,
) -> Result<(bool, bool)> {
    let mut clean = true;
    for w in sets {
        if w.is_empty() {
            continue;
        }
        let tr = test_slice_type(w, alpha, rng, settings, tol)?;
        match tr.verdict {
            SliceVerdict::Member => return Ok((true, clean)),
            SliceVerdict::Failed => clean = false,
            _ => {}
        }
    }
    Ok((false, clean))
}
