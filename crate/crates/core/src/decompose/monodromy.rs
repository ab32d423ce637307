use num_complex::Complex64;
use rand::Rng;

use crate::error::Result;
use crate::tracker::{PathOutcome, TrackerSettings};
use crate::witness::{
    point_equal, random_slice, slice_through_point, LinearSlice, SliceType, WitnessCollection,
    WitnessSet,
};

/// Tolerance for matching loop endpoints with witness points.
const MATCH: f64 = 1e-6;

/// Index of a witness point inside a collection.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PointId {
    pub e: SliceType,
    pub index: usize,
}

/// Moves the slice of `w` around the triangle `L → L' → L'' → L`.
///
/// Entry `j` is the index of the point that path `j` returned to, or `None`
/// if a path failed or ended away from every witness point.
pub fn monodromy_loop<R: Rng + ?Sized>(
    w: &WitnessSet,
    rng: &mut R,
    settings: &TrackerSettings,
) -> Result<Vec<Option<usize>>> {
    let e = w.slice_type();
    let structure = w.system.structure();
    let legs = [
        random_slice(&e, structure, rng)?,
        random_slice(&e, structure, rng)?,
        w.slice.clone(),
    ];
    let mut cur: Vec<Option<Vec<Complex64>>> = w.points.iter().cloned().map(Some).collect();
    let mut from = w.slice.clone();
    for to in legs {
        let live: Vec<usize> = (0..cur.len()).filter(|&j| cur[j].is_some()).collect();
        if live.is_empty() {
            break;
        }
        let pts = live.iter().map(|&j| cur[j].clone().unwrap()).collect();
        let out = w.with_points(from.clone(), pts).track_to(&to, settings)?;
        for (&j, o) in live.iter().zip(out) {
            cur[j] = o.is_success().then_some(o.endpoint);
        }
        from = to;
    }
    Ok(cur
        .into_iter()
        .map(|x| {
            x.and_then(|x| {
                w.points
                    .iter()
                    .position(|p| point_equal(p, &x, &w.chart, MATCH))
            })
        })
        .collect())
}

/// Pairs `(start, end)` with `start != end` joined by `loops` random triangle loops,
/// tagged with the loop index.
pub fn monodromy_group<R: Rng + ?Sized>(
    w: &WitnessSet,
    loops: usize,
    rng: &mut R,
    settings: &TrackerSettings,
) -> Result<Vec<(usize, usize, usize)>> {
    let mut edges = Vec::new();
    if w.len() < 2 {
        return Ok(edges);
    }
    for l in 0..loops {
        for (j, end) in monodromy_loop(w, rng, settings)?.into_iter().enumerate() {
            if let Some(k) = end.filter(|&k| k != j) {
                edges.push((l, j, k));
            }
        }
    }
    Ok(edges)
}

/// Tracks `w` to `target`, a slice of its type through `alpha`, and lists the
/// start points whose paths end at `alpha`.
pub fn link_to_point(
    w: &WitnessSet,
    alpha: &[Complex64],
    target: &LinearSlice,
    settings: &TrackerSettings,
) -> Result<(Vec<usize>, Vec<PathOutcome>)> {
    let out = w.track_to(target, settings)?;
    let hits = out
        .iter()
        .enumerate()
        .filter(|(_, o)| o.reached_end() && point_equal(&o.endpoint, alpha, &w.chart, MATCH))
        .map(|(j, _)| j)
        .collect();
    Ok((hits, out))
}

/// Links points of different slice types lying on a common component.
///
/// Every point `α` of `w^e` is used as a membership target for each other
/// type `e'`: `w^{e'}` is moved to a generic slice of type `e'` through `α`
/// and each path ending at `α` joins its start point to `α`.
pub fn cross_slice_link<R: Rng + ?Sized>(
    collection: &WitnessCollection,
    rng: &mut R,
    settings: &TrackerSettings,
) -> Result<Vec<(PointId, PointId)>> {
    let structure = collection.system.structure();
    let sets: Vec<(&SliceType, &WitnessSet)> =
        collection.sets().filter(|(_, w)| !w.is_empty()).collect();
    let mut edges = Vec::new();
    for (e, w) in &sets {
        for (f, v) in &sets {
            if e == f || e.abs() != f.abs() {
                continue;
            }
            for (a, alpha) in w.points.iter().enumerate() {
                let target = slice_through_point(f, alpha, structure, rng)?;
                let (hits, _) = link_to_point(v, alpha, &target, settings)?;
                for j in hits {
                    edges.push((
                        PointId {
                            e: (*e).clone(),
                            index: a,
                        },
                        PointId {
                            e: (*f).clone(),
                            index: j,
                        },
                    ));
                }
            }
        }
    }
    Ok(edges)
}
