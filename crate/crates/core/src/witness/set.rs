use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;

use super::slice::{Chart, LinearSlice, SliceType};
use crate::error::{Error, Result};
use crate::poly::{randomize, Equation, PolynomialSystem};
use crate::rng::{derived, tags};
use crate::tracker::{track_all, Homotopy, PathOutcome, TrackerSettings};

/// `c` polynomials cutting out the codimension-`c` part of `system`.
///
/// Deterministic in `seed`, so archives can rebuild the same system.
pub fn square_system(
    system: &PolynomialSystem,
    codim: usize,
    chart: &Chart,
    seed: u64,
) -> Result<PolynomialSystem> {
    if codim > system.len() {
        return Err(Error::Invalid(format!(
            "codimension {codim} exceeds the {} polynomials of the system",
            system.len()
        )));
    }
    let mut rng = derived(seed, &[tags::SQUARE, codim as u64]);
    Ok(randomize(system, codim, &chart.forms, &mut rng)?)
}

/// Equations of `system` compiled once for repeated homotopy construction.
pub fn compile(system: &PolynomialSystem) -> Vec<Equation> {
    system.polys().iter().map(Equation::poly).collect()
}

/// Homotopy moving the slice `from` (at `t = 1`) to `to` (at `t = 0`).
pub fn slice_homotopy(
    tracking: &[Equation],
    chart: &Chart,
    from: &LinearSlice,
    to: &LinearSlice,
) -> Result<Homotopy> {
    if from.slice_type() != to.slice_type() {
        return Err(Error::SliceTypeMismatch(
            from.slice_type().0,
            to.slice_type().0,
        ));
    }
    let nvars = chart.forms.iter().map(|h| h.coeffs.len()).sum();
    Homotopy::new(
        nvars,
        tracking.to_vec(),
        from.equations(),
        to.equations(),
        chart.forms.clone(),
    )
}

/// Normalizes each group to the chart, or to its largest coordinate when the
/// chart value is tiny, then compares in the infinity norm.
pub fn point_equal(p: &[Complex64], q: &[Complex64], chart: &Chart, tol: f64) -> bool {
    if p.len() != q.len() {
        return false;
    }
    for h in &chart.forms {
        let r = h.offset..h.offset + h.coeffs.len();
        let (gp, gq) = (&p[r.clone()], &q[r]);
        let big = gp.iter().map(|z| z.norm()).fold(0.0, f64::max);
        let hp = h.eval_local(gp);
        let hq = h.eval_local(gq);
        let (sp, sq) = if hp.norm() > 1e-8 * big.max(1e-300) && hq.norm() > 0.0 {
            (hp, hq)
        } else {
            let j = gp
                .iter()
                .enumerate()
                .fold(0, |b, (j, z)| if z.norm() > gp[b].norm() { j } else { b });
            (gp[j], gq[j])
        };
        if sp.norm() == 0.0 || sq.norm() == 0.0 {
            return false;
        }
        let scale = gp.iter().map(|z| (z / sp).norm()).fold(1.0, f64::max);
        let d = gp
            .iter()
            .zip(gq)
            .map(|(a, b)| (a / sp - b / sq).norm())
            .fold(0.0, f64::max);
        if d >= tol * scale {
            return false;
        }
    }
    true
}

/// Witness set `W^e = (V, L^e, w^e)`.
#[derive(Debug, Clone)]
pub struct WitnessSet {
    /// The witness system `V`.
    pub system: Arc<PolynomialSystem>,
    /// Square randomization of `V` used for slice motion.
    pub tracking: Arc<PolynomialSystem>,
    pub chart: Chart,
    pub slice: LinearSlice,
    pub points: Vec<Vec<Complex64>>,
    pub multiplicities: Vec<usize>,
}

impl WitnessSet {
    pub fn new(
        system: Arc<PolynomialSystem>,
        tracking: Arc<PolynomialSystem>,
        chart: Chart,
        slice: LinearSlice,
        points: Vec<Vec<Complex64>>,
    ) -> Self {
        let multiplicities = vec![1; points.len()];
        Self {
            system,
            tracking,
            chart,
            slice,
            points,
            multiplicities,
        }
    }

    pub fn slice_type(&self) -> SliceType {
        self.slice.slice_type()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn codim(&self) -> usize {
        self.system.structure().ambient_dim() - self.slice_type().abs()
    }

    /// Same data with another point list; multiplicities reset to one.
    pub fn with_points(&self, slice: LinearSlice, points: Vec<Vec<Complex64>>) -> Self {
        Self::new(
            self.system.clone(),
            self.tracking.clone(),
            self.chart.clone(),
            slice,
            points,
        )
    }

    /// Tracks the points to the slice `target`.
    pub fn track_to(
        &self,
        target: &LinearSlice,
        settings: &TrackerSettings,
    ) -> Result<Vec<PathOutcome>> {
        let h = slice_homotopy(&compile(&self.tracking), &self.chart, &self.slice, target)?;
        Ok(track_all(&h, &self.points, settings))
    }
}

/// Moves `w` to the slice `target` of the same type.
pub fn move_slice(
    w: &WitnessSet,
    target: &LinearSlice,
    settings: &TrackerSettings,
) -> Result<WitnessSet> {
    if w.slice_type() != target.slice_type() {
        return Err(Error::SliceTypeMismatch(
            w.slice_type().0,
            target.slice_type().0,
        ));
    }
    if &w.slice == target {
        return Ok(w.clone());
    }
    let out = w.track_to(target, settings)?;
    let failed = out.iter().filter(|o| o.is_failure()).count();
    if failed > 0 {
        return Err(Error::PathFailures {
            failed,
            total: out.len(),
        });
    }
    let mut points: Vec<Vec<Complex64>> = Vec::with_capacity(out.len());
    for o in out {
        if !points
            .iter()
            .any(|p| point_equal(p, &o.endpoint, &w.chart, 1e-6))
        {
            points.push(o.endpoint);
        }
    }
    if points.len() != w.len() {
        return Err(Error::PointCountChanged {
            before: w.len(),
            after: points.len(),
        });
    }
    let mut moved = w.with_points(target.clone(), points);
    moved.multiplicities = w.multiplicities.clone();
    Ok(moved)
}

/// Formal sum `sum_e |w^e| w^e`, nonzero terms only, in slice-type order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Multidegree(pub Vec<(SliceType, usize)>);

impl Multidegree {
    pub fn count(&self, e: &[usize]) -> usize {
        self.0.iter().find(|(t, _)| t.0 == e).map_or(0, |(_, c)| *c)
    }

    pub fn total(&self) -> usize {
        self.0.iter().map(|(_, c)| c).sum()
    }
}

impl fmt::Display for Multidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c} w^{e}")?;
        }
        Ok(())
    }
}

/// Formal union of witness sets over slice types, sharing system, chart and seed.
#[derive(Debug, Clone)]
pub struct WitnessCollection {
    pub system: Arc<PolynomialSystem>,
    pub chart: Chart,
    pub seed: u64,
    sets: BTreeMap<SliceType, WitnessSet>,
}

impl WitnessCollection {
    pub fn new(system: Arc<PolynomialSystem>, chart: Chart, seed: u64) -> Self {
        Self {
            system,
            chart,
            seed,
            sets: BTreeMap::new(),
        }
    }

    /// Inserts `set`, replacing any set of the same type.
    pub fn insert(&mut self, set: WitnessSet) {
        self.sets.insert(set.slice_type(), set);
    }

    pub fn get(&self, e: &SliceType) -> Option<&WitnessSet> {
        self.sets.get(e)
    }

    pub fn get_mut(&mut self, e: &SliceType) -> Option<&mut WitnessSet> {
        self.sets.get_mut(e)
    }

    pub fn remove(&mut self, e: &SliceType) -> Option<WitnessSet> {
        self.sets.remove(e)
    }

    pub fn sets(&self) -> impl Iterator<Item = (&SliceType, &WitnessSet)> {
        self.sets.iter()
    }

    pub fn types(&self) -> Vec<SliceType> {
        self.sets.keys().cloned().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.sets.values().all(WitnessSet::is_empty)
    }

    pub fn total_points(&self) -> usize {
        self.sets.values().map(WitnessSet::len).sum()
    }

    pub fn multidegree(&self) -> Multidegree {
        Multidegree(
            self.sets
                .iter()
                .filter(|(_, w)| !w.is_empty())
                .map(|(e, w)| (e.clone(), w.len()))
                .collect(),
        )
    }

    /// The sets of dimension `dim` (that is, `|e| = dim`).
    pub fn of_dimension(&self, dim: usize) -> WitnessCollection {
        let mut out = WitnessCollection::new(self.system.clone(), self.chart.clone(), self.seed);
        for (e, w) in &self.sets {
            if e.abs() == dim {
                out.insert(w.clone());
            }
        }
        out
    }

    /// Dimensions present, largest first.
    pub fn dimensions(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self
            .sets
            .iter()
            .filter(|(_, w)| !w.is_empty())
            .map(|(e, _)| e.abs())
            .collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d.dedup();
        d
    }

    /// The square tracking system for codimension `codim`, as rebuilt from the seed.
    pub fn tracking_system(&self, codim: usize) -> Result<Arc<PolynomialSystem>> {
        Ok(Arc::new(square_system(
            &self.system,
            codim,
            &self.chart,
            self.seed,
        )?))
    }

    /// Empty witness set of type `e` with that slice, ready for points.
    pub fn empty_set(&self, slice: LinearSlice) -> Result<WitnessSet> {
        let codim = self.system.structure().ambient_dim() - slice.slice_type().abs();
        let tracking = self.tracking_system(codim)?;
        Ok(WitnessSet::new(
            self.system.clone(),
            tracking,
            self.chart.clone(),
            slice,
            Vec::new(),
        ))
    }
}
