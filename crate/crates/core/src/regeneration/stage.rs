use std::collections::BTreeMap;
use std::sync::{Arc, Mutex};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::decompose::member_of_any;
use crate::error::Result;
use crate::poly::{Equation, LinearForm, Polynomial, PolynomialSystem};
use crate::rng::derived;
use crate::tracker::{track_all, Homotopy, PathOutcome, TrackerSettings};
use crate::witness::{
    compile, point_equal, square_system, Chart, SliceFamily, SliceType, WitnessSet,
};

pub type Point = Vec<Complex64>;

type Squared = (Arc<PolynomialSystem>, Arc<Vec<Equation>>);

/// Square randomizations of one system, built on demand per codimension.
pub struct SquareSystems {
    system: Arc<PolynomialSystem>,
    chart: Chart,
    seed: u64,
    cache: Mutex<BTreeMap<usize, Squared>>,
}

impl SquareSystems {
    pub fn new(system: Arc<PolynomialSystem>, chart: Chart, seed: u64) -> Self {
        Self {
            system,
            chart,
            seed,
            cache: Mutex::new(BTreeMap::new()),
        }
    }

    pub fn system(&self) -> &Arc<PolynomialSystem> {
        &self.system
    }

    pub fn get(&self, codim: usize) -> Result<Squared> {
        if let Some(s) = self.cache.lock().unwrap().get(&codim) {
            return Ok(s.clone());
        }
        let sq = Arc::new(square_system(&self.system, codim, &self.chart, self.seed)?);
        let eq = Arc::new(compile(&sq));
        let entry = (sq, eq);
        self.cache.lock().unwrap().insert(codim, entry.clone());
        Ok(entry)
    }

    /// Witness set of type `e` over this system using the family slice.
    pub fn witness_set(
        &self,
        family: &SliceFamily,
        e: &SliceType,
        points: Vec<Point>,
    ) -> Result<WitnessSet> {
        let n = self.system.structure().ambient_dim();
        let (tracking, _) = self.get(n - e.abs())?;
        Ok(WitnessSet::new(
            self.system.clone(),
            tracking,
            self.chart.clone(),
            family.slice(e),
            points,
        ))
    }
}

fn nvars(chart: &Chart) -> usize {
    chart.forms.iter().map(|h| h.coeffs.len()).sum()
}

/// Points of `Y ∩ S ∩ L^d` for every reachable `d`, with path bookkeeping.
#[derive(Debug, Clone, Default)]
pub struct UnionOutput {
    pub sets: BTreeMap<SliceType, Vec<Point>>,
    pub paths: usize,
    pub failures: usize,
}

/// Regenerates witness points of `Y` to the hyperplane union `S = prod s_i^(j)`.
///
/// For each input type `e` and group `i` with forms in `s_forms[i]`, the points
/// of `w^e(Y)` are tracked from the form completing `L^{e-δ_i}` to `L^e` to each
/// `s_i^(j)`. With `reuse[i]`, the first form of group `i` is the family's first
/// form, so types with `e_i = 1` keep their points without tracking.
#[allow(clippy::too_many_arguments)]
pub fn regenerate_to_union(
    y: &SquareSystems,
    family: &SliceFamily,
    chart: &Chart,
    inputs: &BTreeMap<SliceType, Vec<Point>>,
    s_forms: &[Vec<LinearForm>],
    reuse: &[bool],
    keep: &dyn Fn(&SliceType) -> bool,
    gamma: Complex64,
    settings: &TrackerSettings,
) -> Result<UnionOutput> {
    let n = y.system().structure().ambient_dim();
    let mut out = UnionOutput::default();
    for (e, pts) in inputs {
        if pts.is_empty() {
            continue;
        }
        let (_, fixed) = y.get(n - e.abs())?;
        for (i, forms) in s_forms.iter().enumerate() {
            let Some(d) = e.minus(i) else { continue };
            if forms.is_empty() || !keep(&d) {
                continue;
            }
            let m = family.next_form(&d, i);
            let mut eqs: Vec<Equation> = fixed.as_ref().clone();
            eqs.extend(family.slice(&d).equations());
            for (j, s) in forms.iter().enumerate() {
                let target = out.sets.entry(d.clone()).or_default();
                if reuse[i] && j == 0 && d.0[i] == 0 {
                    target.extend(pts.iter().cloned());
                    continue;
                }
                let h = Homotopy::new(
                    nvars(chart),
                    eqs.clone(),
                    vec![Equation::linear(m)],
                    vec![Equation::linear(s)],
                    chart.forms.clone(),
                )?
                .with_gamma(gamma);
                out.paths += pts.len();
                for o in track_all(&h, pts, settings) {
                    if o.reached_end() {
                        target.push(o.endpoint);
                    } else {
                        out.failures += 1;
                    }
                }
            }
        }
    }
    Ok(out)
}

/// Tracks `Y ∩ S ∩ L^d` to `Y ∩ G ∩ L^d` for every `d` in `inputs`.
#[allow(clippy::too_many_arguments)]
pub fn deform_to_hypersurface(
    y: &SquareSystems,
    family: &SliceFamily,
    chart: &Chart,
    inputs: &BTreeMap<SliceType, Vec<Point>>,
    s_forms: &[Vec<LinearForm>],
    g: &Polynomial,
    gamma: Complex64,
    settings: &TrackerSettings,
) -> Result<BTreeMap<SliceType, Vec<PathOutcome>>> {
    let n = y.system().structure().ambient_dim();
    let s: Vec<LinearForm> = s_forms.iter().flatten().cloned().collect();
    let mut out = BTreeMap::new();
    for (d, pts) in inputs {
        if pts.is_empty() {
            continue;
        }
        let (_, fixed) = y.get(n - d.abs() - 1)?;
        let mut eqs: Vec<Equation> = fixed.as_ref().clone();
        eqs.extend(family.slice(d).equations());
        let h = Homotopy::new(
            nvars(chart),
            eqs,
            vec![Equation::product(s.clone())],
            vec![Equation::poly(g)],
            chart.forms.clone(),
        )?
        .with_gamma(gamma);
        out.insert(d.clone(), track_all(&h, pts, settings));
    }
    Ok(out)
}

/// An endpoint cluster awaiting the junk filter.
#[derive(Debug, Clone)]
pub struct Candidate {
    pub point: Point,
    pub multiplicity: usize,
    pub singular: bool,
}

#[derive(Debug, Clone, Default)]
pub struct JunkOutcome {
    pub kept: Vec<Candidate>,
    /// Kept points whose membership runs had path failures.
    pub flagged: Vec<bool>,
    pub junk: usize,
}

/// Drops singular candidates lying on a component represented in `higher`.
///
/// Nonsingular candidates are isolated and always kept.
pub fn junk_filter(
    candidates: Vec<Candidate>,
    higher: &[WitnessSet],
    seed: u64,
    tag: &[u64],
    settings: &TrackerSettings,
) -> Result<JunkOutcome> {
    let refs: Vec<&WitnessSet> = higher.iter().filter(|w| !w.is_empty()).collect();
    let verdicts: Vec<Result<(bool, bool)>> = candidates
        .par_iter()
        .enumerate()
        .map(|(k, c)| {
            if !c.singular || refs.is_empty() {
                return Ok((false, true));
            }
            let mut t = tag.to_vec();
            t.push(k as u64);
            let mut rng = derived(seed, &t);
            member_of_any(&refs, &c.point, &mut rng, settings, 1e-5)
        })
        .collect();
    let mut out = JunkOutcome::default();
    for (c, v) in candidates.into_iter().zip(verdicts) {
        let (member, clean) = v?;
        if member {
            out.junk += 1;
        } else {
            out.kept.push(c);
            out.flagged.push(!clean);
        }
    }
    Ok(out)
}

/// Groups equal endpoints; a cluster is singular if it has several paths or any singular one.
pub fn cluster(outcomes: &[&PathOutcome], chart: &Chart, tol: f64) -> Vec<Candidate> {
    let mut out: Vec<Candidate> = Vec::new();
    for o in outcomes {
        let singular = !o.is_success();
        match out
            .iter_mut()
            .find(|c| point_equal(&c.point, &o.endpoint, chart, tol))
        {
            Some(c) => {
                c.multiplicity += 1;
                c.singular = true;
            }
            None => out.push(Candidate {
                point: o.endpoint.clone(),
                multiplicity: 1,
                singular,
            }),
        }
    }
    out
}
