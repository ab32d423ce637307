//! Multiregeneration: witness set collections of a multihomogeneous system,
//! one polynomial at a time.

mod perturb;
mod prune;
mod stage;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use rand::RngCore;

pub use perturb::{perturbed_solve, PerturbedOutput};
pub use prune::can_reach_isolated;
pub use stage::{
    cluster, deform_to_hypersurface, junk_filter, regenerate_to_union, Candidate, JunkOutcome,
    Point, SquareSystems, UnionOutput,
};

use crate::error::{Error, Result};
use crate::linalg::{solve, CMat, CVec};
use crate::poly::{generic_combination, LinearForm, MultiDegree, PolynomialSystem};
use crate::rng::{derived, random_complex, random_vector, tags};
use crate::tracker::{PathOutcome, TrackerSettings};
use crate::witness::{Chart, SliceFamily, SliceType, WitnessCollection, WitnessSet};

/// Which slice types survive from one stage to the next.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CarryMode {
    /// Every slice type; computes all dimensions.
    All,
    /// Only types that can still end at isolated solutions.
    Isolated,
    /// `Isolated` for square systems, `All` otherwise.
    Auto,
}

/// Order in which the polynomials are introduced.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Order {
    AsGiven,
    /// Increasing total degree, stable.
    Degree,
}

#[derive(Debug, Clone)]
pub struct RegenOptions {
    pub settings: TrackerSettings,
    pub seed: u64,
    pub carry: CarryMode,
    /// Replace the input by generic combinations of its polynomials first.
    pub randomize: bool,
    pub order: Order,
    /// Only compute types dominating one of these.
    pub restrict: Option<Vec<SliceType>>,
    /// Drop endpoints whose homogenizing coordinate vanishes.
    pub discard_at_infinity: bool,
    /// Test singular endpoints for membership in higher-dimensional sets.
    pub junk_filter: bool,
}

impl Default for RegenOptions {
    fn default() -> Self {
        Self {
            settings: TrackerSettings::default(),
            seed: 0,
            carry: CarryMode::Auto,
            randomize: false,
            order: Order::AsGiven,
            restrict: None,
            discard_at_infinity: true,
            junk_filter: true,
        }
    }
}

/// Bookkeeping for one polynomial.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StageReport {
    pub stage: usize,
    pub polynomial: String,
    /// Paths tracked between linear slices.
    pub linear_paths: usize,
    /// Start points of the deformation to the hypersurface, by type.
    pub start_points: BTreeMap<SliceType, usize>,
    /// New witness points satisfying every polynomial, by type.
    pub isolated: BTreeMap<SliceType, usize>,
    /// New witness points still to be regenerated by a later polynomial, by type.
    pub nonsolutions: BTreeMap<SliceType, usize>,
    /// Singular endpoints found on higher-dimensional sets.
    pub nonisolated: usize,
    pub at_infinity: usize,
    pub failures: usize,
    /// Endpoints not satisfying the polynomials introduced so far.
    pub off_system: usize,
    /// Points already on the new hypersurface, carried unchanged.
    pub carried: usize,
    /// Kept singular points whose junk test had path failures.
    pub inconclusive: usize,
    pub singular: usize,
}

impl StageReport {
    pub fn deformation_paths(&self) -> usize {
        self.start_points.values().sum()
    }

    pub fn witness_points(&self) -> usize {
        self.isolated.values().sum::<usize>() + self.nonsolutions.values().sum::<usize>()
    }
}

#[derive(Debug, Clone)]
pub struct RegenResult {
    pub collection: WitnessCollection,
    pub reports: Vec<StageReport>,
}

impl RegenResult {
    pub fn total_failures(&self) -> usize {
        self.reports.iter().map(|r| r.failures).sum()
    }

    pub fn total_paths(&self) -> usize {
        self.reports
            .iter()
            .map(|r| r.linear_paths + r.deformation_paths())
            .sum()
    }
}

/// Renders the per-stage bookkeeping as a plain text table.
pub struct ReportTable<'a>(pub &'a [StageReport]);

impl fmt::Display for ReportTable<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "{:>5} {:>10} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
            "stage", "poly", "paths", "iso", "nonsol", "noniso", "inf", "fail", "carried"
        )?;
        for r in self.0 {
            writeln!(
                f,
                "{:>5} {:>10} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8} {:>8}",
                r.stage,
                r.polynomial,
                r.linear_paths + r.deformation_paths(),
                r.isolated.values().sum::<usize>(),
                r.nonsolutions.values().sum::<usize>(),
                r.nonisolated,
                r.at_infinity,
                r.failures,
                r.carried
            )?;
        }
        Ok(())
    }
}

const ON_HYPERSURFACE: f64 = 1e-8;
const ON_SYSTEM: f64 = 1e-6;
const AT_INFINITY: f64 = 1e-7;
const DIVERGING: f64 = 1e-3;
const CLUSTER: f64 = 1e-6;

#[derive(Debug, Clone, Default)]
struct Bucket {
    points: Vec<Point>,
    multiplicities: Vec<usize>,
}

impl Bucket {
    fn push(&mut self, p: Point, m: usize) {
        self.points.push(p);
        self.multiplicities.push(m);
    }
}

/// The polynomials in the order they will be introduced.
pub fn prepared_system(
    system: &PolynomialSystem,
    options: &RegenOptions,
) -> Result<PolynomialSystem> {
    let structure = system.structure();
    if !structure.is_homogeneous() {
        return Err(Error::Invalid(
            "regeneration needs a homogeneous variable structure".into(),
        ));
    }
    system.multidegrees()?;
    let mut sys = system.clone();
    if options.randomize {
        let chart = Chart::random(structure, &mut derived(options.seed, &[tags::CHART]));
        sys = generic_combination(
            &sys,
            &chart.forms,
            &mut derived(options.seed, &[tags::RANDOMIZE_INPUT]),
        )?;
    }
    if options.order == Order::Degree {
        let mut idx: Vec<usize> = (0..sys.len()).collect();
        let degs = sys.multidegrees()?;
        idx.sort_by_key(|&j| degs[j].iter().sum::<u32>());
        let polys = idx.iter().map(|&j| sys.polys()[j].clone()).collect();
        let names = idx.iter().map(|&j| sys.names()[j].clone()).collect();
        sys = PolynomialSystem::with_names(structure.clone(), polys, names)?;
    }
    Ok(sys)
}

/// The single point cut out by every form of `family` together with the chart.
fn initial_point(family: &SliceFamily, chart: &Chart, nvars: usize) -> Result<Point> {
    let mut a = CMat::zeros(nvars, nvars);
    let mut b = vec![Complex64::new(0.0, 0.0); nvars];
    let mut row = 0;
    let mut put = |f: &LinearForm, rhs: Complex64, row: &mut usize| {
        for (j, c) in f.coeffs.iter().enumerate() {
            a[(*row, f.offset + j)] = *c;
        }
        b[*row] = rhs;
        *row += 1;
    };
    for f in family.forms.iter().flatten() {
        put(f, Complex64::new(0.0, 0.0), &mut row);
    }
    for h in &chart.forms {
        put(h, Complex64::new(1.0, 0.0), &mut row);
    }
    solve(a, &CVec::from_vec(b))
        .map(|x| x.iter().copied().collect())
        .ok_or_else(|| Error::Invalid("degenerate slice family".into()))
}

fn dominates(d: &SliceType, f: &SliceType) -> bool {
    d.0.iter().zip(&f.0).all(|(a, b)| a >= b)
}

fn keep_type(
    d: &SliceType,
    isolated: bool,
    remaining: &[MultiDegree],
    restrict: &Option<Vec<SliceType>>,
) -> bool {
    if isolated && !can_reach_isolated(&d.0, remaining) {
        return false;
    }
    match restrict {
        Some(fs) => fs.iter().any(|f| dominates(d, f)),
        None => true,
    }
}

fn at_infinity(p: &[Complex64], system: &PolynomialSystem) -> bool {
    homogenizer_below(p, system, AT_INFINITY)
}

/// A failed path whose last point sits this close to a hyperplane at infinity
/// is counted as diverging rather than as a tracking failure. Groups without a
/// homogenizing coordinate use their chart form as that hyperplane.
fn diverging(p: &[Complex64], system: &PolynomialSystem, chart: &Chart) -> bool {
    let s = system.structure();
    (0..s.group_count()).any(|i| {
        let big = p[s.range(i)].iter().map(|z| z.norm()).fold(0.0, f64::max);
        let at = match s.homogenizer_index(i) {
            Some(h) => p[h].norm(),
            None => chart.forms[i].eval(p).norm(),
        };
        at <= DIVERGING * big
    })
}

fn homogenizer_below(p: &[Complex64], system: &PolynomialSystem, ratio: f64) -> bool {
    let s = system.structure();
    (0..s.group_count()).any(|i| match s.homogenizer_index(i) {
        Some(h) => {
            let big = p[s.range(i)].iter().map(|z| z.norm()).fold(0.0, f64::max);
            p[h].norm() <= ratio * big
        }
        None => false,
    })
}

/// Witness set collection of `V(system)` by multiregeneration.
pub fn multiregenerate(system: &PolynomialSystem, options: &RegenOptions) -> Result<RegenResult> {
    options.settings.validate().map_err(Error::Invalid)?;
    let sys = Arc::new(prepared_system(system, options)?);
    let structure = sys.structure().clone();
    let dims = structure.dims();
    let n = structure.ambient_dim();
    let k = dims.len();
    let nvars = structure.total_vars();
    let seed = options.seed;
    let degs = sys.multidegrees()?;
    let ell = sys.len();
    let isolated_mode = match options.carry {
        CarryMode::All => false,
        CarryMode::Isolated => true,
        CarryMode::Auto => ell == n,
    };
    let discard_inf = options.discard_at_infinity && structure.has_homogenizers();
    let settings = &options.settings;

    let chart = Chart::random(&structure, &mut derived(seed, &[tags::CHART]));
    let family = SliceFamily::random(&structure, &mut derived(seed, &[tags::SLICE_FAMILY]));
    let squares = |p: usize| -> SquareSystems {
        let s = if p == ell {
            seed
        } else {
            derived(seed, &[tags::REGENERATION, p as u64]).next_u64()
        };
        SquareSystems::new(Arc::new(sys.prefix(p)), chart.clone(), s)
    };

    let mut current: BTreeMap<SliceType, Bucket> = BTreeMap::new();
    let full = SliceType(dims.clone());
    if keep_type(&full, isolated_mode, &degs, &options.restrict) {
        let mut b = Bucket::default();
        b.push(initial_point(&family, &chart, nvars)?, 1);
        current.insert(full, b);
    }
    let mut x = squares(0);
    let mut reports = Vec::with_capacity(ell);

    for iota in 0..ell {
        let g = &sys.polys()[iota];
        let gdeg = &degs[iota];
        let remaining = &degs[iota + 1..];
        let x_next = squares(iota + 1);
        let mut report = StageReport {
            stage: iota,
            polynomial: sys.names()[iota].clone(),
            ..Default::default()
        };
        let keep = |d: &SliceType| keep_type(d, isolated_mode, remaining, &options.restrict);

        // split into points already on G and points to regenerate
        let mut next: BTreeMap<SliceType, Bucket> = BTreeMap::new();
        let mut to_regen: BTreeMap<SliceType, Vec<Point>> = BTreeMap::new();
        for (e, b) in &current {
            for (p, &m) in b.points.iter().zip(&b.multiplicities) {
                let scale = g.term_scale(p);
                if g.eval(p).norm() <= ON_HYPERSURFACE * scale || scale == 0.0 {
                    // solved sets cost nothing to carry and are needed to spot junk later
                    if keep_type(e, false, remaining, &options.restrict) {
                        next.entry(e.clone()).or_default().push(p.clone(), m);
                        report.carried += 1;
                    }
                } else {
                    to_regen.entry(e.clone()).or_default().push(p.clone());
                }
            }
        }

        let mut rng = derived(seed, &[tags::REGENERATION, iota as u64, 0]);
        let mut s_forms: Vec<Vec<LinearForm>> = (0..k)
            .map(|i| {
                (0..gdeg[i])
                    .map(|_| {
                        LinearForm::new(
                            &structure,
                            i,
                            random_vector(&mut rng, structure.group_size(i)),
                        )
                        .unwrap()
                    })
                    .collect()
            })
            .collect();
        let gamma = random_complex(&mut rng);
        let union_gamma = random_complex(&mut rng);
        let mut reuse = vec![false; k];
        // s_i^(1) may be the family's first form of group i only if that form is in no L^d
        let produced: Vec<SliceType> = to_regen
            .iter()
            .filter(|(_, pts)| !pts.is_empty())
            .flat_map(|(e, _)| {
                (0..k)
                    .filter(|&j| gdeg[j] > 0)
                    .filter_map(|j| e.minus(j))
                    .collect::<Vec<_>>()
            })
            .filter(|d| keep(d))
            .collect();
        for i in 0..k {
            let legal = produced.iter().all(|d| d.0[i] == 0);
            if legal && !s_forms[i].is_empty() {
                s_forms[i][0] = family.forms[i][0].clone();
                reuse[i] = true;
            }
        }

        let union = regenerate_to_union(
            &x,
            &family,
            &chart,
            &to_regen,
            &s_forms,
            &reuse,
            &keep,
            union_gamma,
            settings,
        )?;
        report.linear_paths = union.paths;
        report.failures += union.failures;
        for (d, pts) in &union.sets {
            report.start_points.insert(d.clone(), pts.len());
        }
        let deformed = deform_to_hypersurface(
            &x,
            &family,
            &chart,
            &union.sets,
            &s_forms,
            g,
            gamma,
            settings,
        )?;

        let mut order: Vec<&SliceType> = deformed.keys().collect();
        order.sort_by_key(|d| std::cmp::Reverse(d.abs()));
        for d in order {
            let outcomes = &deformed[d];
            let mut good: Vec<&PathOutcome> = Vec::new();
            for o in outcomes {
                if o.is_failure() {
                    if options.discard_at_infinity && diverging(&o.endpoint, &sys, &chart) {
                        report.at_infinity += 1;
                    } else {
                        report.failures += 1;
                    }
                } else if x_next.system().relative_residual(&o.endpoint) > ON_SYSTEM {
                    report.off_system += 1;
                } else if discard_inf && at_infinity(&o.endpoint, &sys) {
                    report.at_infinity += 1;
                } else {
                    good.push(o);
                }
            }
            let candidates = cluster(&good, &chart, CLUSTER);
            report.singular += candidates.iter().filter(|c| c.singular).count();
            let kept = if options.junk_filter && candidates.iter().any(|c| c.singular) {
                let higher: Vec<WitnessSet> = next
                    .iter()
                    .filter(|(e, _)| e.abs() > d.abs())
                    .map(|(e, b)| x_next.witness_set(&family, e, b.points.clone()))
                    .collect::<Result<_>>()?;
                let tag = [
                    tags::REGENERATION,
                    iota as u64,
                    1,
                    d.0.iter().fold(0u64, |a, &v| a * 64 + v as u64),
                ];
                let j = junk_filter(candidates, &higher, seed, &tag, settings)?;
                report.nonisolated += j.junk;
                report.inconclusive += j.flagged.iter().filter(|&&f| f).count();
                j.kept
            } else {
                candidates
            };
            for c in kept {
                let done = sys.polys()[iota + 1..].iter().all(|q| {
                    let s = q.term_scale(&c.point);
                    s == 0.0 || q.eval(&c.point).norm() <= ON_HYPERSURFACE * s
                });
                let slot = if done {
                    &mut report.isolated
                } else {
                    &mut report.nonsolutions
                };
                *slot.entry(d.clone()).or_default() += 1;
                next.entry(d.clone())
                    .or_default()
                    .push(c.point, c.multiplicity);
            }
        }
        reports.push(report);
        current = next;
        x = x_next;
    }

    let mut collection = WitnessCollection::new(sys.clone(), chart.clone(), seed);
    for (e, b) in current {
        if b.points.is_empty() {
            continue;
        }
        if let Some(fs) = &options.restrict {
            if !fs.contains(&e) {
                continue;
            }
        }
        let mut w = x.witness_set(&family, &e, b.points)?;
        w.multiplicities = b.multiplicities;
        collection.insert(w);
    }
    Ok(RegenResult {
        collection,
        reports,
    })
}
