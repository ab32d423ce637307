use std::sync::Arc;

use crate::error::Result;
use num_complex::Complex64;

use crate::poly::{chart_power, LinearForm, PolynomialSystem};
use crate::rng::{derived, random_complex, tags};
use crate::tracker::track_all;
use crate::witness::{compile, square_system, WitnessCollection};

use super::{
    at_infinity, cluster, multiregenerate, prepared_system, Order, RegenOptions, RegenResult,
};

#[derive(Debug, Clone)]
pub struct PerturbedOutput {
    /// Witness points of the original system with cluster sizes as multiplicities.
    pub collection: WitnessCollection,
    /// The run on the perturbed system.
    pub perturbed: RegenResult,
    pub failures: usize,
    pub at_infinity: usize,
}

/// Solves `G_j + ε_j H^{deg G_j} = 0` by multiregeneration, where `H` is the
/// product of the homogenizers (chart forms for groups without one),
/// then tracks each witness set back to `ε = 0` with the slices fixed.
///
/// Endpoints are clustered, so singular solutions of the original system come
/// back once with the number of paths reaching them.
pub fn perturbed_solve(
    system: &PolynomialSystem,
    options: &RegenOptions,
) -> Result<PerturbedOutput> {
    let sys = Arc::new(prepared_system(system, options)?);
    let structure = sys.structure().clone();
    let degs = sys.multidegrees()?;
    let seed = options.seed;
    let mut rng = derived(seed, &[tags::PERTURB]);
    let chart = crate::witness::Chart::random(&structure, &mut derived(seed, &[tags::CHART]));
    let constant_forms = (0..structure.group_count())
        .map(|i| match structure.homogenizer_index(i) {
            Some(h) => {
                let mut coeffs = vec![Complex64::new(0.0, 0.0); structure.group_size(i)];
                coeffs[h - structure.offset(i)] = Complex64::new(1.0, 0.0);
                LinearForm::new(&structure, i, coeffs)
            }
            None => Ok(chart.forms[i].clone()),
        })
        .collect::<std::result::Result<Vec<_>, _>>()?;
    let perturbed_polys = sys
        .polys()
        .iter()
        .zip(&degs)
        .map(|(p, d)| {
            p.add(&chart_power(&structure, &constant_forms, d).scale(random_complex(&mut rng)))
        })
        .collect();
    let vp =
        PolynomialSystem::with_names(structure.clone(), perturbed_polys, sys.names().to_vec())?;
    let inner = RegenOptions {
        randomize: false,
        order: Order::AsGiven,
        ..options.clone()
    };
    let perturbed = multiregenerate(&vp, &inner)?;

    let n = structure.ambient_dim();
    let nvars = structure.total_vars();
    let discard_inf = options.discard_at_infinity && structure.has_homogenizers();
    let mut collection = WitnessCollection::new(sys.clone(), chart.clone(), seed);
    let (mut failures, mut at_inf) = (0, 0);
    for (e, w) in perturbed.collection.sets() {
        let c = n - e.abs();
        let start = square_system(&vp, c, &chart, seed)?;
        let target = square_system(&sys, c, &chart, seed)?;
        let h = crate::tracker::Homotopy::new(
            nvars,
            w.slice.equations(),
            compile(&start),
            compile(&target),
            chart.forms.clone(),
        )?
        .with_gamma(Complex64::new(1.0, 0.0));
        let outcomes = track_all(&h, &w.points, &options.settings);
        let mut good = Vec::new();
        for o in &outcomes {
            if o.is_failure() {
                failures += 1;
            } else if discard_inf && at_infinity(&o.endpoint, &sys) {
                at_inf += 1;
            } else {
                good.push(o);
            }
        }
        let clusters = cluster(&good, &chart, 1e-5);
        if clusters.is_empty() {
            continue;
        }
        let mut out = collection.empty_set(w.slice.clone())?;
        out.points = clusters.iter().map(|c| c.point.clone()).collect();
        out.multiplicities = clusters.iter().map(|c| c.multiplicity).collect();
        collection.insert(out);
    }
    Ok(PerturbedOutput {
        collection,
        perturbed,
        failures,
        at_infinity: at_inf,
    })
}
