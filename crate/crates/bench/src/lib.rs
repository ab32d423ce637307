//! Fixtures shared by the benchmarks under `benches/`.

use multiwit::catalog::{self, SixRGrouping};
use multiwit::rng::{random_vector, seeded};
use multiwit::witness::{random_slice, WitnessSet};
use multiwit::{Complex64, PolynomialSystem, SliceType};

use multiwit::regeneration::{multiregenerate, RegenOptions};

pub fn six_r() -> PolynomialSystem {
    catalog::six_r(1, SixRGrouping::Four)
}

/// `n` random points in the coordinates of `sys`.
pub fn random_points(sys: &PolynomialSystem, n: usize, seed: u64) -> Vec<Vec<Complex64>> {
    let mut rng = seeded(seed);
    (0..n)
        .map(|_| random_vector(&mut rng, sys.structure().total_vars()))
        .collect()
}

/// The `w^e` set of a solved system and a fresh slice of the same type.
pub fn set_and_target(
    sys: &PolynomialSystem,
    e: &[usize],
    seed: u64,
) -> (WitnessSet, multiwit::LinearSlice) {
    let r = multiregenerate(
        sys,
        &RegenOptions {
            seed,
            ..Default::default()
        },
    )
    .expect("fixture solves");
    let e = SliceType(e.to_vec());
    let w = r.collection.get(&e).expect("fixture has the type").clone();
    let target = random_slice(&e, sys.structure(), &mut seeded(seed + 1)).expect("valid type");
    (w, target)
}
