//! Seeded randomness shared by every module that draws generic data.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type RunRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> RunRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Deterministic child stream keyed by `tag`, independent of draw order elsewhere.
pub fn derived(seed: u64, tag: &[u64]) -> RunRng {
    let mut h: u64 = seed ^ 0x9e37_79b9_7f4a_7c15;
    for &t in tag {
        h ^= t
            .wrapping_add(0x9e37_79b9_7f4a_7c15)
            .wrapping_add(h << 6)
            .wrapping_add(h >> 2);
        h = h.wrapping_mul(0xbf58_476d_1ce4_e5b9);
        h ^= h >> 31;
    }
    ChaCha8Rng::seed_from_u64(h)
}

/// Uniform on the unit circle, scaled by a uniform radius in `[0.5, 1.5]`.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let theta = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = rng.gen_range(0.5..1.5);
    Complex64::from_polar(r, theta)
}

pub fn random_vector<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<Complex64> {
    (0..n).map(|_| random_complex(rng)).collect()
}

/// Stream tags for [`derived`].
pub mod tags {
    pub const CHART: u64 = 1;
    pub const SLICE_FAMILY: u64 = 2;
    pub const SQUARE: u64 = 3;
    pub const REGENERATION: u64 = 4;
    pub const MEMBERSHIP: u64 = 5;
    pub const MONODROMY: u64 = 6;
    pub const TRACE: u64 = 7;
    pub const PERTURB: u64 = 8;
    pub const SAMPLE: u64 = 9;
    pub const RANDOMIZE_INPUT: u64 = 10;
}
