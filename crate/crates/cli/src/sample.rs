//! Seeded sampling of the free parameters `lambda_1..lambda_{r-2}`.

use montrep_core::C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;

/// `count` tuples of `len` values on the annulus `1/2 <= |lambda| <= 2`,
/// log-uniform in modulus and uniform in argument.
pub fn lambda_samples(seed: u64, count: usize, len: usize) -> Vec<Vec<C64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            (0..len)
                .map(|_| {
                    let modulus = 2f64.powf(rng.gen_range(-1.0..=1.0));
                    C64::from_polar(modulus, rng.gen_range(0.0..TAU))
                })
                .collect()
        })
        .collect()
}
