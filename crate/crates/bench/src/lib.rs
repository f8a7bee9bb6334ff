//! Seeded fixtures shared by the criterion benchmarks.

use fptprop::random::{instance, Shape};
use fptprop::{Kind, ProblemState};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const SEED: u64 = 7;

/// A single-constraint instance of `kind` with `n` variables, exactly `d`
/// values per domain and parameter `k`.
pub fn fixture(kind: Kind, n: usize, d: usize, k: usize) -> ProblemState {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    instance(
        kind,
        Shape {
            n,
            d,
            k,
            exact: true,
        },
        &mut rng,
    )
    .expect("fixture generates")
}
