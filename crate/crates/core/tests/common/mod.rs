#![allow(dead_code)]

use lpball::{canonicalize, Direction};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

#[allow(unused_imports)]
pub use lpball::sweeps::{is_extremizer, rational_grid};

/// Random direction with `min_n..=max_n` uniform coordinates, sometimes
/// with a tie at the top.
pub fn random_direction(r: &mut StdRng, min_n: usize, max_n: usize) -> Direction {
    let n = r.random_range(min_n..=max_n);
    let mut v: Vec<f64> = (0..n).map(|_| r.random::<f64>() + 0.01).collect();
    if n >= 2 && r.random::<f64>() < 0.2 {
        v[1] = v[0];
    }
    canonicalize(&v).unwrap()
}
