//! Deterministic parallel Monte Carlo driver.
//!
//! Indices are cut into fixed chunks, each chunk accumulates its own
//! running moments, and the chunks are merged in index order. The result
//! therefore depends only on `(seed, samples)`, never on the thread count.

use rayon::prelude::*;

use crate::distributions::{RngStream, SampleRng};
use crate::domain::MCEstimate;

pub const CHUNK: u64 = 1024;

/// Running mean, centred second moment and range (Welford / Chan).
#[derive(Debug, Clone, Copy)]
pub struct Moments {
    pub n: u64,
    pub mean: f64,
    pub m2: f64,
    pub min: f64,
    pub max: f64,
}

impl Default for Moments {
    fn default() -> Self {
        Moments { n: 0, mean: 0.0, m2: 0.0, min: f64::INFINITY, max: f64::NEG_INFINITY }
    }
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
        self.min = self.min.min(x);
        self.max = self.max.max(x);
    }

    pub fn merge(&mut self, other: &Moments) {
        if other.n == 0 {
            return;
        }
        if self.n == 0 {
            *self = *other;
            return;
        }
        let n = self.n + other.n;
        let d = other.mean - self.mean;
        let w = other.n as f64 / n as f64;
        self.mean += d * w;
        self.m2 += other.m2 + d * d * self.n as f64 * w;
        self.n = n;
        self.min = self.min.min(other.min);
        self.max = self.max.max(other.max);
    }

    pub fn variance(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.m2 / (self.n - 1) as f64
        }
    }

    /// A single observation carrying more than a quarter of the total square
    /// deviation means the sample is dominated by its extremes.
    pub fn heavy_tail(&self) -> bool {
        if self.n < 1000 || self.m2 <= 0.0 {
            return false;
        }
        let worst = (self.max - self.mean).powi(2).max((self.min - self.mean).powi(2));
        worst > 0.25 * self.m2
    }

    pub fn estimate(&self, seed: u64) -> MCEstimate {
        MCEstimate {
            mean: self.mean,
            std_error: (self.variance() / self.n as f64).sqrt(),
            samples: self.n,
            seed,
            heavy_tail: self.heavy_tail(),
        }
    }
}

/// Mean of `f` over sample indices `0..samples`.
pub fn monte_carlo<F>(samples: u64, stream: RngStream, f: F) -> MCEstimate
where
    F: Fn(&mut SampleRng) -> f64 + Sync,
{
    let [e] = monte_carlo_vec(samples, stream, |rng| [f(rng)]);
    e
}

/// Several functionals of the same draws; handy for paired comparisons.
pub fn monte_carlo_vec<const K: usize, F>(samples: u64, stream: RngStream, f: F) -> [MCEstimate; K]
where
    F: Fn(&mut SampleRng) -> [f64; K] + Sync,
{
    let chunks = samples.div_ceil(CHUNK);
    let partial: Vec<[Moments; K]> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut acc = [Moments::default(); K];
            for i in c * CHUNK..((c + 1) * CHUNK).min(samples) {
                let v = f(&mut stream.at(i));
                for (a, x) in acc.iter_mut().zip(v) {
                    a.push(x);
                }
            }
            acc
        })
        .collect();
    let mut total = [Moments::default(); K];
    for part in &partial {
        for (t, p) in total.iter_mut().zip(part) {
            t.merge(p);
        }
    }
    total.map(|m| m.estimate(stream.seed))
}
