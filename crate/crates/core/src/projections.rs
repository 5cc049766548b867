//! Hyperplane projections of `B_q^n` for `q ∈ [1, 2]`.
//!
//! `vol(Proj_{a^⊥} B_q^n) / vol(B_q^{n-1}) = Γ(1/q) E|Σ a_j X_j|`, and at
//! `q = 1` the factors become Rademacher signs.

use rayon::prelude::*;

use crate::distributions::{sign, ProjectionFactorLaw, RngStream};
use crate::domain::{lp_norm, Direction, Exponent, MCEstimate};
use crate::error::{Error, Result};
use crate::mc::{monte_carlo, monte_carlo_vec};
use crate::special::gamma_pos;

/// Largest number of active coordinates enumerated exactly.
pub const MAX_ENUM_N: usize = 24;

#[derive(Debug, Clone)]
pub struct ProjectionQuery {
    pub a: Direction,
    pub q: Exponent,
    pub samples: u64,
    pub seed: u64,
}

impl ProjectionQuery {
    pub fn new(a: Direction, q: Exponent, samples: u64, seed: u64) -> Self {
        ProjectionQuery { a, q, samples, seed }
    }
}

fn check_q(q: Exponent) -> Result<f64> {
    let v = q.value();
    if !(1.0..=2.0).contains(&v) {
        return Err(Error::InvalidInput(format!("projection exponent must lie in [1, 2], got {q}")));
    }
    Ok(v)
}

/// Estimate of `Γ(1/q) E|Σ a_j X_j|`. At `q = 1` this is the Khinchin
/// functional, computed exactly up to `MAX_ENUM_N` active coordinates and
/// with random signs beyond.
pub fn estimate_projection_ratio(query: &ProjectionQuery) -> Result<MCEstimate> {
    let q = check_q(query.q)?;
    if query.samples == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let coords = query.a.active();
    if q == 1.0 {
        if coords.len() <= MAX_ENUM_N {
            let v = khinchin_exact(&query.a, MAX_ENUM_N)?;
            return Ok(MCEstimate { seed: query.seed, ..MCEstimate::exact(v, query.samples) });
        }
        return Ok(rademacher_mc(coords, query.samples, query.seed));
    }
    let law = ProjectionFactorLaw::new(query.q)?;
    let scale = gamma_pos(1.0 / q);
    Ok(monte_carlo(query.samples, RngStream::new(query.seed), |rng| {
        let s: f64 = coords.iter().map(|&a| a * law.draw(rng)).sum();
        scale * s.abs()
    }))
}

fn rademacher_mc(coords: &[f64], samples: u64, seed: u64) -> MCEstimate {
    monte_carlo(samples, RngStream::new(seed), |rng| coords.iter().map(|&a| a * sign(rng)).sum::<f64>().abs())
}

/// `Γ(1/q) E|a₁X₁ + a₂X₂| = ‖a‖_{q/(q-1)}` in the plane.
pub fn exact_projection_ratio_2d(a: &Direction, q: Exponent) -> Result<f64> {
    check_q(q)?;
    if a.dim() != 2 {
        return Err(Error::Dimension { expected: 2, got: a.dim() });
    }
    Ok(a.norm(q.dual()))
}

/// Szarek-type constant `c_q = E|(X₁+X₂)/√2| = 2^{1/2-1/q}/Γ(1/q)`, the
/// bare moment without the `Γ(1/q)` prefactor.
pub fn szarek_value(q: Exponent) -> Result<f64> {
    let v = check_q(q)?;
    Ok(szarek_ratio_value(q)? / gamma_pos(1.0 / v))
}

/// Ratio-level constant `Γ(1/q) c_q = 2^{1/2-1/q}`.
pub fn szarek_ratio_value(q: Exponent) -> Result<f64> {
    let v = check_q(q)?;
    Ok((0.5 - 1.0 / v).exp2())
}

const GRAY_BITS: usize = 12;

/// `E|Σ a_j ε_j|` by enumerating the `2^{m-1}` sign patterns of the `m`
/// active coordinates (the first sign is fixed by symmetry).
pub fn khinchin_exact(a: &Direction, max_enum_n: usize) -> Result<f64> {
    let c = a.active();
    let m = c.len();
    if m > max_enum_n || m > 63 {
        return Err(Error::TooLarge { n: m, limit: max_enum_n.min(63) });
    }
    let (head, free) = c.split_at(1);
    let low_bits = free.len().min(GRAY_BITS);
    let (low, high) = free.split_at(low_bits);
    let high_patterns = 1u64 << high.len();
    // Each block restarts from an exact sum, so rounding never accumulates
    // over more than 2^GRAY_BITS Gray-code steps.
    let blocks: Vec<f64> = (0..high_patterns)
        .into_par_iter()
        .map(|h| {
            let mut s = head[0];
            for (j, &x) in high.iter().enumerate() {
                s += if h >> j & 1 == 1 { -x } else { x };
            }
            s += low.iter().sum::<f64>();
            let mut signs = vec![1.0f64; low.len()];
            let mut acc = s.abs();
            for step in 1u64..(1u64 << low.len()) {
                let j = step.trailing_zeros() as usize;
                s -= 2.0 * signs[j] * low[j];
                signs[j] = -signs[j];
                acc += s.abs();
            }
            acc
        })
        .collect();
    let total: f64 = blocks.iter().sum();
    Ok(total / (1u64 << free.len()) as f64)
}

/// `vol(Proj_{a^⊥} B_1^n) = 2^{n-1}/(n-1)! · E|Σ a_j ε_j|`.
pub fn crosspolytope_projection(a: &Direction) -> Result<f64> {
    let n = a.dim();
    if n < 2 {
        return Err(Error::Dimension { expected: 2, got: n });
    }
    let log_factor = (n - 1) as f64 * 2f64.ln() - crate::special::ln_gamma_pos(n as f64);
    Ok(log_factor.exp() * khinchin_exact(a, MAX_ENUM_N)?)
}

/// `vol(Proj_{a^⊥} B_∞^n) = ‖a‖₁ · 2^{n-1}`.
pub fn cube_projection(a: &Direction) -> Result<f64> {
    let n = a.dim();
    if n < 2 {
        return Err(Error::Dimension { expected: 2, got: n });
    }
    Ok(lp_norm(a.coords(), Exponent::ONE) * ((n - 1) as f64).exp2())
}

/// Paired estimates of `E|X+Y|` and `E max{|X|, |Y|}` for the block sums
/// `X = Σ_{j<split} a_j X_j` and `Y = Σ_{j≥split} a_j X_j`.
pub fn max_representation_check(
    a: &Direction,
    split: usize,
    q: Exponent,
    samples: u64,
    seed: u64,
) -> Result<(MCEstimate, MCEstimate)> {
    check_q(q)?;
    if split == 0 || split >= a.dim() {
        return Err(Error::InvalidInput(format!("split must lie in 1..{}, got {split}", a.dim())));
    }
    if samples == 0 {
        return Err(Error::InvalidInput("sample count must be positive".into()));
    }
    let law = ProjectionFactorLaw::new(q)?;
    let (head, tail) = a.coords().split_at(split);
    let [sum, max] = monte_carlo_vec(samples, RngStream::new(seed), |rng| {
        let x: f64 = head.iter().map(|&c| c * law.draw(rng)).sum();
        let y: f64 = tail.iter().map(|&c| c * law.draw(rng)).sum();
        [(x + y).abs(), x.abs().max(y.abs())]
    });
    Ok((sum, max))
}
